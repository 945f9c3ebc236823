//! Strongly connected components of an oriented view (iterative Tarjan).

use crate::graph::OrientedView;

const UNVISITED: u32 = u32::MAX;

/// Component id per view vertex. Ids are assigned deterministically from
/// the vertex and adjacency order.
pub(crate) fn view_components(view: &OrientedView) -> Vec<usize> {
    let n = view.vertex_count();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0u32;
    let mut comp_count = 0usize;
    // (vertex, next out-edge position) frames of the explicit DFS.
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, 0));

        while let Some(&(v, ei)) = frames.last() {
            if let Some(&e) = view.out_edges(v).get(ei) {
                frames.last_mut().unwrap().1 += 1;
                let w = view.head(e);
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Matching, OrientedView};
    use crate::test_support::square;

    #[test]
    fn square_view_is_one_component() {
        let g = square();
        let m = Matching::new(&g, [0, 1]).unwrap();
        let view = OrientedView::build(&g, &m).unwrap();
        let comp = view_components(&view);
        assert!(comp.iter().all(|&c| c == comp[0]));
    }

    #[test]
    fn matching_only_graph_is_all_singletons() {
        use crate::graph::{Color, ColoredBipartiteGraph};
        let g = ColoredBipartiteGraph::new(
            3,
            3,
            [(0, 0, Color::Blue), (1, 1, Color::Blue), (2, 2, Color::Red)],
        )
        .unwrap();
        let m = Matching::new(&g, [0, 1, 2]).unwrap();
        let view = OrientedView::build(&g, &m).unwrap();
        let comp = view_components(&view);
        let mut sorted = comp.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 6);
    }
}
