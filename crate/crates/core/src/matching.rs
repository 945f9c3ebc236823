//! Extremal perfect matchings under red-edge count: minimum, maximum,
//! forced-edge variants, and removal of edges no perfect matching uses.
//!
//! The solver is successive shortest augmenting paths with vertex
//! potentials. Costs are 0/1 per edge color, so paths suffice and the
//! result is deterministic for a fixed edge ordering: adjacency lists are
//! scanned in ascending edge id, relaxations improve strictly, and heap
//! ties resolve to the smallest right vertex.

use crate::graph::{Color, ColoredBipartiteGraph, EdgeId, Matching, MatchingError, OrientedView};
use crate::scc::view_components;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Cost per edge color. Costs are restricted to {0, 1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostModel {
    pub red_cost: i64,
    pub blue_cost: i64,
}

impl CostModel {
    /// Minimizes the number of red edges.
    pub const MIN_RED: CostModel = CostModel {
        red_cost: 1,
        blue_cost: 0,
    };

    /// Maximizes the number of red edges (minimizes blue).
    pub const MAX_RED: CostModel = CostModel {
        red_cost: 0,
        blue_cost: 1,
    };

    fn cost(&self, color: Color) -> i64 {
        match color {
            Color::Red => self.red_cost,
            Color::Blue => self.blue_cost,
        }
    }
}

const INF: i64 = i64::MAX / 4;

/// A solved minimum-cost perfect matching together with its dual
/// potentials, kept so that forced-edge variants need only a single
/// further augmentation instead of a solve from scratch.
#[derive(Debug, Clone)]
pub struct MinCostMatcher<'g> {
    graph: &'g ColoredBipartiteGraph,
    model: CostModel,
    match_left: Vec<Option<EdgeId>>,
    match_right: Vec<Option<EdgeId>>,
    pot_left: Vec<i64>,
    pot_right: Vec<i64>,
}

struct PathState {
    dist: Vec<i64>,
    parent: Vec<Option<EdgeId>>,
    done: Vec<bool>,
}

impl PathState {
    fn new(n_right: usize) -> Self {
        PathState {
            dist: vec![INF; n_right],
            parent: vec![None; n_right],
            done: vec![false; n_right],
        }
    }
}

/// One shortest augmenting path from the free left vertex `start`,
/// followed by the potential update and the augmentation itself.
/// `skip_left`/`skip_right` mask deleted vertices. Returns false when no
/// augmenting path exists.
#[allow(clippy::too_many_arguments)]
fn augment(
    g: &ColoredBipartiteGraph,
    model: CostModel,
    match_left: &mut [Option<EdgeId>],
    match_right: &mut [Option<EdgeId>],
    pot_left: &mut [i64],
    pot_right: &mut [i64],
    start: usize,
    skip_left: Option<usize>,
    skip_right: Option<usize>,
) -> bool {
    let n_right = g.n_right();
    let mut st = PathState::new(n_right);
    let mut heap: BinaryHeap<Reverse<(i64, usize)>> = BinaryHeap::new();

    let relax_from =
        |a: usize, base: i64, st: &mut PathState, heap: &mut BinaryHeap<Reverse<(i64, usize)>>| {
            for &e in g.adjacent_left(a) {
                let edge = g.edge(e);
                if Some(edge.b) == skip_right {
                    continue;
                }
                let reduced = model.cost(edge.color) + pot_left[a] - pot_right[edge.b];
                debug_assert!(reduced >= 0, "reduced costs stay non-negative");
                let nd = base + reduced;
                if nd < st.dist[edge.b] {
                    st.dist[edge.b] = nd;
                    st.parent[edge.b] = Some(e);
                    heap.push(Reverse((nd, edge.b)));
                }
            }
        };

    relax_from(start, 0, &mut st, &mut heap);
    let mut target: Option<(usize, i64)> = None;
    while let Some(Reverse((d, b))) = heap.pop() {
        if st.done[b] || d > st.dist[b] {
            continue;
        }
        st.done[b] = true;
        match match_right[b] {
            None => {
                target = Some((b, d));
                break;
            }
            Some(me) => {
                let a = g.edge(me).a;
                debug_assert_ne!(Some(a), skip_left, "masked vertices hold no matched edge");
                relax_from(a, d, &mut st, &mut heap);
            }
        }
    }
    let Some((free_b, reach)) = target else {
        return false;
    };

    // Potential update capped at the target distance keeps reduced costs
    // non-negative for vertices the search never reached.
    for b in 0..n_right {
        if Some(b) == skip_right {
            continue;
        }
        let delta = st.dist[b].min(reach);
        pot_right[b] += delta;
        if let Some(me) = match_right[b] {
            pot_left[g.edge(me).a] += delta;
        }
    }
    for (a, slot) in match_left.iter().enumerate() {
        if Some(a) == skip_left || a == start {
            continue;
        }
        if slot.is_none() {
            pot_left[a] += reach;
        }
    }

    // Flip the alternating path back from the free right vertex.
    let mut b = free_b;
    loop {
        let e = st.parent[b].expect("reached vertices have a parent edge");
        let a = g.edge(e).a;
        let previous = match_left[a];
        match_left[a] = Some(e);
        match_right[b] = Some(e);
        match previous {
            None => {
                debug_assert_eq!(a, start);
                break;
            }
            Some(pe) => b = g.edge(pe).b,
        }
    }
    true
}

impl<'g> MinCostMatcher<'g> {
    /// Solves the minimum-cost perfect matching of `g` under `model`.
    pub fn new(graph: &'g ColoredBipartiteGraph, model: CostModel) -> Result<Self, MatchingError> {
        if !graph.is_balanced() {
            return Err(MatchingError::NoPerfectMatching);
        }
        let mut matcher = MinCostMatcher {
            graph,
            model,
            match_left: vec![None; graph.n_left()],
            match_right: vec![None; graph.n_right()],
            pot_left: vec![0; graph.n_left()],
            pot_right: vec![0; graph.n_right()],
        };
        for start in 0..graph.n_left() {
            let ok = augment(
                graph,
                model,
                &mut matcher.match_left,
                &mut matcher.match_right,
                &mut matcher.pot_left,
                &mut matcher.pot_right,
                start,
                None,
                None,
            );
            if !ok {
                return Err(MatchingError::NoPerfectMatching);
            }
            matcher.debug_check_duals();
        }
        Ok(matcher)
    }

    /// The optimal perfect matching.
    pub fn matching(&self) -> Matching {
        let ids = self
            .match_left
            .iter()
            .map(|e| e.expect("solved matching is perfect"));
        Matching::new(self.graph, ids).expect("solver state is a consistent matching")
    }

    /// Minimum-cost perfect matching constrained to contain edge `e`:
    /// both endpoints of `e` are removed, the residual problem is
    /// re-optimized with one augmentation, and `e` is re-inserted.
    pub fn forced(&self, e: EdgeId) -> Result<Matching, MatchingError> {
        let g = self.graph;
        if e >= g.edge_count() {
            return Err(MatchingError::EdgeNotInGraph(e));
        }
        let (a0, b0) = {
            let edge = g.edge(e);
            (edge.a, edge.b)
        };
        if self.match_left[a0] == Some(e) {
            return Ok(self.matching());
        }
        let mut match_left = self.match_left.clone();
        let mut match_right = self.match_right.clone();
        let mut pot_left = self.pot_left.clone();
        let mut pot_right = self.pot_right.clone();

        let ea = match_left[a0].take().expect("base matching is perfect");
        match_right[g.edge(ea).b] = None;
        let eb = match_right[b0].take().expect("base matching is perfect");
        let a1 = g.edge(eb).a;
        match_left[a1] = None;
        debug_assert_ne!(a1, a0);

        let ok = augment(
            g,
            self.model,
            &mut match_left,
            &mut match_right,
            &mut pot_left,
            &mut pot_right,
            a1,
            Some(a0),
            Some(b0),
        );
        if !ok {
            return Err(MatchingError::NoPerfectMatchingThroughEdge);
        }
        match_left[a0] = Some(e);
        let ids = match_left
            .iter()
            .map(|slot| slot.expect("forced matching is perfect"));
        Ok(Matching::new(g, ids).expect("forced matching state is consistent"))
    }

    #[cfg(debug_assertions)]
    fn debug_check_duals(&self) {
        for (id, edge) in self.graph.edges().iter().enumerate() {
            let reduced =
                self.model.cost(edge.color) + self.pot_left[edge.a] - self.pot_right[edge.b];
            debug_assert!(reduced >= 0, "edge {id} violates dual feasibility");
            if self.match_left[edge.a] == Some(id) {
                debug_assert_eq!(reduced, 0, "matched edge {id} is not tight");
            }
        }
    }

    #[cfg(not(debug_assertions))]
    fn debug_check_duals(&self) {}
}

/// A perfect matching of `g` with the minimum number of red edges.
pub fn min_red_pm(g: &ColoredBipartiteGraph) -> Result<Matching, MatchingError> {
    Ok(MinCostMatcher::new(g, CostModel::MIN_RED)?.matching())
}

/// A perfect matching of `g` with the maximum number of red edges.
pub fn max_red_pm(g: &ColoredBipartiteGraph) -> Result<Matching, MatchingError> {
    Ok(MinCostMatcher::new(g, CostModel::MAX_RED)?.matching())
}

/// Minimum-red perfect matching among those containing edge `e`.
pub fn min_red_pm_forcing(g: &ColoredBipartiteGraph, e: EdgeId) -> Result<Matching, MatchingError> {
    if e >= g.edge_count() {
        return Err(MatchingError::EdgeNotInGraph(e));
    }
    let matcher = MinCostMatcher::new(g, CostModel::MIN_RED)
        .map_err(|_| MatchingError::NoPerfectMatchingThroughEdge)?;
    matcher.forced(e)
}

/// Result of [`prune_irrelevant`]: the subgraph of edges contained in at
/// least one perfect matching, plus the id mapping back to the input.
#[derive(Debug, Clone)]
pub struct PruneOutcome {
    /// The pruned graph. Edge order follows the input graph.
    pub graph: ColoredBipartiteGraph,
    /// `kept[new_id]` is the input id of pruned-graph edge `new_id`.
    pub kept: Vec<EdgeId>,
    /// Input ids of the removed edges, ascending.
    pub removed: Vec<EdgeId>,
}

impl PruneOutcome {
    /// Translates a matching of the pruned graph back to input edge ids.
    pub fn restore(&self, original: &ColoredBipartiteGraph, m: &Matching) -> Matching {
        let ids = m.edge_ids().iter().map(|&id| self.kept[id]);
        Matching::new(original, ids).expect("pruned matchings remain valid in the input graph")
    }
}

/// Deletes every edge that no perfect matching contains.
///
/// One perfect matching is computed; an unmatched edge is kept exactly
/// when its endpoints lie in the same strongly connected component of the
/// oriented view, matched edges are always kept. This keeps precisely the
/// edges that lie in some perfect matching, in linear time after the one
/// matching computation.
pub fn prune_irrelevant(g: &ColoredBipartiteGraph) -> Result<PruneOutcome, MatchingError> {
    let matching = min_red_pm(g)?;
    let view = OrientedView::build(g, &matching)?;
    let comp = view_components(&view);
    let mut kept = Vec::with_capacity(g.edge_count());
    let mut removed = Vec::new();
    let mut kept_edges = Vec::with_capacity(g.edge_count());
    for (id, edge) in g.edges().iter().enumerate() {
        let allowed = matching.contains(g, id)
            || comp[view.left_vertex(edge.a)] == comp[view.right_vertex(edge.b)];
        if allowed {
            kept.push(id);
            kept_edges.push((edge.a, edge.b, edge.color));
        } else {
            removed.push(id);
        }
    }
    let graph = ColoredBipartiteGraph::new(g.n_left(), g.n_right(), kept_edges)
        .expect("subgraph of a valid graph stays valid");
    Ok(PruneOutcome {
        graph,
        kept,
        removed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Color;
    use crate::test_support::square;

    #[test]
    fn square_extremes() {
        let g = square();
        assert_eq!(min_red_pm(&g).unwrap().red_count(), 0);
        assert_eq!(max_red_pm(&g).unwrap().red_count(), 2);
    }

    #[test]
    fn single_red_edge() {
        let g = ColoredBipartiteGraph::new(1, 1, [(0, 0, Color::Red)]).unwrap();
        assert_eq!(min_red_pm(&g).unwrap().red_count(), 1);
        assert_eq!(max_red_pm(&g).unwrap().red_count(), 1);
        assert_eq!(min_red_pm_forcing(&g, 0).unwrap().red_count(), 1);
    }

    #[test]
    fn star_has_no_perfect_matching() {
        // K_{1,3} embedded with three left vertices: left 1 and 2 are
        // isolated, so no perfect matching exists.
        let g = ColoredBipartiteGraph::new(
            3,
            3,
            [
                (0, 0, Color::Blue),
                (0, 1, Color::Blue),
                (0, 2, Color::Blue),
            ],
        )
        .unwrap();
        assert_eq!(
            min_red_pm(&g).unwrap_err(),
            MatchingError::NoPerfectMatching
        );
    }

    #[test]
    fn all_blue_complete_three_by_three() {
        let mut edges = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                edges.push((a, b, Color::Blue));
            }
        }
        let g = ColoredBipartiteGraph::new(3, 3, edges).unwrap();
        assert_eq!(max_red_pm(&g).unwrap().red_count(), 0);
    }

    #[test]
    fn unbalanced_graph_has_no_perfect_matching() {
        let g =
            ColoredBipartiteGraph::new(2, 1, [(0, 0, Color::Blue), (1, 0, Color::Blue)]).unwrap();
        assert_eq!(
            min_red_pm(&g).unwrap_err(),
            MatchingError::NoPerfectMatching
        );
    }

    #[test]
    fn forcing_a_red_edge_on_the_square() {
        let g = square();
        let forced = min_red_pm_forcing(&g, 2).unwrap();
        assert_eq!(forced.edge_ids(), &[2, 3]);
        assert_eq!(forced.red_count(), 2);
    }

    #[test]
    fn forcing_can_be_impossible() {
        // Path a0-b0 (blue), a0-b1 (red), a1-b1 (blue): forcing the red
        // edge leaves a1 uncoverable.
        let g = ColoredBipartiteGraph::new(
            2,
            2,
            [(0, 0, Color::Blue), (0, 1, Color::Red), (1, 1, Color::Blue)],
        )
        .unwrap();
        assert_eq!(min_red_pm(&g).unwrap().red_count(), 0);
        assert_eq!(
            min_red_pm_forcing(&g, 1).unwrap_err(),
            MatchingError::NoPerfectMatchingThroughEdge
        );
    }

    #[test]
    fn forcing_an_edge_of_the_optimum_returns_it() {
        let g = square();
        let forced = min_red_pm_forcing(&g, 0).unwrap();
        assert_eq!(forced.edge_ids(), &[0, 1]);
        assert_eq!(forced.red_count(), 0);
    }

    #[test]
    fn forcing_out_of_range_edge_errors() {
        let g = square();
        assert_eq!(
            min_red_pm_forcing(&g, 99).unwrap_err(),
            MatchingError::EdgeNotInGraph(99)
        );
    }

    #[test]
    fn prune_keeps_all_square_edges() {
        let g = square();
        let pruned = prune_irrelevant(&g).unwrap();
        assert_eq!(pruned.kept, vec![0, 1, 2, 3]);
        assert!(pruned.removed.is_empty());
    }

    #[test]
    fn prune_removes_edge_in_no_perfect_matching() {
        let g = ColoredBipartiteGraph::new(
            3,
            3,
            [
                (0, 0, Color::Blue),
                (1, 1, Color::Blue),
                (2, 2, Color::Blue),
                (0, 1, Color::Red),
            ],
        )
        .unwrap();
        let pruned = prune_irrelevant(&g).unwrap();
        assert_eq!(pruned.removed, vec![3]);
        assert_eq!(pruned.graph.edge_count(), 3);
    }

    #[test]
    fn prune_keeps_unique_perfect_matching() {
        let g =
            ColoredBipartiteGraph::new(2, 2, [(0, 0, Color::Red), (1, 1, Color::Blue)]).unwrap();
        let pruned = prune_irrelevant(&g).unwrap();
        assert!(pruned.removed.is_empty());
        assert_eq!(pruned.kept, vec![0, 1]);
    }

    #[test]
    fn minimum_never_exceeds_forced_minimum() {
        let g = square();
        let base = min_red_pm(&g).unwrap().red_count();
        for e in 0..g.edge_count() {
            let forced = min_red_pm_forcing(&g, e).unwrap().red_count();
            assert!(base <= forced);
        }
    }
}
