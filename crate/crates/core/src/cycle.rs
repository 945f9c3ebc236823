//! Budgeted positive-cycle search: decide whether an oriented view
//! contains a directed cycle of positive weight using at most `t`
//! weight +1 edges, and produce one if so.
//!
//! The search works in flipped weights (so a positive cycle becomes a
//! negative one) and runs, per source vertex, a label-correcting pass
//! over states (budget used, vertex). Budgets cap the number of flipped
//! -1 edges a walk may use, which bounds every distance below and makes
//! the pass terminate on its own; a negative closed walk through the
//! source is then split into simple cycles, one of which must be a
//! witness. [`BudgetedDistanceTable`] is the plain exact-length
//! formulation of the same recurrence, kept as a cross-checkable
//! reference for tests and diagnostics.

use crate::graph::{CycleError, DirectedCycle, EdgeId, OrientedView};
use crate::scc::view_components;
use std::collections::HashMap;

const INF: i32 = i32::MAX / 2;
const NO_PRED: u32 = u32::MAX;

/// Exact-length budgeted distance table from one source vertex.
///
/// `dist(i, j, v)` is the minimum flipped weight over walks from the
/// source to `v` that use exactly `i` edges and at most `j` budget
/// edges, where budget edges are those of original weight +1. The table
/// is monotone in the budget dimension.
#[derive(Debug)]
pub struct BudgetedDistanceTable {
    source: usize,
    max_length: usize,
    max_budget: usize,
    n_vertices: usize,
    dist: Vec<i32>,
    pred: Vec<u32>,
}

impl BudgetedDistanceTable {
    /// Fills the table for `source` with budget limit `max_budget`; the
    /// length dimension runs to the vertex count of the view.
    pub fn build(view: &OrientedView, source: usize, max_budget: usize) -> Self {
        let n = view.vertex_count();
        let layers = max_budget + 1;
        let max_length = n;
        let mut table = BudgetedDistanceTable {
            source,
            max_length,
            max_budget,
            n_vertices: n,
            dist: vec![INF; (max_length + 1) * layers * n],
            pred: vec![NO_PRED; (max_length + 1) * layers * n],
        };
        for j in 0..layers {
            let idx = table.index(0, j, source);
            table.dist[idx] = 0;
        }
        let mut in_edges: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
        for u in 0..n {
            for &e in view.out_edges(u) {
                in_edges[view.head(e)].push(e);
            }
        }
        in_edges.iter_mut().for_each(|edges| edges.sort_unstable());
        for i in 1..=max_length {
            for j in 0..layers {
                for (v, incoming) in in_edges.iter().enumerate() {
                    let mut best = INF;
                    let mut best_edge = NO_PRED;
                    for &e in incoming {
                        let b = usize::from(view.is_positive(e));
                        if b > j {
                            continue;
                        }
                        let prev = table.dist[table.index(i - 1, j - b, view.tail(e))];
                        if prev == INF {
                            continue;
                        }
                        let cand = prev - view.weight(e) as i32;
                        if cand < best {
                            best = cand;
                            best_edge = e as u32;
                        }
                    }
                    let idx = table.index(i, j, v);
                    table.dist[idx] = best;
                    table.pred[idx] = best_edge;
                }
            }
        }
        table
    }

    fn index(&self, length: usize, budget: usize, v: usize) -> usize {
        (length * (self.max_budget + 1) + budget) * self.n_vertices + v
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn max_budget(&self) -> usize {
        self.max_budget
    }

    /// Flipped-weight distance, or `None` when no such walk exists.
    pub fn dist(&self, length: usize, budget: usize, v: usize) -> Option<i64> {
        let d = self.dist[self.index(length, budget, v)];
        (d < INF).then_some(d as i64)
    }

    /// Last edge of a minimal walk for the given state.
    pub fn pred(&self, length: usize, budget: usize, v: usize) -> Option<EdgeId> {
        let p = self.pred[self.index(length, budget, v)];
        (p != NO_PRED).then_some(p as usize)
    }

    /// A negative closed walk through the source at the full budget, if
    /// one exists: the shortest length fires first.
    pub fn witness_walk(&self, view: &OrientedView) -> Option<Vec<EdgeId>> {
        let t = self.max_budget;
        for len in 1..=self.max_length {
            if self.dist(len, t, self.source).is_some_and(|d| d < 0) {
                let mut edges = Vec::with_capacity(len);
                let (mut i, mut j, mut v) = (len, t, self.source);
                while i > 0 {
                    let e = self
                        .pred(i, j, v)
                        .expect("finite entries have a predecessor");
                    edges.push(e);
                    j -= usize::from(view.is_positive(e));
                    v = view.tail(e);
                    i -= 1;
                }
                debug_assert_eq!(v, self.source);
                edges.reverse();
                return Some(edges);
            }
        }
        None
    }
}

/// Splits a closed walk in an arbitrary directed graph into simple
/// cycles whose edge multisets union to the walk's. The scan keeps a
/// vertex stack and pops one cycle per vertex repetition.
pub fn split_closed_walk(
    walk: &[EdgeId],
    tail: impl Fn(EdgeId) -> usize,
    head: impl Fn(EdgeId) -> usize,
) -> Result<Vec<Vec<EdgeId>>, CycleError> {
    if walk.is_empty() {
        return Err(CycleError::Empty);
    }
    for w in walk.windows(2) {
        if head(w[0]) != tail(w[1]) {
            return Err(CycleError::NotAWalk(w[0], w[1]));
        }
    }
    let start = tail(walk[0]);
    if head(*walk.last().unwrap()) != start {
        return Err(CycleError::NotClosed);
    }

    let mut cycles = Vec::new();
    let mut stack_v: Vec<usize> = vec![start];
    let mut stack_e: Vec<EdgeId> = Vec::new();
    let mut position: HashMap<usize, usize> = HashMap::new();
    position.insert(start, 0);
    for &e in walk {
        let v = head(e);
        if let Some(&p) = position.get(&v) {
            let mut cycle = stack_e.split_off(p);
            cycle.push(e);
            for popped in stack_v.split_off(p + 1) {
                position.remove(&popped);
            }
            cycles.push(cycle);
        } else {
            position.insert(v, stack_v.len());
            stack_v.push(v);
            stack_e.push(e);
        }
    }
    debug_assert_eq!(stack_v, vec![start]);
    debug_assert!(stack_e.is_empty());
    Ok(cycles)
}

/// Splits a closed walk of the view into simple directed cycles.
pub fn decompose_closed_walk(
    view: &OrientedView,
    walk: &[EdgeId],
) -> Result<Vec<DirectedCycle>, CycleError> {
    let cycles = split_closed_walk(walk, |e| view.tail(e), |e| view.head(e))?;
    cycles
        .into_iter()
        .map(|edges| DirectedCycle::from_edges(view, edges))
        .collect()
}

/// View flattened into plain arrays for the relaxation inner loop.
struct FlatView {
    heads: Vec<u32>,
    tails: Vec<u32>,
    flipped: Vec<i32>,
    is_budget: Vec<bool>,
    out: Vec<Vec<EdgeId>>,
}

impl FlatView {
    fn of(view: &OrientedView) -> Self {
        let m = view.graph().edge_count();
        let n = view.vertex_count();
        let mut flat = FlatView {
            heads: Vec::with_capacity(m),
            tails: Vec::with_capacity(m),
            flipped: Vec::with_capacity(m),
            is_budget: Vec::with_capacity(m),
            out: Vec::with_capacity(n),
        };
        for e in 0..m {
            flat.heads.push(view.head(e) as u32);
            flat.tails.push(view.tail(e) as u32);
            flat.flipped.push(-(view.weight(e) as i32));
            flat.is_budget.push(view.is_positive(e));
        }
        for v in 0..n {
            flat.out.push(view.out_edges(v).to_vec());
        }
        flat
    }
}

/// Per-source label state for the budgeted search.
struct SearchBuffers {
    dist: Vec<i32>,
    pred: Vec<u32>,
    queued: Vec<bool>,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

impl SearchBuffers {
    fn new(states: usize) -> Self {
        SearchBuffers {
            dist: vec![INF; states],
            pred: vec![NO_PRED; states],
            queued: vec![false; states],
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    fn reset(&mut self) {
        self.dist.fill(INF);
        self.pred.fill(NO_PRED);
        self.queued.fill(false);
        self.frontier.clear();
        self.next.clear();
    }
}

/// Label-correcting pass over (budget, vertex) states from one source.
/// Returns a negative closed walk through the source within the budget,
/// or `None`. Every walk carries at most `t` flipped -1 edges, so
/// distances are bounded below by `-t` and the pass always reaches a
/// fixed point.
fn negative_closed_walk(
    flat: &FlatView,
    n: usize,
    source: usize,
    t: usize,
    buf: &mut SearchBuffers,
) -> Option<Vec<EdgeId>> {
    let layers = t + 1;
    buf.reset();
    for j in 0..layers {
        let state = j * n + source;
        buf.dist[state] = 0;
        buf.queued[state] = true;
        buf.frontier.push(state as u32);
    }
    let goal = t * n + source;
    while !buf.frontier.is_empty() {
        let mut i = 0;
        while i < buf.frontier.len() {
            let state = buf.frontier[i] as usize;
            i += 1;
            buf.queued[state] = false;
            let base = buf.dist[state];
            let j = state / n;
            let v = state % n;
            for &e in &flat.out[v] {
                let jj = j + usize::from(flat.is_budget[e]);
                if jj >= layers {
                    continue;
                }
                let idx = jj * n + flat.heads[e] as usize;
                let cand = base + flat.flipped[e];
                if cand < buf.dist[idx] {
                    buf.dist[idx] = cand;
                    buf.pred[idx] = e as u32;
                    if !buf.queued[idx] {
                        buf.queued[idx] = true;
                        buf.next.push(idx as u32);
                    }
                }
            }
        }
        buf.frontier.clear();
        std::mem::swap(&mut buf.frontier, &mut buf.next);
        if buf.dist[goal] < 0 {
            break;
        }
    }
    if buf.dist[goal] >= 0 {
        return None;
    }

    // Walk predecessors back to an initial state. Predecessor chains are
    // acyclic: a cycle of states keeps the budget coordinate fixed, so it
    // uses no flipped -1 edges and cannot have negative total weight,
    // while strict relaxations around it would require exactly that.
    let mut edges = Vec::new();
    let (mut j, mut v) = (t, source);
    loop {
        let p = buf.pred[j * n + v];
        if p == NO_PRED {
            break;
        }
        let e = p as usize;
        edges.push(e);
        j -= usize::from(flat.is_budget[e]);
        v = flat.tails[e] as usize;
        assert!(edges.len() <= layers * n, "predecessor chain cannot loop");
    }
    debug_assert_eq!(v, source, "only source states start at distance zero");
    edges.reverse();
    Some(edges)
}

/// Budgets to try in order: a geometric ramp capped by `t`. A cycle found
/// under a smaller budget is valid for every larger one, and easy
/// witnesses are found long before the full budget is paid for.
fn budget_schedule(t: usize) -> Vec<usize> {
    let mut schedule = Vec::new();
    let mut step = 1;
    while step < t {
        schedule.push(step);
        step *= 2;
    }
    schedule.push(t);
    schedule
}

/// Finds a simple directed cycle `C` of the view with weight > 0 and at
/// most `t` weight +1 edges, or returns `None` when no such cycle
/// exists. Deterministic: budgets ramp up, sources are scanned in
/// ascending vertex id, and the first positive cycle popped from the
/// witness walk decomposition is returned.
pub fn find_positive_cycle(view: &OrientedView, t: usize) -> Option<DirectedCycle> {
    if t == 0 {
        // Positive weight needs at least one +1 edge.
        return None;
    }
    let n = view.vertex_count();
    let comp = view_components(view);
    let mut comp_size = vec![0usize; n];
    for &c in &comp {
        comp_size[c] += 1;
    }
    // Every directed cycle passes through a left vertex in a non-trivial
    // component, so those suffice as sources.
    let sources: Vec<usize> = (0..view.graph().n_left())
        .filter(|&v| comp_size[comp[v]] > 1)
        .collect();
    if sources.is_empty() {
        return None;
    }
    let flat = FlatView::of(view);
    for budget in budget_schedule(t) {
        let mut buf = SearchBuffers::new((budget + 1) * n);
        for &s in &sources {
            let Some(walk) = negative_closed_walk(&flat, n, s, budget, &mut buf) else {
                continue;
            };
            let cycles =
                decompose_closed_walk(view, &walk).expect("reconstructed witness walks are closed");
            for cycle in cycles {
                if cycle.weight() > 0 {
                    debug_assert!(cycle.positive_count() <= budget);
                    return Some(cycle);
                }
            }
            unreachable!("a positive-weight walk contains a positive cycle");
        }
    }
    None
}

/// Exhaustively enumerates the simple directed cycles of a view with at
/// most `max_vertices` vertices; the test oracle for the budgeted
/// search. Cycles are reported from their smallest vertex, in
/// depth-first order.
pub fn enumerate_cycles_brute(
    view: &OrientedView,
    max_vertices: usize,
) -> Result<Vec<DirectedCycle>, CycleError> {
    let n = view.vertex_count();
    if n > max_vertices {
        return Err(CycleError::TooLarge {
            vertices: n,
            limit: max_vertices,
        });
    }
    let mut cycles = Vec::new();
    let mut on_path = vec![false; n];
    let mut path: Vec<EdgeId> = Vec::new();
    for start in 0..n {
        dfs_cycles(view, start, start, &mut on_path, &mut path, &mut cycles);
    }
    cycles
        .into_iter()
        .map(|edges| DirectedCycle::from_edges(view, edges))
        .collect()
}

fn dfs_cycles(
    view: &OrientedView,
    start: usize,
    v: usize,
    on_path: &mut [bool],
    path: &mut Vec<EdgeId>,
    cycles: &mut Vec<Vec<EdgeId>>,
) {
    on_path[v] = true;
    for &e in view.out_edges(v) {
        let w = view.head(e);
        if w == start {
            let mut cycle = path.clone();
            cycle.push(e);
            cycles.push(cycle);
        } else if w > start && !on_path[w] {
            path.push(e);
            dfs_cycles(view, start, w, on_path, path, cycles);
            path.pop();
        }
    }
    on_path[v] = false;
}
