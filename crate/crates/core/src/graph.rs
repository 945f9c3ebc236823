//! Red/blue edge-colored bipartite graphs, matchings, and the oriented
//! weighted view a perfect matching induces on the graph.

use std::collections::HashSet;
use thiserror::Error;

/// Identifier of an edge: its index in the graph's edge list.
pub type EdgeId = usize;

/// Edge color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn is_red(self) -> bool {
        matches!(self, Color::Red)
    }

    /// Single-letter form used by the `.emg` file format.
    pub fn letter(self) -> char {
        match self {
            Color::Red => 'r',
            Color::Blue => 'b',
        }
    }
}

/// Errors rejected at graph construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate edge between left vertex {a} and right vertex {b}")]
    DuplicateEdge { a: usize, b: usize },
    #[error("edge {edge} joins ({a}, {b}) which is out of range for a {n_left}x{n_right} graph")]
    IndexOutOfRange {
        edge: usize,
        a: usize,
        b: usize,
        n_left: usize,
        n_right: usize,
    },
}

/// Non-fatal observations about otherwise legal input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationWarning {
    /// The two sides differ in size, so no perfect matching can exist.
    /// Such input is accepted and reported infeasible downstream.
    UnbalancedSides { n_left: usize, n_right: usize },
}

/// An edge between left vertex `a` and right vertex `b`, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub color: Color,
}

/// A simple bipartite graph whose edges are colored red or blue.
///
/// Vertices are indexed 0-based per side. Edge identifiers are indices
/// into the edge list, in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredBipartiteGraph {
    n_left: usize,
    n_right: usize,
    edges: Vec<Edge>,
    adj_left: Vec<Vec<EdgeId>>,
    adj_right: Vec<Vec<EdgeId>>,
}

impl ColoredBipartiteGraph {
    /// Builds and validates a graph. Rejects out-of-range endpoints and
    /// duplicate `(a, b)` pairs; unbalanced sides are legal (see
    /// [`ColoredBipartiteGraph::warnings`]).
    pub fn new(
        n_left: usize,
        n_right: usize,
        edges: impl IntoIterator<Item = (usize, usize, Color)>,
    ) -> Result<Self, GraphError> {
        let mut g = ColoredBipartiteGraph {
            n_left,
            n_right,
            edges: Vec::new(),
            adj_left: vec![Vec::new(); n_left],
            adj_right: vec![Vec::new(); n_right],
        };
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        for (id, (a, b, color)) in edges.into_iter().enumerate() {
            if a >= n_left || b >= n_right {
                return Err(GraphError::IndexOutOfRange {
                    edge: id,
                    a,
                    b,
                    n_left,
                    n_right,
                });
            }
            if !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdge { a, b });
            }
            g.edges.push(Edge { a, b, color });
            g.adj_left[a].push(id);
            g.adj_right[b].push(id);
        }
        Ok(g)
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge ids incident to left vertex `a`, ascending.
    pub fn adjacent_left(&self, a: usize) -> &[EdgeId] {
        &self.adj_left[a]
    }

    /// Edge ids incident to right vertex `b`, ascending.
    pub fn adjacent_right(&self, b: usize) -> &[EdgeId] {
        &self.adj_right[b]
    }

    pub fn is_balanced(&self) -> bool {
        self.n_left == self.n_right
    }

    /// Warnings for legal-but-suspect input.
    pub fn warnings(&self) -> Vec<ValidationWarning> {
        let mut w = Vec::new();
        if !self.is_balanced() {
            w.push(ValidationWarning::UnbalancedSides {
                n_left: self.n_left,
                n_right: self.n_right,
            });
        }
        w
    }

    /// Ids of red edges, ascending.
    pub fn red_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.color.is_red())
            .map(|(id, _)| id)
    }

    /// The edge joining `a` and `b`, if present.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<EdgeId> {
        self.adj_left
            .get(a)?
            .iter()
            .copied()
            .find(|&id| self.edges[id].b == b)
    }
}

/// Errors raised by matching construction and matching-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("edge id {0} is not an edge of the graph")]
    EdgeNotInGraph(EdgeId),
    #[error("two matching edges share a vertex (edge ids {first} and {second})")]
    VertexReused { first: EdgeId, second: EdgeId },
    #[error("the matching is not perfect")]
    NotPerfectMatching,
    #[error("the cycle does not alternate with respect to the matching")]
    CycleNotAlternating,
    #[error("the graph has no perfect matching")]
    NoPerfectMatching,
    #[error("no perfect matching contains the required edge")]
    NoPerfectMatchingThroughEdge,
}

/// A matching: a set of edges no two of which share a vertex.
///
/// Carries per-vertex partner lookups and the cached number of red
/// member edges. Immutable; updates go through [`apply_cycle`], which
/// returns a fresh value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    edge_ids: Vec<EdgeId>,
    left_edge: Vec<Option<EdgeId>>,
    right_edge: Vec<Option<EdgeId>>,
    red_count: usize,
    perfect: bool,
}

impl Matching {
    pub fn new(
        g: &ColoredBipartiteGraph,
        edges: impl IntoIterator<Item = EdgeId>,
    ) -> Result<Self, MatchingError> {
        let mut edge_ids: Vec<EdgeId> = edges.into_iter().collect();
        edge_ids.sort_unstable();
        let mut left_edge = vec![None; g.n_left()];
        let mut right_edge = vec![None; g.n_right()];
        let mut red_count = 0;
        for &id in &edge_ids {
            if id >= g.edge_count() {
                return Err(MatchingError::EdgeNotInGraph(id));
            }
            let e = g.edge(id);
            if let Some(prev) = left_edge[e.a] {
                return Err(MatchingError::VertexReused {
                    first: prev,
                    second: id,
                });
            }
            if let Some(prev) = right_edge[e.b] {
                return Err(MatchingError::VertexReused {
                    first: prev,
                    second: id,
                });
            }
            left_edge[e.a] = Some(id);
            right_edge[e.b] = Some(id);
            if e.color.is_red() {
                red_count += 1;
            }
        }
        let perfect = g.is_balanced() && edge_ids.len() == g.n_left();
        Ok(Matching {
            edge_ids,
            left_edge,
            right_edge,
            red_count,
            perfect,
        })
    }

    /// Member edge ids, ascending.
    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edge_ids
    }

    pub fn len(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_ids.is_empty()
    }

    pub fn contains(&self, g: &ColoredBipartiteGraph, id: EdgeId) -> bool {
        id < g.edge_count() && self.left_edge[g.edge(id).a] == Some(id)
    }

    /// Number of red member edges.
    pub fn red_count(&self) -> usize {
        self.red_count
    }

    /// True when every vertex of both sides is covered.
    pub fn is_perfect(&self) -> bool {
        self.perfect
    }

    pub fn edge_at_left(&self, a: usize) -> Option<EdgeId> {
        self.left_edge[a]
    }

    pub fn edge_at_right(&self, b: usize) -> Option<EdgeId> {
        self.right_edge[b]
    }

    pub fn partner_of_left(&self, g: &ColoredBipartiteGraph, a: usize) -> Option<usize> {
        self.left_edge[a].map(|id| g.edge(id).b)
    }

    pub fn partner_of_right(&self, g: &ColoredBipartiteGraph, b: usize) -> Option<usize> {
        self.right_edge[b].map(|id| g.edge(id).a)
    }
}

/// The directed, weighted view of a graph under a perfect matching.
///
/// Matched edges point left-to-right, unmatched edges right-to-left.
/// Weights: blue edges 0, red matched edges -1, red unmatched edges +1.
/// Vertices are numbered `0..n_left` for the left side and
/// `n_left..n_left+n_right` for the right side.
#[derive(Debug)]
pub struct OrientedView<'g> {
    graph: &'g ColoredBipartiteGraph,
    matching: &'g Matching,
    out: Vec<Vec<EdgeId>>,
    weights: Vec<i8>,
}

/// Builds the oriented view of `g` under the perfect matching `m`.
pub fn build_oriented_view<'g>(
    g: &'g ColoredBipartiteGraph,
    m: &'g Matching,
) -> Result<OrientedView<'g>, MatchingError> {
    OrientedView::build(g, m)
}

impl<'g> OrientedView<'g> {
    pub fn build(g: &'g ColoredBipartiteGraph, m: &'g Matching) -> Result<Self, MatchingError> {
        if !m.is_perfect() || m.len() != g.n_left() {
            return Err(MatchingError::NotPerfectMatching);
        }
        let n = g.n_left() + g.n_right();
        let mut out = vec![Vec::new(); n];
        let mut weights = vec![0i8; g.edge_count()];
        for (id, e) in g.edges().iter().enumerate() {
            let matched = m.contains(g, id);
            weights[id] = match (e.color, matched) {
                (Color::Blue, _) => 0,
                (Color::Red, true) => -1,
                (Color::Red, false) => 1,
            };
            if matched {
                out[e.a].push(id);
            } else {
                out[g.n_left() + e.b].push(id);
            }
        }
        Ok(OrientedView {
            graph: g,
            matching: m,
            out,
            weights,
        })
    }

    pub fn graph(&self) -> &ColoredBipartiteGraph {
        self.graph
    }

    pub fn matching(&self) -> &Matching {
        self.matching
    }

    /// Total vertex count of the view (both sides).
    pub fn vertex_count(&self) -> usize {
        self.graph.n_left() + self.graph.n_right()
    }

    pub fn left_vertex(&self, a: usize) -> usize {
        debug_assert!(a < self.graph.n_left());
        a
    }

    pub fn right_vertex(&self, b: usize) -> usize {
        debug_assert!(b < self.graph.n_right());
        self.graph.n_left() + b
    }

    /// Start vertex of the directed edge.
    pub fn tail(&self, e: EdgeId) -> usize {
        let edge = self.graph.edge(e);
        if self.matching.contains(self.graph, e) {
            edge.a
        } else {
            self.graph.n_left() + edge.b
        }
    }

    /// End vertex of the directed edge.
    pub fn head(&self, e: EdgeId) -> usize {
        let edge = self.graph.edge(e);
        if self.matching.contains(self.graph, e) {
            self.graph.n_left() + edge.b
        } else {
            edge.a
        }
    }

    /// Weight of the edge: 0, -1 or +1.
    pub fn weight(&self, e: EdgeId) -> i8 {
        self.weights[e]
    }

    /// True for weight +1 edges (red, unmatched).
    pub fn is_positive(&self, e: EdgeId) -> bool {
        self.weights[e] == 1
    }

    /// Outgoing edge ids of a view vertex, ascending.
    pub fn out_edges(&self, v: usize) -> &[EdgeId] {
        &self.out[v]
    }
}

/// Errors raised by cycle construction and walk decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("empty edge sequence")]
    Empty,
    #[error("edges {0} and {1} are not head-to-tail")]
    NotAWalk(usize, usize),
    #[error("the edge sequence does not close")]
    NotClosed,
    #[error("vertex {0} repeats, the cycle is not simple")]
    RepeatedVertex(usize),
    #[error("the view has {vertices} vertices, above the limit {limit}")]
    TooLarge { vertices: usize, limit: usize },
}

/// A simple directed cycle of an oriented view, with cached weight and
/// positive/negative edge counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedCycle {
    edge_ids: Vec<EdgeId>,
    weight: i64,
    positive_count: usize,
    negative_count: usize,
}

impl DirectedCycle {
    /// Validates head-to-tail closure and simplicity, then caches the
    /// weight counts.
    pub fn from_edges(view: &OrientedView, edge_ids: Vec<EdgeId>) -> Result<Self, CycleError> {
        if edge_ids.is_empty() {
            return Err(CycleError::Empty);
        }
        let mut seen = HashSet::new();
        for window in edge_ids.windows(2) {
            if view.head(window[0]) != view.tail(window[1]) {
                return Err(CycleError::NotAWalk(window[0], window[1]));
            }
        }
        if view.head(*edge_ids.last().unwrap()) != view.tail(edge_ids[0]) {
            return Err(CycleError::NotClosed);
        }
        for &e in &edge_ids {
            let v = view.tail(e);
            if !seen.insert(v) {
                return Err(CycleError::RepeatedVertex(v));
            }
        }
        let mut weight = 0i64;
        let mut positive_count = 0;
        let mut negative_count = 0;
        for &e in &edge_ids {
            match view.weight(e) {
                1 => positive_count += 1,
                -1 => negative_count += 1,
                _ => {}
            }
            weight += view.weight(e) as i64;
        }
        debug_assert_eq!(weight, positive_count as i64 - negative_count as i64);
        debug_assert_eq!(edge_ids.len() % 2, 0, "view cycles alternate sides");
        Ok(DirectedCycle {
            edge_ids,
            weight,
            positive_count,
            negative_count,
        })
    }

    /// Member edge ids in traversal order.
    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edge_ids
    }

    pub fn len(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_ids.is_empty()
    }

    /// Sum of member edge weights.
    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// Number of weight +1 member edges.
    pub fn positive_count(&self) -> usize {
        self.positive_count
    }

    /// Number of weight -1 member edges.
    pub fn negative_count(&self) -> usize {
        self.negative_count
    }
}

/// Replaces `m` by its symmetric difference with the cycle.
///
/// The result is again a perfect matching and its red count moves by
/// exactly the cycle weight.
pub fn apply_cycle(
    g: &ColoredBipartiteGraph,
    m: &Matching,
    c: &DirectedCycle,
) -> Result<Matching, MatchingError> {
    let ids = c.edge_ids();
    // Alternation around the cycle; violated only if the cycle was built
    // against a different matching.
    for i in 0..ids.len() {
        let here = m.contains(g, ids[i]);
        let next = m.contains(g, ids[(i + 1) % ids.len()]);
        if here == next {
            return Err(MatchingError::CycleNotAlternating);
        }
    }
    let on_cycle: HashSet<EdgeId> = ids.iter().copied().collect();
    let mut new_ids: Vec<EdgeId> = m
        .edge_ids()
        .iter()
        .copied()
        .filter(|id| !on_cycle.contains(id))
        .collect();
    new_ids.extend(ids.iter().copied().filter(|&id| !m.contains(g, id)));
    let next = Matching::new(g, new_ids).map_err(|_| MatchingError::CycleNotAlternating)?;
    debug_assert_eq!(next.is_perfect(), m.is_perfect());
    debug_assert_eq!(next.red_count() as i64, m.red_count() as i64 + c.weight());
    Ok(next)
}
