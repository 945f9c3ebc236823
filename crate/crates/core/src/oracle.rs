//! Brute-force ground truth for desk-scale instances: exhaustive perfect
//! matching enumeration and the exact red-count questions built on it.
//!
//! Everything here is independent of the solver modules so it can serve
//! as their oracle in tests.

use crate::graph::{ColoredBipartiteGraph, EdgeId, Matching};
use std::collections::BTreeSet;
use std::ops::ControlFlow;
use thiserror::Error;

/// Limits for the exhaustive enumeration. Exceeding a cap is an error,
/// never a silent truncation: a truncated oracle is worse than none.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_vertices_per_side: usize,
    pub max_matchings: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_vertices_per_side: 12,
            max_matchings: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(
        "instance has {n_left}x{n_right} vertices, enumeration is limited to {limit} per side"
    )]
    TooLarge {
        n_left: usize,
        n_right: usize,
        limit: usize,
    },
    #[error("enumeration exceeded the cap of {cap} matchings")]
    CapExceeded { cap: u64 },
}

fn check_size(g: &ColoredBipartiteGraph, budget: EnumerationBudget) -> Result<(), OracleError> {
    // 63 is the hard ceiling of the right-side bitmask; enumeration far
    // below that is already astronomically expensive.
    let limit = budget.max_vertices_per_side.min(63);
    if g.n_left().max(g.n_right()) > limit {
        return Err(OracleError::TooLarge {
            n_left: g.n_left(),
            n_right: g.n_right(),
            limit,
        });
    }
    Ok(())
}

struct Enumerator<'g, F> {
    g: &'g ColoredBipartiteGraph,
    chosen: Vec<EdgeId>,
    emitted: u64,
    cap: u64,
    stopped: bool,
    visit: F,
}

impl<F: FnMut(&[EdgeId]) -> ControlFlow<()>> Enumerator<'_, F> {
    fn run(&mut self, a: usize, used: u64) -> Result<(), OracleError> {
        if a == self.g.n_left() {
            self.emitted += 1;
            if self.emitted > self.cap {
                return Err(OracleError::CapExceeded { cap: self.cap });
            }
            if (self.visit)(&self.chosen).is_break() {
                self.stopped = true;
            }
            return Ok(());
        }
        for &e in self.g.adjacent_left(a) {
            let b = self.g.edge(e).b;
            if used & (1 << b) != 0 {
                continue;
            }
            self.chosen.push(e);
            self.run(a + 1, used | (1 << b))?;
            self.chosen.pop();
            if self.stopped {
                return Ok(());
            }
        }
        Ok(())
    }
}

/// Visits every perfect matching exactly once, as a sorted edge id
/// slice, by assigning left vertices in index order over a bitmask of
/// used right vertices. Deterministic order.
pub fn for_each_pm(
    g: &ColoredBipartiteGraph,
    budget: EnumerationBudget,
    visit: impl FnMut(&[EdgeId]) -> ControlFlow<()>,
) -> Result<(), OracleError> {
    check_size(g, budget)?;
    if !g.is_balanced() {
        return Ok(());
    }
    let mut enumerator = Enumerator {
        g,
        chosen: Vec::with_capacity(g.n_left()),
        emitted: 0,
        cap: budget.max_matchings,
        stopped: false,
        visit,
    };
    enumerator.run(0, 0)
}

/// All perfect matchings of `g`, in enumeration order.
pub fn enumerate_pms(
    g: &ColoredBipartiteGraph,
    budget: EnumerationBudget,
) -> Result<Vec<Matching>, OracleError> {
    let mut out = Vec::new();
    for_each_pm(g, budget, |ids| {
        out.push(Matching::new(g, ids.iter().copied()).expect("enumerated sets are matchings"));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

fn red_count_of(g: &ColoredBipartiteGraph, ids: &[EdgeId]) -> usize {
    ids.iter().filter(|&&e| g.edge(e).color.is_red()).count()
}

/// The exact optimum of the red-budgeted matching problem: the maximum
/// red count over perfect matchings with at most `k` red edges, with one
/// witness. `None` means infeasible.
pub fn exact_em_opt(
    g: &ColoredBipartiteGraph,
    k: usize,
    budget: EnumerationBudget,
) -> Result<Option<(usize, Matching)>, OracleError> {
    let mut best: Option<(usize, Vec<EdgeId>)> = None;
    for_each_pm(g, budget, |ids| {
        let red = red_count_of(g, ids);
        if red <= k && best.as_ref().is_none_or(|(r, _)| red > *r) {
            best = Some((red, ids.to_vec()));
        }
        ControlFlow::Continue(())
    })?;
    Ok(best.map(|(red, ids)| {
        let witness = Matching::new(g, ids).expect("enumerated sets are matchings");
        (red, witness)
    }))
}

/// Whether some perfect matching has exactly `k` red edges.
pub fn exact_em_decision(
    g: &ColoredBipartiteGraph,
    k: usize,
    budget: EnumerationBudget,
) -> Result<bool, OracleError> {
    let mut found = false;
    for_each_pm(g, budget, |ids| {
        if red_count_of(g, ids) == k {
            found = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

/// The set of red counts attained by perfect matchings of `g`.
pub fn attainable_red_counts(
    g: &ColoredBipartiteGraph,
    budget: EnumerationBudget,
) -> Result<BTreeSet<usize>, OracleError> {
    let mut counts = BTreeSet::new();
    for_each_pm(g, budget, |ids| {
        counts.insert(red_count_of(g, ids));
        ControlFlow::Continue(())
    })?;
    Ok(counts)
}

/// Minimum red count over perfect matchings containing edge `e`, or
/// `None` when no perfect matching contains it. The brute-force mirror
/// of the forced-edge matching, and the per-edge membership check.
pub fn min_red_through_edge_brute(
    g: &ColoredBipartiteGraph,
    e: EdgeId,
    budget: EnumerationBudget,
) -> Result<Option<usize>, OracleError> {
    let mut best: Option<usize> = None;
    for_each_pm(g, budget, |ids| {
        if ids.contains(&e) {
            let red = red_count_of(g, ids);
            if best.is_none_or(|b| red < b) {
                best = Some(red);
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Color;
    use crate::test_support::square;

    #[test]
    fn square_has_two_perfect_matchings() {
        let g = square();
        let pms = enumerate_pms(&g, EnumerationBudget::default()).unwrap();
        assert_eq!(pms.len(), 2);
        assert!(pms.iter().all(|m| m.is_perfect()));
        assert_eq!(pms[0].edge_ids(), &[0, 1]);
        assert_eq!(pms[1].edge_ids(), &[2, 3]);
    }

    #[test]
    fn complete_three_by_three_has_six() {
        let mut edges = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                edges.push((a, b, Color::Blue));
            }
        }
        let g = ColoredBipartiteGraph::new(3, 3, edges).unwrap();
        assert_eq!(
            enumerate_pms(&g, EnumerationBudget::default())
                .unwrap()
                .len(),
            6
        );
    }

    #[test]
    fn isolated_vertex_means_no_matchings() {
        let g = ColoredBipartiteGraph::new(2, 2, [(0, 0, Color::Blue)]).unwrap();
        assert!(enumerate_pms(&g, EnumerationBudget::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn square_optimum_by_budget() {
        let g = square();
        let budget = EnumerationBudget::default();
        let (k_star, witness) = exact_em_opt(&g, 1, budget).unwrap().unwrap();
        assert_eq!(k_star, 0);
        assert_eq!(witness.red_count(), 0);
        let (k_star, _) = exact_em_opt(&g, 2, budget).unwrap().unwrap();
        assert_eq!(k_star, 2);
    }

    #[test]
    fn edgeless_graph_is_infeasible() {
        let g = ColoredBipartiteGraph::new(1, 1, []).unwrap();
        assert_eq!(
            exact_em_opt(&g, 3, EnumerationBudget::default()).unwrap(),
            None
        );
    }

    #[test]
    fn square_decision() {
        let g = square();
        let budget = EnumerationBudget::default();
        assert!(exact_em_decision(&g, 0, budget).unwrap());
        assert!(!exact_em_decision(&g, 1, budget).unwrap());
        assert!(exact_em_decision(&g, 2, budget).unwrap());
    }

    #[test]
    fn attainable_counts() {
        let g = square();
        let budget = EnumerationBudget::default();
        let counts = attainable_red_counts(&g, budget).unwrap();
        assert_eq!(counts.into_iter().collect::<Vec<_>>(), vec![0, 2]);

        let single = ColoredBipartiteGraph::new(1, 1, [(0, 0, Color::Red)]).unwrap();
        let counts = attainable_red_counts(&single, budget).unwrap();
        assert_eq!(counts.into_iter().collect::<Vec<_>>(), vec![1]);

        let mut blue = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                blue.push((a, b, Color::Blue));
            }
        }
        let k22 = ColoredBipartiteGraph::new(2, 2, blue).unwrap();
        let counts = attainable_red_counts(&k22, budget).unwrap();
        assert_eq!(counts.into_iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn too_large_is_rejected() {
        let g = ColoredBipartiteGraph::new(13, 13, []).unwrap();
        assert!(matches!(
            enumerate_pms(&g, EnumerationBudget::default()),
            Err(OracleError::TooLarge { .. })
        ));
    }

    #[test]
    fn cap_fails_loudly() {
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                edges.push((a, b, Color::Blue));
            }
        }
        let g = ColoredBipartiteGraph::new(4, 4, edges).unwrap();
        let budget = EnumerationBudget {
            max_vertices_per_side: 12,
            max_matchings: 10,
        };
        // 4! = 24 matchings exceed the cap of 10.
        assert_eq!(
            enumerate_pms(&g, budget).unwrap_err(),
            OracleError::CapExceeded { cap: 10 }
        );
    }

    #[test]
    fn forced_minimum_by_enumeration() {
        let g = square();
        let budget = EnumerationBudget::default();
        assert_eq!(min_red_through_edge_brute(&g, 0, budget).unwrap(), Some(0));
        assert_eq!(min_red_through_edge_brute(&g, 2, budget).unwrap(), Some(2));
        let path = ColoredBipartiteGraph::new(
            2,
            2,
            [(0, 0, Color::Blue), (0, 1, Color::Red), (1, 1, Color::Blue)],
        )
        .unwrap();
        assert_eq!(min_red_through_edge_brute(&path, 1, budget).unwrap(), None);
    }
}
