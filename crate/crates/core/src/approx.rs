//! The red-budget approximation solver: a fixed-k pass that improves a
//! minimum-red perfect matching through budgeted positive cycles and
//! falls back to forced-edge matchings, plus the wrapper that scans k'
//! values and keeps the best feasible answer.
//!
//! All fractional thresholds are cross-multiplied integer comparisons
//! (`3 * red >= k`, `3 * positive <= 2 * k`); no floating point anywhere.

use crate::cycle::find_positive_cycle;
use crate::graph::{ColoredBipartiteGraph, Matching, MatchingError, OrientedView};
use crate::matching::{prune_irrelevant, CostModel, MinCostMatcher};

/// Which part of the fixed-k pass produced the answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// The starting minimum-red matching already met the threshold.
    ThresholdAtStart,
    /// The threshold was reached after one or more cycle applications.
    CycleLoop,
    /// A forced-edge matching was accepted.
    ForcedEdge,
    /// No answer for this k.
    Bot,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::ThresholdAtStart => "threshold_at_start",
            Branch::CycleLoop => "cycle_loop",
            Branch::ForcedEdge => "forced_edge",
            Branch::Bot => "bot",
        }
    }
}

/// One cycle application in the improvement loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    pub red_before: usize,
    pub cycle_weight: i64,
    pub cycle_positive_count: usize,
}

/// Outcome of one fixed-k pass.
///
/// When `matching` is present it satisfies `3 * red >= k` and
/// `red <= k`; the loop applies at most `n_left` cycles since the red
/// count strictly increases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedKOutcome {
    pub matching: Option<Matching>,
    pub branch: Branch,
    pub iterations: usize,
    pub trace: Option<Vec<TraceStep>>,
}

impl FixedKOutcome {
    pub fn is_bot(&self) -> bool {
        self.matching.is_none()
    }

    pub fn red_count(&self) -> Option<usize> {
        self.matching.as_ref().map(|m| m.red_count())
    }
}

/// Solver status of the budgeted optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Solved,
    Infeasible,
}

/// Result of [`solve_em_opt`]. Matching edge ids refer to the input
/// graph. `branch`/`iterations`/`trace` describe the winning fixed-k
/// pass; `branch` is `None` when the maximum-red shortcut answered
/// directly. `k_star_hint` is never filled by the solver itself; tests
/// attach the oracle optimum there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmOptResult {
    pub status: SolveStatus,
    pub matching: Option<Matching>,
    pub achieved_red: usize,
    pub k_star_hint: Option<usize>,
    pub winning_k: Option<usize>,
    pub branch: Option<Branch>,
    pub iterations: usize,
    pub trace: Option<Vec<TraceStep>>,
    /// Number of edges deleted by preprocessing.
    pub removed_edges: usize,
}

impl EmOptResult {
    fn infeasible(removed_edges: usize) -> Self {
        EmOptResult {
            status: SolveStatus::Infeasible,
            matching: None,
            achieved_red: 0,
            k_star_hint: None,
            winning_k: None,
            branch: None,
            iterations: 0,
            trace: None,
            removed_edges,
        }
    }

    pub fn is_solved(&self) -> bool {
        self.status == SolveStatus::Solved
    }
}

/// One fixed-k pass over a pruned graph (every edge lies in some perfect
/// matching). Starts from the minimum-red matching; while below the
/// one-third threshold, applies a positive cycle with at most
/// `2k/3` positive edges; once no such cycle exists, tries the
/// minimum-red matching through each red edge in ascending id order.
pub fn solve_fixed_k(
    g: &ColoredBipartiteGraph,
    k: usize,
    record_trace: bool,
) -> Result<FixedKOutcome, MatchingError> {
    let matcher = MinCostMatcher::new(g, CostModel::MIN_RED)?;
    Ok(solve_fixed_k_with(g, k, record_trace, &matcher))
}

/// The fixed-k pass against a prepared minimum-red solver. The solver is
/// pure, so sharing it across k values changes nothing observable.
fn solve_fixed_k_with(
    g: &ColoredBipartiteGraph,
    k: usize,
    record_trace: bool,
    matcher: &MinCostMatcher,
) -> FixedKOutcome {
    let mut trace = record_trace.then(Vec::new);
    let mut m = matcher.matching();
    let mut iterations = 0usize;

    if m.red_count() > k {
        // Even the minimum exceeds the budget: no matching with at most
        // k red edges exists.
        return FixedKOutcome {
            matching: None,
            branch: Branch::Bot,
            iterations,
            trace,
        };
    }

    loop {
        if 3 * m.red_count() >= k {
            let branch = if iterations == 0 {
                Branch::ThresholdAtStart
            } else {
                Branch::CycleLoop
            };
            debug_assert!(m.red_count() <= k);
            return FixedKOutcome {
                matching: Some(m),
                branch,
                iterations,
                trace,
            };
        }
        let budget = 2 * k / 3;
        let view = OrientedView::build(g, &m).expect("loop matchings stay perfect");
        match find_positive_cycle(&view, budget) {
            Some(cycle) => {
                if let Some(steps) = trace.as_mut() {
                    steps.push(TraceStep {
                        red_before: m.red_count(),
                        cycle_weight: cycle.weight(),
                        cycle_positive_count: cycle.positive_count(),
                    });
                }
                let next = crate::graph::apply_cycle(g, &m, &cycle)
                    .expect("found cycles alternate with the current matching");
                debug_assert!(next.red_count() > m.red_count());
                debug_assert!(next.red_count() <= k);
                m = next;
                iterations += 1;
                debug_assert!(iterations <= g.n_left());
            }
            None => break,
        }
    }

    for e in g.red_edges() {
        match matcher.forced(e) {
            Ok(forced) => {
                let red = forced.red_count();
                if 3 * red >= k && red <= k {
                    return FixedKOutcome {
                        matching: Some(forced),
                        branch: Branch::ForcedEdge,
                        iterations,
                        trace,
                    };
                }
            }
            Err(MatchingError::NoPerfectMatchingThroughEdge) => continue,
            Err(other) => unreachable!("forced matching failed unexpectedly: {other}"),
        }
    }

    FixedKOutcome {
        matching: None,
        branch: Branch::Bot,
        iterations,
        trace,
    }
}

/// Solves the red-budgeted optimization: maximize the red count of a
/// perfect matching subject to at most `k` red edges.
///
/// Pipeline: prune edges outside every perfect matching; infeasible when
/// no perfect matching exists or even the minimum-red matching exceeds
/// `k`; when the maximum-red matching fits the budget it is returned
/// directly (it is exactly optimal there); otherwise fixed-k passes run
/// for every k' between the minimum red count and `k` and the best
/// feasible answer wins, ties to the smallest k'. On feasible instances
/// the result satisfies `3 * achieved_red >= k*` for the true optimum
/// `k*`.
pub fn solve_em_opt(g: &ColoredBipartiteGraph, k: usize, record_trace: bool) -> EmOptResult {
    let Ok(pruned) = prune_irrelevant(g) else {
        return EmOptResult::infeasible(0);
    };
    let removed_edges = pruned.removed.len();
    let pg = &pruned.graph;
    let min_matcher =
        MinCostMatcher::new(pg, CostModel::MIN_RED).expect("pruned graphs keep a perfect matching");
    let r_min = min_matcher.matching().red_count();
    if r_min > k {
        return EmOptResult::infeasible(removed_edges);
    }
    let m_max = MinCostMatcher::new(pg, CostModel::MAX_RED)
        .expect("pruned graphs keep a perfect matching")
        .matching();
    if m_max.red_count() <= k {
        // The maximum-red matching fits the budget, so it is the exact
        // optimum over all perfect matchings.
        let achieved_red = m_max.red_count();
        return EmOptResult {
            status: SolveStatus::Solved,
            matching: Some(pruned.restore(g, &m_max)),
            achieved_red,
            k_star_hint: None,
            winning_k: None,
            branch: None,
            iterations: 0,
            trace: None,
            removed_edges,
        };
    }

    let mut best: Option<(usize, usize, FixedKOutcome)> = None;
    for k_prime in r_min..=k {
        let outcome = solve_fixed_k_with(pg, k_prime, record_trace, &min_matcher);
        if let Some(red) = outcome.red_count() {
            debug_assert!(red <= k_prime);
            if red <= k && best.as_ref().is_none_or(|(r, _, _)| red > *r) {
                let done = red == k;
                best = Some((red, k_prime, outcome));
                if done {
                    // Nothing can beat an exact-budget answer, and later
                    // k' lose ties anyway.
                    break;
                }
            }
        }
    }

    let (achieved_red, winning_k, outcome) =
        best.expect("the k' = r_min pass always returns its starting matching");
    let matching = outcome
        .matching
        .as_ref()
        .map(|m| pruned.restore(g, m))
        .expect("winning outcomes carry a matching");
    EmOptResult {
        status: SolveStatus::Solved,
        matching: Some(matching),
        achieved_red,
        k_star_hint: None,
        winning_k: Some(winning_k),
        branch: Some(outcome.branch),
        iterations: outcome.iterations,
        trace: outcome.trace,
        removed_edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Color;
    use crate::test_support::square;

    #[test]
    fn square_k2_takes_forced_edge_branch() {
        // Minimum-red has 0 red (threshold 0 < 2); the only cycle has two
        // positive edges, above the budget 2*2/3 = 1; forcing the first
        // red edge yields the all-red matching, accepted by 3*2 >= 2.
        let g = square();
        let out = solve_fixed_k(&g, 2, true).unwrap();
        assert_eq!(out.branch, Branch::ForcedEdge);
        assert_eq!(out.red_count(), Some(2));
        assert_eq!(out.iterations, 0);
        assert_eq!(out.trace.as_deref(), Some(&[][..]));
    }

    #[test]
    fn square_k0_exits_at_threshold() {
        let g = square();
        let out = solve_fixed_k(&g, 0, false).unwrap();
        assert_eq!(out.branch, Branch::ThresholdAtStart);
        assert_eq!(out.red_count(), Some(0));
    }

    #[test]
    fn square_k1_is_bot() {
        // No perfect matching has exactly 1 red edge, so bot is legal:
        // budget 0 yields no cycle and both forced matchings have 2 red.
        let g = square();
        let out = solve_fixed_k(&g, 1, false).unwrap();
        assert!(out.is_bot());
        assert_eq!(out.branch, Branch::Bot);
    }

    #[test]
    fn fixed_k_on_graph_without_perfect_matching() {
        let g = ColoredBipartiteGraph::new(2, 2, [(0, 0, Color::Blue)]).unwrap();
        assert_eq!(
            solve_fixed_k(&g, 1, false).unwrap_err(),
            MatchingError::NoPerfectMatching
        );
    }

    #[test]
    fn fixed_k_bot_when_minimum_exceeds_budget() {
        let g = ColoredBipartiteGraph::new(1, 1, [(0, 0, Color::Red)]).unwrap();
        let out = solve_fixed_k(&g, 0, false).unwrap();
        assert!(out.is_bot());
    }

    #[test]
    fn wrapper_square_k1_returns_blue_matching() {
        // Attainable red counts are {0, 2}: the k'=0 pass answers with 0
        // red, the k'=1 pass is bot and skipped.
        let g = square();
        let res = solve_em_opt(&g, 1, false);
        assert!(res.is_solved());
        assert_eq!(res.achieved_red, 0);
        assert_eq!(res.winning_k, Some(0));
        assert_eq!(res.branch, Some(Branch::ThresholdAtStart));
    }

    #[test]
    fn wrapper_square_k5_uses_max_red_shortcut() {
        let g = square();
        let res = solve_em_opt(&g, 5, false);
        assert!(res.is_solved());
        assert_eq!(res.achieved_red, 2);
        assert_eq!(res.winning_k, None);
        assert_eq!(res.branch, None);
    }

    #[test]
    fn wrapper_square_k2_is_exact() {
        let g = square();
        let res = solve_em_opt(&g, 2, false);
        assert!(res.is_solved());
        assert_eq!(res.achieved_red, 2);
    }

    #[test]
    fn wrapper_infeasible_cases() {
        // No perfect matching at all.
        let g = ColoredBipartiteGraph::new(1, 1, []).unwrap();
        let res = solve_em_opt(&g, 4, false);
        assert_eq!(res.status, SolveStatus::Infeasible);

        // Every perfect matching exceeds the budget.
        let g = ColoredBipartiteGraph::new(1, 1, [(0, 0, Color::Red)]).unwrap();
        let res = solve_em_opt(&g, 0, false);
        assert_eq!(res.status, SolveStatus::Infeasible);
    }

    #[test]
    fn wrapper_maps_matching_back_to_input_ids() {
        // Edge 0 joins a0 to b2 while a2 has only b2, so edge 0 is in no
        // perfect matching; pruning it shifts every later edge id.
        let g = ColoredBipartiteGraph::new(
            3,
            3,
            [
                (0, 2, Color::Blue),
                (0, 1, Color::Red),
                (0, 0, Color::Blue),
                (1, 1, Color::Blue),
                (2, 2, Color::Blue),
                (1, 0, Color::Red),
            ],
        )
        .unwrap();
        let res = solve_em_opt(&g, 3, false);
        assert!(res.is_solved());
        assert_eq!(res.removed_edges, 1);
        assert_eq!(res.achieved_red, 2);
        let m = res.matching.unwrap();
        assert!(m.is_perfect());
        assert_eq!(m.edge_ids(), &[1, 4, 5]);
    }
}
