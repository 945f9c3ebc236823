//! Perfect matchings with a budgeted number of red edges on bipartite
//! graphs: a deterministic solver that never overshoots the budget and
//! stays within a factor three of the optimum, an exhaustive oracle for
//! desk-scale verification, and a seeded instance generator.

pub mod approx;
pub mod cycle;
pub mod format;
pub mod generator;
pub mod graph;
pub mod matching;
pub mod oracle;
mod scc;

pub use approx::{
    solve_em_opt, solve_fixed_k, Branch, EmOptResult, FixedKOutcome, SolveStatus, TraceStep,
};
pub use cycle::{
    decompose_closed_walk, enumerate_cycles_brute, find_positive_cycle, split_closed_walk,
    BudgetedDistanceTable,
};
pub use format::{parse_emg, write_emg, EmInstance, FormatError};
pub use generator::{generate, GenError, GenMode, GenSpec};
pub use graph::{
    apply_cycle, build_oriented_view, Color, ColoredBipartiteGraph, CycleError, DirectedCycle,
    Edge, EdgeId, GraphError, Matching, MatchingError, OrientedView, ValidationWarning,
};
pub use matching::{
    max_red_pm, min_red_pm, min_red_pm_forcing, prune_irrelevant, CostModel, MinCostMatcher,
    PruneOutcome,
};
pub use oracle::{
    attainable_red_counts, enumerate_pms, exact_em_decision, exact_em_opt, for_each_pm,
    min_red_through_edge_brute, EnumerationBudget, OracleError,
};

#[cfg(test)]
pub(crate) mod test_support {
    use crate::graph::{Color, ColoredBipartiteGraph};

    /// The square instance: two blue matched edges, two red cross edges;
    /// its perfect matchings have 0 and 2 red edges.
    pub fn square() -> ColoredBipartiteGraph {
        ColoredBipartiteGraph::new(
            2,
            2,
            [
                (0, 0, Color::Blue),
                (1, 1, Color::Blue),
                (0, 1, Color::Red),
                (1, 0, Color::Red),
            ],
        )
        .unwrap()
    }
}
