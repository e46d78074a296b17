//! Delegation rules: the polynomial confluent rule, both time-conscious
//! greedy branches, the exact tree-cover solver, and brute-force oracles.

mod arborescence;
mod confluent;
mod exact;
mod oracle;
mod tc;

use std::collections::BTreeSet;

use crate::axioms::{check_solution, DelegationSolution, ValidityReport};
use crate::graph::TLDGraph;

pub use confluent::solve_confluent;
pub use exact::{solve_exact_tc_confluent, solve_exact_tc_confluent_with_cap, DEFAULT_DELEGATOR_CAP};
pub use oracle::{oracle_static_confluent, oracle_tc_confluent, oracle_tc_paths};
pub use tc::{solve_tc_retrospective, solve_tc_walks};

/// What a rule produced: the journeys it found, their total utility, and the
/// delegating voters it could not route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleResult {
    pub solution: DelegationSolution,
    pub objective: u64,
    pub unresolved: BTreeSet<usize>,
}

impl RuleResult {
    pub fn fully_resolved(&self) -> bool {
        self.unresolved.is_empty()
    }

    /// Number of delegating voters the rule managed to route.
    pub fn resolved_count(&self) -> usize {
        self.solution.journeys.len()
    }

    /// Validity report with this result's own unresolved set as the
    /// clause-(a) exemption.
    pub fn report(&self, g: &TLDGraph) -> ValidityReport {
        check_solution(g, &self.solution, &self.unresolved)
    }
}
