//! Liquid democracy with a time axis: voters deliberate over `L` rounds,
//! delegating by ranked approvals, abstaining, or casting a ballot, and the
//! system afterwards routes every delegating voter along edges of the
//! resulting temporal graph to somebody who actually voted.
//!
//! The crate is organized around that pipeline:
//!
//! * [`profile`] — deliberation records and their compilation into graphs;
//! * [`graph`] — the weighted temporal multigraph, its builder and validator;
//! * [`axioms`] — journey disciplines, solution validity, confluence, utility;
//! * [`rules`] — resolution rules from the polynomial confluent heuristic to
//!   the exact exponential tree cover, plus brute-force oracles;
//! * [`reductions`] — the Steiner-instance rewrite behind the exact rule and
//!   embeddings of two classic temporal-graph problems used as cross-checks;
//! * [`gen`] — seeded random elections and single-instant snapshots.
//!
//! The most common entry points are re-exported at the root.

pub mod axioms;
pub mod error;
pub mod gen;
pub mod graph;
pub mod profile;
pub mod reductions;
pub mod rules;

pub use axioms::{
    check_solution, is_confluent, is_delegation_tree, is_restless_walk, is_time_conscious_path,
    is_time_respecting_path, representation_weights, utility, DelegationSolution, TimedStep,
    ValidityReport, Violation,
};
pub use error::{Error, Result};
pub use gen::{random_election, snapshot, DeltaMode, GenParams};
pub use graph::{build_graph, GraphBuilder, TLDGraph, TemporalEdge, VoterPartition, SINK_NAME};
pub use profile::{borda_scores, compile, decompile, is_retrospective, DeliberationProfile, RoundAction};
pub use reductions::{
    from_restless_path, from_tmst, steiner_dp, to_steiner, RestlessInstance, SteinerInstance,
    TmstInstance,
};
pub use rules::{
    oracle_static_confluent, oracle_tc_confluent, oracle_tc_paths, solve_confluent,
    solve_exact_tc_confluent, solve_exact_tc_confluent_with_cap, solve_tc_retrospective,
    solve_tc_walks, RuleResult, DEFAULT_DELEGATOR_CAP,
};
