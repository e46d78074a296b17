//! Deterministic instance families for the rule benchmarks. Each helper
//! compiles a seeded random election, so a given `(n, lifespan, seed)` names
//! the same graph on every run and timings stay comparable.

use tld_core::{compile, random_election, DeltaMode, GenParams, TLDGraph};

fn build(params: &GenParams) -> TLDGraph {
    compile(&random_election(params).expect("valid generator parameters"))
        .expect("generated records always compile")
}

/// Mostly-delegating electorate with backdatable trust: the workload for the
/// polynomial rules, whose cost grows with voters and events.
pub fn delegation_heavy(n: usize, lifespan: u32, seed: u64) -> TLDGraph {
    build(&GenParams {
        n,
        lifespan,
        casting_prob: 0.2,
        abstain_prob: 0.05,
        approval_density: 0.5,
        max_groups: 2,
        score_max: 4,
        delta_mode: DeltaMode::Retrospective,
        mind_change_rate: 0.25,
        seed,
    })
}

/// The same shape under one common waiting bound, for the walk rule.
pub fn bounded_wait(n: usize, lifespan: u32, delta: u32, seed: u64) -> TLDGraph {
    build(&GenParams {
        n,
        lifespan,
        casting_prob: 0.2,
        abstain_prob: 0.05,
        approval_density: 0.5,
        max_groups: 2,
        score_max: 4,
        delta_mode: DeltaMode::Constant(delta),
        mind_change_rate: 0.25,
        seed,
    })
}

/// Mostly-casting electorate, keeping the delegator count small: the
/// workload for the exact rule, whose cost is exponential in delegators.
pub fn caster_heavy(n: usize, lifespan: u32, seed: u64) -> TLDGraph {
    build(&GenParams {
        n,
        lifespan,
        casting_prob: 0.6,
        abstain_prob: 0.1,
        approval_density: 0.4,
        max_groups: 2,
        score_max: 4,
        delta_mode: DeltaMode::Retrospective,
        mind_change_rate: 0.25,
        seed,
    })
}
