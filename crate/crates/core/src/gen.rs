//! Seeded random elections and single-instant snapshots.
//!
//! The generator emits deliberation profiles rather than graphs, so every
//! random test also exercises the profile validator and the compiler. The
//! snapshot operation strips a compiled graph down to one instant, which is
//! what a delegation system without the temporal dimension would see.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, TLDGraph};
use crate::profile::{borda_scores, DeliberationProfile, RoundAction};

/// How the generator assigns trust horizons to approval actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaMode {
    /// Every approval trusts all the way back to the start: δ = t − 1.
    Retrospective,
    /// A constant horizon, clamped to the feasible t − 1 in early rounds.
    Constant(u32),
    /// Uniform in [0, t − 1], rolled per approval action.
    Random,
}

/// Knobs for [`random_election`]. Probabilities are per voter (fates) or per
/// round (mind changes); `approval_density` is the chance each other voter
/// makes it into an approval.
#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub lifespan: u32,
    pub casting_prob: f64,
    pub abstain_prob: f64,
    pub approval_density: f64,
    pub max_groups: usize,
    pub score_max: u64,
    pub delta_mode: DeltaMode,
    pub mind_change_rate: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 6,
            lifespan: 5,
            casting_prob: 0.3,
            abstain_prob: 0.15,
            approval_density: 0.5,
            max_groups: 2,
            score_max: 4,
            delta_mode: DeltaMode::Retrospective,
            mind_change_rate: 0.25,
            seed: 0,
        }
    }
}

impl GenParams {
    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("need at least one voter".into()));
        }
        if self.lifespan == 0 {
            return Err(Error::InvalidParams("lifespan must be at least 1".into()));
        }
        for (name, p) in [
            ("casting probability", self.casting_prob),
            ("abstain probability", self.abstain_prob),
            ("approval density", self.approval_density),
            ("mind-change rate", self.mind_change_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParams(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        if self.max_groups == 0 || self.max_groups > 8 {
            return Err(Error::InvalidParams(format!(
                "groups per approval must lie in 1..=8, got {}",
                self.max_groups
            )));
        }
        if self.score_max == 0 {
            return Err(Error::InvalidParams("the score range needs a positive maximum".into()));
        }
        Ok(())
    }
}

/// Chance that an abstaining voter still shows up in some pre-final round;
/// their approvals are kept (zero-weighted) by the graph builder, giving the
/// random family dead-end tails to route around.
const ABSTAINER_EARLY_ACTION: f64 = 0.4;

/// Draws a complete deliberation record. Deterministic under `seed`.
///
/// Each voter draws a fate: casting voters vote from round 1 on, abstainers
/// are absent (except for occasional early approvals), and the rest approve
/// in every round, re-rolling who they approve with probability
/// `mind_change_rate` per round — the rate bounds how often a voter switches
/// actions. Casting is absorbing by construction.
pub fn random_election(p: &GenParams) -> Result<DeliberationProfile> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let names: Vec<String> = (0..p.n).map(|i| format!("v{i}")).collect();
    let mut rounds = vec![std::collections::BTreeMap::new(); p.lifespan as usize];

    #[derive(PartialEq)]
    enum Fate {
        Cast,
        Abstain,
        Delegate,
    }

    for v in 0..p.n {
        let fate = {
            let roll: f64 = rng.random();
            if roll < p.casting_prob {
                Fate::Cast
            } else if roll < p.casting_prob + p.abstain_prob || p.n == 1 {
                // a lone voter has nobody to approve
                Fate::Abstain
            } else {
                Fate::Delegate
            }
        };
        match fate {
            Fate::Cast => {
                rounds[0].insert(v, RoundAction::Vote);
            }
            Fate::Abstain => {
                for t in 1..p.lifespan {
                    if rng.random_bool(ABSTAINER_EARLY_ACTION) {
                        let action = roll_approval(&mut rng, p, v, t);
                        rounds[(t - 1) as usize].insert(v, action);
                    }
                }
            }
            Fate::Delegate => {
                let mut current = roll_approval(&mut rng, p, v, 1);
                for t in 1..=p.lifespan {
                    if t > 1 && rng.random_bool(p.mind_change_rate) {
                        current = roll_approval(&mut rng, p, v, t);
                    }
                    rounds[(t - 1) as usize].insert(v, retimed(&mut rng, p, &current, t));
                }
            }
        }
    }

    DeliberationProfile::new(names, p.lifespan, rounds)
}

/// A kept approval re-issued at a later round: same groups and scores, with
/// the horizon re-drawn for the new round per the delta mode.
fn retimed(rng: &mut ChaCha8Rng, p: &GenParams, action: &RoundAction, t: u32) -> RoundAction {
    let RoundAction::Approve { groups, scores, .. } = action else {
        unreachable!("delegators only hold approvals");
    };
    RoundAction::Approve {
        groups: groups.clone(),
        scores: scores.clone(),
        delta: roll_delta(rng, p, t),
    }
}

fn roll_delta(rng: &mut ChaCha8Rng, p: &GenParams, t: u32) -> u32 {
    match p.delta_mode {
        DeltaMode::Retrospective => t - 1,
        DeltaMode::Constant(c) => c.min(t - 1),
        DeltaMode::Random => rng.random_range(0..=t - 1),
    }
}

fn roll_approval(rng: &mut ChaCha8Rng, p: &GenParams, v: usize, t: u32) -> RoundAction {
    let others: Vec<usize> = (0..p.n).filter(|&u| u != v).collect();
    let mut targets: Vec<usize> =
        others.iter().copied().filter(|_| rng.random_bool(p.approval_density)).collect();
    if targets.is_empty() {
        targets.push(others[rng.random_range(0..others.len())]);
    }
    targets.shuffle(rng);

    let cap = p.max_groups.min(targets.len()).min(p.score_max as usize).max(1);
    let wanted = rng.random_range(1..=cap);
    let mut groups: Vec<Vec<usize>> = Vec::with_capacity(wanted);
    let chunk = targets.len().div_ceil(wanted);
    for slice in targets.chunks(chunk) {
        groups.push(slice.to_vec());
    }

    let scores = if rng.random_bool(0.5) {
        borda_scores(&groups).expect("groups are never empty")
    } else {
        // distinct scores drawn from 1..=score_max, sorted to strictly decrease
        let mut picked = std::collections::BTreeSet::new();
        while picked.len() < groups.len() {
            picked.insert(rng.random_range(1..=p.score_max));
        }
        picked.into_iter().rev().collect()
    };

    RoundAction::Approve { groups, scores, delta: roll_delta(rng, p, t) }
}

/// The election as a system without the temporal dimension would see it at
/// instant `t`: only edges live at `t` survive, re-timed to the single
/// instant of a lifespan-1 graph. Horizons collapse to 0 and the voter
/// partition is recomputed — a voter whose ballot or approvals lie elsewhere
/// in time is simply absent here.
pub fn snapshot(g: &TLDGraph, t: u32) -> TLDGraph {
    assert!(
        (1..=g.lifespan()).contains(&t),
        "snapshot instant {t} outside 1..={}",
        g.lifespan()
    );
    let mut b = GraphBuilder::new(1);
    for v in g.voters() {
        b.vertex(g.name(v));
    }
    for e in g.edges() {
        if !e.available_at(t) {
            continue;
        }
        let head = if e.head == g.sink() { GraphBuilder::SINK } else { e.head };
        b.labeled_edge(&e.label, e.tail, head, (1, 1), e.weight);
        if head != GraphBuilder::SINK {
            b.delta(e.tail, 1, 0);
        }
    }
    b.build().expect("a single instant of a valid graph is a valid graph")
}
