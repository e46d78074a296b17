//! Deliberation profiles: what each voter did in each round, and how that
//! compiles down to a temporal election graph.
//!
//! A profile is a rectangular record over `lifespan` rounds. In a round a
//! voter either casts a ballot, abstains (possibly by simply being absent),
//! or approves a ranked partition of other voters with strictly decreasing
//! positive scores and a trust horizon. Casting is absorbing: once a voter
//! votes, any later explicit action must be a vote again.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, TLDGraph};

/// One voter's action in one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoundAction {
    Vote,
    Abstain,
    Approve {
        /// Ranked groups of voter indices, best first.
        groups: Vec<Vec<usize>>,
        /// Strictly decreasing positive scores, one per group.
        scores: Vec<u64>,
        /// How far back in time this voter trusts at this round.
        delta: u32,
    },
}

/// A complete deliberation record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeliberationProfile {
    voters: Vec<String>,
    lifespan: u32,
    /// `rounds[t-1]` holds the explicit actions of round `t`; absent voters
    /// are implicitly abstaining (or keep voting, once they have voted).
    rounds: Vec<BTreeMap<usize, RoundAction>>,
}

impl DeliberationProfile {
    pub fn new(
        voters: Vec<String>,
        lifespan: u32,
        rounds: Vec<BTreeMap<usize, RoundAction>>,
    ) -> Result<Self> {
        if lifespan == 0 {
            return Err(Error::InvalidProfile("lifespan must be at least 1".into()));
        }
        if rounds.len() != lifespan as usize {
            return Err(Error::InvalidProfile(format!(
                "expected {lifespan} rounds, got {}",
                rounds.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for name in &voters {
            if name == crate::graph::SINK_NAME {
                return Err(Error::InvalidProfile(format!("`{name}` is a reserved name")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidProfile(format!("duplicate voter `{name}`")));
            }
        }

        let profile = DeliberationProfile { voters, lifespan, rounds };
        profile.validate()?;
        Ok(profile)
    }

    fn validate(&self) -> Result<()> {
        let n = self.voters.len();
        let mut voted_at: Vec<Option<u32>> = vec![None; n];
        for (idx, round) in self.rounds.iter().enumerate() {
            let t = idx as u32 + 1;
            for (&v, action) in round {
                if v >= n {
                    return Err(Error::InvalidProfile(format!("round {t} names unknown voter #{v}")));
                }
                if let Some(tv) = voted_at[v] {
                    if *action != RoundAction::Vote {
                        return Err(Error::InvalidProfile(format!(
                            "`{}` voted at round {tv} and cannot act otherwise at round {t}",
                            self.voters[v]
                        )));
                    }
                }
                match action {
                    RoundAction::Vote => {
                        if voted_at[v].is_none() {
                            voted_at[v] = Some(t);
                        }
                    }
                    RoundAction::Abstain => {}
                    RoundAction::Approve { groups, scores, delta } => {
                        self.validate_approval(v, t, groups, scores, *delta)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_approval(
        &self,
        v: usize,
        t: u32,
        groups: &[Vec<usize>],
        scores: &[u64],
        delta: u32,
    ) -> Result<()> {
        let who = &self.voters[v];
        if groups.is_empty() {
            return Err(Error::InvalidProfile(format!("`{who}` approves nobody at round {t}")));
        }
        if scores.len() != groups.len() {
            return Err(Error::InvalidProfile(format!(
                "`{who}` at round {t}: {} groups but {} scores",
                groups.len(),
                scores.len()
            )));
        }
        let mut targets = BTreeSet::new();
        for group in groups {
            if group.is_empty() {
                return Err(Error::InvalidProfile(format!("`{who}` has an empty group at round {t}")));
            }
            for &u in group {
                if u >= self.voters.len() {
                    return Err(Error::InvalidProfile(format!(
                        "`{who}` approves unknown voter #{u} at round {t}"
                    )));
                }
                if u == v {
                    return Err(Error::InvalidProfile(format!("`{who}` approves themselves at round {t}")));
                }
                if !targets.insert(u) {
                    return Err(Error::InvalidProfile(format!(
                        "`{who}` approves `{}` twice at round {t}",
                        self.voters[u]
                    )));
                }
            }
        }
        for pair in scores.windows(2) {
            if pair[0] <= pair[1] {
                return Err(Error::InvalidProfile(format!(
                    "`{who}` at round {t}: scores must strictly decrease across groups"
                )));
            }
        }
        if scores.contains(&0) {
            return Err(Error::InvalidProfile(format!("`{who}` at round {t}: scores must be positive")));
        }
        if delta > t - 1 {
            return Err(Error::InvalidProfile(format!(
                "`{who}` at round {t}: horizon {delta} looks past the start of the election"
            )));
        }
        Ok(())
    }

    pub fn voters(&self) -> &[String] {
        &self.voters
    }

    pub fn lifespan(&self) -> u32 {
        self.lifespan
    }

    pub fn rounds(&self) -> &[BTreeMap<usize, RoundAction>] {
        &self.rounds
    }

    /// The explicit action of `v` at round `t`, if any.
    pub fn action(&self, v: usize, t: u32) -> Option<&RoundAction> {
        self.rounds[(t - 1) as usize].get(&v)
    }

    /// `(target, score, horizon)` per approval of `v` at round `t`, flattened
    /// in group order.
    fn approvals(&self, v: usize, t: u32) -> Vec<(usize, u64, u32)> {
        match self.action(v, t) {
            Some(RoundAction::Approve { groups, scores, delta }) => groups
                .iter()
                .zip(scores)
                .flat_map(|(group, &score)| group.iter().map(move |&u| (u, score, *delta)))
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn compile(&self) -> Result<TLDGraph> {
        compile(self)
    }
}

/// Compiles a deliberation record into its temporal election graph.
///
/// Consecutive rounds in which a voter approves the same target with the same
/// score merge into one edge spanning the run; trust horizons live in the
/// per-(voter, round) delta vector and do not split runs. Ballot edges stay
/// live from the vote round through the end. The graph builder then drops
/// pre-vote approvals of casting voters and zeroes the weights of casting and
/// abstaining tails.
pub fn compile(profile: &DeliberationProfile) -> Result<TLDGraph> {
    let mut b = GraphBuilder::new(profile.lifespan);
    let ids: Vec<usize> = profile.voters.iter().map(|name| b.vertex(name)).collect();

    for (v, _) in profile.voters.iter().enumerate() {
        // Ballot edge from the first vote round.
        let vote_round = (1..=profile.lifespan)
            .find(|&t| matches!(profile.action(v, t), Some(RoundAction::Vote)));
        if let Some(tv) = vote_round {
            b.edge(ids[v], GraphBuilder::SINK, (tv, profile.lifespan), 0);
        }

        // Approval edges, merged over maximal runs of identical
        // (target, score) pairs.
        for t in 1..=profile.lifespan {
            for (u, score, _) in profile.approvals(v, t) {
                let same_at =
                    |r: u32| profile.approvals(v, r).iter().any(|&(u2, s2, _)| (u2, s2) == (u, score));
                if t > 1 && same_at(t - 1) {
                    continue; // interior of a run; emitted at its start
                }
                let mut end = t;
                while end < profile.lifespan && same_at(end + 1) {
                    end += 1;
                }
                b.edge(ids[v], ids[u], (t, end), score);
            }
            if let Some(RoundAction::Approve { delta, .. }) = profile.action(v, t) {
                b.delta(ids[v], t, *delta);
            }
        }
    }

    b.build()
}

/// Positional scores for a ranked list of groups: `k` groups score
/// `k, k-1, ..., 1`.
pub fn borda_scores<T>(groups: &[T]) -> Result<Vec<u64>> {
    let k = groups.len() as u64;
    if k == 0 {
        return Err(Error::EmptyRanking);
    }
    Ok((1..=k).rev().collect())
}

/// True when every trust-horizon entry allows looking all the way back to the
/// start of the election (`d = t - 1` wherever an entry exists).
pub fn is_retrospective(g: &TLDGraph) -> bool {
    g.delta().iter().all(|(_, t, d)| d == t - 1)
}

/// Reads a deliberation record back out of a compiled graph.
///
/// Zero-weight delegations (the mark of casting and abstaining tails) are
/// reported with score 1, the smallest valid value; recompiling zeroes them
/// again, so a compile -> decompile -> compile round trip preserves where
/// edges live and what they weigh.
pub fn decompile(g: &TLDGraph) -> Result<DeliberationProfile> {
    let n = g.voter_count();
    let voters: Vec<String> = g.voters().map(|v| g.name(v).to_owned()).collect();
    let mut rounds: Vec<BTreeMap<usize, RoundAction>> =
        vec![BTreeMap::new(); g.lifespan() as usize];

    for v in 0..n {
        // score per (round, target) from the live edges
        let mut per_round: BTreeMap<u32, BTreeMap<usize, u64>> = BTreeMap::new();
        let mut vote_round: Option<u32> = None;
        for e in g.out_edges(v) {
            if e.head == g.sink() {
                vote_round = Some(e.start);
                continue;
            }
            for t in e.start..=e.end {
                per_round.entry(t).or_default().insert(e.head, e.weight.max(1));
            }
        }
        if let Some(tv) = vote_round {
            for t in tv..=g.lifespan() {
                rounds[(t - 1) as usize].insert(v, RoundAction::Vote);
            }
        }
        for (t, targets) in per_round {
            let mut by_score: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
            for (u, score) in targets {
                by_score.entry(score).or_default().push(u);
            }
            let mut groups = Vec::new();
            let mut scores = Vec::new();
            for (score, members) in by_score.into_iter().rev() {
                scores.push(score);
                groups.push(members);
            }
            let delta = g.delta().get(v, t).ok_or_else(|| {
                Error::MalformedGraph(format!(
                    "voter `{}` has no trust horizon at t={t}",
                    g.name(v)
                ))
            })?;
            rounds[(t - 1) as usize].insert(v, RoundAction::Approve { groups, scores, delta });
        }
    }

    DeliberationProfile::new(voters, g.lifespan(), rounds)
}
