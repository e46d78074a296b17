//! The JSON documents the binary exchanges: deliberation records ("rounds"),
//! election graphs ("edges"), solutions, and the source instances of the two
//! reduction constructions. [`parse_input`] auto-detects the record-vs-graph
//! form by which of the two keys is present.

use std::collections::{BTreeMap, BTreeSet};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use tld_core::reductions::SteinerVertex;
use tld_core::{
    compile, DelegationSolution, DeliberationProfile, GraphBuilder, RestlessInstance, RoundAction,
    RuleResult, SteinerInstance, TLDGraph, TimedStep, TmstInstance, SINK_NAME,
};

/// A full deliberation record: who did what in which round.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElectionDoc {
    pub lifespan: u32,
    pub voters: Vec<String>,
    pub rounds: Vec<RoundDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoundDoc {
    pub t: u32,
    pub actions: BTreeMap<String, ActionDoc>,
}

/// One voter's action in one round. The approval variant must come first:
/// untagged deserialization takes the first variant whose fields are all
/// present, and a vote document has no "groups".
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionDoc {
    Approve { groups: Vec<Vec<String>>, scores: Vec<u64>, delta: u32 },
    Vote { vote: bool },
    Abstain { abstain: bool },
}

/// An election graph given directly, bypassing the deliberation record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDoc {
    pub lifespan: u32,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    /// voter → instant (as a JSON object key) → trust horizon.
    #[serde(default)]
    pub delta: BTreeMap<String, BTreeMap<String, u32>>,
    /// Only on `reduce` output: the translated utility bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<ReduceMeta>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReduceMeta {
    pub k: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub interval: [u32; 2],
    pub weight: u64,
}

/// What a rule produced. `journeys` references edges by their id (for graphs
/// compiled from a record, the auto-derived `tail>head@start` label).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    pub objective: u64,
    /// Whether journeys may revisit voters; affects validity checking.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub walks: bool,
    pub journeys: BTreeMap<String, Vec<StepDoc>>,
    #[serde(default)]
    pub unresolved: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepDoc {
    pub edge: String,
    pub time: u32,
}

/// Source instance for the spanning-arborescence reduction, plus the cost
/// bound `k'` the output's utility bound is derived from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TmstDoc {
    pub vertex_count: usize,
    pub root: usize,
    pub lifespan: u32,
    pub arcs: Vec<(usize, usize)>,
    pub budget: u64,
}

/// Source instance for the waiting-bounded-path reduction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RestlessDoc {
    pub vertex_count: usize,
    pub source: usize,
    pub target: usize,
    pub delta: u32,
    pub lifespan: u32,
    pub edges: Vec<(usize, usize, u32)>,
}

/// Serialized Steiner instance, for debugging the exact rule's rewrite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SteinerDoc {
    pub root: usize,
    pub terminals: Vec<usize>,
    /// Rendered vertices: "root", "special:<voter>", "occ:<edge>@<t>".
    pub vertices: Vec<String>,
    pub arcs: Vec<SteinerArcDoc>,
    /// Σ over delegating voters of (heaviest + lightest) outgoing weight;
    /// utility = transform − tree cost.
    pub transform: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SteinerArcDoc {
    pub tail: usize,
    pub head: usize,
    pub weight: u64,
}

/// Either input form a solving command accepts.
#[derive(Debug, Clone)]
pub enum InputDoc {
    Election(ElectionDoc),
    Graph(GraphDoc),
}

/// Parses an input document, deciding the form by its top-level keys.
pub fn parse_input(text: &str) -> Result<InputDoc> {
    let value: serde_json::Value = serde_json::from_str(text).context("not valid JSON")?;
    let obj = value.as_object().context("expected a JSON object at the top level")?;
    if obj.contains_key("rounds") {
        let doc = serde_json::from_value(value).context("malformed deliberation record")?;
        Ok(InputDoc::Election(doc))
    } else if obj.contains_key("edges") {
        let doc = serde_json::from_value(value).context("malformed graph document")?;
        Ok(InputDoc::Graph(doc))
    } else {
        bail!("neither a deliberation record (\"rounds\") nor a graph (\"edges\")");
    }
}

impl InputDoc {
    /// The election graph either way: compiled from the record, or built
    /// directly.
    pub fn into_graph(self) -> Result<TLDGraph> {
        match self {
            InputDoc::Election(doc) => Ok(compile(&doc.to_profile()?)?),
            InputDoc::Graph(doc) => doc.to_graph(),
        }
    }
}

impl ElectionDoc {
    pub fn to_profile(&self) -> Result<DeliberationProfile> {
        let index: BTreeMap<&str, usize> =
            self.voters.iter().enumerate().map(|(i, name)| (name.as_str(), i)).collect();
        let look = |name: &str| -> Result<usize> {
            index.get(name).copied().with_context(|| format!("unknown voter `{name}`"))
        };

        let mut rounds: Vec<BTreeMap<usize, RoundAction>> =
            vec![BTreeMap::new(); self.lifespan as usize];
        for round in &self.rounds {
            if round.t < 1 || round.t > self.lifespan {
                bail!("round t={} outside the lifespan {}", round.t, self.lifespan);
            }
            let slot = &mut rounds[round.t as usize - 1];
            if !slot.is_empty() {
                bail!("round t={} appears twice", round.t);
            }
            for (name, action) in &round.actions {
                slot.insert(look(name)?, action.to_action(&look)?);
            }
        }
        Ok(DeliberationProfile::new(self.voters.clone(), self.lifespan, rounds)?)
    }

    pub fn from_profile(profile: &DeliberationProfile) -> Self {
        let rounds = profile
            .rounds()
            .iter()
            .enumerate()
            .map(|(idx, actions)| RoundDoc {
                t: idx as u32 + 1,
                actions: actions
                    .iter()
                    .map(|(&v, a)| (profile.voters()[v].clone(), ActionDoc::from_action(a, profile)))
                    .collect(),
            })
            .collect();
        ElectionDoc {
            lifespan: profile.lifespan(),
            voters: profile.voters().to_vec(),
            rounds,
        }
    }
}

impl ActionDoc {
    fn to_action(&self, look: &dyn Fn(&str) -> Result<usize>) -> Result<RoundAction> {
        match self {
            ActionDoc::Vote { vote: true } => Ok(RoundAction::Vote),
            ActionDoc::Vote { vote: false } => bail!("a vote action must say \"vote\": true"),
            ActionDoc::Abstain { abstain: true } => Ok(RoundAction::Abstain),
            ActionDoc::Abstain { abstain: false } => {
                bail!("an abstention must say \"abstain\": true")
            }
            ActionDoc::Approve { groups, scores, delta } => {
                let groups = groups
                    .iter()
                    .map(|group| group.iter().map(|name| look(name)).collect())
                    .collect::<Result<Vec<Vec<usize>>>>()?;
                Ok(RoundAction::Approve { groups, scores: scores.clone(), delta: *delta })
            }
        }
    }

    fn from_action(action: &RoundAction, profile: &DeliberationProfile) -> Self {
        match action {
            RoundAction::Vote => ActionDoc::Vote { vote: true },
            RoundAction::Abstain => ActionDoc::Abstain { abstain: true },
            RoundAction::Approve { groups, scores, delta } => ActionDoc::Approve {
                groups: groups
                    .iter()
                    .map(|g| g.iter().map(|&v| profile.voters()[v].clone()).collect())
                    .collect(),
                scores: scores.clone(),
                delta: *delta,
            },
        }
    }
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<TLDGraph> {
        let known: BTreeSet<&str> = self.vertices.iter().map(String::as_str).collect();
        if known.contains(SINK_NAME) {
            bail!("`{SINK_NAME}` is implicit and may not be listed as a vertex");
        }
        let mut b = GraphBuilder::new(self.lifespan);
        let mut id_of: BTreeMap<&str, usize> = BTreeMap::new();
        for name in &self.vertices {
            id_of.insert(name, b.vertex(name));
        }

        for e in &self.edges {
            let &tail = id_of
                .get(e.tail.as_str())
                .with_context(|| format!("edge `{}` has unknown tail `{}`", e.id, e.tail))?;
            let head = if e.head == SINK_NAME {
                GraphBuilder::SINK
            } else {
                *id_of
                    .get(e.head.as_str())
                    .with_context(|| format!("edge `{}` has unknown head `{}`", e.id, e.head))?
            };
            b.labeled_edge(&e.id, tail, head, (e.interval[0], e.interval[1]), e.weight);
        }

        for (name, horizons) in &self.delta {
            let &voter = id_of
                .get(name.as_str())
                .with_context(|| format!("trust horizons given for unknown voter `{name}`"))?;
            for (instant, &horizon) in horizons {
                let t: u32 = instant
                    .parse()
                    .with_context(|| format!("bad horizon instant `{instant}` for `{name}`"))?;
                b.delta(voter, t, horizon);
            }
        }
        Ok(b.build()?)
    }

    pub fn from_graph(g: &TLDGraph) -> Self {
        let mut delta: BTreeMap<String, BTreeMap<String, u32>> = BTreeMap::new();
        for (v, t, d) in g.delta().iter() {
            delta
                .entry(g.name(v).to_owned())
                .or_default()
                .insert(t.to_string(), d);
        }
        GraphDoc {
            lifespan: g.lifespan(),
            vertices: g.voters().map(|v| g.name(v).to_owned()).collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    id: e.label.clone(),
                    tail: g.name(e.tail).to_owned(),
                    head: g.name(e.head).to_owned(),
                    interval: [e.start, e.end],
                    weight: e.weight,
                })
                .collect(),
            delta,
            meta: None,
        }
    }
}

impl SolutionDoc {
    pub fn from_result(g: &TLDGraph, rule: &str, result: &RuleResult) -> Self {
        let step = |s: &TimedStep| StepDoc { edge: g.edge(s.edge).label.clone(), time: s.time };
        SolutionDoc {
            rule: Some(rule.to_owned()),
            objective: result.objective,
            walks: result.solution.walks_allowed,
            journeys: result
                .solution
                .journeys
                .iter()
                .map(|(&v, journey)| (g.name(v).to_owned(), journey.iter().map(step).collect()))
                .collect(),
            unresolved: result.unresolved.iter().map(|&v| g.name(v).to_owned()).collect(),
        }
    }

    /// Maps names and edge ids back onto `g`.
    pub fn resolve(&self, g: &TLDGraph) -> Result<(DelegationSolution, BTreeSet<usize>)> {
        let voter = |name: &str| {
            g.vertex_named(name)
                .filter(|&v| v != g.sink())
                .with_context(|| format!("solution names unknown voter `{name}`"))
        };
        let mut journeys = BTreeMap::new();
        for (name, steps) in &self.journeys {
            let journey = steps
                .iter()
                .map(|s| {
                    let edge = g
                        .edge_labeled(&s.edge)
                        .with_context(|| format!("solution references unknown edge `{}`", s.edge))?;
                    Ok(TimedStep { edge: edge.id, time: s.time })
                })
                .collect::<Result<Vec<_>>>()?;
            journeys.insert(voter(name)?, journey);
        }
        let solution = if self.walks {
            DelegationSolution::walks(journeys)
        } else {
            DelegationSolution::paths(journeys)
        };
        let unresolved = self
            .unresolved
            .iter()
            .map(|name| voter(name))
            .collect::<Result<BTreeSet<usize>>>()?;
        Ok((solution, unresolved))
    }
}

impl TmstDoc {
    pub fn to_instance(&self) -> (TmstInstance, u64) {
        let inst = TmstInstance {
            vertex_count: self.vertex_count,
            root: self.root,
            lifespan: self.lifespan,
            arcs: self.arcs.clone(),
        };
        (inst, self.budget)
    }
}

impl RestlessDoc {
    pub fn to_instance(&self) -> RestlessInstance {
        RestlessInstance {
            vertex_count: self.vertex_count,
            source: self.source,
            target: self.target,
            delta: self.delta,
            lifespan: self.lifespan,
            edges: self.edges.clone(),
        }
    }
}

impl SteinerDoc {
    pub fn from_instance(inst: &SteinerInstance, g: &TLDGraph) -> Self {
        let render = |v: &SteinerVertex| match *v {
            SteinerVertex::Root => "root".to_owned(),
            SteinerVertex::Special { voter, .. } => format!("special:{}", g.name(voter)),
            SteinerVertex::Occurrence { edge, time } => {
                format!("occ:{}@{time}", g.edge(edge).label)
            }
        };
        SteinerDoc {
            root: inst.root(),
            terminals: inst.terminals().to_vec(),
            vertices: inst.vertices().iter().map(render).collect(),
            arcs: inst
                .arcs()
                .iter()
                .map(|a| SteinerArcDoc { tail: a.tail, head: a.head, weight: a.weight })
                .collect(),
            transform: inst.transform(),
        }
    }
}
