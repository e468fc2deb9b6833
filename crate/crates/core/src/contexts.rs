//! Decoherence environments as contexts of assessment.
//!
//! An environment is a set of records, each a pointer observable with the
//! systems it lives on, plus the set of events where those records form.
//! Environments combine only when every pair of their record observables
//! commutes; a proposition about an agent's outcome is assessable in an
//! environment only if that environment compatibly extends the agent's own.

use std::collections::BTreeSet;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::qcore::{commutes_embedded, Operator, Sign, Tolerance};
use crate::spacetime::{simultaneity_frame_for, BoostVelocity, Geometry, SpacetimeError};
use crate::wigner::{context_id, lab_labels, Agent, OutcomeRecord, ScenarioModel};

/// The contexts singled out by name in the scenario's analysis.
pub const NAMED_CONTEXTS: [&str; 5] = ["E_ABC", "E_ABW", "E_AVC", "E_UBC", "E_UVW"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContextError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("record from {record} carries no outcome for {missing}, required by {environment}")]
    RecordContextMismatch { record: String, environment: String, missing: Agent },
    #[error(transparent)]
    Spacetime(#[from] SpacetimeError),
}

/// A pointer observable and the systems whose decoherence it stands for.
#[derive(Debug, Clone)]
pub struct Record {
    pub agent: Agent,
    pub support: BTreeSet<String>,
    pub observable: Operator,
}

impl PartialEq for Record {
    fn eq(&self, other: &Self) -> bool {
        self.agent == other.agent && self.support == other.support
    }
}

impl Serialize for Record {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Plain<'a> {
            agent: Agent,
            support: &'a BTreeSet<String>,
        }
        Plain { agent: self.agent, support: &self.support }.serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecoherenceEnvironment {
    pub id: String,
    pub region: BTreeSet<String>,
    pub records: Vec<Record>,
}

impl DecoherenceEnvironment {
    /// Builds the environment of `records`, naming it after their agents.
    pub fn from_records(mut records: Vec<Record>) -> Self {
        records.sort_by_key(|r| agent_order(r.agent));
        records.dedup();
        let agents: Vec<Agent> = records.iter().map(|r| r.agent).collect();
        DecoherenceEnvironment {
            id: context_id(&agents),
            region: agents.iter().map(|a| a.event_label().to_string()).collect(),
            records,
        }
    }

    pub fn agents(&self) -> Vec<Agent> {
        self.records.iter().map(|r| r.agent).collect()
    }

    fn support(&self) -> BTreeSet<&str> {
        self.records.iter().flat_map(|r| r.support.iter().map(String::as_str)).collect()
    }
}

/// Lab by lab, friend before Wigner agent: `E_AVC`, `E_UBC`.
fn agent_order(a: Agent) -> (usize, bool) {
    (a.lab(), !a.is_friend())
}

fn records_commute(records: &[&Record]) -> bool {
    let tol = Tolerance::default().structural;
    records.iter().enumerate().all(|(i, a)| {
        records[i + 1..]
            .iter()
            .all(|b| commutes_embedded(&a.observable, &b.observable, tol).unwrap_or(false))
    })
}

/// The agent's own environment: its measurement event and the record of its
/// outcome, supported on its atom and lab.
pub fn primary_context(model: &ScenarioModel, agent: Agent) -> DecoherenceEnvironment {
    let lab = agent.lab();
    let support = std::iter::once(format!("a{}", lab + 1)).chain(lab_labels(lab, model.lab_width())).collect();
    DecoherenceEnvironment::from_records(vec![Record {
        agent,
        support,
        observable: model.outcome_observable(agent).clone(),
    }])
}

/// [`primary_context`] for an agent given by name, event label or variable.
pub fn primary_context_named(model: &ScenarioModel, agent: &str) -> Result<DecoherenceEnvironment, ContextError> {
    let a = agent.parse::<Agent>().map_err(|_| ContextError::UnknownAgent(agent.to_string()))?;
    Ok(primary_context(model, a))
}

/// `f` contains `e`'s records and region, and its records pairwise commute.
pub fn compatibly_extends(f: &DecoherenceEnvironment, e: &DecoherenceEnvironment) -> bool {
    e.records.iter().all(|r| f.records.contains(r))
        && e.region.is_subset(&f.region)
        && records_commute(&f.records.iter().collect::<Vec<_>>())
}

/// Disjoint systems and disjoint regions.
pub fn mutually_isolated(e: &DecoherenceEnvironment, f: &DecoherenceEnvironment) -> bool {
    e.support().is_disjoint(&f.support()) && e.region.is_disjoint(&f.region)
}

/// Union of the environments, if all of their records commute.
pub fn common_extension(envs: &[&DecoherenceEnvironment]) -> Option<DecoherenceEnvironment> {
    let records: Vec<&Record> = envs.iter().flat_map(|e| &e.records).collect();
    if !records_commute(&records) {
        return None;
    }
    let mut union = DecoherenceEnvironment::from_records(records.into_iter().cloned().collect());
    union.region = envs.iter().flat_map(|e| e.region.iter().cloned()).collect();
    Some(union)
}

/// Agent pairs whose outcome observables fail to commute.
pub fn incompatibility_graph(model: &ScenarioModel) -> Vec<(Agent, Agent)> {
    let tol = Tolerance::default().structural;
    let mut pairs = Vec::new();
    for (i, &a) in Agent::ALL.iter().enumerate() {
        for &b in &Agent::ALL[i + 1..] {
            let ok = commutes_embedded(model.outcome_observable(a), model.outcome_observable(b), tol).unwrap_or(false);
            if !ok {
                pairs.push((a, b));
            }
        }
    }
    pairs
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximalContext {
    pub environment: DecoherenceEnvironment,
    /// Whether this is one of [`NAMED_CONTEXTS`].
    pub named: bool,
    /// Boost velocity of a frame in which all the context's events are
    /// simultaneous, when one exists.
    pub frame: Option<BoostVelocity>,
}

/// Maximal sets of pairwise compatible agents, each as an environment. With
/// `require_frame`, only those whose events share a simultaneity frame.
pub fn maximal_contexts(
    model: &ScenarioModel,
    geometry: &Geometry,
    require_frame: bool,
) -> Result<Vec<MaximalContext>, ContextError> {
    let bad: Vec<(usize, usize)> = incompatibility_graph(model)
        .into_iter()
        .map(|(a, b)| (index_of(a), index_of(b)))
        .collect();
    let clique = |m: u32| bad.iter().all(|&(i, j)| m >> i & 1 == 0 || m >> j & 1 == 0);
    let cliques: Vec<u32> = (1u32..64).filter(|&m| clique(m)).collect();
    let maximal = cliques.iter().filter(|&&m| !cliques.iter().any(|&o| o != m && o & m == m));
    let mut out = Vec::new();
    for &m in maximal {
        let agents: Vec<Agent> = (0..6).filter(|i| m >> i & 1 == 1).map(|i| Agent::ALL[i]).collect();
        let prims: Vec<DecoherenceEnvironment> = agents.iter().map(|&a| primary_context(model, a)).collect();
        let environment = common_extension(&prims.iter().collect::<Vec<_>>()).expect("clique commutes");
        let events = agents.iter().map(|a| geometry.event(a.event_label())).collect::<Result<Vec<_>, _>>()?;
        let frame = simultaneity_frame_for(&events)?;
        if require_frame && frame.is_none() {
            continue;
        }
        let named = NAMED_CONTEXTS.contains(&environment.id.as_str());
        out.push(MaximalContext { environment, named, frame });
    }
    out.sort_by(|a, b| a.environment.id.cmp(&b.environment.id));
    Ok(out)
}

fn index_of(a: Agent) -> usize {
    Agent::ALL.iter().position(|&b| b == a).expect("agent listed")
}

/// A claim about one agent's outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Proposition {
    pub agent: Agent,
    pub value: Sign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AssessmentResult {
    True,
    False,
    NotAssessable,
}

/// Truth value of `p` at `e`, read from `record`. Environments that do not
/// compatibly extend the agent's primary context cannot assess `p`.
pub fn assess(
    model: &ScenarioModel,
    p: &Proposition,
    e: &DecoherenceEnvironment,
    record: &OutcomeRecord,
) -> Result<AssessmentResult, ContextError> {
    if !compatibly_extends(e, &primary_context(model, p.agent)) {
        return Ok(AssessmentResult::NotAssessable);
    }
    if let Some(missing) = e.agents().into_iter().find(|&a| record.value(a).is_none()) {
        return Err(ContextError::RecordContextMismatch {
            record: record.context.clone(),
            environment: e.id.clone(),
            missing,
        });
    }
    let observed = record.value(p.agent).expect("agent is in e");
    Ok(if observed == p.value { AssessmentResult::True } else { AssessmentResult::False })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetime::{collinear_geometry, default_geometry};
    use crate::wigner::context_born_table;
    use std::collections::BTreeMap;

    fn model() -> ScenarioModel {
        ScenarioModel::new(1).unwrap()
    }

    fn env(m: &ScenarioModel, agents: &[Agent]) -> Option<DecoherenceEnvironment> {
        let prims: Vec<_> = agents.iter().map(|&a| primary_context(m, a)).collect();
        common_extension(&prims.iter().collect::<Vec<_>>())
    }

    fn record(values: &[(Agent, Sign)]) -> OutcomeRecord {
        OutcomeRecord {
            context: "test".into(),
            values: values.iter().copied().collect::<BTreeMap<_, _>>(),
            probability: 1.0,
        }
    }

    use Agent::*;

    #[test]
    fn primary_contexts() {
        let m = model();
        let a = primary_context(&m, Alice);
        assert_eq!(a.id, "E_A");
        assert_eq!(a.records.len(), 1);
        assert_eq!(a.records[0].support, ["a1", "L1.0"].iter().map(|s| s.to_string()).collect());
        let u = primary_context(&m, Eugene);
        assert_eq!(u.records[0].observable.matrix(), m.lifted_x(0).matrix());
        assert_ne!(a.id, u.id);
        assert!(matches!(primary_context_named(&m, "Zed"), Err(ContextError::UnknownAgent(_))));
    }

    #[test]
    fn extension_and_isolation() {
        let m = model();
        let [ea, eb, eu] = [Alice, Bob, Eugene].map(|a| primary_context(&m, a));
        assert!(compatibly_extends(&ea, &ea));
        let eab = env(&m, &[Alice, Bob]).unwrap();
        assert_eq!(eab.id, "E_AB");
        assert!(compatibly_extends(&eab, &ea) && compatibly_extends(&eab, &eb));
        assert!(!compatibly_extends(&eu, &ea));
        assert!(mutually_isolated(&ea, &eb));
        assert!(!mutually_isolated(&ea, &ea));
        assert!(!mutually_isolated(&ea, &eu));
    }

    #[test]
    fn common_extensions() {
        let m = model();
        assert_eq!(env(&m, &[Alice, Bob, Charlie]).unwrap().id, "E_ABC");
        assert!(env(&m, &[Alice, Eugene]).is_none());
        assert!(env(&m, &[Alice, Bob, Charlie, Eugene]).is_none());
    }

    #[test]
    fn incompatibility_graph_matches_dense_commutators() {
        let m = model();
        let g = incompatibility_graph(&m);
        assert_eq!(g, [(Alice, Eugene), (Bob, Johnny), (Charlie, Daniel)]);
        // Oracle: commutators on the full post-friend layout.
        let full = m.layout();
        for (i, &a) in Agent::ALL.iter().enumerate() {
            for &b in &Agent::ALL[i + 1..] {
                let x = m.outcome_observable(a).extend_to(full).unwrap();
                let y = m.outcome_observable(b).extend_to(full).unwrap();
                let comm = x.compose(&y).unwrap().sub(&y.compose(&x).unwrap()).unwrap().max_norm();
                assert_eq!(comm > 1e-10, g.contains(&(a, b)), "{a} {b}");
            }
        }
    }

    #[test]
    fn eight_maximal_contexts_five_named() {
        let m = model();
        let all = maximal_contexts(&m, &default_geometry(), false).unwrap();
        assert_eq!(all.len(), 8);
        assert_eq!(all.iter().filter(|c| c.named).count(), 5);
        for c in &all {
            let agents = c.environment.agents();
            assert_eq!(agents.len(), 3);
            assert!((0..3).all(|lab| agents.iter().filter(|a| a.lab() == lab).count() == 1));
        }
        let framed = maximal_contexts(&m, &default_geometry(), true).unwrap();
        assert_eq!(framed.len(), 8);
        let collinear = maximal_contexts(&m, &collinear_geometry(), true).unwrap();
        assert!(collinear.len() < 8);
        assert!(collinear.iter().all(|c| c.frame.is_some()));
    }

    #[test]
    fn born_tables_exist_exactly_on_contexts() {
        let m = model();
        let state = m.post_friend_state().unwrap();
        let maximal: Vec<Vec<Agent>> = maximal_contexts(&m, &default_geometry(), false)
            .unwrap()
            .into_iter()
            .map(|c| c.environment.agents())
            .collect();
        for mask in 1u32..64 {
            let agents: Vec<Agent> = (0..6).filter(|i| mask >> i & 1 == 1).map(|i| Agent::ALL[i]).collect();
            let within_context = maximal.iter().any(|c| agents.iter().all(|a| c.contains(a)));
            let res = context_born_table(&state, &m.context(&agents));
            assert_eq!(res.is_ok(), within_context, "{agents:?}");
        }
    }

    #[test]
    fn assessment_examples() {
        let m = model();
        let p = Proposition { agent: Alice, value: Sign::Plus };
        let ea = primary_context(&m, Alice);
        let eu = primary_context(&m, Eugene);
        let eabc = env(&m, &[Alice, Bob, Charlie]).unwrap();
        let up = record(&[(Alice, Sign::Plus)]);
        assert_eq!(assess(&m, &p, &ea, &up).unwrap(), AssessmentResult::True);
        assert_eq!(assess(&m, &p, &eu, &up).unwrap(), AssessmentResult::NotAssessable);
        let down = record(&[(Alice, Sign::Minus), (Bob, Sign::Plus), (Charlie, Sign::Plus)]);
        assert_eq!(assess(&m, &p, &eabc, &down).unwrap(), AssessmentResult::False);
        assert!(matches!(assess(&m, &p, &eabc, &up), Err(ContextError::RecordContextMismatch { missing: Bob, .. })));
    }

    fn all_environments(m: &ScenarioModel) -> Vec<DecoherenceEnvironment> {
        (1u32..64)
            .filter_map(|mask| {
                let agents: Vec<Agent> = (0..6).filter(|i| mask >> i & 1 == 1).map(|i| Agent::ALL[i]).collect();
                env(m, &agents)
            })
            .collect()
    }

    #[test]
    fn extension_is_reflexive_and_transitive() {
        let m = model();
        let envs = all_environments(&m);
        assert_eq!(envs.len(), 26);
        for e in &envs {
            assert!(compatibly_extends(e, e));
        }
        for a in &envs {
            for b in &envs {
                if !compatibly_extends(b, a) {
                    continue;
                }
                for c in &envs {
                    if compatibly_extends(c, b) {
                        assert!(compatibly_extends(c, a), "{} {} {}", a.id, b.id, c.id);
                    }
                }
            }
        }
    }

    #[test]
    fn common_extension_iff_cross_records_commute() {
        let m = model();
        let envs = all_environments(&m);
        let tol = Tolerance::default().structural;
        for e in &envs {
            for f in &envs {
                let cross = e.records.iter().all(|r| {
                    f.records
                        .iter()
                        .all(|s| commutes_embedded(&r.observable, &s.observable, tol).unwrap())
                });
                assert_eq!(common_extension(&[e, f]).is_some(), cross, "{} {}", e.id, f.id);
            }
        }
    }

    #[test]
    fn assessment_is_monotone() {
        let m = model();
        let envs = all_environments(&m);
        for e in &envs {
            for f in envs.iter().filter(|f| compatibly_extends(f, e)) {
                for mask in 0u32..64 {
                    let r = record(
                        &Agent::ALL
                            .iter()
                            .enumerate()
                            .map(|(i, &a)| (a, if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus }))
                            .collect::<Vec<_>>(),
                    );
                    for &agent in &Agent::ALL {
                        for value in [Sign::Plus, Sign::Minus] {
                            let p = Proposition { agent, value };
                            let at_e = assess(&m, &p, e, &r).unwrap();
                            if at_e != AssessmentResult::NotAssessable {
                                assert_eq!(assess(&m, &p, f, &r).unwrap(), at_e);
                            }
                        }
                    }
                }
            }
        }
    }
}
