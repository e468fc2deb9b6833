//! The six-measurement scenario.
//!
//! Register layout: atoms `a1 a2 a3`, then each lab's pointer qubits
//! `L1.0 .. L1.{w-1}`, `L2.*`, `L3.*`. Wigner-stage pointers `pU pV pW` are
//! appended only when the Wigner measurements are run as unitaries.
//!
//! Friend measurements are ideal von Neumann unitaries copying the atom's z
//! value into every pointer qubit of the lab. The lifted observable measured by
//! a Wigner agent on lab `i` is `X_i = V_i (sigma_x(atom) x I(lab)) V_i^dagger`.
//! Conditioned states are bookkeeping only; nothing in the dynamics collapses.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec;
use crate::qcore::{
    born_table, commutes_embedded, paulis, spectral_projectors, BornTable, Operator, QError, QState, RegisterLayout,
    Sign, Tolerance, C64,
};
use crate::stabilizer::{ghz_scenario_state, StabilizerError, ATOM_LABELS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WignerError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("observables of {0} and {1} do not commute")]
    ContextIncompatible(Agent, Agent),
    #[error("order must be a permutation of the three labs: {0}")]
    NotPermutation(String),
    #[error("lab width must be at least 1")]
    BadLabWidth,
    #[error(transparent)]
    Linalg(#[from] QError),
    #[error(transparent)]
    Stabilizer(#[from] StabilizerError),
}

/// The six experimenters. Alice, Bob and Charlie measure atoms inside labs 1-3;
/// Eugene, Johnny and Daniel measure those labs from outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Agent {
    Alice,
    Bob,
    Charlie,
    Eugene,
    Johnny,
    Daniel,
}

impl Agent {
    pub const ALL: [Agent; 6] = [Agent::Alice, Agent::Bob, Agent::Charlie, Agent::Eugene, Agent::Johnny, Agent::Daniel];
    pub const FRIENDS: [Agent; 3] = [Agent::Alice, Agent::Bob, Agent::Charlie];
    pub const WIGNERS: [Agent; 3] = [Agent::Eugene, Agent::Johnny, Agent::Daniel];

    /// Lab index `0..3` the agent's measurement concerns.
    pub fn lab(self) -> usize {
        match self {
            Agent::Alice | Agent::Eugene => 0,
            Agent::Bob | Agent::Johnny => 1,
            Agent::Charlie | Agent::Daniel => 2,
        }
    }

    pub fn is_friend(self) -> bool {
        matches!(self, Agent::Alice | Agent::Bob | Agent::Charlie)
    }

    pub fn friend_of(lab: usize) -> Agent {
        Agent::FRIENDS[lab]
    }

    pub fn wigner_of(lab: usize) -> Agent {
        Agent::WIGNERS[lab]
    }

    /// Outcome variable name: `a b c u v w`.
    pub fn variable(self) -> &'static str {
        ["a", "b", "c", "u", "v", "w"][self as usize]
    }

    /// Spacetime event label: `A B C U V W`.
    pub fn event_label(self) -> &'static str {
        ["A", "B", "C", "U", "V", "W"][self as usize]
    }

    pub fn name(self) -> &'static str {
        ["Alice", "Bob", "Charlie", "Eugene", "Johnny", "Daniel"][self as usize]
    }

    pub fn from_variable(v: &str) -> Option<Agent> {
        Agent::ALL.into_iter().find(|a| a.variable() == v)
    }

    pub fn from_event_label(l: &str) -> Option<Agent> {
        Agent::ALL.into_iter().find(|a| a.event_label() == l)
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Agent {
    type Err = WignerError;

    /// Accepts the name (any case), the event label or the outcome variable.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Agent::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s) || a.event_label() == s || a.variable() == s)
            .ok_or_else(|| WignerError::UnknownAgent(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Friend,
    Wigner,
}

/// One of the six measurements as a unitary interaction.
#[derive(Debug, Clone)]
pub struct MeasurementSpec {
    pub agent: Agent,
    pub targets: Vec<String>,
    /// Involutory observable on `targets`.
    pub observable: Operator,
    pub pointer: Vec<String>,
    pub event: String,
    pub stage: Stage,
}

/// `U = P+ (x) I + P- (x) F` where `F` flips every pointer qubit.
pub fn vn_unitary<S: AsRef<str>>(o: &Operator, pointer: &[S]) -> Result<Operator, WignerError> {
    let (plus, minus) = spectral_projectors(o)?;
    let ptr = RegisterLayout::qubits(pointer.iter().map(|s| s.as_ref().to_string()))?;
    if let Some(clash) = ptr.labels().find(|l| o.layout().contains(l)) {
        return Err(QError::LabelClash(clash.to_string()).into());
    }
    let flip = pointer
        .iter()
        .try_fold(Operator::identity(RegisterLayout::default()), |acc, l| acc.tensor(&paulis::x(l.as_ref())))?;
    let u = plus.tensor(&Operator::identity(ptr))?.add(&minus.tensor(&flip)?)?;
    debug_assert!(u.is_unitary());
    Ok(u)
}

/// Majority vote of `Z` over the given pointer qubits; ties read `+1`.
fn majority_z<S: AsRef<str>>(labels: &[S]) -> Result<Operator, WignerError> {
    let layout = RegisterLayout::qubits(labels.iter().map(|s| s.as_ref().to_string()))?;
    let w = labels.len();
    let diag: Vec<C64> = (0..layout.dim())
        .map(|i| {
            let ones = (i as u32).count_ones() as usize;
            C64::new(if 2 * ones > w { -1.0 } else { 1.0 }, 0.0)
        })
        .collect();
    Ok(Operator::diagonal(layout, &diag)?)
}

/// The scenario's registers, initial state and the six measurement interactions.
#[derive(Debug, Clone)]
pub struct ScenarioModel {
    lab_width: usize,
    layout: RegisterLayout,
    initial: QState,
    friend_unitaries: Vec<Operator>,
    lifted_x: Vec<Operator>,
    records: Vec<Operator>,
    specs: Vec<MeasurementSpec>,
}

/// Pointer label of the Wigner agent measuring lab `i`.
pub fn wigner_pointer_label(lab: usize) -> String {
    format!("p{}", Agent::wigner_of(lab).event_label())
}

/// Pointer-qubit labels of lab `i` (`L{i+1}.k`).
pub fn lab_labels(lab: usize, width: usize) -> Vec<String> {
    (0..width).map(|k| format!("L{}.{k}", lab + 1)).collect()
}

impl ScenarioModel {
    /// The scenario on the GHZ state with `lab_width` pointer qubits per lab.
    pub fn new(lab_width: usize) -> Result<Self, WignerError> {
        Self::with_atom_state(ghz_scenario_state()?, lab_width)
    }

    /// The same construction from an arbitrary state of atoms `a1 a2 a3`.
    pub fn with_atom_state(atoms: QState, lab_width: usize) -> Result<Self, WignerError> {
        if lab_width == 0 {
            return Err(WignerError::BadLabWidth);
        }
        if atoms.layout() != &RegisterLayout::qubits(ATOM_LABELS)? {
            return Err(QError::LayoutMismatch(format!("atom state must live on {ATOM_LABELS:?}")).into());
        }
        let labs: Vec<String> = (0..3).flat_map(|i| lab_labels(i, lab_width)).collect();
        let lab_layout = RegisterLayout::qubits(labs)?;
        let layout = atoms.layout().concat(&lab_layout)?;
        let initial = atoms.tensor(&QState::zero(lab_layout))?;

        let mut friend_unitaries = Vec::new();
        let mut lifted_x = Vec::new();
        let mut records = Vec::new();
        let mut specs = Vec::new();
        for i in 0..3 {
            let atom = ATOM_LABELS[i];
            let ptr = lab_labels(i, lab_width);
            let v = vn_unitary(&paulis::z(atom), &ptr)?;
            let x = lifted_x_observable(atom, &v)?;
            let record = majority_z(&ptr)?;
            specs.push(MeasurementSpec {
                agent: Agent::friend_of(i),
                targets: vec![atom.to_string()],
                observable: paulis::z(atom),
                pointer: ptr.clone(),
                event: Agent::friend_of(i).event_label().to_string(),
                stage: Stage::Friend,
            });
            specs.push(MeasurementSpec {
                agent: Agent::wigner_of(i),
                targets: x.layout().labels().map(String::from).collect(),
                observable: x.clone(),
                pointer: vec![wigner_pointer_label(i)],
                event: Agent::wigner_of(i).event_label().to_string(),
                stage: Stage::Wigner,
            });
            friend_unitaries.push(v);
            lifted_x.push(x);
            records.push(record);
        }
        specs.sort_by_key(|s| s.agent);
        Ok(ScenarioModel { lab_width, layout, initial, friend_unitaries, lifted_x, records, specs })
    }

    pub fn lab_width(&self) -> usize {
        self.lab_width
    }

    /// Atoms and lab pointers (no Wigner pointers).
    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn initial_state(&self) -> &QState {
        &self.initial
    }

    pub fn specs(&self) -> &[MeasurementSpec] {
        &self.specs
    }

    pub fn spec(&self, agent: Agent) -> &MeasurementSpec {
        &self.specs[agent as usize]
    }

    /// Friend `i`'s measurement unitary on atom `i` and lab `i`.
    pub fn friend_unitary(&self, lab: usize) -> &Operator {
        &self.friend_unitaries[lab]
    }

    /// `X_i` on atom `i` and lab `i`.
    pub fn lifted_x(&self, lab: usize) -> &Operator {
        &self.lifted_x[lab]
    }

    /// Record observable of a friend: majority `Z` over the lab's pointer qubits.
    pub fn record_observable(&self, agent: Agent) -> Result<&Operator, WignerError> {
        if !agent.is_friend() {
            return Err(WignerError::UnknownAgent(format!("{agent} keeps no lab record")));
        }
        Ok(&self.records[agent.lab()])
    }

    /// The observable whose value an agent's outcome reports: the record for a
    /// friend, the lifted `X` for a Wigner agent.
    pub fn outcome_observable(&self, agent: Agent) -> &Operator {
        if agent.is_friend() {
            &self.records[agent.lab()]
        } else {
            &self.lifted_x[agent.lab()]
        }
    }

    /// Wigner agent's measurement unitary, writing into its external pointer.
    pub fn wigner_unitary(&self, lab: usize) -> Result<Operator, WignerError> {
        vn_unitary(&self.lifted_x[lab], &[wigner_pointer_label(lab)])
    }

    /// Applies the three friend unitaries to the initial state in `order`.
    pub fn run_friend_stage(&self, order: [Agent; 3]) -> Result<QState, WignerError> {
        let labs = permutation_labs(order, true)?;
        labs.into_iter()
            .try_fold(self.initial.clone(), |s, i| s.apply(&self.friend_unitaries[i]).map_err(Into::into))
    }

    /// State after all three friend measurements (Alice, Bob, Charlie order).
    pub fn post_friend_state(&self) -> Result<QState, WignerError> {
        self.run_friend_stage(Agent::FRIENDS)
    }

    /// Appends the Wigner pointers `pU pV pW` in their ready state.
    pub fn with_wigner_pointers(&self, state: &QState) -> Result<QState, WignerError> {
        let ptrs = RegisterLayout::qubits((0..3).map(wigner_pointer_label))?;
        Ok(state.tensor(&QState::zero(ptrs))?)
    }

    /// Applies the three Wigner unitaries in `order` to a state that already
    /// carries the Wigner pointers.
    pub fn run_wigner_stage(&self, state: &QState, order: [Agent; 3]) -> Result<QState, WignerError> {
        let labs = permutation_labs(order, false)?;
        labs.into_iter().try_fold(state.clone(), |s, i| Ok(s.apply(&self.wigner_unitary(i)?)?))
    }

    /// Context of the given agents, observables taken from [`Self::outcome_observable`].
    pub fn context(&self, agents: &[Agent]) -> Context {
        Context::new(agents.iter().map(|&a| (a, self.outcome_observable(a).clone())).collect())
    }
}

fn permutation_labs(order: [Agent; 3], friends: bool) -> Result<Vec<usize>, WignerError> {
    let labs: Vec<usize> = order.iter().map(|a| a.lab()).collect();
    let ok = order.iter().all(|a| a.is_friend() == friends) && {
        let mut sorted = labs.clone();
        sorted.sort_unstable();
        sorted == [0, 1, 2]
    };
    if !ok {
        return Err(WignerError::NotPermutation(format!("{order:?}")));
    }
    Ok(labs)
}

/// `X := V (sigma_x(atom) (x) I) V^dagger` on the layout of `v`.
pub fn lifted_x_observable(atom: &str, v: &Operator) -> Result<Operator, WignerError> {
    let sx = paulis::x(atom).extend_to(v.layout())?;
    let x = sx.conjugate_by(v)?;
    if !x.is_involutory() {
        return Err(QError::NotInvolutory.into());
    }
    Ok(x)
}

/// Jointly measured agents with their observables, in table order.
#[derive(Debug, Clone)]
pub struct Context {
    entries: Vec<(Agent, Operator)>,
}

impl Context {
    pub fn new(entries: Vec<(Agent, Operator)>) -> Self {
        Context { entries }
    }

    pub fn agents(&self) -> Vec<Agent> {
        self.entries.iter().map(|(a, _)| *a).collect()
    }

    pub fn observables(&self) -> Vec<Operator> {
        self.entries.iter().map(|(_, o)| o.clone()).collect()
    }

    /// `E_` followed by the event letters in order, e.g. `E_UBC`.
    pub fn id(&self) -> String {
        context_id(&self.agents())
    }

    pub fn entries(&self) -> &[(Agent, Operator)] {
        &self.entries
    }
}

pub fn context_id(agents: &[Agent]) -> String {
    let letters: String = agents.iter().map(|a| a.event_label()).collect();
    format!("E_{letters}")
}

/// Born table whose observables are labeled by the agents' outcome variables.
#[derive(Debug, Clone)]
pub struct AgentTable {
    pub context_id: String,
    pub agents: Vec<Agent>,
    pub table: BornTable,
}

/// Born table of a compatible context; rows are annotated with the agents'
/// outcome variables.
pub fn context_born_table(state: &QState, context: &Context) -> Result<AgentTable, WignerError> {
    let agents = context.agents();
    let obs = context.observables();
    let tol = Tolerance::default().structural;
    for (i, a) in obs.iter().enumerate() {
        for (j, b) in obs.iter().enumerate().skip(i + 1) {
            if !commutes_embedded(a, b, tol)? {
                return Err(WignerError::ContextIncompatible(agents[i], agents[j]));
            }
        }
    }
    let table = born_table(&obs, state)?.with_labels(agents.iter().map(|a| a.variable()));
    Ok(AgentTable { context_id: context.id(), agents, table })
}

/// One realized outcome tuple of a context.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeRecord {
    pub context: String,
    pub values: BTreeMap<Agent, Sign>,
    pub probability: f64,
}

impl OutcomeRecord {
    pub fn value(&self, agent: Agent) -> Option<Sign> {
        self.values.get(&agent).copied()
    }
}

/// Random source for draw `index` of a run seeded with `seed`: ChaCha8 keyed
/// by the seed, one stream per draw. Draws are independent of evaluation order.
pub fn draw_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Inverse-CDF draw of a row index; zero rows are never chosen.
fn draw_row(probs: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.random::<f64>() * probs.iter().sum::<f64>();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

fn record_for_row(table: &AgentTable, row: usize) -> OutcomeRecord {
    let signs = crate::qcore::outcome_tuple(row, table.agents.len());
    OutcomeRecord {
        context: table.context_id.clone(),
        values: table.agents.iter().copied().zip(signs).collect(),
        probability: table.table.probabilities()[row],
    }
}

/// Draw number `index` from a context table.
pub fn sample_table(table: &AgentTable, seed: u64, index: u64) -> OutcomeRecord {
    let row = draw_row(table.table.probabilities(), &mut draw_rng(seed, index));
    record_for_row(table, row)
}

/// `n` seeded draws; identical for identical `(seed, n)` in either execution mode.
pub fn sample_many(table: &AgentTable, seed: u64, n: usize) -> Vec<OutcomeRecord> {
    let probs = table.table.probabilities();
    let rows = exec::map_range(n, |i| draw_row(probs, &mut draw_rng(seed, i as u64)));
    rows.into_iter().map(|r| record_for_row(table, r)).collect()
}

/// One seeded draw of a context's joint outcome.
pub fn sample_outcomes(state: &QState, context: &Context, seed: u64) -> Result<OutcomeRecord, WignerError> {
    Ok(sample_table(&context_born_table(state, context)?, seed, 0))
}

/// Projects onto `observable = value` and renormalizes; returns the branch probability.
pub fn conditional_state(state: &QState, observable: &Operator, value: Sign) -> Result<(QState, f64), WignerError> {
    let (plus, minus) = spectral_projectors(observable)?;
    let proj = if value == Sign::Plus { plus } else { minus };
    let v = state.act(&proj)?;
    let p: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    if p <= Tolerance::default().structural {
        return Err(QError::ZeroBranch { probability: p }.into());
    }
    Ok((QState::normalized(state.layout().clone(), v)?, p))
}

/// Probability that Alice's record reads `+1` after Eugene's measurement,
/// given that it read `+1` (resp. `-1`) before.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErasureReport {
    pub p_up_given_up: f64,
    pub p_up_given_down: f64,
}

/// Erasure of Alice's record by Eugene's measurement of `X_A`.
pub fn erasure_check(model: &ScenarioModel) -> Result<ErasureReport, WignerError> {
    erasure_check_with(model, model.lifted_x(0))
}

/// [`erasure_check`] with Eugene measuring `observable` (on atom 1 and lab 1) instead of `X_A`.
pub fn erasure_check_with(model: &ScenarioModel, observable: &Operator) -> Result<ErasureReport, WignerError> {
    let post = model.post_friend_state()?;
    let record = model.record_observable(Agent::Alice)?;
    let eugene = vn_unitary(observable, &[wigner_pointer_label(0)])?;
    let ptr = QState::zero(RegisterLayout::qubit(wigner_pointer_label(0)));
    let branch = |value: Sign| -> Result<f64, WignerError> {
        let (cond, _) = conditional_state(&post, record, value)?;
        let after = cond.tensor(&ptr)?.apply(&eugene)?;
        let table = born_table(std::slice::from_ref(record), &after)?;
        Ok(table.probability(&[Sign::Plus]))
    };
    Ok(ErasureReport { p_up_given_up: branch(Sign::Plus)?, p_up_given_down: branch(Sign::Minus)? })
}
