//! The five subcommands. Each composes public operations of the core crate,
//! collects pass/fail checks and returns a report plus any extra artifacts.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use wignerghz::contexts::{
    assess, common_extension, incompatibility_graph, maximal_contexts, primary_context, Proposition, NAMED_CONTEXTS,
};
use wignerghz::decoherence::{
    correlation_decay, decoherence_onset, diagonality_trajectory, friend_pointer_state, product_decay,
    DephasingChannel,
};
use wignerghz::paradox::{
    constraints_from_born, enumerate_satisfying, global_section_exists, gf2_consistency, scenario_constraints,
    ConstraintSystem, TableParity,
};
use wignerghz::qcore::{born_table, paulis, BornTable, Operator, Sign};
use wignerghz::spacetime::{boost, FrameVerdict, SpacetimeError};
use wignerghz::stabilizer::{ghz_state_from, ATOM_LABELS};
use wignerghz::wigner::{context_born_table, erasure_check, sample_many, sample_table, Agent, AgentTable, ScenarioModel};

use crate::config::ScenarioConfig;
use crate::report::{Artifact, Check, RunReport};

#[derive(Debug, Error)]
#[error("{0}")]
pub struct RunError(pub String);

fn fail<E: std::fmt::Display>(e: E) -> RunError {
    RunError(e.to_string())
}

pub struct CommandOutput {
    pub report: RunReport,
    pub artifacts: Vec<Artifact>,
}

fn row_key(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.to_string()).collect()
}

fn table_json(t: &BornTable) -> Value {
    let rows: BTreeMap<String, f64> = t.rows().map(|(s, p)| (row_key(&s), p)).collect();
    json!({ "labels": t.labels(), "rows": rows })
}

fn agents_of(id: &str) -> Vec<Agent> {
    id[2..]
        .chars()
        .map(|c| Agent::from_event_label(&c.to_string()).expect("context ids use event letters"))
        .collect()
}

fn model_for(cfg: &ScenarioConfig) -> Result<ScenarioModel, RunError> {
    let atoms = ghz_state_from(&cfg.stabilizers()).map_err(fail)?;
    ScenarioModel::with_atom_state(atoms, cfg.lab_width).map_err(fail)
}

/// Rows above `tol` lie in one parity class and each equals `level`.
fn parity_support(t: &BornTable, product: Sign, level: f64, tol: f64) -> bool {
    t.rows().all(|(s, p)| p <= tol || (Sign::product(s.iter().copied()) == product && (p - level).abs() <= tol))
}

type SiteOp = fn(&str) -> Operator;

pub fn cmd_ghz_check(cfg: &ScenarioConfig) -> Result<CommandOutput, RunError> {
    let state = ghz_state_from(&cfg.stabilizers()).map_err(fail)?;
    let tol = cfg.tolerances.numeric;
    let table = |ops: [SiteOp; 3], names: &str| -> Result<BornTable, RunError> {
        let obs: Vec<Operator> = ops.iter().zip(ATOM_LABELS).map(|(f, l)| f(l)).collect();
        let labels: Vec<String> = names.chars().zip(1..).map(|(c, i)| format!("{c}{i}")).collect();
        Ok(born_table(&obs, &state).map_err(fail)?.with_labels(labels))
    };
    let (x, y, z): (SiteOp, SiteOp, SiteOp) = (paulis::x, paulis::y, paulis::z);
    let yyy = table([y, y, y], "yyy")?;
    let all_same = yyy.rows().all(|(s, p)| {
        let uniform = s.iter().all(|&v| v == s[0]);
        (p - if uniform { 0.5 } else { 0.0 }).abs() <= tol
    });
    let xxx = table([x, x, x], "xxx")?;
    let mixed = [table([x, z, z], "xzz")?, table([z, x, z], "zxz")?, table([z, z, x], "zzx")?];
    let checks = vec![
        Check::new("condition 1: y,y,y outcomes all up or all down, each 1/2", all_same, table_json(&yyy)),
        Check::new("condition 2: x,x,x outcome product -1, rows 1/4", parity_support(&xxx, Sign::Minus, 0.25, tol), table_json(&xxx)),
        Check::new(
            "condition 3: mixed x,z,z outcome product +1, rows 1/4",
            mixed.iter().all(|t| parity_support(t, Sign::Plus, 0.25, tol)),
            Value::Array(mixed.iter().map(table_json).collect()),
        ),
    ];
    let results = json!({ "generators": cfg.generators, "amplitudes": state.amplitudes().iter().map(|a| [a.re, a.im]).collect::<Vec<_>>() });
    Ok(CommandOutput { report: RunReport::new("ghz-check", cfg, checks, results), artifacts: vec![] })
}

/// The four contexts whose tables carry the scenario's parity constraints, in constraint order.
const CONSTRAINT_CONTEXTS: [&str; 4] = ["E_UBC", "E_AVC", "E_ABW", "E_UVW"];

fn tables_for(model: &ScenarioModel, ids: &[&str]) -> Result<Vec<AgentTable>, RunError> {
    let state = model.post_friend_state().map_err(fail)?;
    ids.iter()
        .map(|id| context_born_table(&state, &model.context(&agents_of(id))).map_err(fail))
        .collect()
}

pub fn cmd_paradox(cfg: &ScenarioConfig) -> Result<CommandOutput, RunError> {
    let model = model_for(cfg)?;
    let tol = cfg.tolerances.numeric;
    if cfg.friend_stage_only {
        return paradox_friend_stage(cfg, &model);
    }
    let constraint_tables = tables_for(&model, &CONSTRAINT_CONTEXTS)?;
    let expectations: BTreeMap<&str, f64> = CONSTRAINT_CONTEXTS
        .iter()
        .zip(&constraint_tables)
        .map(|(id, t)| (*id, t.table.product_expectation()))
        .collect();
    let expected = [1.0, 1.0, 1.0, -1.0];
    let exp_ok = CONSTRAINT_CONTEXTS.iter().zip(expected).all(|(id, e)| (expectations[id] - e).abs() <= tol);
    let raw: Vec<BornTable> = constraint_tables.iter().map(|t| t.table.clone()).collect();
    let extraction = constraints_from_born(&raw).map_err(fail)?;
    let system = extraction.system.clone();
    let reference = scenario_constraints();
    let constraints: Vec<String> = system.constraints().iter().map(|c| c.to_string()).collect();

    let enumeration = enumerate_satisfying(&system).map_err(fail)?;
    let singles: Vec<usize> = (0..system.constraints().len())
        .map(|i| enumerate_satisfying(&system.subsystem(&[i])).map(|e| e.count))
        .collect::<Result<_, _>>()
        .map_err(fail)?;
    let gf2 = gf2_consistency(&system);
    let witness: Vec<String> = gf2.witness.iter().flatten().map(|&i| constraints[i].clone()).collect();
    let argument = if witness.is_empty() {
        String::new()
    } else {
        format!("multiplying {} : every variable appears an even number of times, so the left sides multiply to +1 while the right sides multiply to -1", witness.join(", "))
    };

    let named = tables_for(&model, &NAMED_CONTEXTS)?;
    let named_tables: Vec<BornTable> = named.iter().map(|t| t.table.clone()).collect();
    let section = global_section_exists(&named_tables, None);

    // Seeded draws from each named context; each must respect its own parity constraint.
    let mut draws = BTreeMap::new();
    let mut draws_ok = true;
    for t in &named {
        let recs = sample_many(t, cfg.seed, 8);
        let parity = constraints_from_born(std::slice::from_ref(&t.table)).map_err(fail)?;
        if let Some(c) = parity.system.constraints().first() {
            draws_ok &= recs
                .iter()
                .all(|r| Sign::product(c.variables().iter().map(|v| r.value(Agent::from_variable(v).unwrap()).unwrap())) == c.product());
        }
        let rows: Vec<String> = recs.iter().map(|r| row_key(&t.agents.iter().map(|&a| r.value(a).unwrap()).collect::<Vec<_>>())).collect();
        draws.insert(t.context_id.clone(), rows);
    }

    let mut checks = vec![
        Check::new("constraint expectations from the post-friend state", exp_ok, json!(expectations)),
        Check::new(
            "extracted constraints equal the scenario constraints",
            system.to_string() == reference.to_string(),
            json!({ "extracted": constraints, "expected": reference.to_string().lines().collect::<Vec<_>>() }),
        ),
        Check::new(
            "no assignment satisfies all four constraints",
            enumeration.count == 0,
            json!({ "satisfying": enumeration.count, "total": enumeration.total }),
        ),
        Check::new(
            "each constraint alone leaves half the assignments",
            singles.iter().all(|&c| c * 2 == enumeration.total),
            json!(singles),
        ),
        Check::new(
            "elimination finds the system inconsistent",
            !gf2.consistent && witness.len() == 4,
            json!({ "consistent": gf2.consistent, "rank": gf2.rank, "witness": witness, "argument": argument }),
        ),
        Check::new("seeded draws respect their context's constraint", draws_ok, json!(draws)),
    ];
    match &section {
        Ok(g) => checks.push(Check::new(
            "no global section over the five named contexts",
            !g.exists && g.consistent_assignments == 0,
            json!(g),
        )),
        Err(e) => checks.push(Check::new("no global section over the five named contexts", false, json!({ "error": e.to_string() }))),
    }
    let results = json!({
        "constraints": constraints.join(", "),
        "per_table": extraction.per_table,
        "tables": named.iter().map(|t| (t.context_id.clone(), table_json(&t.table))).collect::<BTreeMap<_, _>>(),
    });
    Ok(CommandOutput { report: RunReport::new("paradox", cfg, checks, results), artifacts: vec![] })
}

/// Only the friends measure: the single context of the three z-records.
fn paradox_friend_stage(cfg: &ScenarioConfig, model: &ScenarioModel) -> Result<CommandOutput, RunError> {
    let tables = tables_for(model, &["E_ABC"])?;
    let raw: Vec<BornTable> = tables.iter().map(|t| t.table.clone()).collect();
    let extraction = constraints_from_born(&raw).map_err(fail)?;
    let universe: Vec<String> = raw[0].labels().to_vec();
    let system = ConstraintSystem::new(universe.clone(), extraction.system.constraints().to_vec()).map_err(fail)?;
    let enumeration = enumerate_satisfying(&system).map_err(fail)?;
    let section = global_section_exists(&raw, Some(&universe)).map_err(fail)?;
    let full_support = matches!(extraction.per_table[0], TableParity::NoParityStructure { .. });
    let checks = vec![
        Check::new("z-record table has no parity structure", full_support, json!(extraction.per_table)),
        Check::new(
            "global section exists for the friend stage",
            section.exists && section.consistent_assignments == enumeration.count,
            json!(section),
        ),
    ];
    let results = json!({ "variant": "friend_stage_only", "table": table_json(&raw[0]) });
    Ok(CommandOutput { report: RunReport::new("paradox", cfg, checks, results), artifacts: vec![] })
}

pub fn cmd_contexts(cfg: &ScenarioConfig) -> Result<CommandOutput, RunError> {
    let model = model_for(cfg)?;
    let geometry = cfg.geometry();
    let graph = incompatibility_graph(&model);
    let pairs: Vec<String> = graph.iter().map(|(a, b)| format!("({},{})", a.event_label(), b.event_label())).collect();
    let expected_pairs = [(Agent::Alice, Agent::Eugene), (Agent::Bob, Agent::Johnny), (Agent::Charlie, Agent::Daniel)];

    let prims: Vec<_> = [Agent::Alice, Agent::Bob, Agent::Charlie, Agent::Eugene].iter().map(|&a| primary_context(&model, a)).collect();
    let abcu = common_extension(&prims.iter().collect::<Vec<_>>());
    let abc = common_extension(&prims[..3].iter().collect::<Vec<_>>());

    let all = maximal_contexts(&model, &geometry, false).map_err(fail)?;
    let framed = maximal_contexts(&model, &geometry, true).map_err(fail)?;
    let used = if cfg.frame_filter { &framed } else { &all };
    let named_found: Vec<&str> = used.iter().filter(|c| c.named).map(|c| c.environment.id.as_str()).collect();
    let describe = |list: &[wignerghz::contexts::MaximalContext]| -> Vec<Value> {
        list.iter()
            .map(|c| json!({ "id": c.environment.id, "named": c.named, "frame_velocity": c.frame.map(|v| v.components()) }))
            .collect()
    };

    // Assess Alice's outcome claim at a few environments, reading a record drawn from E_ABC.
    let state = model.post_friend_state().map_err(fail)?;
    let abc_table = context_born_table(&state, &model.context(&Agent::FRIENDS)).map_err(fail)?;
    let record = sample_table(&abc_table, cfg.seed, 0);
    let alice = record.value(Agent::Alice).expect("drawn from E_ABC");
    let p = Proposition { agent: Agent::Alice, value: Sign::Plus };
    let mut assessments = BTreeMap::new();
    for env in [primary_context(&model, Agent::Alice), primary_context(&model, Agent::Eugene)].into_iter().chain(abc.clone()) {
        let r = assess(&model, &p, &env, &record).map_err(fail)?;
        assessments.insert(env.id.clone(), r);
    }
    let truth = if alice == Sign::Plus { "TRUE" } else { "FALSE" };
    let assess_ok = json!(assessments) == json!({ "E_A": truth, "E_U": "NOT_ASSESSABLE", "E_ABC": truth });

    let checks = vec![
        Check::new("incompatible pairs are (A,U), (B,V), (C,W)", graph == expected_pairs, json!(pairs)),
        Check::new(
            "E_A, E_B, E_C, E_U have no common extension while E_A, E_B, E_C do",
            abcu.is_none() && abc.as_ref().is_some_and(|e| e.id == "E_ABC"),
            json!({ "E_A+E_B+E_C+E_U": abcu.map(|e| e.id), "E_A+E_B+E_C": abc.as_ref().map(|e| e.id.clone()) }),
        ),
        Check::new(
            "the five named contexts are found and flagged",
            named_found.len() == NAMED_CONTEXTS.len(),
            json!({ "found": named_found, "frame_filter": cfg.frame_filter }),
        ),
        Check::new(
            "combinatorial maximal-context count is 8",
            all.len() == 8,
            json!({ "combinatorial": all.len(), "with_frame": framed.len(), "named": NAMED_CONTEXTS.len() }),
        ),
        Check::new(
            "Alice's claim is assessable at E_A and E_ABC only",
            assess_ok,
            json!({ "proposition": p, "record": record, "results": assessments }),
        ),
    ];
    let results = json!({
        "maximal_contexts": describe(&all),
        "maximal_contexts_with_frame": describe(&framed),
        "note": "combinatorial compatibility gives eight maximal contexts; five of them carry the scenario's names",
    });
    Ok(CommandOutput { report: RunReport::new("contexts", cfg, checks, results), artifacts: vec![] })
}

pub fn cmd_frames(cfg: &ScenarioConfig) -> Result<CommandOutput, RunError> {
    let geometry = cfg.geometry();
    let mut checks = Vec::new();
    let mut verdicts = Vec::new();
    for triple in &cfg.frames {
        let labels = [triple[0].as_str(), triple[1].as_str(), triple[2].as_str()];
        let name = labels.concat();
        let events = labels.map(|l| geometry.event(l).expect("validated labels").clone());
        let verdict = match wignerghz::spacetime::frame_verdict(&geometry, labels) {
            Ok(v) => v,
            Err(SpacetimeError::Degenerate) => {
                verdicts.push(json!({ "events": name, "verdict": "degenerate" }));
                continue;
            }
            Err(e) => return Err(fail(e)),
        };
        match &verdict {
            FrameVerdict::Frame { velocity, residual, .. } => {
                let times: Vec<f64> = events.iter().map(|e| boost(e, velocity).t).collect();
                checks.push(Check::new(
                    format!("frame for {name} is subluminal with residual within tolerance"),
                    velocity.speed() < 1.0 && *residual <= cfg.tolerances.frame_residual,
                    json!({ "velocity": velocity.to_string(), "speed": velocity.speed(), "residual": residual, "boosted_times": times }),
                ));
            }
            FrameVerdict::NoFrame(cert) => {
                checks.push(Check::new(
                    format!("no frame for {name}: certificate direction is not spacelike"),
                    cert.witness_norm >= 0.0,
                    json!(cert),
                ));
            }
        }
        verdicts.push(json!({ "events": name, "analysis": verdict }));
    }
    let results = json!({ "geometry": geometry.events(), "frames": verdicts });
    Ok(CommandOutput { report: RunReport::new("frames", cfg, checks, results), artifacts: vec![] })
}

pub fn cmd_decohere(cfg: &ScenarioConfig) -> Result<CommandOutput, RunError> {
    let model = model_for(cfg)?;
    let d = &cfg.dephasing;
    let tol = cfg.tolerances.numeric;
    let ch = DephasingChannel::lab_pointer(&model, d.target_lab, d.lambda).map_err(fail)?;
    let series = correlation_decay(&model, &ch, d.steps).map_err(fail)?;
    let analytic: Vec<f64> = (0..=d.steps).map(|k| -(1.0 - d.lambda).powi(k as i32)).collect();
    let decay_dev = series.iter().zip(&analytic).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    // Contexts in which the dephased lab enters only through its friend's record.
    let lab = d.target_lab;
    let mut record_contexts = vec![Agent::FRIENDS.to_vec()];
    for other in (0..3).filter(|&l| l != lab) {
        let mut agents = Agent::FRIENDS.to_vec();
        agents[other] = Agent::wigner_of(other);
        record_contexts.push(agents);
    }
    let mut record_dev: f64 = 0.0;
    let mut record_values = BTreeMap::new();
    for agents in &record_contexts {
        let vals = product_decay(&model, &ch, agents, d.steps).map_err(fail)?;
        record_dev = vals.iter().map(|v| (v - vals[0]).abs()).fold(record_dev, f64::max);
        let id: String = agents.iter().map(|a| a.event_label()).collect();
        record_values.insert(format!("E_{id}"), vals[0]);
    }

    let erasure = erasure_check(&model).map_err(fail)?;
    let erasure_ok = (erasure.p_up_given_up - 0.5).abs() <= tol && (erasure.p_up_given_down - 0.5).abs() <= tol;

    let pointer = friend_pointer_state(&model, lab).map_err(fail)?;
    let traj = diagonality_trajectory(&pointer, &ch, d.steps, None).map_err(fail)?;
    let onset = decoherence_onset(&traj, d.tolerance);

    let mut dat = String::from("# step\tcorrelation\tanalytic\tpointer_diagonality\n");
    for k in 0..=d.steps {
        dat.push_str(&format!("{k}\t{:.17e}\t{:.17e}\t{:.17e}\n", series[k], analytic[k], traj.points[k].1));
    }
    let checks = vec![
        Check::new(
            "<X_A X_B X_C> decays as -(1 - lambda)^k",
            decay_dev <= tol,
            json!({ "lambda": d.lambda, "max_deviation": decay_dev, "series": series }),
        ),
        Check::new(
            "record-only constraints survive record-basis dephasing",
            record_dev <= tol,
            json!({ "max_change": record_dev, "values": record_values }),
        ),
        Check::new("erasure leaves Alice's record up with probability 1/2 either way", erasure_ok, json!(erasure)),
    ];
    let results = json!({
        "target": ch.target(),
        "pointer_diagonality": traj,
        "robust_onset": onset,
        "robustness_tolerance": d.tolerance,
    });
    Ok(CommandOutput {
        report: RunReport::new("decohere", cfg, checks, results),
        artifacts: vec![Artifact { file_name: "decohere.dat".into(), contents: dat }],
    })
}
