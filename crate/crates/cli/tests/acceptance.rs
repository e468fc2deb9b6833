//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use wignerghz::contexts::{common_extension, incompatibility_graph, maximal_contexts, primary_context, NAMED_CONTEXTS};
use wignerghz::decoherence::{correlation_decay, product_decay, DephasingChannel};
use wignerghz::paradox::{check_marginals, constraints_from_born, enumerate_satisfying, gf2_consistency, scenario_constraints};
use wignerghz::qcore::{born_table, paulis, BornTable, Operator, Sign};
use wignerghz::spacetime::{collinear_geometry, default_geometry, frame_verdict, FrameVerdict};
use wignerghz::stabilizer::{ghz_scenario_state, ATOM_LABELS};
use wignerghz::wigner::{context_born_table, erasure_check, Agent, ScenarioModel};
use wignerghz_cli::{cmd_paradox, write_report, ScenarioConfig};

const TOL: f64 = 1e-12;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

type Criterion = (&'static str, Option<Duration>, fn() -> Result<Outcome, String>);

fn atoms(f: fn(&str) -> Operator, g: fn(&str) -> Operator, h: fn(&str) -> Operator) -> Vec<Operator> {
    vec![f(ATOM_LABELS[0]), g(ATOM_LABELS[1]), h(ATOM_LABELS[2])]
}

fn ghz_table(obs: &[Operator]) -> Result<BornTable, String> {
    let s = ghz_scenario_state().map_err(|e| e.to_string())?;
    born_table(obs, &s).map_err(|e| e.to_string())
}

fn support_check(t: &BornTable, product: Sign) -> bool {
    t.rows().all(|(s, p)| p.abs() <= TOL || (Sign::product(s) == product && (p - 0.25).abs() <= TOL))
}

fn c1() -> Result<Outcome, String> {
    let t = ghz_table(&atoms(paulis::y, paulis::y, paulis::y))?;
    let mut zeros = 0;
    let mut ok = true;
    for (s, p) in t.rows() {
        if s.iter().all(|&v| v == s[0]) {
            ok &= (p - 0.5).abs() <= TOL;
        } else {
            ok &= p.abs() <= TOL;
            zeros += 1;
        }
    }
    Ok(outcome(ok && zeros == 6, format!("p(+++)={:.15} p(---)={:.15}", t.probability(&[Sign::Plus; 3]), t.probability(&[Sign::Minus; 3]))))
}

fn c2() -> Result<Outcome, String> {
    let xxx = ghz_table(&atoms(paulis::x, paulis::x, paulis::x))?;
    let mixed = [
        ghz_table(&atoms(paulis::x, paulis::z, paulis::z))?,
        ghz_table(&atoms(paulis::z, paulis::x, paulis::z))?,
        ghz_table(&atoms(paulis::z, paulis::z, paulis::x))?,
    ];
    let ok = support_check(&xxx, Sign::Minus) && mixed.iter().all(|t| support_check(t, Sign::Plus));
    Ok(outcome(ok, "xxx support in product -1 rows, xzz/zxz/zzx in product +1 rows, nonzero rows 1/4"))
}

const CONSTRAINT_CONTEXTS: [[Agent; 3]; 4] = [
    [Agent::Eugene, Agent::Bob, Agent::Charlie],
    [Agent::Alice, Agent::Johnny, Agent::Charlie],
    [Agent::Alice, Agent::Bob, Agent::Daniel],
    [Agent::Eugene, Agent::Johnny, Agent::Daniel],
];

/// Expectations of the four constraint products and whether extraction reproduces the constraints.
fn scenario_from_first_principles(w: usize) -> Result<(Vec<f64>, bool), String> {
    let m = ScenarioModel::new(w).map_err(|e| e.to_string())?;
    let s = m.post_friend_state().map_err(|e| e.to_string())?;
    let mut exps = Vec::new();
    let mut tables = Vec::new();
    for ctx in CONSTRAINT_CONTEXTS {
        let obs: Vec<&Operator> = ctx.iter().map(|&a| m.outcome_observable(a)).collect();
        exps.push(s.expectation_of_product(&obs).map_err(|e| e.to_string())?);
        tables.push(context_born_table(&s, &m.context(&ctx)).map_err(|e| e.to_string())?.table);
    }
    let ex = constraints_from_born(&tables).map_err(|e| e.to_string())?;
    Ok((exps, ex.system.to_string() == scenario_constraints().to_string()))
}

fn c3() -> Result<Outcome, String> {
    let (e, same) = scenario_from_first_principles(1)?;
    let ok = same && [1.0, 1.0, 1.0, -1.0].iter().zip(&e).all(|(x, y)| (x - y).abs() <= TOL);
    Ok(outcome(ok, format!("<X_A R_B R_C>, <R_A X_B R_C>, <R_A R_B X_C>, <X_A X_B X_C> = {e:?}")))
}

fn paradox_counts() -> Result<(usize, Vec<usize>, bool, Option<Vec<usize>>), String> {
    let s = scenario_constraints();
    let all = enumerate_satisfying(&s).map_err(|e| e.to_string())?.count;
    let singles = (0..4)
        .map(|i| enumerate_satisfying(&s.subsystem(&[i])).map(|e| e.count))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let g = gf2_consistency(&s);
    Ok((all, singles, g.consistent, g.witness))
}

fn c4() -> Result<Outcome, String> {
    let (all, singles, consistent, witness) = paradox_counts()?;
    let ok = all == 0 && singles == [32; 4] && !consistent && witness == Some(vec![0, 1, 2, 3]);
    Ok(outcome(ok, format!("0 of 64 expected, got {all}; singles {singles:?}; witness {witness:?}")))
}

fn c5() -> Result<Outcome, String> {
    let m = ScenarioModel::new(1).map_err(|e| e.to_string())?;
    let graph = incompatibility_graph(&m);
    let prims: Vec<_> = [Agent::Alice, Agent::Bob, Agent::Charlie, Agent::Eugene].iter().map(|&a| primary_context(&m, a)).collect();
    let none = common_extension(&prims.iter().collect::<Vec<_>>()).is_none();
    let ctxs = maximal_contexts(&m, &default_geometry(), false).map_err(|e| e.to_string())?;
    let named: Vec<&str> = ctxs.iter().filter(|c| c.named).map(|c| c.environment.id.as_str()).collect();
    let ok = graph == [(Agent::Alice, Agent::Eugene), (Agent::Bob, Agent::Johnny), (Agent::Charlie, Agent::Daniel)]
        && none
        && named == NAMED_CONTEXTS;
    Ok(outcome(ok, format!("named found {named:?}; combinatorial maximal contexts {}", ctxs.len())))
}

fn c6() -> Result<Outcome, String> {
    let g = default_geometry();
    let mut ok = true;
    let mut speeds = Vec::new();
    for (t, zero) in [(["A", "B", "C"], true), (["U", "V", "W"], true), (["U", "B", "C"], false), (["A", "V", "C"], false), (["A", "B", "W"], false)] {
        match frame_verdict(&g, t).map_err(|e| e.to_string())? {
            FrameVerdict::Frame { velocity, residual, .. } => {
                ok &= velocity.speed() < 1.0 && residual <= 1e-9 && (!zero || velocity.speed() == 0.0);
                speeds.push(velocity.speed());
            }
            FrameVerdict::NoFrame(_) => ok = false,
        }
    }
    let col = frame_verdict(&collinear_geometry(), ["U", "B", "C"]).map_err(|e| e.to_string())?;
    let cert = matches!(col, FrameVerdict::NoFrame(ref c) if c.determinant <= 0.0 && c.witness_norm >= 0.0);
    Ok(outcome(ok && cert, format!("speeds {speeds:?}; collinear UBC certificate {cert}")))
}

fn erasure(w: usize) -> Result<(f64, f64), String> {
    let m = ScenarioModel::new(w).map_err(|e| e.to_string())?;
    let r = erasure_check(&m).map_err(|e| e.to_string())?;
    Ok((r.p_up_given_up, r.p_up_given_down))
}

fn c7() -> Result<Outcome, String> {
    let (u, d) = erasure(1)?;
    Ok(outcome((u - 0.5).abs() <= TOL && (d - 0.5).abs() <= TOL, format!("p_up_given_up={u} p_up_given_down={d}")))
}

fn c8() -> Result<Outcome, String> {
    let m = ScenarioModel::new(1).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for lam in [0.0, 0.1, 0.3, 0.5, 0.9, 1.0] {
        let ch = DephasingChannel::lab_pointer(&m, 0, lam).map_err(|e| e.to_string())?;
        let series = correlation_decay(&m, &ch, 20).map_err(|e| e.to_string())?;
        for (k, v) in series.iter().enumerate() {
            worst = worst.max((v + (1.0 - lam).powi(k as i32)).abs());
        }
    }
    let ch = DephasingChannel::lab_pointer(&m, 0, 0.5).map_err(|e| e.to_string())?;
    let mut record_change: f64 = 0.0;
    for agents in [[Agent::Alice, Agent::Johnny, Agent::Charlie], [Agent::Alice, Agent::Bob, Agent::Daniel], Agent::FRIENDS] {
        let vals = product_decay(&m, &ch, &agents, 20).map_err(|e| e.to_string())?;
        record_change = vals.iter().map(|v| (v - vals[0]).abs()).fold(record_change, f64::max);
    }
    Ok(outcome(worst <= TOL && record_change <= TOL, format!("max |decay - law| {worst:e}; record constraint drift {record_change:e}")))
}

fn all_orders() -> Vec<[Agent; 3]> {
    let [a, b, c] = Agent::FRIENDS;
    vec![[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}

fn c9() -> Result<Outcome, String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    let m = ScenarioModel::new(1).map_err(|e| err(&e))?;
    let reference = m.post_friend_state().map_err(|e| err(&e))?;
    let mut order_dev: f64 = 0.0;
    for order in all_orders() {
        let s = m.run_friend_stage(order).map_err(|e| err(&e))?;
        order_dev = order_dev.max(s.distance(&reference).map_err(|e| err(&e))?);
    }
    // Every compatible subset of agents: normalization; maximal contexts: shared marginals.
    let mut norm_dev: f64 = 0.0;
    for mask in 1u32..64 {
        let agents: Vec<Agent> = (0..6).filter(|i| mask >> i & 1 == 1).map(|i| Agent::ALL[i]).collect();
        if let Ok(t) = context_born_table(&reference, &m.context(&agents)) {
            norm_dev = norm_dev.max((t.table.total() - 1.0).abs());
        }
    }
    let ctxs = maximal_contexts(&m, &default_geometry(), false).map_err(|e| err(&e))?;
    let tables = ctxs
        .iter()
        .map(|c| context_born_table(&reference, &m.context(&c.environment.agents())).map(|t| t.table))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| err(&e))?;
    let marginal_dev = check_marginals(&tables).map_err(|e| err(&e))?;
    let mut widths_ok = true;
    for w in 1..=3 {
        let (e, same) = scenario_from_first_principles(w)?;
        widths_ok &= same && [1.0, 1.0, 1.0, -1.0].iter().zip(&e).all(|(x, y)| (x - y).abs() <= TOL);
        let (u, d) = erasure(w)?;
        widths_ok &= (u - 0.5).abs() <= TOL && (d - 0.5).abs() <= TOL;
    }
    let (all, singles, consistent, _) = paradox_counts()?;
    widths_ok &= all == 0 && singles == [32; 4] && !consistent;
    let ok = order_dev <= TOL && norm_dev <= TOL && marginal_dev <= TOL && widths_ok;
    Ok(outcome(
        ok,
        format!("order {order_dev:e}, normalization {norm_dev:e}, marginals {marginal_dev:e}, widths 1-3 {widths_ok}"),
    ))
}

fn c10() -> Result<Outcome, String> {
    let mut cfg = ScenarioConfig::from_text(r#"{"seed": 20251016}"#, &Default::default()).map_err(|e| e.to_string())?;
    let mut bodies = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
        cfg.output_dir = dir.path().to_path_buf();
        let out = cmd_paradox(&cfg).map_err(|e| e.to_string())?;
        let path = write_report(&out.report, &out.artifacts, dir.path()).map_err(|e| e.to_string())?;
        bodies.push(std::fs::read(path).map_err(|e| e.to_string())?);
    }
    Ok(outcome(bodies[0] == bodies[1] && !bodies[0].is_empty(), format!("{} bytes per report", bodies[0].len())))
}

fn main() {
    let ms = |n| Some(Duration::from_millis(n));
    let criteria: Vec<Criterion> = vec![
        ("GHZ condition (1): y,y,y table", ms(100), c1),
        ("GHZ conditions (2)-(3): x,x,x and x,z,z supports", ms(100), c2),
        ("scenario constraints from the post-friend state", ms(1000), c3),
        ("paradox: 0 of 64, singles 32 of 64, four-constraint witness", ms(10), c4),
        ("context algebra: incompatibility graph, no common extension, five named contexts", None, c5),
        ("simultaneity frames and collinear certificate", ms(10), c6),
        ("erasure: both conditional probabilities 1/2", ms(1000), c7),
        ("decoherence decay law over 20 steps and record invariance", ms(2000), c8),
        ("property suites: orders, normalization, marginals, widths 1-3", None, c9),
        ("end-to-end determinism of the paradox report", None, c10),
    ];
    let mut failures = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(o) => (o.ok, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let timing = match budget {
            Some(b) => format!("{:.4} s, budget {:.3} s", elapsed.as_secs_f64(), b.as_secs_f64()),
            None => format!("{:.4} s", elapsed.as_secs_f64()),
        };
        let pass = ok && in_time;
        if !pass {
            failures += 1;
        }
        println!("{} criterion {:>2}: {name} [{timing}] {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
