//! Parity constraints over `+1/-1` outcome variables and the global-section check.
//!
//! A parity constraint `u*b*c=+1` says the product of the named outcomes is
//! fixed. Over GF(2) (`+1 -> 0`, `-1 -> 1`) it is the linear equation
//! `u + b + c = 0`, so consistency of a system is decided by elimination and,
//! independently, by enumerating all `2^n` assignments.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::exec;
use crate::qcore::{BornTable, Sign};

/// Largest universe `enumerate_satisfying` accepts.
pub const MAX_ENUMERATION_VARIABLES: usize = 24;

/// A table row counts as zero at or below this probability.
pub const ZERO_ROW_THRESHOLD: f64 = 1e-10;

/// Tolerance for shared-marginal agreement across tables.
pub const MARGINAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParadoxError {
    #[error("cannot parse constraint `{0}`")]
    Parse(String),
    #[error("constraint has no variables")]
    EmptyConstraint,
    #[error("variable `{0}` repeated in one constraint")]
    RepeatedVariable(String),
    #[error("variable `{0}` is not in the universe")]
    UnknownVariable(String),
    #[error("universe of {0} variables is too large to enumerate")]
    UniverseTooLarge(usize),
    #[error("no table covers variable `{0}`")]
    CoverageGap(String),
    #[error("tables {first} and {second} disagree on the marginal of {variables:?} by {deviation:e}")]
    MarginalMismatch { first: usize, second: usize, variables: Vec<String>, deviation: f64 },
}

/// `product(variables) = product`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParityConstraint {
    variables: Vec<String>,
    product: Sign,
}

impl ParityConstraint {
    pub fn new<S: Into<String>>(variables: impl IntoIterator<Item = S>, product: Sign) -> Result<Self, ParadoxError> {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        if variables.is_empty() {
            return Err(ParadoxError::EmptyConstraint);
        }
        for (i, v) in variables.iter().enumerate() {
            if v.is_empty() || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ParadoxError::Parse(v.clone()));
            }
            if variables[..i].contains(v) {
                return Err(ParadoxError::RepeatedVariable(v.clone()));
            }
        }
        Ok(ParityConstraint { variables, product })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn product(&self) -> Sign {
        self.product
    }

    pub fn is_satisfied_by(&self, a: &Assignment) -> bool {
        Sign::product(self.variables.iter().map(|v| a.get(v).expect("assignment is total"))) == self.product
    }
}

impl fmt::Display for ParityConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}1", self.variables.join("*"), self.product)
    }
}

impl FromStr for ParityConstraint {
    type Err = ParadoxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParadoxError::Parse(s.to_string());
        let (lhs, rhs) = s.split_once('=').ok_or_else(err)?;
        let product = match rhs {
            "+1" => Sign::Plus,
            "-1" => Sign::Minus,
            _ => return Err(err()),
        };
        ParityConstraint::new(lhs.split('*'), product).map_err(|e| match e {
            ParadoxError::Parse(_) => err(),
            other => other,
        })
    }
}

/// Constraints over an ordered variable universe.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    universe: Vec<String>,
    constraints: Vec<ParityConstraint>,
}

impl ConstraintSystem {
    pub fn new<S: Into<String>>(
        universe: impl IntoIterator<Item = S>,
        constraints: Vec<ParityConstraint>,
    ) -> Result<Self, ParadoxError> {
        let universe: Vec<String> = universe.into_iter().map(Into::into).collect();
        for c in &constraints {
            if let Some(v) = c.variables.iter().find(|v| !universe.contains(v)) {
                return Err(ParadoxError::UnknownVariable(v.clone()));
            }
        }
        Ok(ConstraintSystem { universe, constraints })
    }

    /// Universe = sorted set of the variables the constraints mention.
    pub fn from_constraints(constraints: Vec<ParityConstraint>) -> Self {
        let mut universe: Vec<String> = constraints.iter().flat_map(|c| c.variables.iter().cloned()).collect();
        universe.sort();
        universe.dedup();
        ConstraintSystem { universe, constraints }
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn constraints(&self) -> &[ParityConstraint] {
        &self.constraints
    }

    /// The same universe restricted to a subset of the constraints.
    pub fn subsystem(&self, indices: &[usize]) -> ConstraintSystem {
        ConstraintSystem {
            universe: self.universe.clone(),
            constraints: indices.iter().map(|&i| self.constraints[i].clone()).collect(),
        }
    }

    /// Bit `n-1-i` stands for universe variable `i`.
    fn masks(&self) -> Vec<(u64, bool)> {
        let n = self.universe.len();
        self.constraints
            .iter()
            .map(|c| {
                let mask = c.variables.iter().fold(0u64, |m, v| {
                    let i = self.universe.iter().position(|u| u == v).expect("validated");
                    m | 1 << (n - 1 - i)
                });
                (mask, c.product == Sign::Minus)
            })
            .collect()
    }

    fn assignment(&self, index: u64) -> Assignment {
        let n = self.universe.len();
        Assignment {
            values: self
                .universe
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), if (index >> (n - 1 - i)) & 1 == 1 { Sign::Minus } else { Sign::Plus }))
                .collect(),
        }
    }
}

impl fmt::Display for ConstraintSystem {
    /// One constraint per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.constraints.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for ConstraintSystem {
    type Err = ParadoxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let constraints = s
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<ParityConstraint>, _>>()?;
        Ok(ConstraintSystem::from_constraints(constraints))
    }
}

/// Total assignment of `+1/-1` to the universe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub values: BTreeMap<String, Sign>,
}

impl Assignment {
    pub fn get(&self, var: &str) -> Option<Sign> {
        self.values.get(var).copied()
    }
}

/// `u*b*c=+1, a*v*c=+1, a*b*w=+1, u*v*w=-1` over `a b c u v w`.
pub fn scenario_constraints() -> ConstraintSystem {
    let c = |s: &str| s.parse::<ParityConstraint>().expect("static constraint");
    ConstraintSystem::new(
        ["a", "b", "c", "u", "v", "w"],
        vec![c("u*b*c=+1"), c("a*v*c=+1"), c("a*b*w=+1"), c("u*v*w=-1")],
    )
    .expect("static system")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Enumeration {
    pub count: usize,
    pub total: usize,
    /// Satisfying assignments in lexicographic order (`+1` before `-1`, universe order).
    pub assignments: Vec<Assignment>,
}

/// Brute force over all `2^n` assignments.
pub fn enumerate_satisfying(sys: &ConstraintSystem) -> Result<Enumeration, ParadoxError> {
    let n = sys.universe.len();
    if n > MAX_ENUMERATION_VARIABLES {
        return Err(ParadoxError::UniverseTooLarge(n));
    }
    let masks = sys.masks();
    let total = 1usize << n;
    let hits = exec::filter_range(total, |idx| {
        masks.iter().all(|&(m, odd)| ((idx as u64 & m).count_ones() % 2 == 1) == odd)
    });
    Ok(Enumeration {
        count: hits.len(),
        total,
        assignments: hits.into_iter().map(|i| sys.assignment(i as u64)).collect(),
    })
}

/// Result of GF(2) elimination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gf2Report {
    pub consistent: bool,
    /// Rank of the coefficient matrix.
    pub rank: usize,
    /// For an inconsistent system: an inclusion-minimal set of constraint
    /// indices whose left sides sum to zero and right sides to one.
    pub witness: Option<Vec<usize>>,
    /// For a consistent system: the solution with every free variable `+1`.
    pub solution: Option<Assignment>,
}

#[derive(Clone)]
struct Row {
    coeffs: Vec<u64>,
    rhs: bool,
    origin: Vec<u64>,
}

fn bit(words: &[u64], i: usize) -> bool {
    (words[i / 64] >> (i % 64)) & 1 == 1
}

fn set_bit(words: &mut [u64], i: usize) {
    words[i / 64] |= 1 << (i % 64);
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    dst.iter_mut().zip(src).for_each(|(d, s)| *d ^= s);
}

struct Eliminated {
    rows: Vec<Row>,
    pivots: Vec<usize>,
}

/// Gauss-Jordan elimination tracking which input rows make up each output row.
fn eliminate(sys: &ConstraintSystem, subset: &[usize]) -> Eliminated {
    let n = sys.universe.len();
    let words = n.div_ceil(64).max(1);
    let owords = sys.constraints.len().div_ceil(64).max(1);
    let mut rows: Vec<Row> = subset
        .iter()
        .map(|&ci| {
            let c = &sys.constraints[ci];
            let mut coeffs = vec![0u64; words];
            for v in &c.variables {
                let i = sys.universe.iter().position(|u| u == v).expect("validated");
                set_bit(&mut coeffs, i);
            }
            let mut origin = vec![0u64; owords];
            set_bit(&mut origin, ci);
            Row { coeffs, rhs: c.product == Sign::Minus, origin }
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&k| bit(&rows[k].coeffs, col)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && bit(&row.coeffs, col) {
                xor_into(&mut row.coeffs, &pivot.coeffs);
                xor_into(&mut row.origin, &pivot.origin);
                row.rhs ^= pivot.rhs;
            }
        }
        pivots.push(col);
        r += 1;
    }
    Eliminated { rows, pivots }
}

fn contradiction(e: &Eliminated, n_constraints: usize) -> Option<Vec<usize>> {
    e.rows
        .iter()
        .find(|row| row.rhs && row.coeffs.iter().all(|&w| w == 0))
        .map(|row| (0..n_constraints).filter(|&i| bit(&row.origin, i)).collect())
}

/// Consistency of the system over GF(2), with a minimal contradiction witness.
pub fn gf2_consistency(sys: &ConstraintSystem) -> Gf2Report {
    let all: Vec<usize> = (0..sys.constraints.len()).collect();
    let e = eliminate(sys, &all);
    let rank = e.pivots.len();
    match contradiction(&e, sys.constraints.len()) {
        Some(mut witness) => {
            // Shrink to an inclusion-minimal contradictory subset.
            let mut k = 0;
            while k < witness.len() {
                let mut trial = witness.clone();
                trial.remove(k);
                if contradiction(&eliminate(sys, &trial), sys.constraints.len()).is_some() {
                    witness = trial;
                } else {
                    k += 1;
                }
            }
            Gf2Report { consistent: false, rank, witness: Some(witness), solution: None }
        }
        None => {
            let mut values: BTreeMap<String, Sign> =
                sys.universe.iter().map(|v| (v.clone(), Sign::Plus)).collect();
            for (row, &col) in e.rows.iter().zip(&e.pivots) {
                if row.rhs {
                    values.insert(sys.universe[col].clone(), Sign::Minus);
                }
            }
            Gf2Report { consistent: true, rank, witness: None, solution: Some(Assignment { values }) }
        }
    }
}

/// What a single table contributed to [`constraints_from_born`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TableParity {
    Constraint { constraint: String },
    NoParityStructure { even_weight: f64, odd_weight: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub system: ConstraintSystem,
    /// One entry per input table, in input order.
    pub per_table: Vec<TableParity>,
}

/// Probability-one parity facts of each table: when all rows above the zero
/// threshold share one product sign, emit `product(labels) = sign`.
pub fn constraints_from_born(tables: &[BornTable]) -> Result<Extraction, ParadoxError> {
    let mut constraints = Vec::new();
    let mut per_table = Vec::new();
    for t in tables {
        let (mut even, mut odd) = (0.0, 0.0);
        for (signs, p) in t.rows() {
            if p > ZERO_ROW_THRESHOLD {
                match Sign::product(signs) {
                    Sign::Plus => even += p,
                    Sign::Minus => odd += p,
                }
            }
        }
        let sign = if odd == 0.0 && even >= 1.0 - ZERO_ROW_THRESHOLD {
            Some(Sign::Plus)
        } else if even == 0.0 && odd >= 1.0 - ZERO_ROW_THRESHOLD {
            Some(Sign::Minus)
        } else {
            None
        };
        match sign {
            Some(s) => {
                let c = ParityConstraint::new(t.labels().iter().cloned(), s)?;
                per_table.push(TableParity::Constraint { constraint: c.to_string() });
                constraints.push(c);
            }
            None => per_table.push(TableParity::NoParityStructure { even_weight: even, odd_weight: odd }),
        }
    }
    Ok(Extraction { system: ConstraintSystem::from_constraints(constraints), per_table })
}

/// Sentence recorded in reports alongside a negative global-section verdict.
pub const SUPPORT_ENTAILMENT: &str = "every obstructing probability is 0 or 1, so a global joint distribution \
with these marginals would have to be supported on consistent deterministic assignments; none exist, so no \
global distribution exists either";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalSection {
    pub exists: bool,
    pub consistent_assignments: usize,
    pub total_assignments: usize,
    pub universe: Vec<String>,
    /// First consistent assignment in lexicographic order.
    pub witness: Option<Assignment>,
    pub entailment: Option<&'static str>,
}

/// Largest deviation between the shared marginals of any two tables.
pub fn check_marginals(tables: &[BornTable]) -> Result<f64, ParadoxError> {
    let mut worst: f64 = 0.0;
    for (i, a) in tables.iter().enumerate() {
        for (j, b) in tables.iter().enumerate().skip(i + 1) {
            let shared: Vec<&str> =
                a.labels().iter().filter(|l| b.labels().contains(l)).map(String::as_str).collect();
            if shared.is_empty() {
                continue;
            }
            let ma = a.marginal_by_label(&shared).expect("labels present");
            let mb = b.marginal_by_label(&shared).expect("labels present");
            let dev = ma.iter().zip(&mb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            if dev > MARGINAL_TOLERANCE {
                return Err(ParadoxError::MarginalMismatch {
                    first: i,
                    second: j,
                    variables: shared.iter().map(|s| s.to_string()).collect(),
                    deviation: dev,
                });
            }
            worst = worst.max(dev);
        }
    }
    Ok(worst)
}

/// Support-based global-section check: an assignment of the universe is
/// consistent iff its restriction to every table has probability above the
/// zero threshold. The universe defaults to the union of the tables' labels.
pub fn global_section_exists(tables: &[BornTable], universe: Option<&[String]>) -> Result<GlobalSection, ParadoxError> {
    let mut covered: Vec<String> = tables.iter().flat_map(|t| t.labels().iter().cloned()).collect();
    covered.sort();
    covered.dedup();
    let universe: Vec<String> = match universe {
        Some(u) => {
            if let Some(gap) = u.iter().find(|v| !covered.contains(v)) {
                return Err(ParadoxError::CoverageGap(gap.clone()));
            }
            if let Some(extra) = covered.iter().find(|v| !u.contains(v)) {
                return Err(ParadoxError::UnknownVariable(extra.clone()));
            }
            u.to_vec()
        }
        None => covered,
    };
    let n = universe.len();
    if n > MAX_ENUMERATION_VARIABLES {
        return Err(ParadoxError::UniverseTooLarge(n));
    }
    check_marginals(tables)?;
    // For each table, the universe bit of each of its columns.
    let columns: Vec<Vec<usize>> = tables
        .iter()
        .map(|t| t.labels().iter().map(|l| n - 1 - universe.iter().position(|u| u == l).expect("covered")).collect())
        .collect();
    let total = 1usize << n;
    let hits = exec::filter_range(total, |idx| {
        tables.iter().zip(&columns).all(|(t, cols)| {
            let row = cols.iter().fold(0, |acc, &b| (acc << 1) | ((idx >> b) & 1));
            t.probabilities()[row] > ZERO_ROW_THRESHOLD
        })
    });
    let sys = ConstraintSystem { universe: universe.clone(), constraints: Vec::new() };
    let exists = !hits.is_empty();
    Ok(GlobalSection {
        exists,
        consistent_assignments: hits.len(),
        total_assignments: total,
        universe,
        witness: hits.first().map(|&i| sys.assignment(i as u64)),
        entailment: (!exists).then_some(SUPPORT_ENTAILMENT),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{born_table, paulis, QState, RegisterLayout};
    use proptest::prelude::*;

    #[test]
    fn scenario_system_shape() {
        let s = scenario_constraints();
        assert_eq!(s.constraints().len(), 4);
        assert!(s.constraints().iter().all(|c| c.variables().len() == 3));
        let products: Vec<Sign> = s.constraints().iter().map(|c| c.product()).collect();
        assert_eq!(products, [Sign::Plus, Sign::Plus, Sign::Plus, Sign::Minus]);
        assert_eq!(s.to_string(), "u*b*c=+1\na*v*c=+1\na*b*w=+1\nu*v*w=-1");
    }

    #[test]
    fn serialization_round_trips() {
        let text = scenario_constraints().to_string();
        assert_eq!(text.parse::<ConstraintSystem>().unwrap().to_string(), text);
        assert!("u*b=+2".parse::<ParityConstraint>().is_err());
        assert!("=+1".parse::<ParityConstraint>().is_err());
        assert_eq!("a*a=+1".parse::<ParityConstraint>(), Err(ParadoxError::RepeatedVariable("a".into())));
    }

    #[test]
    fn enumeration_examples() {
        let s = scenario_constraints();
        let e = enumerate_satisfying(&s).unwrap();
        assert_eq!((e.count, e.total), (0, 64));
        // Oracle: a single parity constraint halves the assignment space.
        for i in 0..4 {
            assert_eq!(enumerate_satisfying(&s.subsystem(&[i])).unwrap().count, 32);
        }
        assert_eq!(enumerate_satisfying(&s.subsystem(&[])).unwrap().count, 64);
        let big = ConstraintSystem::new((0..25).map(|i| format!("x{i}")), vec![]).unwrap();
        assert_eq!(enumerate_satisfying(&big).unwrap_err(), ParadoxError::UniverseTooLarge(25));
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let sys: ConstraintSystem = "a*b=-1".parse().unwrap();
        let e = enumerate_satisfying(&sys).unwrap();
        let got: Vec<(Sign, Sign)> = e.assignments.iter().map(|a| (a.get("a").unwrap(), a.get("b").unwrap())).collect();
        assert_eq!(got, [(Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus)]);
    }

    #[test]
    fn gf2_on_scenario() {
        let s = scenario_constraints();
        let r = gf2_consistency(&s);
        assert!(!r.consistent);
        assert_eq!(r.witness, Some(vec![0, 1, 2, 3]));
        let first_three = gf2_consistency(&s.subsystem(&[0, 1, 2]));
        assert!(first_three.consistent);
        let sol = first_three.solution.unwrap();
        assert!(s.constraints()[..3].iter().all(|c| c.is_satisfied_by(&sol)));
    }

    #[test]
    fn gf2_witness_is_minimal() {
        let sys: ConstraintSystem = "a*b=+1\nc=+1\nb*c=+1\nc=-1\na=+1".parse().unwrap();
        let r = gf2_consistency(&sys);
        assert!(!r.consistent);
        assert_eq!(r.witness, Some(vec![1, 3]));
    }

    #[test]
    fn extraction_from_tables() {
        let s = QState::zero(RegisterLayout::qubits(["p", "q"]).unwrap());
        let det = born_table(&[paulis::z("p")], &s).unwrap().with_labels(["x"]);
        let full = born_table(&[paulis::x("p"), paulis::x("q")], &s).unwrap().with_labels(["y", "z"]);
        let ex = constraints_from_born(&[det, full]).unwrap();
        assert_eq!(ex.system.to_string(), "x=+1");
        assert!(matches!(ex.per_table[1], TableParity::NoParityStructure { .. }));
    }

    #[test]
    fn global_section_on_single_tables() {
        let s = QState::zero(RegisterLayout::qubits(["p", "q"]).unwrap());
        let t = born_table(&[paulis::x("p"), paulis::z("q")], &s).unwrap().with_labels(["x", "y"]);
        let g = global_section_exists(std::slice::from_ref(&t), None).unwrap();
        assert!(g.exists);
        assert_eq!(g.consistent_assignments, 2);
        let u = vec!["x".to_string(), "y".to_string(), "z".to_string()];
        assert_eq!(global_section_exists(&[t], Some(&u)).unwrap_err(), ParadoxError::CoverageGap("z".into()));
    }

    #[test]
    fn marginal_mismatch_detected() {
        let s0 = QState::zero(RegisterLayout::qubit("p"));
        let s1 = QState::basis(RegisterLayout::qubit("p"), 1).unwrap();
        let a = born_table(&[paulis::z("p")], &s0).unwrap().with_labels(["x"]);
        let b = born_table(&[paulis::z("p")], &s1).unwrap().with_labels(["x"]);
        assert!(matches!(global_section_exists(&[a, b], None), Err(ParadoxError::MarginalMismatch { .. })));
    }

    fn arb_system() -> impl Strategy<Value = ConstraintSystem> {
        (1usize..=10).prop_flat_map(|n| {
            let constraint = (1u32..(1 << n), any::<bool>());
            proptest::collection::vec(constraint, 0..12).prop_map(move |cs| {
                let universe: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
                let constraints = cs
                    .into_iter()
                    .map(|(mask, neg)| {
                        let vars: Vec<String> = (0..n).filter(|i| (mask >> i) & 1 == 1).map(|i| universe[i].clone()).collect();
                        ParityConstraint::new(vars, if neg { Sign::Minus } else { Sign::Plus }).unwrap()
                    })
                    .collect();
                ConstraintSystem::new(universe.clone(), constraints).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn gf2_agrees_with_enumeration(sys in arb_system()) {
            let e = enumerate_satisfying(&sys).unwrap();
            let r = gf2_consistency(&sys);
            prop_assert_eq!(e.count == 0, !r.consistent);
            if r.consistent {
                // 2^(n - rank) solutions.
                prop_assert_eq!(e.count, 1usize << (sys.universe().len() - r.rank));
                let sol = r.solution.unwrap();
                prop_assert!(sys.constraints().iter().all(|c| c.is_satisfied_by(&sol)));
            } else {
                let w = r.witness.unwrap();
                prop_assert!(enumerate_satisfying(&sys.subsystem(&w)).unwrap().count == 0);
                for k in 0..w.len() {
                    let mut smaller = w.clone();
                    smaller.remove(k);
                    prop_assert!(enumerate_satisfying(&sys.subsystem(&smaller)).unwrap().count > 0);
                }
            }
        }

        #[test]
        fn constraint_text_round_trips(sys in arb_system()) {
            let text = sys.to_string();
            let parsed: ConstraintSystem = text.parse().unwrap();
            prop_assert_eq!(parsed.to_string(), text);
        }
    }
}
