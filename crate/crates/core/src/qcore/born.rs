use std::fmt;

use super::operator::{commutes_embedded, spectral_projectors};
use super::{Operator, QError, QState, Tolerance, C64};
use crate::exec;

/// An outcome in `{+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Product of signs.
    pub fn product(signs: impl IntoIterator<Item = Sign>) -> Sign {
        signs.into_iter().fold(Sign::Plus, |acc, s| if s == Sign::Minus { acc.flip() } else { acc })
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value()
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> Result<Self, Self::Error> {
        Sign::from_value(v as i64).ok_or_else(|| format!("{v} is not +1 or -1"))
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Outcome tuple for row `index` of a `k`-observable table: bit `k-1-i` of
/// the index set means observable `i` read `-1`. Row 0 is all `+1`.
pub fn outcome_tuple(index: usize, k: usize) -> Vec<Sign> {
    (0..k)
        .map(|i| if (index >> (k - 1 - i)) & 1 == 1 { Sign::Minus } else { Sign::Plus })
        .collect()
}

/// Born probabilities for every `{+1,-1}` outcome tuple of a list of pairwise
/// commuting involutory observables. Rows are ordered as [`outcome_tuple`];
/// zero-probability rows are kept.
#[derive(Debug, Clone)]
pub struct BornTable {
    observables: Vec<Operator>,
    labels: Vec<String>,
    probs: Vec<f64>,
}

impl BornTable {
    pub fn observables(&self) -> &[Operator] {
        &self.observables
    }

    /// One label per observable (defaults to `o0`, `o1`, ...).
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        assert_eq!(labels.len(), self.observables.len(), "one label per observable");
        self.labels = labels;
        self
    }

    pub fn arity(&self) -> usize {
        self.observables.len()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// `(outcome tuple, probability)` in row order.
    pub fn rows(&self) -> impl Iterator<Item = (Vec<Sign>, f64)> + '_ {
        let k = self.arity();
        self.probs.iter().enumerate().map(move |(i, &p)| (outcome_tuple(i, k), p))
    }

    pub fn probability(&self, outcome: &[Sign]) -> f64 {
        assert_eq!(outcome.len(), self.arity());
        let idx = outcome.iter().fold(0, |acc, s| (acc << 1) | usize::from(*s == Sign::Minus));
        self.probs[idx]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Marginal distribution over the observables at `positions` (in that order).
    pub fn marginal(&self, positions: &[usize]) -> Vec<f64> {
        let k = self.arity();
        let mut out = vec![0.0; 1 << positions.len()];
        for (i, &p) in self.probs.iter().enumerate() {
            let idx = positions.iter().fold(0, |acc, &pos| (acc << 1) | ((i >> (k - 1 - pos)) & 1));
            out[idx] += p;
        }
        out
    }

    /// Marginal over the observables carrying the given labels.
    pub fn marginal_by_label(&self, labels: &[&str]) -> Option<Vec<f64>> {
        let positions: Option<Vec<usize>> =
            labels.iter().map(|l| self.labels.iter().position(|m| m == l)).collect();
        positions.map(|p| self.marginal(&p))
    }

    /// `sum_s (prod s) p(s)`, i.e. the expectation of the product observable.
    pub fn product_expectation(&self) -> f64 {
        self.rows()
            .map(|(s, p)| f64::from(Sign::product(s).value()) * p)
            .sum()
    }
}

/// `p(s_1..s_k) = <psi| prod_i P_{s_i} |psi>` for pairwise commuting involutory
/// observables supported inside the state's layout.
pub fn born_table(obs: &[Operator], state: &QState) -> Result<BornTable, QError> {
    born_table_within(obs, state, Tolerance::default())
}

pub fn born_table_within(obs: &[Operator], state: &QState, tol: Tolerance) -> Result<BornTable, QError> {
    for (i, a) in obs.iter().enumerate() {
        if !state.layout().embeds(a.layout()) {
            return Err(QError::LayoutMismatch(format!("{} does not act on {}", a.layout(), state.layout())));
        }
        for (j, b) in obs.iter().enumerate().skip(i + 1) {
            if !commutes_embedded(a, b, tol.structural)? {
                return Err(QError::ContextIncompatible { first: i, second: j });
            }
        }
    }
    let projectors = obs.iter().map(spectral_projectors).collect::<Result<Vec<_>, _>>()?;
    let k = obs.len();
    let amps = state.amplitudes();
    let probs = exec::map_range(1usize << k, |row| -> Result<f64, QError> {
        let signs = outcome_tuple(row, k);
        let mut v = amps.to_vec();
        for (s, (p, m)) in signs.iter().zip(&projectors) {
            let proj = if *s == Sign::Plus { p } else { m };
            v = proj.act_on(state.layout(), &v)?;
        }
        let z: C64 = amps.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
        Ok(z.re.max(0.0))
    })
    .into_iter()
    .collect::<Result<Vec<f64>, _>>()?;
    let labels = (0..k).map(|i| format!("o{i}")).collect();
    Ok(BornTable { observables: obs.to_vec(), labels, probs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{paulis, RegisterLayout};

    #[test]
    fn row_order_matches_tuple_order() {
        assert_eq!(outcome_tuple(0, 3), vec![Sign::Plus; 3]);
        assert_eq!(outcome_tuple(1, 3), vec![Sign::Plus, Sign::Plus, Sign::Minus]);
        assert_eq!(outcome_tuple(4, 3), vec![Sign::Minus, Sign::Plus, Sign::Plus]);
    }

    #[test]
    fn z_on_zero() {
        let s = QState::zero(RegisterLayout::qubit("q"));
        let t = born_table(&[paulis::z("q")], &s).unwrap();
        assert_eq!(t.probability(&[Sign::Plus]), 1.0);
        assert_eq!(t.probability(&[Sign::Minus]), 0.0);
        assert_eq!(t.product_expectation(), 1.0);
    }

    #[test]
    fn incompatible_context_rejected() {
        let s = QState::zero(RegisterLayout::qubit("q"));
        let err = born_table(&[paulis::x("q"), paulis::z("q")], &s).unwrap_err();
        assert_eq!(err, QError::ContextIncompatible { first: 0, second: 1 });
    }

    #[test]
    fn non_involutory_rejected() {
        let s = QState::zero(RegisterLayout::qubit("q"));
        let half = paulis::z("q").scale(C64::new(0.5, 0.0));
        assert_eq!(born_table(&[half], &s).unwrap_err(), QError::NotInvolutory);
    }

    #[test]
    fn marginals() {
        let s = QState::zero(RegisterLayout::qubits(["a", "b"]).unwrap());
        let t = born_table(&[paulis::z("a"), paulis::x("b")], &s).unwrap().with_labels(["za", "xb"]);
        assert_eq!(t.marginal_by_label(&["za"]).unwrap(), vec![1.0, 0.0]);
        let xb = t.marginal_by_label(&["xb"]).unwrap();
        assert!((xb[0] - 0.5).abs() < 1e-15 && (xb[1] - 0.5).abs() < 1e-15);
    }
}
