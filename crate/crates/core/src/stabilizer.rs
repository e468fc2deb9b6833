//! Pauli-string algebra and stabilizer-defined states.
//!
//! The scenario's GHZ state is the unique joint `+1` eigenstate of
//! `{XZZ, ZXZ, ZZX}`. Those generators fix `<XXX> = -1`, `<XZZ> = +1` (and
//! permutations) and `<YYI> = <YIY> = <IYY> = +1`, which are exactly the
//! three correlation conditions the scenario is built on.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::qcore::{paulis, Operator, QError, QState, RegisterLayout, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilizerError {
    #[error("pauli strings have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("generators {0} and {1} anticommute")]
    NoncommutingGenerators(usize, usize),
    #[error("stabilizer projector has rank {rank}, expected 1 ({reason})")]
    RankNotOne { rank: f64, reason: String },
    #[error("cannot parse pauli string `{0}`")]
    Parse(String),
    #[error("need one label per qubit: {expected} qubits, {actual} labels")]
    LabelCount { expected: usize, actual: usize },
    #[error(transparent)]
    Linalg(#[from] QError),
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn x_bit(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    fn z_bit(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    /// `self * other = i^k * letter`; returns `(k mod 4, letter)`.
    fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn operator(self, label: &str) -> Operator {
        match self {
            Pauli::I => paulis::id(label),
            Pauli::X => paulis::x(label),
            Pauli::Y => paulis::y(label),
            Pauli::Z => paulis::z(label),
        }
    }
}

/// Phase `i^k` for `k` in `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const PLUS: Phase = Phase(0);
    pub const PLUS_I: Phase = Phase(1);
    pub const MINUS: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    fn times(self, k: u8) -> Phase {
        Phase((self.0 + k) % 4)
    }

    pub fn value(self) -> C64 {
        match self.0 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }

    fn prefix(self) -> &'static str {
        match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        }
    }
}

/// A phase times a tensor product of single-qubit Paulis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    phase: Phase,
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(phase: Phase, letters: Vec<Pauli>) -> Self {
        PauliString { phase, letters }
    }

    pub fn identity(n: usize) -> Self {
        PauliString { phase: Phase::PLUS, letters: vec![Pauli::I; n] }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn negate(&self) -> Self {
        PauliString { phase: self.phase.times(2), letters: self.letters.clone() }
    }

    pub fn is_identity_letters(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Bitmasks of the X and Z components; qubit 0 is the most significant bit.
    fn masks(&self) -> (usize, usize) {
        let n = self.letters.len();
        self.letters.iter().enumerate().fold((0, 0), |(x, z), (i, p)| {
            let bit = 1 << (n - 1 - i);
            (x | if p.x_bit() { bit } else { 0 }, z | if p.z_bit() { bit } else { 0 })
        })
    }

    /// Applies the string to a state vector over `n` qubits (basis index
    /// big-endian). Uses `Y = i X Z` on each position.
    pub(crate) fn act(&self, v: &[C64]) -> Vec<C64> {
        let (xm, zm) = self.masks();
        let ys = self.letters.iter().filter(|&&p| p == Pauli::Y).count() as u8;
        let global = self.phase.times(ys % 4).value();
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for (j, a) in v.iter().enumerate() {
            let sign = if (j & zm).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[j ^ xm] += global * a * sign;
        }
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.phase.prefix())?;
        for p in &self.letters {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = StabilizerError;

    /// Accepts `[+|-][i]LETTERS`; a missing sign means `+`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || StabilizerError::Parse(s.to_string());
        let (neg, rest) = match s.as_bytes().first() {
            Some(b'+') => (false, &s[1..]),
            Some(b'-') => (true, &s[1..]),
            _ => (false, s),
        };
        let (imag, rest) = match rest.strip_prefix('i') {
            Some(r) => (true, r),
            None => (false, rest),
        };
        let letters = rest
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(err()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if letters.is_empty() {
            return Err(err());
        }
        let phase = Phase((if neg { 2 } else { 0 }) + u8::from(imag));
        Ok(PauliString { phase, letters })
    }
}

/// Letter-wise product with accumulated phase.
pub fn pauli_multiply(p: &PauliString, q: &PauliString) -> Result<PauliString, StabilizerError> {
    if p.len() != q.len() {
        return Err(StabilizerError::LengthMismatch(p.len(), q.len()));
    }
    let mut phase = Phase(p.phase.0).times(q.phase.0);
    let letters = p
        .letters
        .iter()
        .zip(&q.letters)
        .map(|(&a, &b)| {
            let (k, r) = a.mul(b);
            phase = phase.times(k);
            r
        })
        .collect();
    Ok(PauliString { phase, letters })
}

/// True iff an even number of positions hold distinct non-identity letters.
pub fn pauli_commutes(p: &PauliString, q: &PauliString) -> Result<bool, StabilizerError> {
    if p.len() != q.len() {
        return Err(StabilizerError::LengthMismatch(p.len(), q.len()));
    }
    let clashes = p
        .letters
        .iter()
        .zip(&q.letters)
        .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
        .count();
    Ok(clashes % 2 == 0)
}

/// Qubit labels `q0, q1, ...` used when no labels are supplied.
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

/// Dense operator of the string on qubits labeled `q0..`.
pub fn to_operator(p: &PauliString) -> Operator {
    to_operator_on(p, &default_labels(p.len())).expect("label count matches")
}

/// Dense operator with one label per qubit.
pub fn to_operator_on<S: AsRef<str>>(p: &PauliString, labels: &[S]) -> Result<Operator, StabilizerError> {
    if labels.len() != p.len() {
        return Err(StabilizerError::LabelCount { expected: p.len(), actual: labels.len() });
    }
    let mut op = Operator::identity(RegisterLayout::default());
    for (letter, label) in p.letters.iter().zip(labels) {
        op = op.tensor(&letter.operator(label.as_ref()))?;
    }
    Ok(op.scale(p.phase.value()))
}

/// Commuting, independent generators.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerSet {
    generators: Vec<PauliString>,
}

impl StabilizerSet {
    /// Checks equal lengths and pairwise commutation; independence is
    /// checked by [`joint_eigenstate`].
    pub fn new(generators: Vec<PauliString>) -> Result<Self, StabilizerError> {
        for (i, a) in generators.iter().enumerate() {
            for (j, b) in generators.iter().enumerate().skip(i + 1) {
                if !pauli_commutes(a, b)? {
                    return Err(StabilizerError::NoncommutingGenerators(i, j));
                }
            }
        }
        Ok(StabilizerSet { generators })
    }

    pub fn parse<S: AsRef<str>>(gens: &[S]) -> Result<Self, StabilizerError> {
        Self::new(gens.iter().map(|g| g.as_ref().parse()).collect::<Result<Vec<_>, _>>()?)
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn qubits(&self) -> usize {
        self.generators.first().map_or(0, PauliString::len)
    }

    /// GF(2) rank of the generators' (x|z) vectors.
    pub fn symplectic_rank(&self) -> usize {
        let mut rows: Vec<u128> = self
            .generators
            .iter()
            .map(|g| {
                let (x, z) = g.masks();
                ((x as u128) << 64) | z as u128
            })
            .collect();
        let mut rank = 0;
        for bit in (0..128).rev() {
            let Some(pivot) = (rank..rows.len()).find(|&r| (rows[r] >> bit) & 1 == 1) else {
                continue;
            };
            rows.swap(rank, pivot);
            let p = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && (*row >> bit) & 1 == 1 {
                    *row ^= p;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Trace of `prod_i (I + S_i)/2`, i.e. the dimension of the joint +1 space.
    pub fn projector_rank(&self) -> f64 {
        let n = self.qubits();
        let k = self.generators.len();
        let mut total = C64::new(0.0, 0.0);
        for subset in 0u64..(1u64 << k) {
            let mut prod = PauliString::identity(n);
            for (i, g) in self.generators.iter().enumerate() {
                if (subset >> i) & 1 == 1 {
                    prod = pauli_multiply(&prod, g).expect("equal lengths");
                }
            }
            if prod.is_identity_letters() {
                total += prod.phase.value();
            }
        }
        (total * (2f64.powi(n as i32) / 2f64.powi(k as i32))).re
    }
}

/// The state fixed by `prod_i (I + S_i)/2`, which must have rank 1. The global
/// phase makes the first nonzero amplitude real and positive.
pub fn joint_eigenstate(gens: &StabilizerSet) -> Result<QState, StabilizerError> {
    joint_eigenstate_on(gens, &default_labels(gens.qubits()))
}

pub fn joint_eigenstate_on<S: AsRef<str>>(gens: &StabilizerSet, labels: &[S]) -> Result<QState, StabilizerError> {
    let n = gens.qubits();
    if labels.len() != n {
        return Err(StabilizerError::LabelCount { expected: n, actual: labels.len() });
    }
    let rank = gens.projector_rank();
    if gens.generators.len() != n || gens.symplectic_rank() != n || (rank - 1.0).abs() > 1e-9 {
        return Err(StabilizerError::RankNotOne {
            rank,
            reason: format!(
                "{} generators of symplectic rank {} on {n} qubits",
                gens.generators.len(),
                gens.symplectic_rank()
            ),
        });
    }
    let dim = 1usize << n;
    let project = |v: Vec<C64>| {
        gens.generators.iter().fold(v, |v, g| {
            let sv = g.act(&v);
            v.iter().zip(&sv).map(|(a, b)| (a + b) * 0.5).collect()
        })
    };
    // The range of a rank-1 projector has weight 1/dim on average per basis
    // vector; the first column with weight above half of that is well conditioned.
    let mut best: Option<Vec<C64>> = None;
    for j in 0..dim {
        let mut e = vec![C64::new(0.0, 0.0); dim];
        e[j] = C64::new(1.0, 0.0);
        let v = project(e);
        let w: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        if w > 0.5 / dim as f64 {
            best = Some(v);
            break;
        }
    }
    let v = best.expect("a rank-1 projector has a column of weight >= 1/dim");
    let layout = RegisterLayout::qubits(labels.iter().map(|l| l.as_ref().to_string()))?;
    Ok(QState::normalized(layout, v)?.fix_global_phase(1e-10))
}

/// Generators of the scenario's GHZ state.
pub const GHZ_GENERATORS: [&str; 3] = ["+XZZ", "+ZXZ", "+ZZX"];

/// Atom labels of the scenario.
pub const ATOM_LABELS: [&str; 3] = ["a1", "a2", "a3"];

/// Joint `+1` eigenstate of `{XZZ, ZXZ, ZZX}` on atoms `a1, a2, a3`.
pub fn ghz_scenario_state() -> Result<QState, StabilizerError> {
    ghz_state_from(&StabilizerSet::parse(&GHZ_GENERATORS)?)
}

/// Same construction from an arbitrary three-qubit generator set.
pub fn ghz_state_from(gens: &StabilizerSet) -> Result<QState, StabilizerError> {
    joint_eigenstate_on(gens, &ATOM_LABELS)
}
