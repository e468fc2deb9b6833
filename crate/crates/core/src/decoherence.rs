//! Environmental dephasing of lab pointers.
//!
//! One step of the channel keeps a fraction `1 - lambda` of every coherence
//! between distinct pointer states of the target, which is what a fresh
//! ancilla scattered off the target by angle `acos(1 - lambda)` leaves behind
//! once it is traced out.

use serde::Serialize;
use thiserror::Error;

use crate::exec;
use crate::qcore::{DensityMatrix, Embedding, Operator, QError, QState, RegisterLayout, Tolerance, C64};
use crate::wigner::{lab_labels, Agent, ScenarioModel, WignerError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecoherenceError {
    #[error("dephasing strength {0} outside [0, 1]")]
    BadStrength(f64),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("pointer basis is not unitary")]
    NotUnitary,
    #[error("channel target {0:?} is not inside a single lab")]
    NotALabTarget(Vec<String>),
    #[error("onset step {onset} is past the trajectory's last step {last}")]
    OnsetOutOfRange { onset: usize, last: usize },
    #[error(transparent)]
    Linalg(#[from] QError),
    #[error(transparent)]
    Scenario(#[from] WignerError),
}

/// Partial dephasing of `target` in a pointer basis.
#[derive(Debug, Clone)]
pub struct DephasingChannel {
    target: Vec<String>,
    /// Columns are the pointer states; `None` means the computational basis.
    basis: Option<Operator>,
    lambda: f64,
}

fn check_strength(lambda: f64) -> Result<(), DecoherenceError> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(DecoherenceError::BadStrength(lambda))
    }
}

impl DephasingChannel {
    /// Dephasing in the computational basis of `target`.
    pub fn new<S: Into<String>>(target: impl IntoIterator<Item = S>, lambda: f64) -> Result<Self, DecoherenceError> {
        check_strength(lambda)?;
        Ok(DephasingChannel { target: target.into_iter().map(Into::into).collect(), basis: None, lambda })
    }

    /// Dephasing in the basis given by the columns of `basis`, on its layout.
    pub fn in_basis(basis: Operator, lambda: f64) -> Result<Self, DecoherenceError> {
        check_strength(lambda)?;
        if !basis.is_unitary() {
            return Err(DecoherenceError::NotUnitary);
        }
        let target = basis.layout().labels().map(str::to_string).collect();
        Ok(DephasingChannel { target, basis: Some(basis), lambda })
    }

    /// Record-basis dephasing of every pointer qubit of `lab`.
    pub fn lab_pointer(model: &ScenarioModel, lab: usize, lambda: f64) -> Result<Self, DecoherenceError> {
        Self::new(lab_labels(lab, model.lab_width()), lambda)
    }

    pub fn target(&self) -> &[String] {
        &self.target
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self, DecoherenceError> {
        check_strength(lambda)?;
        Ok(DephasingChannel { lambda, ..self.clone() })
    }

    /// Ancilla scattering angle with `cos(theta) = 1 - lambda`.
    pub fn scattering_angle(&self) -> f64 {
        (1.0 - self.lambda).acos()
    }

    fn embedding(&self, full: &RegisterLayout) -> Result<Embedding, DecoherenceError> {
        if let Some(l) = self.target.iter().find(|l| !full.contains(l)) {
            return Err(DecoherenceError::UnknownLabel(l.clone()));
        }
        let sub = match &self.basis {
            Some(b) => b.layout().clone(),
            None => full.restrict(self.target.iter().map(String::as_str))?,
        };
        Ok(Embedding::new(full, &sub)?)
    }
}

/// `(1 - lambda) rho + lambda sum_i P_i rho P_i`, `P_i` the pointer projectors.
pub fn dephase(rho: &DensityMatrix, ch: &DephasingChannel) -> Result<DensityMatrix, DecoherenceError> {
    dephase_steps(rho, ch, 1)
}

/// `k` applications of the channel at once: coherences scale by `(1 - lambda)^k`.
pub fn dephase_steps(rho: &DensityMatrix, ch: &DephasingChannel, k: usize) -> Result<DensityMatrix, DecoherenceError> {
    let emb = ch.embedding(rho.layout())?;
    let rotated = match &ch.basis {
        Some(b) => rho.conjugate_by(&b.adjoint())?,
        None => rho.clone(),
    };
    let keep = (1.0 - ch.lambda).powi(k as i32);
    let d = rho.dim();
    let src = rotated.matrix();
    let mut m = src.clone();
    // Column-major: flat index k is (k % d, k / d).
    exec::fill_indexed(m.as_mut_slice(), |idx| {
        let (r, c) = (idx % d, idx / d);
        let v = src[(r, c)];
        if emb.split(r).0 == emb.split(c).0 { v } else { v * keep }
    });
    let out = DensityMatrix::from_parts_unchecked(rho.layout().clone(), m);
    Ok(match &ch.basis {
        Some(b) => out.conjugate_by(b)?,
        None => out,
    })
}

/// Sum of the off-diagonal magnitudes of `B^dagger rho B`, divided by the
/// dimension. A pure equal superposition of two pointer states of a qubit
/// gives `1/2`.
pub fn pointer_diagonality(rho: &DensityMatrix, basis: Option<&Operator>) -> Result<f64, DecoherenceError> {
    let d = rho.dim();
    let m = match basis {
        Some(b) => {
            if b.dim() != d {
                return Err(QError::DimensionMismatch { expected: d, actual: b.dim() }.into());
            }
            b.matrix().adjoint() * rho.matrix() * b.matrix()
        }
        None => rho.matrix().clone(),
    };
    let off: f64 = (0..d)
        .flat_map(|r| (0..d).map(move |c| (r, c)))
        .filter(|(r, c)| r != c)
        .map(|(r, c)| m[(r, c)].norm())
        .sum();
    Ok(off / d as f64)
}

/// `(step, diagonality)` samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalityTrajectory {
    pub points: Vec<(usize, f64)>,
}

impl DiagonalityTrajectory {
    /// Plain two-column text, one sample per line.
    pub fn to_columns(&self) -> String {
        self.points.iter().map(|(k, v)| format!("{k}\t{v:.17e}\n")).collect()
    }
}

/// Diagonality of `rho` after `0..=steps` channel applications.
pub fn diagonality_trajectory(
    rho: &DensityMatrix,
    ch: &DephasingChannel,
    steps: usize,
    basis: Option<&Operator>,
) -> Result<DiagonalityTrajectory, DecoherenceError> {
    let mut points = Vec::with_capacity(steps + 1);
    let mut cur = rho.clone();
    for k in 0..=steps {
        points.push((k, pointer_diagonality(&cur, basis)?));
        if k < steps {
            cur = dephase(&cur, ch)?;
        }
    }
    Ok(DiagonalityTrajectory { points })
}

/// Every sample from `onset` on is at most `tol`.
pub fn robustly_decohered(traj: &DiagonalityTrajectory, onset: usize, tol: f64) -> Result<bool, DecoherenceError> {
    let last = traj.points.last().map_or(0, |p| p.0);
    if traj.points.is_empty() || onset > last {
        return Err(DecoherenceError::OnsetOutOfRange { onset, last });
    }
    Ok(traj.points.iter().filter(|p| p.0 >= onset).all(|p| p.1 <= tol))
}

/// First step from which the trajectory stays within `tol`.
pub fn decoherence_onset(traj: &DiagonalityTrajectory, tol: f64) -> Option<usize> {
    traj.points
        .iter()
        .map(|p| p.0)
        .find(|&k| robustly_decohered(traj, k, tol).unwrap_or(false))
}

/// Atom and pointer of one lab right after the friend's measurement of an
/// atom prepared in `(|0> + |1>)/sqrt 2`.
pub fn friend_pointer_state(model: &ScenarioModel, lab: usize) -> Result<DensityMatrix, DecoherenceError> {
    let u = model.friend_unitary(lab);
    let layout = u.layout().clone();
    let atom = format!("a{}", lab + 1);
    let plus = QState::normalized(RegisterLayout::qubit(&atom), vec![C64::new(1.0, 0.0); 2])?;
    let ready = QState::zero(layout.restrict(layout.labels().filter(|l| *l != atom))?);
    let s = plus.tensor(&ready)?.reorder(&layout)?.apply(u)?;
    Ok(DensityMatrix::from_pure(&s))
}

/// `<psi| D^k(.) (O_1 ... O_n)>` for a pure state, without forming a density
/// matrix. The factors must have pairwise disjoint supports.
///
/// With `psi_t` the component of `psi` on pointer state `t`, the dephased
/// expectation is `sum_{s,t} c_{st} <psi_s|O|psi_t>` with `c = 1` on the
/// diagonal and `(1 - lambda)^k` off it.
pub fn dephased_expectation(
    state: &QState,
    ch: &DephasingChannel,
    k: usize,
    factors: &[&Operator],
) -> Result<f64, DecoherenceError> {
    let full = state.layout();
    let emb = ch.embedding(full)?;
    let rotated = match &ch.basis {
        Some(b) => b.adjoint().act_on(full, state.amplitudes())?,
        None => state.amplitudes().to_vec(),
    };
    let components: Vec<Vec<C64>> = (0..emb.local_dim())
        .map(|t| {
            let masked: Vec<C64> = rotated
                .iter()
                .enumerate()
                .map(|(i, &a)| if emb.split(i).0 == t { a } else { C64::new(0.0, 0.0) })
                .collect();
            match &ch.basis {
                Some(b) => b.act_on(full, &masked),
                None => Ok(masked),
            }
        })
        .collect::<Result<_, _>>()?;
    let images: Vec<Vec<C64>> = components
        .iter()
        .map(|v| factors.iter().try_fold(v.clone(), |acc, o| o.act_on(full, &acc)))
        .collect::<Result<_, _>>()?;
    let keep = (1.0 - ch.lambda).powi(k as i32);
    let mut z = C64::new(0.0, 0.0);
    for (s, bra) in components.iter().enumerate() {
        for (t, ket) in images.iter().enumerate() {
            let c = if s == t { 1.0 } else { keep };
            let ip: C64 = bra.iter().zip(ket).map(|(a, b)| a.conj() * b).sum();
            z += ip * c;
        }
    }
    if z.im.abs() > Tolerance::default().numeric.max(1e-12) {
        return Err(QError::NonrealResult { residue: z.im.abs() }.into());
    }
    Ok(z.re)
}

fn lab_of_target(model: &ScenarioModel, ch: &DephasingChannel) -> Option<usize> {
    (0..3).find(|&lab| {
        let labels = lab_labels(lab, model.lab_width());
        ch.target.iter().all(|t| labels.contains(t))
    })
}

/// Expectation of the product of the agents' outcome observables on the
/// post-friend state after `0..=steps` channel applications.
pub fn product_decay(
    model: &ScenarioModel,
    ch: &DephasingChannel,
    agents: &[Agent],
    steps: usize,
) -> Result<Vec<f64>, DecoherenceError> {
    if ch.target.is_empty() || lab_of_target(model, ch).is_none() {
        return Err(DecoherenceError::NotALabTarget(ch.target.clone()));
    }
    let state = model.post_friend_state()?;
    let factors: Vec<&Operator> = agents.iter().map(|&a| model.outcome_observable(a)).collect();
    (0..=steps).map(|k| dephased_expectation(&state, ch, k, &factors)).collect()
}

/// `<X_A X_B X_C>` after `0..=steps` applications of a lab-pointer channel.
pub fn correlation_decay(model: &ScenarioModel, ch: &DephasingChannel, steps: usize) -> Result<Vec<f64>, DecoherenceError> {
    product_decay(model, ch, &Agent::WIGNERS, steps)
}
