use super::{Operator, QError, RegisterLayout, Tolerance, C64};

/// Unit-norm pure state over a register layout.
#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    layout: RegisterLayout,
    amps: Vec<C64>,
}

impl QState {
    /// Validates the length and that the norm is within the structural tolerance of 1.
    pub fn new(layout: RegisterLayout, amps: Vec<C64>) -> Result<Self, QError> {
        Self::new_within(layout, amps, Tolerance::default().structural)
    }

    pub fn new_within(layout: RegisterLayout, amps: Vec<C64>, tol: f64) -> Result<Self, QError> {
        if amps.len() != layout.dim() {
            return Err(QError::DimensionMismatch { expected: layout.dim(), actual: amps.len() });
        }
        let norm = norm(&amps);
        if (norm - 1.0).abs() > tol {
            return Err(QError::NotNormalized { norm });
        }
        Ok(QState { layout, amps })
    }

    /// Normalizes `amps` first; fails only on a zero vector or bad length.
    pub fn normalized(layout: RegisterLayout, mut amps: Vec<C64>) -> Result<Self, QError> {
        let n = norm(&amps);
        if n == 0.0 || !n.is_finite() {
            return Err(QError::NotNormalized { norm: n });
        }
        amps.iter_mut().for_each(|a| *a /= n);
        Self::new(layout, amps)
    }

    /// Computational basis state `|index>`.
    pub fn basis(layout: RegisterLayout, index: usize) -> Result<Self, QError> {
        let d = layout.dim();
        if index >= d {
            return Err(QError::DimensionMismatch { expected: d, actual: index });
        }
        let mut amps = vec![C64::new(0.0, 0.0); d];
        amps[index] = C64::new(1.0, 0.0);
        Ok(QState { layout, amps })
    }

    /// `|0...0>` over the layout.
    pub fn zero(layout: RegisterLayout) -> Self {
        Self::basis(layout, 0).expect("index 0 always exists")
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    /// `<self|other>`; layouts must match exactly.
    pub fn inner(&self, other: &QState) -> Result<C64, QError> {
        if self.layout != other.layout {
            return Err(QError::LayoutMismatch(format!("{} vs {}", self.layout, other.layout)));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Largest amplitude difference; layouts must match exactly.
    pub fn distance(&self, other: &QState) -> Result<f64, QError> {
        if self.layout != other.layout {
            return Err(QError::LayoutMismatch(format!("{} vs {}", self.layout, other.layout)));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Kronecker composition; the result layout is `self ++ other`.
    pub fn tensor(&self, other: &QState) -> Result<QState, QError> {
        let layout = self.layout.concat(&other.layout)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(QState { layout, amps })
    }

    /// Applies a unitary supported on (a subset of) this state's registers.
    pub fn apply(&self, u: &Operator) -> Result<QState, QError> {
        if !self.layout.embeds(u.layout()) {
            return Err(QError::LayoutMismatch(format!("{} does not act on {}", u.layout(), self.layout)));
        }
        if !u.is_unitary() {
            return Err(QError::NotUnitary);
        }
        let amps = u.act_on(&self.layout, &self.amps)?;
        Ok(QState { layout: self.layout.clone(), amps })
    }

    /// `O|psi>` without any structural requirement on `O` (not normalized).
    pub fn act(&self, o: &Operator) -> Result<Vec<C64>, QError> {
        o.act_on(&self.layout, &self.amps)
    }

    /// `<psi|O|psi>` for hermitian `O`, default tolerances.
    pub fn expectation(&self, o: &Operator) -> Result<f64, QError> {
        self.expectation_within(o, Tolerance::default())
    }

    pub fn expectation_within(&self, o: &Operator, tol: Tolerance) -> Result<f64, QError> {
        if !o.is_hermitian_within(tol.structural) {
            return Err(QError::NotHermitian);
        }
        let v = self.act(o)?;
        let z: C64 = self.amps.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
        if z.im.abs() > tol.numeric {
            return Err(QError::NonrealResult { residue: z.im.abs() });
        }
        Ok(z.re)
    }

    /// Expectation of a product of operators on pairwise disjoint supports.
    pub fn expectation_of_product(&self, factors: &[&Operator]) -> Result<f64, QError> {
        for (i, a) in factors.iter().enumerate() {
            for b in &factors[i + 1..] {
                if !a.layout().is_disjoint(b.layout()) {
                    return Err(QError::LayoutMismatch("product factors overlap".into()));
                }
            }
            if !a.is_hermitian() {
                return Err(QError::NotHermitian);
            }
        }
        let mut v = self.amps.clone();
        for f in factors {
            v = f.act_on(&self.layout, &v)?;
        }
        let z: C64 = self.amps.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
        if z.im.abs() > Tolerance::default().numeric {
            return Err(QError::NonrealResult { residue: z.im.abs() });
        }
        Ok(z.re)
    }

    /// Same amplitudes with registers permuted into `target` order.
    pub fn reorder(&self, target: &RegisterLayout) -> Result<QState, QError> {
        if target.dim() != self.layout.dim() || !target.embeds(&self.layout) || !self.layout.embeds(target) {
            return Err(QError::LayoutMismatch(format!("{} is not a permutation of {}", target, self.layout)));
        }
        let src_strides = self.layout.strides();
        let map: Vec<usize> = target
            .labels()
            .map(|l| src_strides[self.layout.position(l).expect("checked")])
            .collect();
        let mut amps = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (i, a) in amps.iter_mut().enumerate() {
            let src: usize = target.digits(i).iter().zip(&map).map(|(d, s)| d * s).sum();
            *a = self.amps[src];
        }
        Ok(QState { layout: target.clone(), amps })
    }

    /// Multiplies by a global phase so that the first amplitude with modulus
    /// above `tol` is real and positive.
    pub fn fix_global_phase(mut self, tol: f64) -> QState {
        if let Some(a) = self.amps.iter().find(|a| a.norm() > tol).copied() {
            let phase = a.conj() / a.norm();
            self.amps.iter_mut().for_each(|z| *z *= phase);
        }
        self
    }

}

pub(crate) fn norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}
