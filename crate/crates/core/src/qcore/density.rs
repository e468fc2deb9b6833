use nalgebra::DMatrix;

use super::layout::Embedding;
use super::operator::max_norm;
use super::{Operator, QError, QState, RegisterLayout, Tolerance, C64};

/// Mixed state: hermitian, unit trace, positive semidefinite (all within tolerance).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    layout: RegisterLayout,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates hermiticity, trace and positivity at the structural tolerance.
    pub fn new(layout: RegisterLayout, matrix: DMatrix<C64>) -> Result<Self, QError> {
        let rho = Self::from_parts(layout, matrix)?;
        rho.validate(Tolerance::default().structural)?;
        Ok(rho)
    }

    fn from_parts(layout: RegisterLayout, matrix: DMatrix<C64>) -> Result<Self, QError> {
        let d = layout.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(QError::DimensionMismatch { expected: d, actual: matrix.nrows() });
        }
        Ok(DensityMatrix { layout, matrix })
    }

    pub(crate) fn from_parts_unchecked(layout: RegisterLayout, matrix: DMatrix<C64>) -> Self {
        DensityMatrix { layout, matrix }
    }

    pub fn validate(&self, tol: f64) -> Result<(), QError> {
        if max_norm(&(&self.matrix - self.matrix.adjoint())) > tol {
            return Err(QError::InvalidDensity("not hermitian".into()));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(QError::InvalidDensity(format!("trace {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -tol {
            return Err(QError::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// `|psi><psi|`.
    pub fn from_pure(state: &QState) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        DensityMatrix { layout: state.layout().clone(), matrix: &v * v.adjoint() }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Eigenvalues of the hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Largest entry difference; layouts must match.
    pub fn distance(&self, other: &DensityMatrix) -> Result<f64, QError> {
        if self.layout != other.layout {
            return Err(QError::LayoutMismatch(format!("{} vs {}", self.layout, other.layout)));
        }
        Ok(max_norm(&(&self.matrix - &other.matrix)))
    }

    /// `tr(rho O)` for hermitian `O` supported inside this layout.
    pub fn expectation(&self, o: &Operator) -> Result<f64, QError> {
        let tol = Tolerance::default();
        if !o.is_hermitian_within(tol.structural) {
            return Err(QError::NotHermitian);
        }
        let emb = Embedding::new(&self.layout, o.layout())?;
        let mut z = C64::new(0.0, 0.0);
        for i in 0..self.dim() {
            let (li, base) = emb.split(i);
            for lj in 0..emb.local_dim() {
                let a = o.entry(li, lj);
                if a.re != 0.0 || a.im != 0.0 {
                    z += a * self.matrix[(base + emb.offsets[lj], i)];
                }
            }
        }
        if z.im.abs() > tol.numeric {
            return Err(QError::NonrealResult { residue: z.im.abs() });
        }
        Ok(z.re)
    }

    /// `O rho`, with `O` supported inside this layout. Not a density matrix in general.
    pub(crate) fn left_multiply(&self, o: &Operator) -> Result<DMatrix<C64>, QError> {
        let d = self.dim();
        let mut out = DMatrix::<C64>::zeros(d, d);
        for j in 0..d {
            let col = o.act_on(&self.layout, self.matrix.column(j).as_slice())?;
            out.column_mut(j).copy_from_slice(&col);
        }
        Ok(out)
    }

    /// `U rho U^dagger` for `U` supported inside this layout.
    pub fn conjugate_by(&self, u: &Operator) -> Result<DensityMatrix, QError> {
        let left = self.left_multiply(u)?; // U rho
        let tmp = DensityMatrix { layout: self.layout.clone(), matrix: left.adjoint() }; // rho U^dagger
        let both = tmp.left_multiply(u)?; // U rho U^dagger
        Ok(DensityMatrix { layout: self.layout.clone(), matrix: both })
    }
}

/// Anything a reduced state can be computed from.
pub trait Reducible {
    fn layout(&self) -> &RegisterLayout;
    /// `rho_keep[r, s] = sum over the traced registers`.
    fn reduced_entry(&self, emb: &Embedding, bases: &[usize], r: usize, s: usize) -> C64;
}

impl Reducible for QState {
    fn layout(&self) -> &RegisterLayout {
        QState::layout(self)
    }

    fn reduced_entry(&self, emb: &Embedding, bases: &[usize], r: usize, s: usize) -> C64 {
        let a = self.amplitudes();
        bases.iter().map(|&b| a[b + emb.offsets[r]] * a[b + emb.offsets[s]].conj()).sum()
    }
}

impl Reducible for DensityMatrix {
    fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    fn reduced_entry(&self, emb: &Embedding, bases: &[usize], r: usize, s: usize) -> C64 {
        bases.iter().map(|&b| self.matrix[(b + emb.offsets[r], b + emb.offsets[s])]).sum()
    }
}

/// Reduced state on the registers named in `keep` (kept in layout order).
pub fn partial_trace<T: Reducible + Sync + ?Sized>(src: &T, keep: &[&str]) -> Result<DensityMatrix, QError> {
    let kept = src.layout().restrict(keep.iter().copied())?;
    let emb = Embedding::new(src.layout(), &kept)?;
    let bases = emb.bases();
    let d = kept.dim();
    let entries: Vec<C64> = crate::exec::map_range(d * d, |k| {
        let (r, s) = (k / d, k % d);
        src.reduced_entry(&emb, &bases, r, s)
    });
    Ok(DensityMatrix { layout: kept, matrix: DMatrix::from_row_slice(d, d, &entries) })
}
