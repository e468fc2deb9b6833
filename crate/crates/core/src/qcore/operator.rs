use std::sync::OnceLock;

use nalgebra::DMatrix;

use super::layout::Embedding;
use super::{QError, RegisterLayout, Tolerance, C64};
use crate::exec;

/// Structural properties of an operator, checked at the structural tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpFlags {
    pub hermitian: bool,
    pub unitary: bool,
    pub involutory: bool,
}

/// Square complex matrix acting on a register layout.
///
/// The layout is the operator's support; it may be applied to any state whose
/// layout contains these registers (acting as identity elsewhere).
#[derive(Debug, Clone)]
pub struct Operator {
    layout: RegisterLayout,
    matrix: DMatrix<C64>,
    flags: OnceLock<OpFlags>,
}

impl PartialEq for Operator {
    fn eq(&self, other: &Self) -> bool {
        self.layout == other.layout && self.matrix == other.matrix
    }
}

impl Operator {
    pub fn new(layout: RegisterLayout, matrix: DMatrix<C64>) -> Result<Self, QError> {
        let d = layout.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(QError::DimensionMismatch { expected: d, actual: matrix.nrows().max(matrix.ncols()) });
        }
        Ok(Operator { layout, matrix, flags: OnceLock::new() })
    }

    pub fn identity(layout: RegisterLayout) -> Self {
        let d = layout.dim();
        Operator { layout, matrix: DMatrix::identity(d, d), flags: OnceLock::new() }
    }

    pub fn zeros(layout: RegisterLayout) -> Self {
        let d = layout.dim();
        Operator { layout, matrix: DMatrix::zeros(d, d), flags: OnceLock::new() }
    }

    /// Operator on a single qubit from its 2x2 entries, row-major.
    pub fn qubit(label: impl Into<String>, entries: [C64; 4]) -> Self {
        let m = DMatrix::from_row_slice(2, 2, &entries);
        Operator { layout: RegisterLayout::qubit(label), matrix: m, flags: OnceLock::new() }
    }

    /// Diagonal operator with the given entries.
    pub fn diagonal(layout: RegisterLayout, diag: &[C64]) -> Result<Self, QError> {
        let d = layout.dim();
        if diag.len() != d {
            return Err(QError::DimensionMismatch { expected: d, actual: diag.len() });
        }
        Ok(Operator {
            layout,
            matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag)),
            flags: OnceLock::new(),
        })
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

    pub fn flags(&self) -> OpFlags {
        *self.flags.get_or_init(|| self.compute_flags(Tolerance::default().structural))
    }

    fn compute_flags(&self, tol: f64) -> OpFlags {
        let hermitian = self.is_hermitian_within(tol);
        let square = &self.matrix * &self.matrix;
        let id = DMatrix::<C64>::identity(self.dim(), self.dim());
        let involutory = hermitian && max_norm(&(square - &id)) <= tol;
        let unitary = involutory || max_norm(&(self.matrix.adjoint() * &self.matrix - id)) <= tol;
        OpFlags { hermitian, unitary, involutory }
    }

    pub fn is_hermitian(&self) -> bool {
        self.flags().hermitian
    }

    pub fn is_unitary(&self) -> bool {
        self.flags().unitary
    }

    pub fn is_involutory(&self) -> bool {
        self.flags().involutory
    }

    pub fn is_hermitian_within(&self, tol: f64) -> bool {
        max_norm(&(&self.matrix - self.matrix.adjoint())) <= tol
    }

    pub fn is_unitary_within(&self, tol: f64) -> bool {
        let id = DMatrix::<C64>::identity(self.dim(), self.dim());
        max_norm(&(self.matrix.adjoint() * &self.matrix - id)) <= tol
    }

    pub fn is_involutory_within(&self, tol: f64) -> bool {
        let id = DMatrix::<C64>::identity(self.dim(), self.dim());
        self.is_hermitian_within(tol) && max_norm(&(&self.matrix * &self.matrix - id)) <= tol
    }

    pub fn adjoint(&self) -> Operator {
        Operator { layout: self.layout.clone(), matrix: self.matrix.adjoint(), flags: OnceLock::new() }
    }

    pub fn scale(&self, factor: C64) -> Operator {
        Operator { layout: self.layout.clone(), matrix: &self.matrix * factor, flags: OnceLock::new() }
    }

    fn same_layout(&self, other: &Operator) -> Result<(), QError> {
        if self.layout != other.layout {
            return Err(QError::LayoutMismatch(format!("{} vs {}", self.layout, other.layout)));
        }
        Ok(())
    }

    /// Matrix product `self * other` on a shared layout.
    pub fn compose(&self, other: &Operator) -> Result<Operator, QError> {
        self.same_layout(other)?;
        Ok(Operator { layout: self.layout.clone(), matrix: &self.matrix * &other.matrix, flags: OnceLock::new() })
    }

    pub fn add(&self, other: &Operator) -> Result<Operator, QError> {
        self.same_layout(other)?;
        Ok(Operator { layout: self.layout.clone(), matrix: &self.matrix + &other.matrix, flags: OnceLock::new() })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator, QError> {
        self.same_layout(other)?;
        Ok(Operator { layout: self.layout.clone(), matrix: &self.matrix - &other.matrix, flags: OnceLock::new() })
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        max_norm(&self.matrix)
    }

    /// `max |self - other|` over entries; layouts must match.
    pub fn distance(&self, other: &Operator) -> Result<f64, QError> {
        self.same_layout(other)?;
        Ok(max_norm(&(&self.matrix - &other.matrix)))
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Kronecker product; the result layout is `self.layout ++ other.layout`.
    pub fn tensor(&self, other: &Operator) -> Result<Operator, QError> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(Operator { layout, matrix: self.matrix.kronecker(&other.matrix), flags: OnceLock::new() })
    }

    /// The same operator expressed on a larger layout (identity on the extra
    /// registers, registers reordered as `target` dictates).
    pub fn extend_to(&self, target: &RegisterLayout) -> Result<Operator, QError> {
        if *target == self.layout {
            return Ok(self.clone());
        }
        let emb = Embedding::new(target, &self.layout)?;
        let d = target.dim();
        let split: Vec<(usize, usize)> = (0..d).map(|i| emb.split(i)).collect();
        let mut m = DMatrix::<C64>::zeros(d, d);
        for (i, &(li, bi)) in split.iter().enumerate() {
            for lj in 0..emb.local_dim() {
                let j = bi + emb.offsets[lj];
                m[(i, j)] = self.matrix[(li, lj)];
            }
        }
        Ok(Operator { layout: target.clone(), matrix: m, flags: OnceLock::new() })
    }

    /// Applies the operator to a vector over `full` (which must contain this
    /// operator's registers). No unitarity requirement.
    pub(crate) fn act_on(&self, full: &RegisterLayout, input: &[C64]) -> Result<Vec<C64>, QError> {
        if input.len() != full.dim() {
            return Err(QError::DimensionMismatch { expected: full.dim(), actual: input.len() });
        }
        if *full == self.layout {
            let v = &self.matrix * nalgebra::DVector::from_column_slice(input);
            return Ok(v.as_slice().to_vec());
        }
        let emb = Embedding::new(full, &self.layout)?;
        let m = &self.matrix;
        let m_dim = emb.local_dim();
        let mut out = vec![C64::new(0.0, 0.0); input.len()];
        exec::fill_indexed(&mut out, |i| {
            let (li, base) = emb.split(i);
            let mut acc = C64::new(0.0, 0.0);
            for lj in 0..m_dim {
                let a = m[(li, lj)];
                if a.re != 0.0 || a.im != 0.0 {
                    acc += a * input[base + emb.offsets[lj]];
                }
            }
            acc
        });
        Ok(out)
    }

    /// Conjugation `u * self * u^dagger` on a shared layout.
    pub fn conjugate_by(&self, u: &Operator) -> Result<Operator, QError> {
        self.same_layout(u)?;
        Ok(Operator {
            layout: self.layout.clone(),
            matrix: &u.matrix * &self.matrix * u.matrix.adjoint(),
            flags: OnceLock::new(),
        })
    }
}

pub(crate) fn max_norm(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Both operators expressed on the union of their supports.
pub fn on_common_support(a: &Operator, b: &Operator) -> Result<(Operator, Operator), QError> {
    let union = a.layout.union(&b.layout)?;
    Ok((a.extend_to(&union)?, b.extend_to(&union)?))
}

/// `[A, B] = 0` within `tol` in max-norm; layouts must match.
pub fn commutes(a: &Operator, b: &Operator, tol: f64) -> Result<bool, QError> {
    a.same_layout(b)?;
    let comm = &a.matrix * &b.matrix - &b.matrix * &a.matrix;
    Ok(max_norm(&comm) <= tol)
}

/// Commutation of operators with possibly different supports, decided on the
/// union of the supports. Identity factors on other registers do not change
/// the commutator's max-norm, so this agrees with [`commutes`] on any layout
/// containing both supports. Disjoint supports commute exactly.
pub fn commutes_embedded(a: &Operator, b: &Operator, tol: f64) -> Result<bool, QError> {
    if a.layout.is_disjoint(&b.layout) {
        return Ok(true);
    }
    let (ea, eb) = on_common_support(a, b)?;
    commutes(&ea, &eb, tol)
}

/// Projectors `((I + O)/2, (I - O)/2)` onto the `+1` and `-1` eigenspaces.
pub fn spectral_projectors(o: &Operator) -> Result<(Operator, Operator), QError> {
    if !o.is_involutory() {
        return Err(QError::NotInvolutory);
    }
    let id = Operator::identity(o.layout.clone());
    let half = C64::new(0.5, 0.0);
    let plus = id.add(o)?.scale(half);
    let minus = id.sub(o)?.scale(half);
    Ok((plus, minus))
}

/// Standard single-qubit matrices.
pub mod paulis {
    use super::{Operator, C64};

    const O: C64 = C64 { re: 0.0, im: 0.0 };
    const L: C64 = C64 { re: 1.0, im: 0.0 };
    const I: C64 = C64 { re: 0.0, im: 1.0 };

    pub fn id(label: &str) -> Operator {
        Operator::qubit(label, [L, O, O, L])
    }

    pub fn x(label: &str) -> Operator {
        Operator::qubit(label, [O, L, L, O])
    }

    pub fn y(label: &str) -> Operator {
        Operator::qubit(label, [O, -I, I, O])
    }

    pub fn z(label: &str) -> Operator {
        Operator::qubit(label, [L, O, O, -L])
    }

    pub fn hadamard(label: &str) -> Operator {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Operator::qubit(label, [h, h, h, -h])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn tensor_of_identities_is_identity() {
        let i4 = paulis::id("a").tensor(&paulis::id("b")).unwrap();
        let expected = Operator::identity(RegisterLayout::qubits(["a", "b"]).unwrap());
        assert_eq!(i4, expected);
    }

    #[test]
    fn tensor_rejects_shared_labels() {
        assert!(matches!(paulis::x("a").tensor(&paulis::z("a")), Err(QError::LabelClash(_))));
    }

    #[test]
    fn flags() {
        let x = paulis::x("q");
        assert!(x.is_hermitian() && x.is_unitary() && x.is_involutory());
        let s = Operator::qubit("q", [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0)]);
        assert!(s.is_unitary() && !s.is_hermitian() && !s.is_involutory());
        let half = paulis::x("q").scale(C64::new(0.5, 0.0));
        assert!(half.is_hermitian() && !half.is_unitary());
    }

    #[test]
    fn commutation_examples() {
        let tol = 1e-12;
        assert!(commutes(&paulis::z("q"), &paulis::z("q"), tol).unwrap());
        assert!(!commutes(&paulis::x("q"), &paulis::z("q"), tol).unwrap());
        assert!(matches!(commutes(&paulis::x("q"), &paulis::z("r"), tol), Err(QError::LayoutMismatch(_))));
        assert!(commutes_embedded(&paulis::x("q"), &paulis::z("r"), tol).unwrap());
    }

    #[test]
    fn projectors_of_z_and_identity() {
        let (p, m) = spectral_projectors(&paulis::z("q")).unwrap();
        let l = C64::new(1.0, 0.0);
        let o = C64::new(0.0, 0.0);
        assert_eq!(p, Operator::diagonal(RegisterLayout::qubit("q"), &[l, o]).unwrap());
        assert_eq!(m, Operator::diagonal(RegisterLayout::qubit("q"), &[o, l]).unwrap());
        let (p, m) = spectral_projectors(&paulis::id("q")).unwrap();
        assert_eq!(p, paulis::id("q"));
        assert_eq!(m.max_norm(), 0.0);
        let s = Operator::qubit("q", [l, o, o, C64::new(0.0, 1.0)]);
        assert_eq!(spectral_projectors(&s).unwrap_err(), QError::NotInvolutory);
    }

    #[test]
    fn projectors_of_x_match_eigendecomposition() {
        // Oracle: the +1/-1 eigenvectors of X are (|0> +- |1>)/sqrt2, so the
        // rank-1 projectors have entries +-1/2 off the diagonal.
        let (p, m) = spectral_projectors(&paulis::x("q")).unwrap();
        for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let sign = if r == c { 1.0 } else { -1.0 };
            assert_abs_diff_eq!(p.entry(r, c).re, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(m.entry(r, c).re, 0.5 * sign, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(p.trace().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn extend_reorders_registers() {
        let z = paulis::z("b");
        let target = RegisterLayout::qubits(["b", "a"]).unwrap();
        let direct = paulis::z("b").tensor(&paulis::id("a")).unwrap();
        assert_eq!(z.extend_to(&target).unwrap(), direct);
        let target = RegisterLayout::qubits(["a", "b"]).unwrap();
        let direct = paulis::id("a").tensor(&paulis::z("b")).unwrap();
        assert_eq!(z.extend_to(&target).unwrap(), direct);
    }
}
