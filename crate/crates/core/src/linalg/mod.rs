//! Dense complex operator and superoperator algebra.
//!
//! Operators are stored as `nalgebra` column-major matrices. Superoperators act
//! on column-stacked vectorizations: `vec(A)[i + j*d] = A[i, j]`, so that
//! `vec(A X B) = (Bᵀ ⊗ A) vec(X)`. Every superoperator in the crate is built
//! against this convention.

mod dynamics;
pub mod ops;
mod superop;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub use dynamics::{evolve, generator_spectrum, steady_state, Propagator};
pub use superop::Superoperator;

pub type C64 = nalgebra::Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Tolerance used when validating Hermiticity and unit trace.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted in a density matrix.
pub const EIGEN_FLOOR: f64 = -1e-9;

/// A square complex matrix on a finite Hilbert space.
#[derive(Clone, PartialEq)]
pub struct QOperator {
    mat: CMatrix,
    label: Option<String>,
}

impl fmt::Debug for QOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QOperator")
            .field("dim", &self.dim())
            .field("label", &self.label)
            .field("mat", &self.mat)
            .finish()
    }
}

impl QOperator {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows(),
                found: mat.ncols(),
            });
        }
        Ok(QOperator { mat, label: None })
    }

    /// Caller guarantees the matrix is square.
    pub(crate) fn from_square(mat: CMatrix) -> Self {
        debug_assert!(mat.is_square());
        QOperator { mat, label: None }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_square(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_square(CMatrix::identity(dim, dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        Self::from_square(CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                ZERO
            }
        }))
    }

    /// Builds an operator from row-major real entries.
    pub fn from_real_rows(dim: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: rows.len(),
            });
        }
        Ok(Self::from_square(CMatrix::from_fn(dim, dim, |i, j| {
            C64::new(rows[i * dim + j], 0.0)
        })))
    }

    /// `|ket⟩⟨bra|`
    pub fn outer(ket: &CVector, bra: &CVector) -> Result<Self> {
        if ket.len() != bra.len() {
            return Err(Error::DimensionMismatch {
                expected: ket.len(),
                found: bra.len(),
            });
        }
        Ok(Self::from_square(ket * bra.adjoint()))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_square(self.mat.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// `Tr{self · other}`, without forming the product.
    pub fn trace_product(&self, other: &QOperator) -> C64 {
        let d = self.dim();
        let mut acc = ZERO;
        for i in 0..d {
            for k in 0..d {
                acc += self.mat[(i, k)] * other.mat[(k, i)];
            }
        }
        acc
    }

    /// Largest entry-wise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn hermitized(&self) -> Self {
        Self::from_square((&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn commutator(&self, other: &QOperator) -> Self {
        Self::from_square(&self.mat * &other.mat - &other.mat * &self.mat)
    }

    pub fn anticommutator(&self, other: &QOperator) -> Self {
        Self::from_square(&self.mat * &other.mat + &other.mat * &self.mat)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.mat.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.dim();
        (0..d).all(|j| (0..d).all(|i| i == j || self.mat[(i, j)] == ZERO))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_square(&self.mat * C64::new(factor, 0.0))
    }

    pub fn scale_complex(&self, factor: C64) -> Self {
        Self::from_square(&self.mat * factor)
    }

    /// Eigen-decomposition of the Hermitian part. Eigenvalues come back in
    /// ascending order with matching eigenvector columns.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, CMatrix) {
        let h = self.hermitized();
        let eig = SymmetricEigen::new(h.mat);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let d = self.dim();
        let vectors = CMatrix::from_fn(d, d, |i, c| eig.eigenvectors[(i, order[c])]);
        (values, vectors)
    }

    /// Applies `f` to the eigenvalues of the Hermitian part.
    pub fn hermitian_function(&self, f: impl Fn(f64) -> f64) -> Self {
        let (values, vectors) = self.hermitian_eigen();
        let d = self.dim();
        let diag = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(f(values[i]), 0.0)
            } else {
                ZERO
            }
        });
        Self::from_square(&vectors * diag * vectors.adjoint())
    }

    /// Conjugation `U A U†`.
    pub fn conjugated_by(&self, unitary: &QOperator) -> Self {
        Self::from_square(&unitary.mat * &self.mat * unitary.mat.adjoint())
    }

    /// Entry-wise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        Self::from_square(self.mat.map(|z| z.conj()))
    }

    /// Spectral norm of the Hermitian part (largest |eigenvalue|).
    pub fn hermitian_norm(&self) -> f64 {
        self.hermitian_eigen()
            .0
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

impl Add for &QOperator {
    type Output = QOperator;
    fn add(self, rhs: &QOperator) -> QOperator {
        QOperator::from_square(&self.mat + &rhs.mat)
    }
}

impl Sub for &QOperator {
    type Output = QOperator;
    fn sub(self, rhs: &QOperator) -> QOperator {
        QOperator::from_square(&self.mat - &rhs.mat)
    }
}

impl Mul for &QOperator {
    type Output = QOperator;
    fn mul(self, rhs: &QOperator) -> QOperator {
        QOperator::from_square(&self.mat * &rhs.mat)
    }
}

impl Mul<&QOperator> for f64 {
    type Output = QOperator;
    fn mul(self, rhs: &QOperator) -> QOperator {
        rhs.scale(self)
    }
}

impl Neg for &QOperator {
    type Output = QOperator;
    fn neg(self) -> QOperator {
        self.scale(-1.0)
    }
}

impl Add for QOperator {
    type Output = QOperator;
    fn add(self, rhs: QOperator) -> QOperator {
        QOperator::from_square(self.mat + rhs.mat)
    }
}

impl Sub for QOperator {
    type Output = QOperator;
    fn sub(self, rhs: QOperator) -> QOperator {
        QOperator::from_square(self.mat - rhs.mat)
    }
}

impl Mul for QOperator {
    type Output = QOperator;
    fn mul(self, rhs: QOperator) -> QOperator {
        QOperator::from_square(self.mat * rhs.mat)
    }
}

/// A Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: QOperator,
}

impl DensityMatrix {
    /// Validates Hermiticity and trace to `1e-10` and the eigenvalue floor `-1e-9`.
    pub fn new(op: QOperator) -> Result<Self> {
        if !op.is_finite() {
            return Err(Error::NonFinite);
        }
        let herr = op.hermiticity_error();
        if herr > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {herr:.3e})"
            )));
        }
        let tr = op.trace();
        if (tr - ONE).norm() > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {:.12} != 1",
                tr.re
            )));
        }
        let (values, _) = op.hermitian_eigen();
        if let Some(&min) = values.first() {
            if min < EIGEN_FLOOR {
                return Err(Error::InvalidDensityMatrix(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(DensityMatrix { op: op.hermitized() })
    }

    /// Hermitizes without further checks. Used for propagated and solved states.
    pub(crate) fn from_hermitized(op: QOperator) -> Self {
        DensityMatrix {
            op: op.hermitized(),
        }
    }

    /// `diag(populations)`; the populations must sum to one.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        Self::new(QOperator::from_real_diagonal(populations))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            op: QOperator::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) state vector.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let psi = psi / C64::new(norm, 0.0);
        Self::new(QOperator::outer(&psi, &psi)?)
    }

    pub fn op(&self) -> &QOperator {
        &self.op
    }

    pub fn into_op(self) -> QOperator {
        self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.op.mat
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.op.hermitian_eigen().0
    }

    /// Real part of the computational-basis diagonal.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.op.mat[(i, i)].re).collect()
    }

    /// `Tr{A ρ}`
    pub fn expect(&self, a: &QOperator) -> C64 {
        a.trace_product(&self.op)
    }

    /// Convex combination `t ρ + (1 - t) σ`.
    pub fn mix(&self, other: &DensityMatrix, t: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(DensityMatrix::from_hermitized(
            &self.op.scale(t) + &other.op.scale(1.0 - t),
        ))
    }

    pub fn conjugated_by(&self, unitary: &QOperator) -> Self {
        DensityMatrix::from_hermitized(self.op.conjugated_by(unitary))
    }
}

/// Kronecker product with `a` on the left factor.
pub fn tensor(a: &QOperator, b: &QOperator) -> QOperator {
    QOperator::from_square(a.mat.kronecker(&b.mat))
}

/// Tensor product of a list of operators, leftmost factor first.
pub fn tensor_all(factors: &[&QOperator]) -> QOperator {
    factors
        .iter()
        .fold(QOperator::identity(1), |acc, f| tensor(&acc, f))
}

/// Embeds `op` acting on factor `site` into the product space `dims`.
pub fn embed(op: &QOperator, site: usize, dims: &[usize]) -> Result<QOperator> {
    if site >= dims.len() || dims[site] != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: dims.get(site).copied().unwrap_or(0),
            found: op.dim(),
        });
    }
    let mut acc = QOperator::identity(1);
    for (k, &d) in dims.iter().enumerate() {
        let factor = if k == site {
            op.clone()
        } else {
            QOperator::identity(d)
        };
        acc = tensor(&acc, &factor);
    }
    Ok(acc)
}

/// Reduced state on factor `keep` of the product space `dims`.
pub fn partial_trace(rho: &DensityMatrix, keep: usize, dims: &[usize]) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: rho.dim(),
        });
    }
    if keep >= dims.len() {
        return Err(Error::InvalidParameter(format!(
            "subsystem {keep} out of range for {} factors",
            dims.len()
        )));
    }
    // strides for the row-major factor ordering produced by `tensor`
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let dk = dims[keep];
    let rest = total / dk;
    let mut out = CMatrix::zeros(dk, dk);
    // enumerate multi-indices of the traced-out factors
    for r in 0..rest {
        let mut rem = r;
        let mut offset = 0;
        for k in (0..dims.len()).rev() {
            if k == keep {
                continue;
            }
            offset += (rem % dims[k]) * strides[k];
            rem /= dims[k];
        }
        for i in 0..dk {
            for j in 0..dk {
                out[(i, j)] += rho.op.mat[(offset + i * strides[keep], offset + j * strides[keep])];
            }
        }
    }
    Ok(DensityMatrix::from_hermitized(QOperator::from_square(out)))
}

/// Column-stacking vectorization.
pub fn vectorize(a: &QOperator) -> CVector {
    CVector::from_column_slice(a.mat.as_slice())
}

/// Inverse of [`vectorize`]; rejects lengths that are not perfect squares.
pub fn devectorize(v: &CVector) -> Result<QOperator> {
    let n = v.len();
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(Error::NonSquareLength(n));
    }
    Ok(QOperator::from_square(CMatrix::from_column_slice(
        d,
        d,
        v.as_slice(),
    )))
}

#[cfg(test)]
mod tests {
    use super::ops::*;
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn tensor_identities_and_pauli() {
        let i4 = tensor(&QOperator::identity(2), &QOperator::identity(2));
        assert_eq!(i4, QOperator::identity(4));

        let zi = tensor(&pauli_z(), &QOperator::identity(2));
        assert_eq!(zi, QOperator::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn raising_lowering_product_swaps_excitation() {
        let op = tensor(&sigma_plus(), &sigma_minus());
        let ket01 = basis_ket(4, 1); // |0⟩⊗|1⟩
        let out = op.matrix() * ket01;
        assert_eq!(out, basis_ket(4, 2)); // |1⟩⊗|0⟩
    }

    #[test]
    fn vectorize_stacks_columns() {
        let v = vectorize(&QOperator::identity(2));
        let expect: Vec<C64> = [1.0, 0.0, 0.0, 1.0].iter().map(|&x| C64::new(x, 0.0)).collect();
        assert_eq!(v.as_slice(), expect.as_slice());

        let a = QOperator::from_real_rows(2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let v = vectorize(&a);
        assert_eq!(v[1], C64::new(3.0, 0.0));
        assert_eq!(v[2], C64::new(2.0, 0.0));
        assert_eq!(devectorize(&v).unwrap(), a);
    }

    #[test]
    fn devectorize_rejects_non_square_length() {
        let v = CVector::zeros(5);
        assert_eq!(devectorize(&v), Err(Error::NonSquareLength(5)));
    }

    #[test]
    fn scalar_product_matches_trace() {
        let a = QOperator::new(CMatrix::from_fn(3, 3, |i, j| C64::new(i as f64 - 0.5 * j as f64, (i * j) as f64))).unwrap();
        let b = QOperator::new(CMatrix::from_fn(3, 3, |i, j| C64::new((i + 2 * j) as f64, -(i as f64)))).unwrap();
        let lhs = vectorize(&a).dotc(&vectorize(&b));
        let rhs = (&a.adjoint() * &b).trace();
        assert_abs_diff_eq!(lhs.re, rhs.re, epsilon = 1e-12);
        assert_abs_diff_eq!(lhs.im, rhs.im, epsilon = 1e-12);
    }

    #[test]
    fn partial_trace_of_product_and_bell_states() {
        let a = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        let b = DensityMatrix::diagonal(&[0.2, 0.8]).unwrap();
        let ab = DensityMatrix::new(tensor(a.op(), b.op())).unwrap();
        let ra = partial_trace(&ab, 0, &[2, 2]).unwrap();
        let rb = partial_trace(&ab, 1, &[2, 2]).unwrap();
        assert!((ra.op() - a.op()).max_abs() < 1e-15);
        assert!((rb.op() - b.op()).max_abs() < 1e-15);

        let s = 0.5_f64.sqrt();
        let bell = CVector::from_vec(vec![ZERO, C64::new(s, 0.0), C64::new(s, 0.0), ZERO]);
        let bell = DensityMatrix::pure(&bell).unwrap();
        for keep in 0..2 {
            let r = partial_trace(&bell, keep, &[2, 2]).unwrap();
            assert!((r.op() - DensityMatrix::maximally_mixed(2).op()).max_abs() < 1e-15);
        }
    }

    #[test]
    fn partial_trace_three_factors() {
        let a = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
        let b = DensityMatrix::diagonal(&[0.1, 0.2, 0.7]).unwrap();
        let c = DensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
        let abc = DensityMatrix::new(tensor_all(&[a.op(), b.op(), c.op()])).unwrap();
        let rb = partial_trace(&abc, 1, &[2, 3, 2]).unwrap();
        assert!((rb.op() - b.op()).max_abs() < 1e-15);
        assert!(partial_trace(&abc, 1, &[2, 2, 2]).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::diagonal(&[0.5, 0.6]).is_err());
        assert!(DensityMatrix::diagonal(&[1.2, -0.2]).is_err());
        let skew = QOperator::from_real_rows(2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(DensityMatrix::new(skew).is_err());
        assert!(DensityMatrix::diagonal(&[0.25, 0.75]).is_ok());
    }

    #[test]
    fn embed_places_factor() {
        let z1 = embed(&pauli_z(), 1, &[2, 2]).unwrap();
        assert_eq!(z1, tensor(&QOperator::identity(2), &pauli_z()));
        assert!(embed(&pauli_z(), 2, &[2, 2]).is_err());
    }
}
