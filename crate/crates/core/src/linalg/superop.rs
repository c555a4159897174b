use std::ops::{Add, AddAssign, Sub};

use super::{devectorize, vectorize, CMatrix, QOperator, C64, I, ONE, ZERO};
use crate::error::{Error, Result};

/// A linear map on operators, stored as a `d² × d²` matrix acting on
/// column-stacked vectorizations.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    mat: CMatrix,
}

impl Superoperator {
    pub fn zeros(dim: usize) -> Self {
        Superoperator {
            dim,
            mat: CMatrix::zeros(dim * dim, dim * dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Superoperator {
            dim,
            mat: CMatrix::identity(dim * dim, dim * dim),
        }
    }

    pub fn from_matrix(dim: usize, mat: CMatrix) -> Result<Self> {
        let n = dim * dim;
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: mat.nrows(),
            });
        }
        Ok(Superoperator { dim, mat })
    }

    /// `ρ ↦ A ρ B`, i.e. `Bᵀ ⊗ A`.
    pub fn sandwich(a: &QOperator, b: &QOperator) -> Self {
        Superoperator {
            dim: a.dim(),
            mat: b.matrix().transpose().kronecker(a.matrix()),
        }
    }

    /// `ρ ↦ A ρ`
    pub fn left(a: &QOperator) -> Self {
        Self::sandwich(a, &QOperator::identity(a.dim()))
    }

    /// `ρ ↦ ρ B`
    pub fn right(b: &QOperator) -> Self {
        Self::sandwich(&QOperator::identity(b.dim()), b)
    }

    /// Unitary part `ρ ↦ -i[H, ρ]`.
    pub fn hamiltonian(h: &QOperator) -> Self {
        let mut l = &Self::left(h) - &Self::right(h);
        l.mat *= -I;
        l
    }

    /// Lindblad dissipator `ρ ↦ AρA† - ½{A†A, ρ}`.
    pub fn dissipator(a: &QOperator) -> Self {
        Self::cross_dissipator(a, a)
    }

    /// `ρ ↦ XρY† - ½{Y†X, ρ}`. Reduces to [`Self::dissipator`] for `X = Y`.
    pub fn cross_dissipator(x: &QOperator, y: &QOperator) -> Self {
        let ydag = y.adjoint();
        let ydx = &ydag * x;
        let jump = Self::sandwich(x, &ydag);
        let mut anti = &Self::left(&ydx) + &Self::right(&ydx);
        anti.mat *= C64::new(0.5, 0.0);
        &jump - &anti
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn scale(&self, factor: f64) -> Self {
        Superoperator {
            dim: self.dim,
            mat: &self.mat * C64::new(factor, 0.0),
        }
    }

    pub fn apply(&self, a: &QOperator) -> QOperator {
        devectorize(&(&self.mat * vectorize(a))).expect("square by construction")
    }

    pub fn is_finite(&self) -> bool {
        self.mat.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Norm of `vec(I)† L`; zero for trace-preserving generators.
    pub fn trace_annihilation_error(&self) -> f64 {
        let id = vectorize(&QOperator::identity(self.dim));
        (id.adjoint() * &self.mat).norm()
    }

    /// Largest deviation from `L(A)† = L(A†)` over the matrix-unit basis.
    pub fn hermiticity_preservation_error(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                let mut e = QOperator::zeros(d);
                e.mat[(i, j)] = ONE;
                let lhs = self.apply(&e).adjoint();
                let rhs = self.apply(&e.adjoint());
                worst = worst.max((&lhs - &rhs).max_abs());
            }
        }
        worst
    }

    /// Choi matrix `Σ_ij E_ij ⊗ L(E_ij)`.
    pub fn choi(&self) -> CMatrix {
        let d = self.dim;
        CMatrix::from_fn(d * d, d * d, |r, c| {
            let (i, a) = (r / d, r % d);
            let (j, b) = (c / d, c % d);
            self.mat[(a + b * d, i + j * d)]
        })
    }

    /// Smallest eigenvalue of the Choi matrix projected onto the complement of
    /// the maximally entangled vector. A Hermiticity-preserving map generates
    /// a completely positive semigroup iff this is non-negative.
    pub fn conditional_choi_min_eigenvalue(&self) -> f64 {
        let d = self.dim;
        let n = d * d;
        let choi = self.choi();
        let mut proj = CMatrix::identity(n, n);
        for i in 0..d {
            for j in 0..d {
                proj[(i * d + i, j * d + j)] -= C64::new(1.0 / d as f64, 0.0);
            }
        }
        let c = &proj * choi * &proj;
        let c = QOperator::from_square(c);
        c.hermitian_eigen().0[0]
    }

    /// Structural GKLS test: trace annihilation, Hermiticity preservation and
    /// conditional complete positivity, each within `tol`.
    pub fn is_gkls(&self, tol: f64) -> bool {
        self.trace_annihilation_error() <= tol
            && self.hermiticity_preservation_error() <= tol
            && self.conditional_choi_min_eigenvalue() >= -tol
    }
}

impl Add for &Superoperator {
    type Output = Superoperator;
    fn add(self, rhs: &Superoperator) -> Superoperator {
        assert_eq!(self.dim, rhs.dim, "superoperator dimension mismatch");
        Superoperator {
            dim: self.dim,
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &Superoperator {
    type Output = Superoperator;
    fn sub(self, rhs: &Superoperator) -> Superoperator {
        assert_eq!(self.dim, rhs.dim, "superoperator dimension mismatch");
        Superoperator {
            dim: self.dim,
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl AddAssign<&Superoperator> for Superoperator {
    fn add_assign(&mut self, rhs: &Superoperator) {
        assert_eq!(self.dim, rhs.dim, "superoperator dimension mismatch");
        self.mat += &rhs.mat;
    }
}

impl Default for Superoperator {
    fn default() -> Self {
        Superoperator {
            dim: 0,
            mat: CMatrix::from_element(0, 0, ZERO),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::ops::*;
    use super::*;

    #[test]
    fn dissipator_of_lowering_decays_excited_state() {
        let d = Superoperator::dissipator(&sigma_minus());
        let excited = QOperator::from_real_diagonal(&[0.0, 1.0]);
        let out = d.apply(&excited);
        assert_eq!(out, QOperator::from_real_diagonal(&[1.0, -1.0]));
    }

    #[test]
    fn identity_jump_is_null() {
        let d = Superoperator::dissipator(&QOperator::identity(3));
        assert!(d.max_abs() < 1e-15);
    }

    #[test]
    fn dissipator_is_gkls_and_commutator_is_traceless() {
        let a = QOperator::new(CMatrix::from_fn(3, 3, |i, j| {
            C64::new((i + 2 * j) as f64 * 0.3, i as f64 - j as f64)
        }))
        .unwrap();
        let d = Superoperator::dissipator(&a);
        assert!(d.trace_annihilation_error() < 1e-12);
        assert!(d.is_gkls(1e-10));
        let h = (&a + &a.adjoint()).scale(0.5);
        let u = Superoperator::hamiltonian(&h);
        assert!(u.trace_annihilation_error() < 1e-12);
        assert!(u.is_gkls(1e-10));
        // a negative-rate dissipator is not completely positive
        assert!(!d.scale(-1.0).is_gkls(1e-10));
    }

    #[test]
    fn sandwich_matches_direct_product() {
        let a = annihilation(3);
        let b = number(3);
        let x = QOperator::new(CMatrix::from_fn(3, 3, |i, j| C64::new(i as f64, j as f64))).unwrap();
        let direct = &(&a * &x) * &b;
        let via = Superoperator::sandwich(&a, &b).apply(&x);
        assert!((&direct - &via).max_abs() < 1e-14);
    }
}
