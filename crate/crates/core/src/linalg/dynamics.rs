use nalgebra::{Schur, SVD};

use super::{devectorize, vectorize, CMatrix, DensityMatrix, Superoperator, C64};
use crate::error::{Error, Result};

/// Relative singular-value threshold below which a direction counts as kernel.
const KERNEL_REL_TOL: f64 = 1e-10;

fn check_generator(l: &Superoperator, rho0: &DensityMatrix) -> Result<()> {
    if !l.is_finite() {
        return Err(Error::NonFinite);
    }
    if l.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            found: rho0.dim(),
        });
    }
    Ok(())
}

/// `ρ(t) = e^{Lt} ρ₀`, Hermitized.
pub fn evolve(l: &Superoperator, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    check_generator(l, rho0)?;
    Propagator::new(l, t)?.apply(rho0)
}

/// The fixed-time propagator `e^{Lt}`, reusable across initial states.
#[derive(Debug, Clone)]
pub struct Propagator {
    dim: usize,
    mat: CMatrix,
}

impl Propagator {
    pub fn new(l: &Superoperator, t: f64) -> Result<Self> {
        if !l.is_finite() {
            return Err(Error::NonFinite);
        }
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("evolution time {t}")));
        }
        let mat = if t == 0.0 {
            CMatrix::identity(l.matrix().nrows(), l.matrix().ncols())
        } else {
            (l.matrix() * C64::new(t, 0.0)).exp()
        };
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Propagator { dim: l.dim(), mat })
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.dim(),
            });
        }
        let v = &self.mat * vectorize(rho.op());
        Ok(DensityMatrix::from_hermitized(devectorize(&v)?))
    }
}

/// Unique stationary state of a generator, from the right-singular vector of
/// its smallest singular value.
pub fn steady_state(l: &Superoperator) -> Result<DensityMatrix> {
    if !l.is_finite() {
        return Err(Error::NonFinite);
    }
    let svd = SVD::new(l.matrix().clone(), false, true);
    let v_t = svd.v_t.as_ref().expect("requested V†");
    let sigma = &svd.singular_values;
    let smax = sigma.iter().cloned().fold(0.0_f64, f64::max);
    let thresh = KERNEL_REL_TOL * smax;
    let kernel_dim = sigma.iter().filter(|&&s| s <= thresh).count();
    if kernel_dim > 1 {
        return Err(Error::NonUniqueSteadyState { kernel_dim });
    }
    let kmin = (0..sigma.len())
        .min_by(|&a, &b| sigma[a].total_cmp(&sigma[b]))
        .ok_or(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        })?;
    let v = v_t.row(kmin).adjoint();
    let op = devectorize(&v)?;
    let tr = op.trace();
    if tr.norm() < 1e-12 * op.max_abs().max(f64::MIN_POSITIVE) {
        return Err(Error::TracelessKernel);
    }
    let op = op.scale_complex(C64::new(1.0, 0.0) / tr);
    Ok(DensityMatrix::from_hermitized(op))
}

/// All eigenvalues of a generator (complex Schur form).
pub fn generator_spectrum(l: &Superoperator) -> Result<Vec<C64>> {
    if !l.is_finite() {
        return Err(Error::NonFinite);
    }
    let schur = Schur::new(l.matrix().clone());
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|k| t[(k, k)]).collect())
}

#[cfg(test)]
mod tests {
    use super::super::ops::*;
    use super::*;
    use crate::linalg::QOperator;

    fn residual(l: &Superoperator, rho: &QOperator) -> f64 {
        l.apply(rho).max_abs()
    }

    fn decay_generator(down: f64, up: f64, eps: f64) -> Superoperator {
        let mut l = Superoperator::hamiltonian(&qubit_hamiltonian(eps));
        l += &Superoperator::dissipator(&sigma_minus()).scale(down);
        l += &Superoperator::dissipator(&sigma_plus()).scale(up);
        l
    }

    #[test]
    fn steady_state_and_fixed_point() {
        let l = decay_generator(0.8, 0.2, 1.3);
        let ss = steady_state(&l).unwrap();
        let p = ss.populations();
        assert!((p[1] - 0.2).abs() < 1e-12);
        assert!(residual(&l, ss.op()) < 1e-12);
        for t in [0.1, 1.0, 10.0] {
            let out = evolve(&l, &ss, t).unwrap();
            assert!((out.op() - ss.op()).max_abs() < 1e-9);
        }
    }

    #[test]
    fn zero_time_is_identity() {
        let l = decay_generator(0.3, 0.1, 2.0);
        let rho = DensityMatrix::diagonal(&[0.4, 0.6]).unwrap();
        assert_eq!(evolve(&l, &rho, 0.0).unwrap(), rho);
        assert!(evolve(&l, &rho, -1.0).is_err());
    }

    #[test]
    fn pure_commutator_has_degenerate_kernel() {
        let l = Superoperator::hamiltonian(&QOperator::from_real_diagonal(&[0.0, 1.0, 2.5]));
        match steady_state(&l) {
            Err(Error::NonUniqueSteadyState { kernel_dim }) => assert_eq!(kernel_dim, 3),
            other => panic!("expected NonUniqueSteadyState, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_generator_is_rejected() {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = C64::new(f64::NAN, 0.0);
        let l = Superoperator::from_matrix(2, m).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        assert_eq!(evolve(&l, &rho, 1.0), Err(Error::NonFinite));
        assert_eq!(steady_state(&l), Err(Error::NonFinite));
    }

    #[test]
    fn spectrum_lies_in_left_half_plane() {
        let l = decay_generator(1.0, 0.4, 0.7);
        let spec = generator_spectrum(&l).unwrap();
        assert_eq!(spec.len(), 4);
        assert!(spec.iter().all(|z| z.re <= 1e-10));
        // the population mode relaxes at the total rate
        assert!(spec.iter().any(|z| (z.re + 1.4).abs() < 1e-10 && z.im.abs() < 1e-10));
    }
}
