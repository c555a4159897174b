//! Thermal states, occupation functions, entropies and passivity.
//!
//! Units: `k_B = ħ = 1`, so temperatures are energies and entropies are in nats.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, DensityMatrix, QOperator, C64, HERMITIAN_TOL};

/// Eigenvalues at or below this are dropped from entropy sums (`0 ln 0 = 0`).
pub const ENTROPY_CUTOFF: f64 = 1e-14;

/// Inverse temperature and chemical potential of a reservoir.
///
/// `beta = +∞` is the zero-temperature limit and is handled explicitly by
/// every function below rather than through floating-point overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalContext {
    pub beta: f64,
    pub mu: f64,
}

impl ThermalContext {
    pub fn new(beta: f64, mu: f64) -> Result<Self> {
        if !(beta > 0.0) || beta.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "inverse temperature must be positive, got {beta}"
            )));
        }
        if !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("chemical potential {mu}")));
        }
        Ok(ThermalContext { beta, mu })
    }

    /// `T = 0` maps to `beta = +∞`.
    pub fn from_temperature(temperature: f64, mu: f64) -> Result<Self> {
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "temperature must be non-negative, got {temperature}"
            )));
        }
        let beta = if temperature == 0.0 {
            f64::INFINITY
        } else {
            1.0 / temperature
        };
        Self::new(beta, mu)
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.beta.is_infinite()
    }

    pub fn temperature(&self) -> f64 {
        if self.is_zero_temperature() {
            0.0
        } else {
            1.0 / self.beta
        }
    }

    /// `β(ε - μ)`, with `0 · ∞` resolved to zero.
    pub fn reduced_energy(&self, eps: f64) -> f64 {
        let x = eps - self.mu;
        if x == 0.0 {
            0.0
        } else {
            self.beta * x
        }
    }
}

/// `1 / (e^{β(ε-μ)} - 1)`, requires `ε > μ`.
pub fn bose_einstein(eps: f64, ctx: &ThermalContext) -> Result<f64> {
    if !(eps > ctx.mu) {
        return Err(Error::InvalidBosonicMode { eps, mu: ctx.mu });
    }
    let x = ctx.reduced_energy(eps);
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(1.0 / x.exp_m1())
}

/// `1 / (e^{β(ε-μ)} + 1)`
pub fn fermi_dirac(eps: f64, ctx: &ThermalContext) -> f64 {
    let x = ctx.reduced_energy(eps);
    if x == f64::INFINITY {
        0.0
    } else if x == f64::NEG_INFINITY {
        1.0
    } else if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (x.exp() + 1.0)
    }
}

/// Gibbs state `e^{-β(H - μN)} / Z`.
///
/// At `beta = ∞` this is the uniform mixture over the ground space of
/// `H - μN`.
pub fn thermal_state(h: &QOperator, n: &QOperator, ctx: &ThermalContext) -> Result<DensityMatrix> {
    if h.dim() != n.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: n.dim(),
        });
    }
    for op in [h, n] {
        let err = op.hermiticity_error();
        if err > HERMITIAN_TOL {
            return Err(Error::NotHermitian(err));
        }
    }
    let comm = h.commutator(n).max_abs();
    if comm > HERMITIAN_TOL {
        return Err(Error::NonCommuting(comm));
    }
    let k = h - &n.scale(ctx.mu);
    let d = k.dim();
    let (values, vectors) = if k.is_diagonal() {
        let mut order: Vec<usize> = (0..d).collect();
        let diag: Vec<f64> = (0..d).map(|i| k.get(i, i).re).collect();
        order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
        let vals = order.iter().map(|&i| diag[i]).collect::<Vec<_>>();
        let vecs = CMatrix::from_fn(d, d, |i, c| {
            if i == order[c] {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        (vals, vecs)
    } else {
        k.hermitian_eigen()
    };
    let kmin = values[0];
    let scale = values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let weights: Vec<f64> = values
        .iter()
        .map(|&v| {
            let gap = v - kmin;
            if ctx.is_zero_temperature() {
                if gap <= 1e-10 * scale {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-ctx.beta * gap).exp()
            }
        })
        .collect();
    let z: f64 = weights.iter().sum();
    let diag = CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            C64::new(weights[i] / z, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let rho = QOperator::new(&vectors * diag * vectors.adjoint())?;
    Ok(DensityMatrix::from_hermitized(rho))
}

/// `ln Z` of `e^{-β(H - μN)}`, evaluated stably.
pub fn log_partition_function(h: &QOperator, n: &QOperator, ctx: &ThermalContext) -> Result<f64> {
    if ctx.is_zero_temperature() {
        return Err(Error::InvalidParameter(
            "partition function diverges at zero temperature".into(),
        ));
    }
    let k = h - &n.scale(ctx.mu);
    let (values, _) = k.hermitian_eigen();
    let kmin = values[0];
    let s: f64 = values.iter().map(|&v| (-ctx.beta * (v - kmin)).exp()).sum();
    Ok(-ctx.beta * kmin + s.ln())
}

/// `-Σ p ln p` over the spectrum of `rho`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let s: f64 = rho
        .eigenvalues()
        .into_iter()
        .filter(|&p| p > ENTROPY_CUTOFF)
        .map(|p| -p * p.ln())
        .sum();
    s.max(0.0)
}

/// `Tr{ρ ln ρ - ρ ln σ}`; `+∞` when the support of `rho` is not contained in
/// that of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let (svals, svecs) = sigma.op().hermitian_eigen();
    let mut cross = 0.0;
    for (k, &s) in svals.iter().enumerate() {
        let u = svecs.column(k);
        let weight = (u.adjoint() * rho.matrix() * u)[(0, 0)].re;
        if s < 1e-12 {
            if weight > 1e-10 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * s.ln();
    }
    let d = -von_neumann_entropy(rho) - cross;
    Ok(d.max(0.0))
}

/// `F = Tr{Hρ} - T S_vN[ρ]`
pub fn free_energy(rho: &DensityMatrix, h: &QOperator, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "free energy needs T > 0, got {temperature}"
        )));
    }
    if h.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho.dim(),
        });
    }
    Ok(rho.expect(h).re - temperature * von_neumann_entropy(rho))
}

/// True iff `rho` commutes with `h` and its populations do not increase with
/// energy across distinct eigenvalues of `h`.
pub fn is_passive(rho: &DensityMatrix, h: &QOperator) -> bool {
    if rho.dim() != h.dim() || rho.op().commutator(h).max_abs() > 1e-10 {
        return false;
    }
    let (energies, vectors) = h.hermitian_eigen();
    let scale = energies.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    // group degenerate levels, keeping the spectrum of ρ inside each block
    let mut blocks: Vec<(f64, Vec<usize>)> = Vec::new();
    for (k, &e) in energies.iter().enumerate() {
        match blocks.last_mut() {
            Some((e0, idx)) if (e - *e0).abs() <= 1e-10 * scale => idx.push(k),
            _ => blocks.push((e, vec![k])),
        }
    }
    let mut prev_min: Option<f64> = None;
    for (_, idx) in &blocks {
        let m = idx.len();
        let sub = CMatrix::from_fn(m, m, |a, b| {
            let ua = vectors.column(idx[a]);
            let ub = vectors.column(idx[b]);
            (ua.adjoint() * rho.matrix() * ub)[(0, 0)]
        });
        let pops = QOperator::new(sub).expect("square").hermitian_eigen().0;
        let (lo, hi) = (pops[0], pops[m - 1]);
        if let Some(pm) = prev_min {
            if hi > pm + 1e-10 {
                return false;
            }
        }
        prev_min = Some(lo);
    }
    true
}

/// Spinful single-level dot on `{|0⟩, |↑⟩, |↓⟩, |↑↓⟩}`: returns
/// `(H, N)` with `H = ε(n↑ + n↓) + U n↑n↓`.
pub fn spinful_dot(eps: f64, interaction: f64) -> (QOperator, QOperator) {
    let h = QOperator::from_real_diagonal(&[0.0, eps, eps, 2.0 * eps + interaction]);
    let n = QOperator::from_real_diagonal(&[0.0, 1.0, 1.0, 2.0]);
    (h, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ops::*;
    use approx::assert_abs_diff_eq;

    fn ctx(beta: f64, mu: f64) -> ThermalContext {
        ThermalContext::new(beta, mu).unwrap()
    }

    #[test]
    fn bose_einstein_values() {
        let c = ctx(1.0, 0.0);
        assert_abs_diff_eq!(bose_einstein(2f64.ln(), &c).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(bose_einstein(1.5f64.ln(), &c).unwrap(), 2.0, epsilon = 1e-13);
        let cold = ThermalContext::from_temperature(0.0, 0.0).unwrap();
        assert_eq!(bose_einstein(1.0, &cold).unwrap(), 0.0);
        assert_eq!(bose_einstein(1e4, &c).unwrap(), 0.0);
        assert!(matches!(
            bose_einstein(0.5, &ctx(1.0, 0.5)),
            Err(Error::InvalidBosonicMode { .. })
        ));
    }

    #[test]
    fn fermi_dirac_values() {
        let c = ctx(2.0, 0.7);
        assert_eq!(fermi_dirac(0.7, &c), 0.5);
        assert_abs_diff_eq!(fermi_dirac(0.7 + 2f64.ln() / 2.0, &c), 1.0 / 3.0, epsilon = 1e-14);
        for eps in [-3.0, -0.2, 0.0, 0.9, 4.0] {
            let n = fermi_dirac(eps, &c);
            let lhs = (c.beta * (eps - c.mu)).exp();
            assert_abs_diff_eq!(lhs, (1.0 - n) / n, epsilon = 1e-12 * lhs.max(1.0));
        }
        let cold = ThermalContext::from_temperature(0.0, 1.0).unwrap();
        assert_eq!(fermi_dirac(2.0, &cold), 0.0);
        assert_eq!(fermi_dirac(0.0, &cold), 1.0);
        assert_eq!(fermi_dirac(1.0, &cold), 0.5);
    }

    #[test]
    fn qubit_thermal_state_matches_direct_exponential() {
        let eps = 1.3;
        let beta = 0.8;
        let h = qubit_hamiltonian(eps);
        let tau = thermal_state(&h, &QOperator::zeros(2), &ctx(beta, 0.0)).unwrap();
        // oracle: exponentiate the 2x2 matrix directly
        let m = h.matrix() * C64::new(-beta, 0.0);
        let e = m.exp();
        let z = e.trace();
        let oracle = e / z;
        assert!((tau.matrix() - oracle).norm() < 1e-14);
        let zq = (beta * eps / 2.0).exp() + (-beta * eps / 2.0).exp();
        assert_abs_diff_eq!(tau.populations()[0], (beta * eps / 2.0).exp() / zq, epsilon = 1e-14);
        assert_abs_diff_eq!(tau.populations()[1], (-beta * eps / 2.0).exp() / zq, epsilon = 1e-14);
    }

    #[test]
    fn high_and_zero_temperature_limits() {
        let h = qubit_hamiltonian(2.0);
        let hot = thermal_state(&h, &QOperator::zeros(2), &ctx(1e-14, 0.0)).unwrap();
        assert!((hot.op() - DensityMatrix::maximally_mixed(2).op()).max_abs() < 1e-12);

        let cold = ThermalContext::from_temperature(0.0, 0.0).unwrap();
        let ground = thermal_state(&h, &QOperator::zeros(2), &cold).unwrap();
        assert_eq!(ground.populations(), vec![1.0, 0.0]);

        let degenerate = QOperator::from_real_diagonal(&[0.0, 0.0, 1.0]);
        let g = thermal_state(&degenerate, &QOperator::zeros(3), &cold).unwrap();
        assert_abs_diff_eq!(g.populations()[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g.populations()[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn thermal_state_rejects_non_commuting() {
        let h = pauli_x();
        let n = pauli_z();
        assert!(matches!(
            thermal_state(&h, &n, &ctx(1.0, 0.1)),
            Err(Error::NonCommuting(_))
        ));
    }

    #[test]
    fn spinful_dot_populations() {
        let (eps, u, beta, mu) = (0.4, 1.1, 1.7, 0.2);
        let (h, n) = spinful_dot(eps, u);
        let tau = thermal_state(&h, &n, &ctx(beta, mu)).unwrap();
        let w = [
            1.0,
            (-beta * (eps - mu)).exp(),
            (-beta * (eps - mu)).exp(),
            (-beta * (2.0 * eps + u - 2.0 * mu)).exp(),
        ];
        let z: f64 = w.iter().sum();
        for (p, wi) in tau.populations().iter().zip(w) {
            assert_abs_diff_eq!(*p, wi / z, epsilon = 1e-14);
        }
    }

    #[test]
    fn entropies() {
        let pure = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        assert_eq!(von_neumann_entropy(&pure), 0.0);
        assert_abs_diff_eq!(
            von_neumann_entropy(&DensityMatrix::maximally_mixed(2)),
            2f64.ln(),
            epsilon = 1e-14
        );
        let rho = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        assert_abs_diff_eq!(relative_entropy(&rho, &rho).unwrap(), 0.0, epsilon = 1e-14);
        let up = DensityMatrix::diagonal(&[0.0, 1.0]).unwrap();
        assert_eq!(relative_entropy(&pure, &up).unwrap(), f64::INFINITY);
    }

    #[test]
    fn free_energy_of_thermal_and_pure_states() {
        let (eps, t) = (1.4, 0.6);
        let h = qubit_hamiltonian(eps);
        let tau = thermal_state(&h, &QOperator::zeros(2), &ThermalContext::from_temperature(t, 0.0).unwrap()).unwrap();
        let f = free_energy(&tau, &h, t).unwrap();
        let z = (eps / (2.0 * t)).exp() + (-eps / (2.0 * t)).exp();
        assert_abs_diff_eq!(f, -t * z.ln(), epsilon = 1e-10);

        let ground = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(free_energy(&ground, &h, t).unwrap(), -eps / 2.0, epsilon = 1e-14);
        assert!(free_energy(&ground, &h, 0.0).is_err());
    }

    #[test]
    fn passivity() {
        let h = qubit_hamiltonian(1.0);
        for beta in [0.1, 1.0, 10.0] {
            let tau = thermal_state(&h, &QOperator::zeros(2), &ctx(beta, 0.0)).unwrap();
            assert!(is_passive(&tau, &h));
        }
        let inverted = DensityMatrix::diagonal(&[0.2, 0.8]).unwrap();
        assert!(!is_passive(&inverted, &h));
        assert!(is_passive(&DensityMatrix::maximally_mixed(2), &h));
        let s = 0.5_f64.sqrt();
        let plus = DensityMatrix::pure(&crate::linalg::CVector::from_vec(vec![
            C64::new(s, 0.0),
            C64::new(s, 0.0),
        ]))
        .unwrap();
        assert!(!is_passive(&plus, &h));
    }
}
