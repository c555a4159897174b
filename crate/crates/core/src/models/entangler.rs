//! Two resonant qubits with an exchange coupling, each attached to its own
//! bosonic bath. The computational basis is `|n_C n_H⟩` with `n_C` the
//! more significant factor.

use crate::error::{Error, Result};
use crate::linalg::ops::{number, qubit_hamiltonian, sigma_minus};
use crate::linalg::{embed, tensor, DensityMatrix, QOperator, C64};
use crate::meq::{build, BathSpec, BuildOptions, Coupling, GeneratorBundle, Scheme};
use crate::statmech::{bose_einstein, fermi_dirac, ThermalContext};

const DIMS: [usize; 2] = [2, 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglerParams {
    pub eps_s: f64,
    pub g: f64,
    pub kappa_prime_c: f64,
    pub kappa_prime_h: f64,
    pub t_c: f64,
    pub t_h: f64,
}

impl EntanglerParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_s > 0.0) {
            return Err(Error::InvalidParameter(format!("qubit splitting {}", self.eps_s)));
        }
        if !(self.kappa_prime_c > 0.0 && self.kappa_prime_h > 0.0) {
            return Err(Error::InvalidParameter("bath rates must be positive".into()));
        }
        if !(self.g >= 0.0) || !self.g.is_finite() {
            return Err(Error::InvalidParameter(format!("coupling {}", self.g)));
        }
        if !(self.t_c >= 0.0 && self.t_h >= self.t_c) || !self.t_h.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= T_C <= T_H, got {} and {}",
                self.t_c, self.t_h
            )));
        }
        Ok(())
    }

    fn ctx(t: f64) -> Result<ThermalContext> {
        ThermalContext::from_temperature(t, 0.0)
    }

    /// Qubit occupations `(n_F^C, n_F^H)` at the qubit splitting.
    pub fn occupations(&self) -> Result<(f64, f64)> {
        Ok((
            fermi_dirac(self.eps_s, &Self::ctx(self.t_c)?),
            fermi_dirac(self.eps_s, &Self::ctx(self.t_h)?),
        ))
    }

    /// Whether the effective rates and the coupling stay below a tenth of
    /// the qubit splitting.
    pub fn is_weak_coupling(&self) -> Result<bool> {
        let (kc, kh) = entangler_kappa(self)?;
        let limit = 0.1 * self.eps_s;
        Ok(kc <= limit && kh <= limit && self.g <= limit)
    }

    pub fn hamiltonian(&self) -> QOperator {
        let (sc, sh) = lowering_ops();
        let local = &embed(&qubit_hamiltonian(self.eps_s), 0, &DIMS).unwrap()
            + &embed(&qubit_hamiltonian(self.eps_s), 1, &DIMS).unwrap();
        let exchange = &(&sc.adjoint() * &sh) + &(&sh.adjoint() * &sc);
        (&local + &exchange.scale(self.g)).with_label("H_entangler")
    }

    /// Total excitation number.
    pub fn number_operator(&self) -> QOperator {
        &embed(&number(2), 0, &DIMS).unwrap() + &embed(&number(2), 1, &DIMS).unwrap()
    }

    pub fn baths(&self) -> Result<Vec<BathSpec>> {
        self.validate()?;
        let (sc, sh) = lowering_ops();
        Ok(vec![
            BathSpec::bosonic(
                "C",
                Self::ctx(self.t_c)?,
                self.kappa_prime_c,
                vec![Coupling::lowering(sc).at_frequency(self.eps_s)],
            )?,
            BathSpec::bosonic(
                "H",
                Self::ctx(self.t_h)?,
                self.kappa_prime_h,
                vec![Coupling::lowering(sh).at_frequency(self.eps_s)],
            )?,
        ])
    }

    pub fn generator(&self, scheme: Scheme, opts: BuildOptions) -> Result<GeneratorBundle> {
        let baths = self.baths()?;
        build(scheme, &self.hamiltonian(), &baths, opts)
    }
}

/// `(σ_C, σ_H)` on the two-qubit space.
pub fn lowering_ops() -> (QOperator, QOperator) {
    (
        embed(&sigma_minus(), 0, &DIMS).unwrap(),
        embed(&sigma_minus(), 1, &DIMS).unwrap(),
    )
}

/// Effective qubit rates `κ_α = κ'_α (1 + 2 n_B^α(ε_S))`, equal to
/// `κ'_α n_B / n_F` at finite temperature and to `κ'_α` at zero temperature.
pub fn entangler_kappa(p: &EntanglerParams) -> Result<(f64, f64)> {
    p.validate()?;
    let k = |kp: f64, t: f64| -> Result<f64> {
        Ok(kp * (1.0 + 2.0 * bose_einstein(p.eps_s, &ThermalContext::from_temperature(t, 0.0)?)?))
    };
    Ok((k(p.kappa_prime_c, p.t_c)?, k(p.kappa_prime_h, p.t_h)?))
}

fn qubit_state(n: f64) -> QOperator {
    QOperator::from_real_diagonal(&[1.0 - n, n])
}

/// Closed-form steady state of the local master equation.
pub fn entangler_steady(p: &EntanglerParams) -> Result<DensityMatrix> {
    let (kc, kh) = entangler_kappa(p)?;
    let (nc, nh) = p.occupations()?;
    let g2 = 4.0 * p.g * p.g;
    let denom = kc * kh + g2;
    let nbar = (kc * nc + kh * nh) / (kc + kh);
    let local = tensor(&qubit_state(nc), &qubit_state(nh)).scale(kc * kh / denom);
    let mean = tensor(&qubit_state(nbar), &qubit_state(nbar)).scale(g2 / denom);
    // sign fixed by the generator: quanta must flow from the hotter qubit,
    // and the exchange current is -2g times this amplitude
    let amp = 2.0 * p.g * kc * kh * (nc - nh) / ((kc + kh) * denom);
    let (sc, sh) = lowering_ops();
    let coherence = (&(&sc.adjoint() * &sh) - &(&sh.adjoint() * &sc)).scale_complex(C64::new(0.0, amp));
    DensityMatrix::new(&(&local + &mean) + &coherence)
}

/// Closed-form concurrence of [`entangler_steady`], clipped at zero.
pub fn entangler_concurrence_analytic(p: &EntanglerParams) -> Result<f64> {
    let (kc, kh) = entangler_kappa(p)?;
    let (nc, nh) = p.occupations()?;
    let nbar = (kc * nc + kh * nh) / (kc + kh);
    let r = 4.0 * p.g * p.g / (kc * kh);
    let prefactor = 2.0 * kc * kh / (4.0 * p.g * p.g + kc * kh);
    let coherence = 2.0 * p.g / (kc + kh) * (nh - nc);
    let empty = (1.0 - nc) * (1.0 - nh) + r * (1.0 - nbar).powi(2);
    let full = nc * nh + r * nbar * nbar;
    Ok((prefactor * (coherence - (empty * full).sqrt())).max(0.0))
}
