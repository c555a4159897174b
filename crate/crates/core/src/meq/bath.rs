use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::QOperator;
use crate::statmech::{bose_einstein, fermi_dirac, ThermalContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistics {
    Fermionic,
    Bosonic,
}

/// Whether a coupling operator removes (`Lowering`) or adds (`Raising`)
/// an excitation. Raising operators are stored through their adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingKind {
    Lowering,
    Raising,
}

/// One system operator coupled to a bath, `S ⊗ B† + S† ⊗ B`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    pub op: QOperator,
    pub kind: CouplingKind,
    /// Bare transition frequency used by the local scheme.
    pub reference_frequency: Option<f64>,
}

impl Coupling {
    pub fn lowering(op: QOperator) -> Self {
        Coupling {
            op,
            kind: CouplingKind::Lowering,
            reference_frequency: None,
        }
    }

    pub fn raising(op: QOperator) -> Self {
        Coupling {
            op,
            kind: CouplingKind::Raising,
            reference_frequency: None,
        }
    }

    pub fn at_frequency(mut self, omega: f64) -> Self {
        self.reference_frequency = Some(omega);
        self
    }

    /// The operator in lowering form.
    pub fn lowering_op(&self) -> QOperator {
        match self.kind {
            CouplingKind::Lowering => self.op.clone(),
            CouplingKind::Raising => self.op.adjoint(),
        }
    }
}

/// Frequency dependence of the bath's density of states, relative to the
/// value at which `base_rate` is quoted.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum SpectralProfile {
    #[default]
    Flat,
    /// Piecewise-linear density sampled at increasing `omegas`.
    Tabulated {
        omegas: Vec<f64>,
        densities: Vec<f64>,
        reference: f64,
    },
}

impl SpectralProfile {
    pub fn tabulated(omegas: Vec<f64>, densities: Vec<f64>, reference: f64) -> Result<Self> {
        if omegas.len() < 2 || omegas.len() != densities.len() {
            return Err(Error::InvalidParameter(
                "tabulated profile needs at least two (omega, density) samples".into(),
            ));
        }
        if omegas.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "profile frequencies must be strictly increasing".into(),
            ));
        }
        if densities.iter().any(|&d| !(d >= 0.0) || !d.is_finite()) {
            return Err(Error::InvalidParameter(
                "profile densities must be finite and non-negative".into(),
            ));
        }
        let profile = SpectralProfile::Tabulated {
            omegas,
            densities,
            reference,
        };
        if !(profile.density(reference)? > 0.0) {
            return Err(Error::InvalidParameter(
                "profile must be positive at its reference frequency".into(),
            ));
        }
        Ok(profile)
    }

    fn density(&self, omega: f64) -> Result<f64> {
        match self {
            SpectralProfile::Flat => Ok(1.0),
            SpectralProfile::Tabulated {
                omegas, densities, ..
            } => {
                let (lo, hi) = (omegas[0], omegas[omegas.len() - 1]);
                if !(omega >= lo && omega <= hi) {
                    return Err(Error::InvalidParameter(format!(
                        "frequency {omega} outside tabulated range [{lo}, {hi}]"
                    )));
                }
                let k = omegas.partition_point(|&w| w <= omega).clamp(1, omegas.len() - 1);
                let (w0, w1) = (omegas[k - 1], omegas[k]);
                let t = (omega - w0) / (w1 - w0);
                Ok(densities[k - 1] + t * (densities[k] - densities[k - 1]))
            }
        }
    }

    /// `ρ(ω) / ρ(reference)`; identically one for a flat band.
    pub fn relative_density(&self, omega: f64) -> Result<f64> {
        match self {
            SpectralProfile::Flat => Ok(1.0),
            SpectralProfile::Tabulated { reference, .. } => {
                Ok(self.density(omega)? / self.density(*reference)?)
            }
        }
    }
}

/// A reservoir in equilibrium, characterized in the frequency domain.
#[derive(Debug, Clone, PartialEq)]
pub struct BathSpec {
    pub name: String,
    pub statistics: Statistics,
    pub ctx: ThermalContext,
    /// `2πρ` at the reference energy.
    pub base_rate: f64,
    pub couplings: Vec<Coupling>,
    pub profile: SpectralProfile,
    /// Half-width of a flat band centred at zero, needed for the level shift.
    pub band_half_width: Option<f64>,
}

impl BathSpec {
    pub fn new(
        name: impl Into<String>,
        statistics: Statistics,
        ctx: ThermalContext,
        base_rate: f64,
        couplings: Vec<Coupling>,
    ) -> Result<Self> {
        if !(base_rate > 0.0) || !base_rate.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "bath rate must be positive, got {base_rate}"
            )));
        }
        Ok(BathSpec {
            name: name.into(),
            statistics,
            ctx,
            base_rate,
            couplings,
            profile: SpectralProfile::Flat,
            band_half_width: None,
        })
    }

    pub fn fermionic(name: impl Into<String>, ctx: ThermalContext, rate: f64, couplings: Vec<Coupling>) -> Result<Self> {
        Self::new(name, Statistics::Fermionic, ctx, rate, couplings)
    }

    pub fn bosonic(name: impl Into<String>, ctx: ThermalContext, rate: f64, couplings: Vec<Coupling>) -> Result<Self> {
        Self::new(name, Statistics::Bosonic, ctx, rate, couplings)
    }

    pub fn with_profile(mut self, profile: SpectralProfile) -> Self {
        self.profile = profile;
        self
    }

    pub fn with_band(mut self, half_width: f64) -> Self {
        self.band_half_width = Some(half_width);
        self
    }

    pub fn temperature(&self) -> f64 {
        self.ctx.temperature()
    }

    pub fn mu(&self) -> f64 {
        self.ctx.mu
    }

    /// Occupation of a bath mode at `omega`.
    pub fn occupation(&self, omega: f64) -> Result<f64> {
        match self.statistics {
            Statistics::Fermionic => Ok(fermi_dirac(omega, &self.ctx)),
            Statistics::Bosonic => bose_einstein(omega, &self.ctx),
        }
    }
}

/// Emission and absorption rates `(γ↓, γ↑)` for a transition releasing
/// energy `omega` into the bath.
pub fn rate_pair(bath: &BathSpec, omega: f64) -> Result<(f64, f64)> {
    let n = bath.occupation(omega)?;
    let k = bath.base_rate * bath.profile.relative_density(omega)?;
    Ok(match bath.statistics {
        Statistics::Fermionic => (k * (1.0 - n), k * n),
        Statistics::Bosonic => (k * (1.0 + n), k * n),
    })
}

/// Level shift `P∫dω' ρ(ω')/(ω − ω')` for a flat band on `[-W, W]` whose
/// density gives `base_rate = 2πρ`.
pub fn lamb_shift(bath: &BathSpec, omega: f64, half_width: f64) -> Result<f64> {
    if !matches!(bath.profile, SpectralProfile::Flat) {
        return Err(Error::UnsupportedProfile(
            "level shifts are only available for flat bands".into(),
        ));
    }
    if !(half_width > omega.abs()) {
        return Err(Error::InvalidParameter(format!(
            "band half-width {half_width} must exceed |omega| = {}",
            omega.abs()
        )));
    }
    Ok(bath.base_rate / (2.0 * PI) * ((half_width + omega) / (half_width - omega)).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ops::sigma_minus;
    use approx::assert_abs_diff_eq;

    fn bath(stats: Statistics, beta: f64, mu: f64) -> BathSpec {
        let ctx = ThermalContext::new(beta, mu).unwrap();
        BathSpec::new("b", stats, ctx, 0.7, vec![Coupling::lowering(sigma_minus())]).unwrap()
    }

    #[test]
    fn fermionic_rates_at_chemical_potential() {
        let b = bath(Statistics::Fermionic, 3.0, 0.4);
        let (down, up) = rate_pair(&b, 0.4).unwrap();
        assert_eq!((down, up), (0.35, 0.35));
    }

    #[test]
    fn bosonic_rates_at_unit_occupation() {
        let b = bath(Statistics::Bosonic, 1.0, 0.0);
        let (down, up) = rate_pair(&b, 2f64.ln()).unwrap();
        assert_abs_diff_eq!(down, 1.4, epsilon = 1e-14);
        assert_abs_diff_eq!(up, 0.7, epsilon = 1e-14);
        assert!(matches!(rate_pair(&b, -0.1), Err(Error::InvalidBosonicMode { .. })));
    }

    #[test]
    fn detailed_balance() {
        for stats in [Statistics::Fermionic, Statistics::Bosonic] {
            let b = bath(stats, 1.3, -0.2);
            for omega in [0.1, 0.5, 2.0, 4.0] {
                let (down, up) = rate_pair(&b, omega).unwrap();
                let expected = (-b.ctx.beta * (omega - b.ctx.mu)).exp();
                assert_abs_diff_eq!(up / down, expected, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn raising_coupling_is_stored_as_lowering() {
        let c = Coupling::raising(sigma_minus().adjoint());
        assert_eq!(c.lowering_op(), sigma_minus());
    }

    #[test]
    fn tabulated_profile_scales_rates() {
        let profile = SpectralProfile::tabulated(vec![0.0, 1.0, 2.0], vec![1.0, 3.0, 1.0], 1.0).unwrap();
        let b = bath(Statistics::Fermionic, 1.0, 0.0).with_profile(profile);
        let flat = bath(Statistics::Fermionic, 1.0, 0.0);
        let (d, u) = rate_pair(&b, 0.5).unwrap();
        let (df, uf) = rate_pair(&flat, 0.5).unwrap();
        assert_abs_diff_eq!(d, df * 2.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(u, uf * 2.0 / 3.0, epsilon = 1e-14);
        assert!(rate_pair(&b, 3.0).is_err());
        assert!(SpectralProfile::tabulated(vec![1.0, 0.0], vec![1.0, 1.0], 0.5).is_err());
    }

    #[test]
    fn lamb_shift_flat_band() {
        let b = bath(Statistics::Fermionic, 1.0, 0.0);
        assert_eq!(lamb_shift(&b, 0.0, 10.0).unwrap(), 0.0);
        assert!(lamb_shift(&b, 11.0, 10.0).is_err());
        let tab = b
            .clone()
            .with_profile(SpectralProfile::tabulated(vec![0.0, 1.0], vec![1.0, 1.0], 0.5).unwrap());
        assert!(matches!(lamb_shift(&tab, 0.2, 10.0), Err(Error::UnsupportedProfile(_))));
    }

    #[test]
    fn lamb_shift_matches_principal_value_quadrature() {
        let b = bath(Statistics::Fermionic, 1.0, 0.0);
        let (w, omega) = (5.0, 1.2);
        // symmetric excision around the pole: ∫ over [-W, ω-δ] ∪ [ω+δ, W]
        let rho = b.base_rate / (2.0 * PI);
        let delta = 1e-3;
        let n = 200_000;
        let simpson = |a: f64, c: f64| {
            let h = (c - a) / n as f64;
            let f = |x: f64| rho / (omega - x);
            let mut s = f(a) + f(c);
            for k in 1..n {
                let x = a + k as f64 * h;
                s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(x);
            }
            s * h / 3.0
        };
        let pv = simpson(-w, omega - delta) + simpson(omega + delta, w);
        assert_abs_diff_eq!(lamb_shift(&b, omega, w).unwrap(), pv, epsilon = 1e-8);
        assert!(lamb_shift(&b, 2.0, w).unwrap() > lamb_shift(&b, 1.0, w).unwrap());
    }
}
