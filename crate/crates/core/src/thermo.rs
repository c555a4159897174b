//! Energy bookkeeping: heat and chemical work per bath, entropy production,
//! and the classification of two-terminal machines.
//!
//! Currents are positive when energy enters the bath.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, QOperator, HERMITIAN_TOL};
use crate::meq::{BathSpec, GeneratorBundle};
use crate::statmech::ENTROPY_CUTOFF;

/// Below this magnitude a current counts as zero when classifying.
pub const CURRENT_TOL: f64 = 1e-12;

/// Heat current `J` and chemical power `P` flowing into one bath.
#[derive(Debug, Clone, PartialEq)]
pub struct BathFlux {
    pub name: String,
    pub heat: f64,
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermoSnapshot {
    pub per_bath: Vec<BathFlux>,
    /// `d⟨H⟩/dt`
    pub energy_rate: f64,
    /// `dS_vN/dt`
    pub entropy_rate: f64,
    /// `dS_vN/dt + Σ_α J_α / T_α`
    pub entropy_production: f64,
}

impl ThermoSnapshot {
    pub fn flux(&self, name: &str) -> Option<&BathFlux> {
        self.per_bath.iter().find(|f| f.name == name)
    }

    pub fn total_power(&self) -> f64 {
        self.per_bath.iter().map(|f| f.power).sum()
    }

    pub fn total_heat(&self) -> f64 {
        self.per_bath.iter().map(|f| f.heat).sum()
    }
}

fn check_inputs(bundle: &GeneratorBundle, rho: &DensityMatrix, h: &QOperator, n: &QOperator) -> Result<()> {
    for op in [h, n] {
        if op.dim() != bundle.dim() {
            return Err(Error::DimensionMismatch {
                expected: bundle.dim(),
                found: op.dim(),
            });
        }
    }
    if rho.dim() != bundle.dim() {
        return Err(Error::DimensionMismatch {
            expected: bundle.dim(),
            found: rho.dim(),
        });
    }
    let comm = h.commutator(n).max_abs();
    if comm > HERMITIAN_TOL {
        return Err(Error::NonCommuting(comm));
    }
    Ok(())
}

/// `P_α = -μ_α Tr{N L_α ρ}` and `J_α = -Tr{(H - μ_α N) L_α ρ}` for every bath.
pub fn bath_fluxes(
    bundle: &GeneratorBundle,
    rho: &DensityMatrix,
    h: &QOperator,
    n: &QOperator,
    baths: &[BathSpec],
) -> Result<Vec<BathFlux>> {
    check_inputs(bundle, rho, h, n)?;
    baths
        .iter()
        .map(|bath| {
            let l = bundle
                .bath(&bath.name)
                .ok_or_else(|| Error::MissingBath(bath.name.clone()))?;
            let drho = l.apply(rho.op());
            let dn = drho.trace_product(n).re;
            let de = drho.trace_product(h).re;
            let mu = bath.mu();
            Ok(BathFlux {
                name: bath.name.clone(),
                heat: -(de - mu * dn),
                power: -mu * dn,
            })
        })
        .collect()
}

/// `-Tr{Lρ ln ρ}` evaluated in the eigenbasis of `rho`, ignoring eigenvalues
/// below the entropy cutoff.
pub fn entropy_rate(l_rho: &QOperator, rho: &DensityMatrix) -> f64 {
    let (p, v) = rho.op().hermitian_eigen();
    let rotated = v.adjoint() * l_rho.matrix() * &v;
    p.iter()
        .enumerate()
        .filter(|(_, &pi)| pi > ENTROPY_CUTOFF)
        .map(|(i, &pi)| -pi.ln() * rotated[(i, i)].re)
        .sum()
}

/// `J / T`, with a zero-temperature bath contributing `±∞` for any
/// non-negligible heat flow.
fn entropy_flow(heat: f64, bath: &BathSpec) -> f64 {
    if bath.ctx.is_zero_temperature() {
        if heat.abs() <= CURRENT_TOL {
            0.0
        } else {
            heat.signum() * f64::INFINITY
        }
    } else {
        bath.ctx.beta * heat
    }
}

/// Full thermodynamic snapshot of `rho` under the bundle's generator.
pub fn currents(
    bundle: &GeneratorBundle,
    rho: &DensityMatrix,
    h: &QOperator,
    n: &QOperator,
    baths: &[BathSpec],
) -> Result<ThermoSnapshot> {
    let per_bath = bath_fluxes(bundle, rho, h, n, baths)?;
    let l_rho = bundle.total.apply(rho.op());
    let energy_rate = l_rho.trace_product(h).re;
    let entropy_rate = entropy_rate(&l_rho, rho);
    let entropy_production = entropy_rate
        + per_bath
            .iter()
            .zip(baths)
            .map(|(f, b)| entropy_flow(f.heat, b))
            .sum::<f64>();
    Ok(ThermoSnapshot {
        per_bath,
        energy_rate,
        entropy_rate,
        entropy_production,
    })
}

/// `Σ = dS_vN/dt + Σ_α J_α / T_α`
pub fn entropy_production(
    bundle: &GeneratorBundle,
    rho: &DensityMatrix,
    h: &QOperator,
    n: &QOperator,
    baths: &[BathSpec],
) -> Result<f64> {
    Ok(currents(bundle, rho, h, n, baths)?.entropy_production)
}

/// `|d⟨H⟩/dt + Σ_α (J_α + P_α)|`
pub fn first_law_residual(
    bundle: &GeneratorBundle,
    rho: &DensityMatrix,
    h: &QOperator,
    n: &QOperator,
    baths: &[BathSpec],
) -> Result<f64> {
    let s = currents(bundle, rho, h, n, baths)?;
    Ok((s.energy_rate + s.total_heat() + s.total_power()).abs())
}

/// Operating regimes of a machine between a cold and a hot bath.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    HeatEngine,
    Refrigerator,
    /// Both baths absorb heat; work is dissipated.
    Heater,
    /// Heat flows from hot to cold while work is also dissipated.
    DualDissipator,
    /// All currents vanish; efficiencies take their Carnot values.
    ReversiblePoint,
    /// Sign pattern not allowed in a steady state (transients only).
    Unclassified,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::HeatEngine => "heat_engine",
            Regime::Refrigerator => "refrigerator",
            Regime::Heater => "heater",
            Regime::DualDissipator => "dual_dissipator",
            Regime::ReversiblePoint => "reversible_point",
            Regime::Unclassified => "unclassified",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Performance {
    pub regime: Regime,
    pub heat_cold: f64,
    pub heat_hot: f64,
    /// Work delivered by the machine; positive when it runs as an engine.
    pub extracted_power: f64,
    /// `P / (-J_H)`, engine regime only.
    pub eta: Option<f64>,
    /// `(-J_C) / (-P)`, refrigerator regime only.
    pub cop: Option<f64>,
    pub eta_carnot: f64,
    /// Absent when both temperatures coincide.
    pub cop_carnot: Option<f64>,
}

/// Classify a two-terminal machine from its heat currents and the work it
/// delivers.
pub fn classify(heat_cold: f64, heat_hot: f64, extracted_power: f64, t_cold: f64, t_hot: f64) -> Result<Performance> {
    if !(t_cold >= 0.0) || !(t_hot >= t_cold) || !t_hot.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= T_C <= T_H, got T_C = {t_cold}, T_H = {t_hot}"
        )));
    }
    let eta_carnot = if t_hot > 0.0 { 1.0 - t_cold / t_hot } else { 0.0 };
    let cop_carnot = (t_hot > t_cold).then(|| t_cold / (t_hot - t_cold));
    let (jc, jh, p) = (heat_cold, heat_hot, extracted_power);
    let zero = |x: f64| x.abs() <= CURRENT_TOL;
    let mut perf = Performance {
        regime: Regime::Unclassified,
        heat_cold: jc,
        heat_hot: jh,
        extracted_power: p,
        eta: None,
        cop: None,
        eta_carnot,
        cop_carnot,
    };
    if zero(jc) && zero(jh) && zero(p) {
        perf.regime = Regime::ReversiblePoint;
        perf.eta = Some(eta_carnot);
        perf.cop = cop_carnot;
    } else if p > CURRENT_TOL && jh < 0.0 {
        perf.regime = Regime::HeatEngine;
        perf.eta = Some(p / -jh);
    } else if jc < -CURRENT_TOL && jh > 0.0 && p < 0.0 {
        perf.regime = Regime::Refrigerator;
        perf.cop = Some(-jc / -p);
    } else if jc >= -CURRENT_TOL && jh >= -CURRENT_TOL {
        perf.regime = Regime::Heater;
    } else if jh < 0.0 && jc > 0.0 && p <= CURRENT_TOL {
        perf.regime = Regime::DualDissipator;
    }
    Ok(perf)
}

/// Classify a snapshot with exactly two baths; the colder one is `C`. The
/// extracted power is the chemical work delivered into the baths.
pub fn classify_regime(snapshot: &ThermoSnapshot, baths: &[BathSpec]) -> Result<Performance> {
    if baths.len() != 2 {
        return Err(Error::BathCount {
            expected: 2,
            found: baths.len(),
        });
    }
    let (cold, hot) = if baths[0].temperature() <= baths[1].temperature() {
        (&baths[0], &baths[1])
    } else {
        (&baths[1], &baths[0])
    };
    let flux = |b: &BathSpec| {
        snapshot
            .flux(&b.name)
            .ok_or_else(|| Error::MissingBath(b.name.clone()))
    };
    let (fc, fh) = (flux(cold)?, flux(hot)?);
    classify(fc.heat, fh.heat, fc.power + fh.power, cold.temperature(), hot.temperature())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ops::fermion_annihilation;
    use crate::linalg::steady_state;
    use crate::meq::{build_secular, BuildOptions, Coupling};
    use crate::statmech::{fermi_dirac, ThermalContext};
    use approx::assert_abs_diff_eq;

    fn lead(name: &str, t: f64, mu: f64, kappa: f64) -> BathSpec {
        let ctx = ThermalContext::from_temperature(t, mu).unwrap();
        BathSpec::fermionic(name, ctx, kappa, vec![Coupling::lowering(fermion_annihilation())]).unwrap()
    }

    fn dot(eps: f64) -> (QOperator, QOperator) {
        (QOperator::from_real_diagonal(&[0.0, eps]), QOperator::from_real_diagonal(&[0.0, 1.0]))
    }

    #[test]
    fn single_bath_heat_current() {
        let (eps, t, mu, kappa, p1) = (1.2, 0.7, 0.3, 0.9, 0.8);
        let (h, n) = dot(eps);
        let baths = [lead("B", t, mu, kappa)];
        let bundle = build_secular(&h, &baths, BuildOptions::default()).unwrap();
        let rho = DensityMatrix::diagonal(&[1.0 - p1, p1]).unwrap();
        let s = currents(&bundle, &rho, &h, &n, &baths).unwrap();
        let nf = fermi_dirac(eps, &baths[0].ctx);
        assert_abs_diff_eq!(s.per_bath[0].heat, (eps - mu) * kappa * (p1 - nf), epsilon = 1e-14);
        assert_abs_diff_eq!(s.per_bath[0].power, mu * kappa * (p1 - nf), epsilon = 1e-14);
        assert!(first_law_residual(&bundle, &rho, &h, &n, &baths).unwrap() < 1e-14);
    }

    #[test]
    fn equilibrium_has_no_currents() {
        let (h, n) = dot(0.4);
        let baths = [lead("C", 0.5, 0.1, 1.0), lead("H", 0.5, 0.1, 0.3)];
        let bundle = build_secular(&h, &baths, BuildOptions::default()).unwrap();
        let rho = steady_state(&bundle.total).unwrap();
        let s = currents(&bundle, &rho, &h, &n, &baths).unwrap();
        for f in &s.per_bath {
            assert!(f.heat.abs() < 1e-12 && f.power.abs() < 1e-12);
        }
        assert!(s.entropy_production.abs() < 1e-12);
        let perf = classify_regime(&s, &baths).unwrap();
        assert_eq!(perf.regime, Regime::ReversiblePoint);
        assert_eq!(perf.cop_carnot, None);
    }

    #[test]
    fn missing_bath_is_an_error() {
        let (h, n) = dot(0.4);
        let baths = [lead("C", 0.5, 0.1, 1.0)];
        let bundle = build_secular(&h, &baths, BuildOptions::default()).unwrap();
        let other = [lead("X", 0.5, 0.1, 1.0)];
        let rho = DensityMatrix::maximally_mixed(2);
        assert_eq!(
            bath_fluxes(&bundle, &rho, &h, &n, &other),
            Err(Error::MissingBath("X".into()))
        );
        let s = currents(&bundle, &rho, &h, &n, &baths).unwrap();
        assert!(matches!(classify_regime(&s, &baths), Err(Error::BathCount { found: 1, .. })));
    }

    #[test]
    fn regime_table() {
        let (tc, th) = (0.3, 0.8);
        let r = |jc, jh, p| classify(jc, jh, p, tc, th).unwrap();
        let engine = r(0.6, -1.0, 0.4);
        assert_eq!(engine.regime, Regime::HeatEngine);
        assert_abs_diff_eq!(engine.eta.unwrap(), 0.4);
        let fridge = r(-0.2, 0.5, -0.3);
        assert_eq!(fridge.regime, Regime::Refrigerator);
        assert_abs_diff_eq!(fridge.cop.unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(r(0.2, 0.1, -0.3).regime, Regime::Heater);
        assert_eq!(r(0.5, -0.2, -0.3).regime, Regime::DualDissipator);
        assert_eq!(r(-0.5, 0.2, 0.7).regime, Regime::Unclassified);
        assert_abs_diff_eq!(engine.eta_carnot, 0.625);
        assert_abs_diff_eq!(engine.cop_carnot.unwrap(), 0.6);
        assert!(classify(0.0, 0.0, 0.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn entropy_rate_ignores_empty_levels() {
        let rho = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let l_rho = QOperator::from_real_diagonal(&[-0.1, 0.1]);
        assert_eq!(entropy_rate(&l_rho, &rho), 0.0);
        let mixed = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        let expected = -(0.25f64.ln() * -0.1 + 0.75f64.ln() * 0.1);
        assert_abs_diff_eq!(entropy_rate(&l_rho, &mixed), expected, epsilon = 1e-15);
    }
}
