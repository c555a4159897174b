//! Single spinless level tunnel-coupled to fermionic leads.

use crate::error::{Error, Result};
use crate::linalg::ops::fermion_annihilation;
use crate::linalg::QOperator;
use crate::meq::{build, BathSpec, BuildOptions, Coupling, GeneratorBundle, Scheme};
use crate::statmech::{fermi_dirac, ThermalContext};
use crate::thermo::{classify, Performance};

/// `(H, N)` of the dot on `{|empty⟩, |occupied⟩}`.
pub fn dot_operators(eps_d: f64) -> (QOperator, QOperator) {
    (
        QOperator::from_real_diagonal(&[0.0, eps_d]).with_label("H_dot"),
        QOperator::from_real_diagonal(&[0.0, 1.0]).with_label("N_dot"),
    )
}

/// A flat-band lead tunnelling into the dot level at rate `kappa`.
pub fn dot_lead(name: &str, eps_d: f64, kappa: f64, ctx: ThermalContext) -> Result<BathSpec> {
    BathSpec::fermionic(
        name,
        ctx,
        kappa,
        vec![Coupling::lowering(fermion_annihilation()).at_frequency(eps_d)],
    )
}

/// Closed-form relaxation of the dot towards equilibrium with one lead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotRelaxation {
    pub p1: f64,
    pub power: f64,
    pub heat: f64,
    pub entropy_production: f64,
}

/// Occupation, chemical power, heat current and entropy production at time
/// `t` for a dot started with occupation `p1_0`.
pub fn dot_relaxation(p1_0: f64, kappa: f64, ctx: ThermalContext, eps_d: f64, t: f64) -> Result<DotRelaxation> {
    if !(0.0..=1.0).contains(&p1_0) {
        return Err(Error::InvalidParameter(format!("initial occupation {p1_0}")));
    }
    if !(t >= 0.0) || !(kappa > 0.0) {
        return Err(Error::InvalidParameter(format!("need t >= 0 and kappa > 0, got {t}, {kappa}")));
    }
    let nf = fermi_dirac(eps_d, &ctx);
    let decay = (-kappa * t).exp();
    let delta = decay * (p1_0 - nf);
    let flow = kappa * delta;
    let entropy_production = if delta == 0.0 {
        0.0
    } else if ctx.is_zero_temperature() {
        f64::INFINITY
    } else {
        flow * (((delta + nf) * (1.0 - nf)) / ((1.0 - nf - delta) * nf)).ln()
    };
    Ok(DotRelaxation {
        p1: nf + delta,
        power: ctx.mu * flow,
        heat: (eps_d - ctx.mu) * flow,
        entropy_production,
    })
}

/// Dot between a cold and a hot lead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotEngineParams {
    pub eps_d: f64,
    pub kappa_c: f64,
    pub kappa_h: f64,
    pub ctx_c: ThermalContext,
    pub ctx_h: ThermalContext,
}

impl DotEngineParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa_c > 0.0 && self.kappa_h > 0.0) {
            return Err(Error::InvalidParameter("lead rates must be positive".into()));
        }
        if self.ctx_c.temperature() > self.ctx_h.temperature() {
            return Err(Error::InvalidParameter(format!(
                "cold lead is hotter than the hot lead ({} > {})",
                self.ctx_c.temperature(),
                self.ctx_h.temperature()
            )));
        }
        Ok(())
    }

    /// `(H, N, [cold, hot])` for the numeric pipeline.
    pub fn system(&self) -> Result<(QOperator, QOperator, Vec<BathSpec>)> {
        self.validate()?;
        let (h, n) = dot_operators(self.eps_d);
        let baths = vec![
            dot_lead("C", self.eps_d, self.kappa_c, self.ctx_c)?,
            dot_lead("H", self.eps_d, self.kappa_h, self.ctx_h)?,
        ];
        Ok((h, n, baths))
    }

    pub fn generator(&self, scheme: Scheme, opts: BuildOptions) -> Result<GeneratorBundle> {
        let (h, _, baths) = self.system()?;
        build(scheme, &h, &baths, opts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotEngineSteady {
    /// Mean occupation `n̄`.
    pub occupation: f64,
    /// Particle current from the hot into the cold lead.
    pub particle_current: f64,
    pub heat_cold: f64,
    pub heat_hot: f64,
    pub entropy_production: f64,
    pub performance: Performance,
}

impl DotEngineSteady {
    /// Chemical work delivered into the leads.
    pub fn power(&self) -> f64 {
        self.performance.extracted_power
    }
}

/// Closed-form steady state of the two-lead dot.
pub fn dot_engine_steady(p: &DotEngineParams) -> Result<DotEngineSteady> {
    p.validate()?;
    let nc = fermi_dirac(p.eps_d, &p.ctx_c);
    let nh = fermi_dirac(p.eps_d, &p.ctx_h);
    let ksum = p.kappa_c + p.kappa_h;
    let occupation = (p.kappa_c * nc + p.kappa_h * nh) / ksum;
    let current = p.kappa_c * p.kappa_h / ksum * (nh - nc);
    let power = (p.ctx_c.mu - p.ctx_h.mu) * current;
    let heat_cold = (p.eps_d - p.ctx_c.mu) * current;
    let heat_hot = -(p.eps_d - p.ctx_h.mu) * current;
    let flow = |beta: f64, x: f64| if x == 0.0 { 0.0 } else { beta * x };
    let entropy_production = flow(p.ctx_c.beta, heat_cold) + flow(p.ctx_h.beta, heat_hot);
    let performance = classify(heat_cold, heat_hot, power, p.ctx_c.temperature(), p.ctx_h.temperature())?;
    Ok(DotEngineSteady {
        occupation,
        particle_current: current,
        heat_cold,
        heat_hot,
        entropy_production,
        performance,
    })
}

/// Level position at which both leads have equal occupation, where the
/// machine is reversible: `(μ_C T_H − μ_H T_C) / (T_H − T_C)`.
pub fn reversible_level(mu_c: f64, mu_h: f64, t_c: f64, t_h: f64) -> Option<f64> {
    (t_h > t_c).then(|| (mu_c * t_h - mu_h * t_c) / (t_h - t_c))
}
