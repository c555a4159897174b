//! Evaluation of one scenario point and of whole sweeps.

use std::collections::BTreeMap;

use qtherm::entanglement::concurrence;
use qtherm::linalg::ops::{qubit_hamiltonian, sigma_minus};
use qtherm::linalg::{evolve, steady_state};
use qtherm::meq::{build, BathSpec, BuildOptions, Coupling, Scheme};
use qtherm::models::{
    dot_engine_steady, dot_lead, dot_operators, dot_relaxation, entangler_steady, two_mode_engine_steady,
    DotEngineParams, EntanglerParams, TwoModeEngineParams,
};
use qtherm::statmech::{bose_einstein, fermi_dirac, ThermalContext};
use qtherm::thermo::{classify_regime, currents, Performance, ThermoSnapshot};
use qtherm::{DensityMatrix, QOperator};
use rayon::prelude::*;

use crate::config::{ModelKind, Scenario, SchemeChoice};
use crate::error::CliError;

pub type Params = BTreeMap<String, f64>;

/// Everything a row can report. Quantities a model does not define stay `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    pub heat_cold: Option<f64>,
    pub heat_hot: Option<f64>,
    pub heat_bath: Option<f64>,
    pub power_bath: Option<f64>,
    pub sigma: Option<f64>,
    pub p1: Option<f64>,
    pub concurrence: Option<f64>,
    pub performance: Option<Performance>,
}

/// One output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Record {
    pub fn cell(&self, column: &str, params: &Params) -> Cell {
        let perf = self.performance.as_ref();
        let num = |x: Option<f64>| x.map_or(Cell::Empty, Cell::Num);
        match column {
            "P_extracted" => num(perf.map(|p| p.extracted_power)),
            "J_C" => num(self.heat_cold),
            "J_H" => num(self.heat_hot),
            "J_B" => num(self.heat_bath),
            "P_B" => num(self.power_bath),
            "Sigma" => num(self.sigma),
            "eta" => num(perf.and_then(|p| p.eta)),
            "eta_C" => num(perf.map(|p| p.eta_carnot)),
            "cop" => num(perf.and_then(|p| p.cop)),
            "cop_C" => num(perf.and_then(|p| p.cop_carnot)),
            "concurrence" => num(self.concurrence),
            "p1" => num(self.p1),
            "regime" => perf.map_or(Cell::Empty, |p| Cell::Text(p.regime.name().to_string())),
            param => num(params.get(param).copied()),
        }
    }

    fn from_snapshot(snapshot: &ThermoSnapshot, baths: &[BathSpec]) -> qtherm::Result<Self> {
        Ok(Record {
            heat_cold: snapshot.flux("C").map(|f| f.heat),
            heat_hot: snapshot.flux("H").map(|f| f.heat),
            sigma: Some(snapshot.entropy_production),
            performance: Some(classify_regime(snapshot, baths)?),
            ..Record::default()
        })
    }
}

fn numeric_scheme(choice: SchemeChoice) -> Option<Scheme> {
    match choice {
        SchemeChoice::Secular => Some(Scheme::Secular),
        SchemeChoice::Local => Some(Scheme::Local),
        SchemeChoice::Perlind => Some(Scheme::Perlind),
        SchemeChoice::Analytic => None,
    }
}

struct Point<'a> {
    params: &'a Params,
}

impl Point<'_> {
    fn get(&self, name: &str) -> f64 {
        self.params[name]
    }

    fn opt(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }

    fn ctx(&self, t: &str, mu: Option<&str>) -> qtherm::Result<ThermalContext> {
        ThermalContext::from_temperature(self.get(t), mu.map_or(0.0, |m| self.get(m)))
    }

    fn banded(&self, baths: Vec<BathSpec>) -> Vec<BathSpec> {
        match self.opt("band_half_width") {
            Some(w) => baths.into_iter().map(|b| b.with_band(w)).collect(),
            None => baths,
        }
    }
}

/// State at `time`, or the steady state when no time is given.
fn state_at(
    l: &qtherm::Superoperator,
    p1_0: f64,
    time: Option<f64>,
) -> qtherm::Result<DensityMatrix> {
    match time {
        Some(t) => evolve(l, &DensityMatrix::diagonal(&[1.0 - p1_0, p1_0])?, t),
        None => steady_state(l),
    }
}

/// Single-bath record from the numeric pipeline.
fn single_bath(
    h: &QOperator,
    n: &QOperator,
    bath: BathSpec,
    scheme: Scheme,
    opts: BuildOptions,
    p1_0: f64,
    time: Option<f64>,
) -> qtherm::Result<Record> {
    let baths = [bath];
    let bundle = build(scheme, h, &baths, opts)?;
    let rho = state_at(&bundle.total, p1_0, time)?;
    let s = currents(&bundle, &rho, h, n, &baths)?;
    Ok(Record {
        heat_bath: Some(s.per_bath[0].heat),
        power_bath: Some(s.per_bath[0].power),
        sigma: Some(s.entropy_production),
        p1: Some(rho.populations()[1]),
        ..Record::default()
    })
}

/// Closed-form relaxation of a qubit coupled to a bosonic bath at `μ = 0`.
fn qubit_relaxation(eps: f64, kappa: f64, ctx: &ThermalContext, p1_0: f64, time: Option<f64>) -> qtherm::Result<Record> {
    let nb = bose_einstein(eps, ctx)?;
    let gamma = kappa * (1.0 + 2.0 * nb);
    let p_eq = nb / (1.0 + 2.0 * nb);
    let p1 = match time {
        Some(t) => p_eq + (p1_0 - p_eq) * (-gamma * t).exp(),
        None => p_eq,
    };
    let excess = p1 - p_eq;
    let sigma = if excess == 0.0 {
        0.0
    } else {
        let logit = |p: f64| (p / (1.0 - p)).ln();
        gamma * excess * (logit(p1) - logit(p_eq))
    };
    Ok(Record {
        heat_bath: Some(eps * gamma * excess),
        power_bath: Some(0.0),
        sigma: Some(sigma),
        p1: Some(p1),
        ..Record::default()
    })
}

/// Evaluates one parameter set.
pub fn evaluate(model: ModelKind, choice: SchemeChoice, lamb_shift: bool, params: &Params) -> qtherm::Result<Record> {
    let pt = Point { params };
    let opts = BuildOptions {
        lamb_shift,
        ..BuildOptions::default()
    };
    let scheme = numeric_scheme(choice);
    match model {
        ModelKind::DotSingle => {
            let (eps, kappa) = (pt.get("eps_d"), pt.get("kappa"));
            let ctx = pt.ctx("t", Some("mu"))?;
            let (p1_0, time) = (pt.get("p1_0"), pt.opt("time"));
            match scheme {
                None => match time {
                    Some(t) => {
                        let r = dot_relaxation(p1_0, kappa, ctx, eps, t)?;
                        Ok(Record {
                            heat_bath: Some(r.heat),
                            power_bath: Some(r.power),
                            sigma: Some(r.entropy_production),
                            p1: Some(r.p1),
                            ..Record::default()
                        })
                    }
                    None => Ok(Record {
                        heat_bath: Some(0.0),
                        power_bath: Some(0.0),
                        sigma: Some(0.0),
                        p1: Some(fermi_dirac(eps, &ctx)),
                        ..Record::default()
                    }),
                },
                Some(scheme) => {
                    let (h, n) = dot_operators(eps);
                    let bath = pt.banded(vec![dot_lead("B", eps, kappa, ctx)?]).remove(0);
                    single_bath(&h, &n, bath, scheme, opts, p1_0, time)
                }
            }
        }
        ModelKind::QubitBoson => {
            let (eps, kappa) = (pt.get("eps_s"), pt.get("kappa"));
            let ctx = pt.ctx("t", None)?;
            let (p1_0, time) = (pt.get("p1_0"), pt.opt("time"));
            match scheme {
                None => qubit_relaxation(eps, kappa, &ctx, p1_0, time),
                Some(scheme) => {
                    let bath = BathSpec::bosonic("B", ctx, kappa, vec![Coupling::lowering(sigma_minus()).at_frequency(eps)])?;
                    let bath = pt.banded(vec![bath]).remove(0);
                    let h = qubit_hamiltonian(eps);
                    single_bath(&h, &QOperator::zeros(2), bath, scheme, opts, p1_0, time)
                }
            }
        }
        ModelKind::DotEngine => {
            let p = DotEngineParams {
                eps_d: pt.get("eps_d"),
                kappa_c: pt.get("kappa_c"),
                kappa_h: pt.get("kappa_h"),
                ctx_c: pt.ctx("t_c", Some("mu_c"))?,
                ctx_h: pt.ctx("t_h", Some("mu_h"))?,
            };
            match scheme {
                None => {
                    let s = dot_engine_steady(&p)?;
                    Ok(Record {
                        heat_cold: Some(s.heat_cold),
                        heat_hot: Some(s.heat_hot),
                        sigma: Some(s.entropy_production),
                        p1: Some(s.occupation),
                        performance: Some(s.performance),
                        ..Record::default()
                    })
                }
                Some(scheme) => {
                    let (h, n, baths) = p.system()?;
                    let baths = pt.banded(baths);
                    let bundle = build(scheme, &h, &baths, opts)?;
                    let rho = steady_state(&bundle.total)?;
                    let s = currents(&bundle, &rho, &h, &n, &baths)?;
                    Ok(Record {
                        p1: Some(rho.populations()[1]),
                        ..Record::from_snapshot(&s, &baths)?
                    })
                }
            }
        }
        ModelKind::Entangler => {
            let p = EntanglerParams {
                eps_s: pt.get("eps_s"),
                g: pt.get("g"),
                kappa_prime_c: pt.get("kappa_prime_c"),
                kappa_prime_h: pt.get("kappa_prime_h"),
                t_c: pt.get("t_c"),
                t_h: pt.get("t_h"),
            };
            let baths = pt.banded(p.baths()?);
            // the closed form is the stationary state of the local generator
            let bundle = build(scheme.unwrap_or(Scheme::Local), &p.hamiltonian(), &baths, opts)?;
            let rho = match scheme {
                None => entangler_steady(&p)?,
                Some(_) => steady_state(&bundle.total)?,
            };
            let s = currents(&bundle, &rho, &p.hamiltonian(), &p.number_operator(), &baths)?;
            Ok(Record {
                concurrence: Some(concurrence(&rho)?.value),
                ..Record::from_snapshot(&s, &baths)?
            })
        }
        ModelKind::TwoModeEngine => {
            let cutoff = pt.get("fock_cutoff");
            if cutoff.fract() != 0.0 || cutoff < 2.0 {
                return Err(qtherm::Error::InvalidParameter(format!("fock_cutoff {cutoff} is not an integer >= 2")));
            }
            let p = TwoModeEngineParams {
                omega_c: pt.get("omega_c"),
                omega_h: pt.get("omega_h"),
                g: pt.get("g"),
                kappa_c: pt.get("kappa_c"),
                kappa_h: pt.get("kappa_h"),
                t_c: pt.get("t_c"),
                t_h: pt.get("t_h"),
                fock_cutoff: cutoff as usize,
            };
            let s = two_mode_engine_steady(&p)?;
            let flow = |t: f64, j: f64| if j == 0.0 { 0.0 } else { j / t };
            Ok(Record {
                heat_cold: Some(s.heat_cold),
                heat_hot: Some(s.heat_hot),
                sigma: Some(flow(p.t_c, s.heat_cold) + flow(p.t_h, s.heat_hot)),
                performance: Some(s.performance),
                ..Record::default()
            })
        }
    }
}

fn describe(params: &Params, varied: &[&str]) -> String {
    if varied.is_empty() {
        return "the single point".to_string();
    }
    varied
        .iter()
        .map(|k| format!("{k} = {}", params[*k]))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Evaluates every point of the scenario with `choice`, in parallel. Results
/// come back in sweep order; the first failure in that order is reported.
pub fn run_points(scenario: &Scenario, choice: SchemeChoice) -> Result<Vec<(Params, Record)>, CliError> {
    let c = &scenario.config;
    let points = scenario.points();
    let results: Vec<qtherm::Result<Record>> = points
        .par_iter()
        .map(|p| evaluate(c.model, choice, c.lamb_shift, p))
        .collect();
    let varied = scenario.varied();
    points
        .into_iter()
        .zip(results)
        .map(|(p, r)| match r {
            Ok(rec) => Ok((p, rec)),
            Err(e) => Err(CliError::Solver(format!("{} at {}: {e}", choice, describe(&p, &varied)))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, f64)]) -> Params {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn qubit_closed_form_matches_pipeline() {
        let p = params(&[("eps_s", 1.2), ("kappa", 0.3), ("t", 0.7), ("p1_0", 0.9), ("time", 1.5)]);
        let closed = evaluate(ModelKind::QubitBoson, SchemeChoice::Analytic, false, &p).unwrap();
        let numeric = evaluate(ModelKind::QubitBoson, SchemeChoice::Secular, false, &p).unwrap();
        for (a, b) in [
            (closed.p1, numeric.p1),
            (closed.heat_bath, numeric.heat_bath),
            (closed.sigma, numeric.sigma),
        ] {
            assert!((a.unwrap() - b.unwrap()).abs() < 1e-12, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn dot_engine_schemes_agree_with_closed_form() {
        let p = params(&[
            ("eps_d", 2.0),
            ("kappa_c", 1.0),
            ("kappa_h", 1.0),
            ("t_c", 0.3),
            ("t_h", 0.8),
            ("mu_c", 1.0),
            ("mu_h", 0.0),
        ]);
        let closed = evaluate(ModelKind::DotEngine, SchemeChoice::Analytic, false, &p).unwrap();
        for choice in [SchemeChoice::Secular, SchemeChoice::Local, SchemeChoice::Perlind] {
            let r = evaluate(ModelKind::DotEngine, choice, false, &p).unwrap();
            let (a, b) = (r.performance.unwrap(), closed.performance.unwrap());
            assert!((a.extracted_power - b.extracted_power).abs() < 1e-14);
            assert_eq!(a.regime, b.regime);
        }
    }

    #[test]
    fn absent_quantities_are_empty() {
        let p = params(&[("eps_d", 0.5), ("kappa", 1.0), ("t", 0.5), ("mu", 0.0), ("p1_0", 0.0)]);
        let r = evaluate(ModelKind::DotSingle, SchemeChoice::Analytic, false, &p).unwrap();
        assert_eq!(r.cell("eta", &p), Cell::Empty);
        assert_eq!(r.cell("concurrence", &p), Cell::Empty);
        assert_eq!(r.cell("eps_d", &p), Cell::Num(0.5));
        assert_eq!(r.cell("time", &p), Cell::Empty);
    }
}
