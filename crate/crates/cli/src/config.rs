//! Scenario files: parsing, defaults and validation.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    DotSingle,
    DotEngine,
    Entangler,
    QubitBoson,
    TwoModeEngine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeChoice {
    Secular,
    Local,
    Perlind,
    Analytic,
}

impl fmt::Display for SchemeChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeChoice::Secular => "secular",
            SchemeChoice::Local => "local",
            SchemeChoice::Perlind => "perlind",
            SchemeChoice::Analytic => "analytic",
        })
    }
}

/// Linear sweep of one parameter, endpoints included.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.to
                } else {
                    self.from + (self.to - self.from) * k as f64 / (self.steps - 1) as f64
                }
            })
            .collect()
    }
}

/// Repeats the whole sweep for each listed value of a second parameter.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Series {
    pub param: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: ModelKind,
    #[serde(default = "default_scheme")]
    pub scheme: SchemeChoice,
    #[serde(default)]
    pub lamb_shift: bool,
    /// Free-text remark echoed into the output header.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub outputs: Vec<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Series>,
}

fn default_scheme() -> SchemeChoice {
    SchemeChoice::Analytic
}

#[derive(Debug, Clone, Copy)]
enum Param {
    Required,
    Default(f64),
    Optional,
}

/// Quantities a row can report, besides the model parameters themselves.
pub const QUANTITIES: [&str; 13] = [
    "P_extracted",
    "J_C",
    "J_H",
    "J_B",
    "P_B",
    "Sigma",
    "eta",
    "eta_C",
    "cop",
    "cop_C",
    "concurrence",
    "p1",
    "regime",
];

impl ModelKind {
    fn params(self) -> &'static [(&'static str, Param)] {
        use Param::*;
        match self {
            ModelKind::DotSingle => &[
                ("eps_d", Required),
                ("kappa", Default(1.0)),
                ("t", Required),
                ("mu", Default(0.0)),
                ("p1_0", Default(0.0)),
                ("time", Optional),
                ("band_half_width", Optional),
            ],
            ModelKind::DotEngine => &[
                ("eps_d", Required),
                ("kappa_c", Default(1.0)),
                ("kappa_h", Default(1.0)),
                ("t_c", Required),
                ("t_h", Required),
                ("mu_c", Default(0.0)),
                ("mu_h", Default(0.0)),
                ("band_half_width", Optional),
            ],
            ModelKind::Entangler => &[
                ("eps_s", Default(1.0)),
                ("g", Required),
                ("kappa_prime_c", Required),
                ("kappa_prime_h", Required),
                ("t_c", Required),
                ("t_h", Required),
                ("band_half_width", Optional),
            ],
            ModelKind::QubitBoson => &[
                ("eps_s", Default(1.0)),
                ("kappa", Default(1.0)),
                ("t", Required),
                ("p1_0", Default(0.0)),
                ("time", Optional),
                ("band_half_width", Optional),
            ],
            ModelKind::TwoModeEngine => &[
                ("omega_c", Required),
                ("omega_h", Required),
                ("g", Required),
                ("kappa_c", Required),
                ("kappa_h", Required),
                ("t_c", Required),
                ("t_h", Required),
                ("fock_cutoff", Default(qtherm::models::DEFAULT_FOCK_CUTOFF as f64)),
            ],
        }
    }

    fn supports(self, scheme: SchemeChoice) -> bool {
        match self {
            ModelKind::TwoModeEngine => matches!(scheme, SchemeChoice::Local | SchemeChoice::Analytic),
            _ => true,
        }
    }

    pub fn is_parameter(self, name: &str) -> bool {
        self.params().iter().any(|(p, _)| *p == name)
    }
}

/// A validated scenario with defaults filled in.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
}

impl Scenario {
    pub fn parse(src: &str) -> Result<Self, CliError> {
        let mut config: ScenarioConfig = toml::from_str(src).map_err(|e| CliError::Config(e.to_string()))?;
        let err = |key: &str, msg: String| CliError::Config(locate(src, key, msg));
        let model = config.model;

        if !model.supports(config.scheme) {
            return Err(err("scheme", format!("model {model:?} has no `{}` scheme", config.scheme)));
        }
        if config.lamb_shift {
            if config.scheme == SchemeChoice::Analytic || model == ModelKind::TwoModeEngine {
                return Err(err(
                    "lamb_shift",
                    format!("the Lamb shift needs a numeric scheme, not `{}`", config.scheme),
                ));
            }
            if !config.params.contains_key("band_half_width") {
                return Err(err("lamb_shift", "the Lamb shift needs `band_half_width` in [params]".into()));
            }
        }
        for (name, value) in &config.params {
            if !model.is_parameter(name) {
                return Err(err(name, format!("unknown parameter `{name}` for model {model:?}")));
            }
            if !value.is_finite() {
                return Err(err(name, format!("parameter `{name}` must be finite")));
            }
        }
        for (name, spec) in model.params() {
            match spec {
                Param::Default(v) => {
                    config.params.entry(name.to_string()).or_insert(*v);
                }
                Param::Required => {
                    let swept = [config.sweep.as_ref().map(|s| &s.param), config.series.as_ref().map(|s| &s.param)]
                        .into_iter()
                        .flatten()
                        .any(|p| p == name);
                    if !config.params.contains_key(*name) && !swept {
                        return Err(err("params", format!("missing required parameter `{name}`")));
                    }
                }
                Param::Optional => {}
            }
        }
        if let Some(sweep) = &config.sweep {
            if !model.is_parameter(&sweep.param) {
                return Err(err("param", format!("sweep parameter `{}` is not a parameter of {model:?}", sweep.param)));
            }
            if sweep.steps < 2 {
                return Err(err("steps", format!("a sweep needs at least 2 steps, got {}", sweep.steps)));
            }
            if !(sweep.from.is_finite() && sweep.to.is_finite()) {
                return Err(err("from", "sweep endpoints must be finite".into()));
            }
        }
        if let Some(series) = &config.series {
            if !model.is_parameter(&series.param) {
                return Err(err("values", format!("series parameter `{}` is not a parameter of {model:?}", series.param)));
            }
            if series.values.is_empty() {
                return Err(err("values", "series needs at least one value".into()));
            }
            if config.sweep.as_ref().is_some_and(|s| s.param == series.param) {
                return Err(err("values", "series and sweep vary the same parameter".into()));
            }
        }
        if config.outputs.is_empty() {
            return Err(err("outputs", "no output columns requested".into()));
        }
        for col in &config.outputs {
            if !QUANTITIES.contains(&col.as_str()) && !model.is_parameter(col) {
                return Err(err("outputs", format!("unknown output column `{col}`")));
            }
        }
        Ok(Scenario { config })
    }

    /// Parameter sets in output order: series value outermost, then sweep.
    pub fn points(&self) -> Vec<BTreeMap<String, f64>> {
        let c = &self.config;
        let series: Vec<Option<f64>> = match &c.series {
            Some(s) => s.values.iter().copied().map(Some).collect(),
            None => vec![None],
        };
        let sweep: Vec<Option<f64>> = match &c.sweep {
            Some(s) => s.values().into_iter().map(Some).collect(),
            None => vec![None],
        };
        let mut out = Vec::with_capacity(series.len() * sweep.len());
        for s in &series {
            for w in &sweep {
                let mut p = c.params.clone();
                if let (Some(v), Some(spec)) = (s, &c.series) {
                    p.insert(spec.param.clone(), *v);
                }
                if let (Some(v), Some(spec)) = (w, &c.sweep) {
                    p.insert(spec.param.clone(), *v);
                }
                out.push(p);
            }
        }
        out
    }

    /// Parameters that vary between rows, used to name a failing point.
    pub fn varied(&self) -> Vec<&str> {
        let c = &self.config;
        [c.series.as_ref().map(|s| s.param.as_str()), c.sweep.as_ref().map(|s| s.param.as_str())]
            .into_iter()
            .flatten()
            .collect()
    }

    /// Resolved configuration as TOML.
    pub fn echo(&self) -> String {
        toml::to_string(&self.config).unwrap_or_default()
    }
}

/// Prefixes `msg` with the first line that assigns `key`, if any.
fn locate(src: &str, key: &str, msg: String) -> String {
    let line = src.lines().position(|l| {
        let t = l.trim_start();
        t.starts_with(&format!("[{key}]"))
            || t.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
    });
    match line {
        Some(k) => format!("line {}: {msg}", k + 1),
        None => msg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOT: &str = r#"
model = "dot_engine"
outputs = ["eps_d", "P_extracted"]

[params]
t_c = 0.3
t_h = 0.8
mu_c = 1.0

[sweep]
param = "eps_d"
from = -2.0
to = 6.0
steps = 5
"#;

    #[test]
    fn fills_defaults_and_sweeps() {
        let s = Scenario::parse(DOT).unwrap();
        assert_eq!(s.config.scheme, SchemeChoice::Analytic);
        assert_eq!(s.config.params["kappa_c"], 1.0);
        let pts = s.points();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[0]["eps_d"], -2.0);
        assert_eq!(pts[4]["eps_d"], 6.0);
        assert_eq!(pts[2]["eps_d"], 2.0);
    }

    #[test]
    fn series_is_outermost() {
        let src = format!("{DOT}\n[series]\nparam = \"t_c\"\nvalues = [0.1, 0.2]\n");
        let pts = Scenario::parse(&src).unwrap().points();
        assert_eq!(pts.len(), 10);
        assert_eq!((pts[4]["t_c"], pts[5]["t_c"]), (0.1, 0.2));
    }

    #[test]
    fn reports_offending_line() {
        let src = DOT.replace("mu_c = 1.0", "mu_x = 1.0");
        let msg = Scenario::parse(&src).unwrap_err().to_string();
        assert!(msg.contains("line 8") && msg.contains("mu_x"), "{msg}");
        let src = DOT.replace("steps = 5", "steps = 1");
        assert!(Scenario::parse(&src).unwrap_err().to_string().contains("line 14"));
        let src = DOT.replace("\"P_extracted\"", "\"power\"");
        assert!(Scenario::parse(&src).unwrap_err().to_string().contains("line 3"));
    }

    #[test]
    fn rejects_structural_errors() {
        for bad in [
            DOT.replace("dot_engine", "dot_triple"),
            DOT.replace("param = \"eps_d\"", "param = \"eps_x\""),
            DOT.replace("t_h = 0.8", ""),
            DOT.replace("model = \"dot_engine\"", "model = \"two_mode_engine\"\nscheme = \"secular\""),
            DOT.replace("outputs", "lamb_shift = true\noutputs"),
            format!("{DOT}\nextra = 1\n"),
        ] {
            assert!(matches!(Scenario::parse(&bad), Err(CliError::Config(_))), "{bad}");
        }
    }

    #[test]
    fn missing_required_is_fine_when_swept() {
        let src = DOT.replace("t_h = 0.8", "").replace("param = \"eps_d\"", "param = \"t_h\"");
        let src = src.replace("from = -2.0", "from = 0.4").replace("to = 6.0", "to = 1.0");
        let src = src.replace("t_c = 0.3", "t_c = 0.3\neps_d = 2.0");
        assert!(Scenario::parse(&src).is_ok());
    }
}
