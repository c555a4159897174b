//! Side-by-side evaluation of the three generator schemes.

use crate::config::{ModelKind, Scenario, SchemeChoice};
use crate::error::CliError;
use crate::output::{format_number, Table};
use crate::runner::{run_points, Cell, Params, Record};

const SCHEMES: [SchemeChoice; 3] = [SchemeChoice::Secular, SchemeChoice::Local, SchemeChoice::Perlind];

/// One row per point and scheme, grouped by point, followed by the largest
/// pairwise differences of every numeric column and a negative-Σ check.
pub fn compare_generators(scenario: &Scenario) -> Result<Table, CliError> {
    let c = &scenario.config;
    if c.model == ModelKind::TwoModeEngine {
        return Err(CliError::Config(format!("model {:?} only has the local scheme", c.model)));
    }
    let runs: Vec<Vec<(Params, Record)>> = SCHEMES
        .iter()
        .map(|&s| run_points(scenario, s))
        .collect::<Result<_, _>>()?;
    let mut columns = vec!["scheme".to_string()];
    columns.extend(c.outputs.iter().cloned());

    let n_points = runs[0].len();
    let mut rows = Vec::with_capacity(3 * n_points);
    for k in 0..n_points {
        for (scheme, run) in SCHEMES.iter().zip(&runs) {
            let (p, r) = &run[k];
            let mut row = vec![Cell::Text(scheme.to_string())];
            row.extend(c.outputs.iter().map(|col| r.cell(col, p)));
            rows.push(row);
        }
    }

    let mut footer = Vec::new();
    let quantities: Vec<&String> = c.outputs.iter().filter(|o| !c.model.is_parameter(o)).collect();
    for a in 0..3 {
        for b in a + 1..3 {
            let mut parts = Vec::new();
            for col in &quantities {
                let mut worst: Option<f64> = None;
                for k in 0..n_points {
                    let (pa, ra) = &runs[a][k];
                    let (pb, rb) = &runs[b][k];
                    if let (Cell::Num(x), Cell::Num(y)) = (ra.cell(col, pa), rb.cell(col, pb)) {
                        if x.is_finite() && y.is_finite() {
                            worst = Some(worst.unwrap_or(0.0).max((x - y).abs()));
                        }
                    }
                }
                if let Some(w) = worst {
                    parts.push(format!("{col} {}", format_number(w)));
                }
            }
            if !parts.is_empty() {
                footer.push(format!("max |{} - {}|: {}", SCHEMES[a], SCHEMES[b], parts.join(", ")));
            }
        }
    }
    for (scheme, run) in SCHEMES.iter().zip(&runs) {
        let negative: Vec<f64> = run.iter().filter_map(|(_, r)| r.sigma).filter(|&s| s < -1e-12).collect();
        if !negative.is_empty() {
            let min = negative.iter().copied().fold(f64::INFINITY, f64::min);
            footer.push(format!(
                "negative Sigma: {scheme} at {} of {n_points} points (min {})",
                negative.len(),
                format_number(min)
            ));
        }
    }
    if footer.iter().all(|l| !l.starts_with("negative")) {
        footer.push("negative Sigma: none".into());
    }
    Ok(Table { columns, rows, footer })
}
