//! CSV and JSON-lines rendering.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

use crate::config::Scenario;
use crate::runner::{Cell, Params, Record};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

/// A rendered table: column names, rows and trailing remarks.
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub footer: Vec<String>,
}

/// `x` with 12 significant digits, trailing zeros trimmed.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp).max(0) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, exponent) = s.split_once('e').unwrap();
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    }
}

fn cell_text(cell: &Cell) -> String {
    match cell {
        Cell::Num(x) => format_number(*x),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

fn cell_json(cell: &Cell) -> Value {
    match cell {
        Cell::Num(x) if x.is_finite() => format_number(*x)
            .parse::<f64>()
            .ok()
            .and_then(Number::from_f64)
            .map_or(Value::Null, Value::Number),
        Cell::Num(x) => Value::String(format_number(*x)),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Empty => Value::Null,
    }
}

pub fn table(scenario: &Scenario, rows: &[(Params, Record)]) -> Table {
    let columns = scenario.config.outputs.clone();
    let rows = rows
        .iter()
        .map(|(p, r)| columns.iter().map(|c| r.cell(c, p)).collect())
        .collect();
    Table {
        columns,
        rows,
        footer: Vec::new(),
    }
}

pub fn render(scenario: &Scenario, table: &Table, format: Format, mode: &str) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            let _ = writeln!(out, "# qtherm {mode}");
            for line in scenario.echo().lines() {
                let _ = writeln!(out, "# {line}");
            }
            let _ = writeln!(out, "{}", table.columns.join(","));
            for row in &table.rows {
                let _ = writeln!(out, "{}", row.iter().map(cell_text).collect::<Vec<_>>().join(","));
            }
            for line in &table.footer {
                let _ = writeln!(out, "# {line}");
            }
        }
        Format::Jsonl => {
            let mut head = Map::new();
            head.insert("mode".into(), Value::String(mode.into()));
            head.insert("config".into(), serde_json::to_value(&scenario.config).unwrap_or(Value::Null));
            let _ = writeln!(out, "{}", Value::Object(head));
            for row in &table.rows {
                // keys in declared column order
                let fields: Vec<String> = table
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| format!("{}:{}", Value::String(c.clone()), cell_json(v)))
                    .collect();
                let _ = writeln!(out, "{{{}}}", fields.join(","));
            }
            if !table.footer.is_empty() {
                let summary = Value::Array(table.footer.iter().cloned().map(Value::String).collect());
                let _ = writeln!(out, "{{\"summary\":{summary}}}");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(0.020706492178285), "0.0207064921783");
        assert_eq!(format_number(1.6), "1.6");
        assert_eq!(format_number(-2.0), "-2");
        assert_eq!(format_number(123456.7890123456), "123456.789012");
        assert_eq!(format_number(1e-4), "0.0001");
        assert_eq!(format_number(3.5e-9), "3.5e-9");
        assert_eq!(format_number(-1.234567890123456e15), "-1.23456789012e15");
        assert_eq!(format_number(f64::INFINITY), "inf");
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-1e-300), "-1e-300");
    }

    #[test]
    fn empty_cells_are_null_in_json() {
        assert_eq!(cell_json(&Cell::Empty), Value::Null);
        assert_eq!(cell_json(&Cell::Num(0.5)), serde_json::json!(0.5));
    }
}
