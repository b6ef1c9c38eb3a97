//! Quantities with unit suffixes. Everything is normalised to seconds and Hz.

use toml::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Rate,
    Time,
    Number,
}

fn scale(kind: Kind, unit: &str) -> Option<f64> {
    match kind {
        Kind::Rate => match unit {
            "Hz" | "hz" | "/s" => Some(1.0),
            "kHz" | "khz" => Some(1e3),
            "MHz" | "mhz" => Some(1e6),
            "GHz" | "ghz" => Some(1e9),
            _ => None,
        },
        Kind::Time => match unit {
            "s" => Some(1.0),
            "ms" => Some(1e-3),
            "us" | "µs" | "μs" => Some(1e-6),
            "ns" => Some(1e-9),
            _ => None,
        },
        Kind::Number => None,
    }
}

/// Parses `"13.6 kHz"`, `"1ms"`, `"5 us"` or a bare number.
pub fn parse_quantity(field: &str, text: &str, kind: Kind) -> CliResult<f64> {
    let t = text.trim();
    let split = t
        .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')))
        .unwrap_or(t.len());
    let (num, unit) = t.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| CliError::spec(field, format!("cannot parse number in `{text}`")))?;
    let unit = unit.trim();
    let factor = if unit.is_empty() {
        1.0
    } else {
        scale(kind, unit).ok_or_else(|| CliError::spec(field, format!("unknown unit `{unit}`")))?
    };
    let v = value * factor;
    if !v.is_finite() {
        return Err(CliError::spec(field, "value must be finite"));
    }
    Ok(v)
}

pub fn quantity(field: &str, v: &Value, kind: Kind) -> CliResult<f64> {
    match v {
        Value::Integer(i) => Ok(*i as f64),
        Value::Float(f) if f.is_finite() => Ok(*f),
        Value::String(s) => parse_quantity(field, s, kind),
        _ => Err(CliError::spec(field, format!("expected a number, got `{v}`"))),
    }
}

pub fn quantity_list(field: &str, v: &Value, kind: Kind) -> CliResult<Vec<f64>> {
    match v {
        Value::Array(items) => items.iter().map(|x| quantity(field, x, kind)).collect(),
        Value::String(s) if s.contains(',') => s.split(',').map(|p| parse_quantity(field, p, kind)).collect(),
        other => Ok(vec![quantity(field, other, kind)?]),
    }
}
