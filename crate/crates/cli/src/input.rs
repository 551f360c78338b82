//! Series and measure definitions from builtin names, inline JSON or files.

use std::collections::BTreeMap;
use std::path::Path;

use bidisk::capacity::FourierMeasure;
use bidisk::{DiagonalPattern, TwoVarSeries};
use num_complex::Complex64;
use serde::Deserialize;

use crate::CliError;

pub const SERIES_BUILTINS: &[&str] = &["one_minus_z1z2", "product_one_minus", "one_minus_z1", "one_minus_pow", "cos_pair"];
pub const MEASURE_BUILTINS: &[&str] = &["lebesgue", "diagonal_current", "point_mass"];

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SeriesJson {
    Grid {
        deg: [usize; 2],
        coeffs: Vec<[f64; 2]>,
    },
    Builtin {
        builtin: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MeasureJson {
    Coefficients {
        #[serde(rename = "K")]
        cutoff: usize,
        coeffs: Vec<(i64, i64, f64, f64)>,
    },
    Builtin {
        builtin: String,
        #[serde(rename = "K")]
        cutoff: Option<usize>,
    },
}

/// Text of a definition: `builtin:...` is returned as is, `{...}` is inline
/// JSON, anything else is read as a file path.
enum Source {
    Builtin(String),
    Json(String),
}

fn source(arg: &str) -> Result<Source, CliError> {
    let trimmed = arg.trim();
    if let Some(rest) = trimmed.strip_prefix("builtin:") {
        Ok(Source::Builtin(rest.to_string()))
    } else if trimmed.starts_with('{') {
        Ok(Source::Json(trimmed.to_string()))
    } else {
        std::fs::read_to_string(Path::new(trimmed))
            .map(Source::Json)
            .map_err(|e| CliError::Input(format!("cannot read {trimmed}: {e}")))
    }
}

fn real_terms(terms: &[(usize, usize, f64)]) -> Result<TwoVarSeries, CliError> {
    Ok(TwoVarSeries::from_real_terms(terms)?)
}

fn positive_int(value: f64, what: &str) -> Result<usize, CliError> {
    if value.fract() == 0.0 && (1.0..=1e6).contains(&value) {
        Ok(value as usize)
    } else {
        Err(CliError::Input(format!("{what} must be a positive integer, got {value}")))
    }
}

fn named_param(params: &BTreeMap<String, f64>, names: &[&str], builtin: &str) -> Result<f64, CliError> {
    names
        .iter()
        .find_map(|n| params.get(*n).copied())
        .ok_or_else(|| CliError::Input(format!("builtin {builtin} needs parameter {}", names[0])))
}

/// Builds a builtin series from its name and named parameters.
fn builtin_series(name: &str, params: &BTreeMap<String, f64>) -> Result<TwoVarSeries, CliError> {
    match name {
        "one_minus_z1z2" => real_terms(&[(0, 0, 1.0), (1, 1, -1.0)]),
        "product_one_minus" => real_terms(&[(0, 0, 1.0), (1, 0, -1.0), (0, 1, -1.0), (1, 1, 1.0)]),
        "one_minus_z1" => real_terms(&[(0, 0, 1.0), (1, 0, -1.0)]),
        "one_minus_pow" => {
            let m = positive_int(named_param(params, &["M", "m"], name)?, "M")?;
            let n = positive_int(named_param(params, &["N", "n"], name)?, "N")?;
            real_terms(&[(0, 0, 1.0), (m, n, -1.0)])
        }
        "cos_pair" => {
            let theta = named_param(params, &["theta"], name)?;
            if !theta.is_finite() {
                return Err(CliError::Input("theta must be finite".into()));
            }
            real_terms(&[(0, 0, 1.0), (1, 1, -2.0 * theta.cos()), (2, 2, 1.0)])
        }
        _ => Err(CliError::Input(format!(
            "unknown series builtin {name:?}; expected one of {}",
            SERIES_BUILTINS.join(", ")
        ))),
    }
}

/// Parses `NAME` or `NAME:params` where params are `M,N` or `theta`.
fn builtin_series_from_text(text: &str) -> Result<TwoVarSeries, CliError> {
    let (name, rest) = text.split_once(':').unwrap_or((text, ""));
    let values: Vec<f64> = if rest.is_empty() {
        Vec::new()
    } else {
        rest.split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Input(format!("bad builtin parameter {v:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    let keys: &[&str] = match name {
        "one_minus_pow" => &["M", "N"],
        "cos_pair" => &["theta"],
        _ => &[],
    };
    if values.len() != keys.len() {
        return Err(CliError::Input(format!(
            "builtin {name} takes {} parameter(s), got {}",
            keys.len(),
            values.len()
        )));
    }
    let params = keys.iter().map(|k| k.to_string()).zip(values).collect();
    builtin_series(name, &params)
}

/// Parses a `--series` argument.
pub fn parse_series(arg: &str) -> Result<TwoVarSeries, CliError> {
    match source(arg)? {
        Source::Builtin(text) => builtin_series_from_text(&text),
        Source::Json(text) => match serde_json::from_str::<SeriesJson>(&text)? {
            SeriesJson::Grid { deg, coeffs } => {
                let coeffs = coeffs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
                Ok(TwoVarSeries::new(deg[0], deg[1], coeffs)?)
            }
            SeriesJson::Builtin { builtin, params } => builtin_series(&builtin, &params),
        },
    }
}

fn builtin_measure(name: &str, cutoff: usize) -> Result<FourierMeasure, CliError> {
    match name {
        "lebesgue" => Ok(FourierMeasure::lebesgue(cutoff)),
        "diagonal_current" => Ok(FourierMeasure::diagonal_current(cutoff)),
        "point_mass" => Ok(FourierMeasure::point_mass(cutoff)),
        _ => Err(CliError::Input(format!(
            "unknown measure builtin {name:?}; expected one of {}",
            MEASURE_BUILTINS.join(", ")
        ))),
    }
}

/// Parses a `--measure` argument. Builtins take their cutoff from
/// `default_cutoff`; coefficient files carry their own `K`, and `mu(0,0) = 1`
/// is supplied when absent.
pub fn parse_measure(arg: &str, default_cutoff: usize) -> Result<FourierMeasure, CliError> {
    match source(arg)? {
        Source::Builtin(name) => builtin_measure(&name, default_cutoff),
        Source::Json(text) => match serde_json::from_str::<MeasureJson>(&text)? {
            MeasureJson::Builtin { builtin, cutoff } => builtin_measure(&builtin, cutoff.unwrap_or(default_cutoff)),
            MeasureJson::Coefficients { cutoff, coeffs } => {
                let mut half: Vec<((i64, i64), Complex64)> = coeffs
                    .into_iter()
                    .map(|(k, l, re, im)| ((k, l), Complex64::new(re, im)))
                    .collect();
                if !half.iter().any(|(idx, _)| *idx == (0, 0)) {
                    half.push(((0, 0), Complex64::new(1.0, 0.0)));
                }
                Ok(FourierMeasure::custom(cutoff, &half)?)
            }
        },
    }
}

/// Parses `full`, `onevar` or `diag:M,N`.
pub fn parse_basis(text: &str) -> Result<bidisk::approximants::BasisKind, CliError> {
    use bidisk::approximants::BasisKind;
    match text {
        "full" => Ok(BasisKind::Full),
        "onevar" => Ok(BasisKind::OneVar),
        _ => {
            let pattern = text
                .strip_prefix("diag:")
                .and_then(|p| p.split_once(','))
                .and_then(|(m, n)| Some((m.trim().parse().ok()?, n.trim().parse().ok()?)));
            match pattern {
                Some((m, n)) => Ok(BasisKind::Diagonal(DiagonalPattern::new(m, n)?)),
                None => Err(CliError::Input(format!("basis must be full, onevar or diag:M,N; got {text:?}"))),
            }
        }
    }
}
