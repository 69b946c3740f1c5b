//! Symbol arguments: inline JSON or `@file.json`.
//!
//! A Gaussian-polynomial symbol is `{"center": [..], "width": [..], "terms": [[[e..], [re, im]], ..]}`;
//! `terms` defaults to the constant 1. Symbols on `G × 𝔤*` are either
//! `{"a": .., "b": ..}` (product of a function on `G` and one on `𝔤*`) or `{"joint": ..}`.

use serde::Deserialize;

use orbitquant::quantize::{GaussPoly, JointField, SeparableField, SymbolField};
use orbitquant::spectral::c;

use crate::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussSpec {
    center: Vec<f64>,
    width: Vec<f64>,
    #[serde(default)]
    terms: Option<Vec<(Vec<u32>, [f64; 2])>>,
}

#[derive(Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum FieldSpec {
    Separable { a: GaussSpec, b: GaussSpec },
    Joint { joint: GaussSpec },
}

fn text(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn build(s: GaussSpec, dim: usize, what: &str) -> Result<GaussPoly, CliError> {
    if s.center.len() != dim {
        return Err(CliError::usage(format!("{what} needs {dim} variables, got {}", s.center.len())));
    }
    let mut g = GaussPoly::gaussian(s.center, s.width)?;
    if let Some(terms) = s.terms {
        if let Some(t) = terms.iter().find(|t| t.0.len() != dim) {
            return Err(CliError::usage(format!("exponent {:?} of {what} needs {dim} entries", t.0)));
        }
        g = g.with_poly(terms.into_iter().map(|(e, v)| (e, c(v[0], v[1]))).collect());
    }
    Ok(g)
}

/// A Gaussian-polynomial symbol in `dim` variables.
pub fn gauss(arg: &str, dim: usize) -> Result<GaussPoly, CliError> {
    let s: GaussSpec = serde_json::from_str(&text(arg)?).map_err(|e| CliError::usage(format!("symbol: {e}")))?;
    build(s, dim, "symbol")
}

/// A symbol on `G × 𝔤*` for a group of dimension `n`.
pub fn field(arg: &str, n: usize) -> Result<Box<dyn SymbolField>, CliError> {
    let s: FieldSpec = serde_json::from_str(&text(arg)?)
        .map_err(|e| CliError::usage(format!("symbol must be {{\"a\":..,\"b\":..}} or {{\"joint\":..}}: {e}")))?;
    Ok(match s {
        FieldSpec::Separable { a, b } => Box::new(SeparableField { a: build(a, n, "a")?, b: build(b, n, "b")? }),
        FieldSpec::Joint { joint } => Box::new(JointField::new(build(joint, 2 * n, "joint")?)?),
    })
}
