//! JSON polynomial documents and number formatting.

use std::fs;
use std::path::Path;

use polyreduce::{format_rational, parse_rational, Polynomial, Rational};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

/// `{"coefficients": [...], "label": "..."}` with ascending coefficients.
/// Coefficients are JSON numbers or `"num/den"` strings; decimals are read
/// exactly. Unknown fields are ignored so reduce outputs can be read back.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialDocument {
    pub coefficients: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl PolynomialDocument {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
    }

    pub fn polynomial(&self) -> Result<Polynomial<Rational>, CliError> {
        if self.coefficients.is_empty() {
            return Err(CliError::Malformed("coefficient array is empty".into()));
        }
        let coeffs = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let text = match v {
                    Value::Number(n) => n.to_string(),
                    Value::String(s) => s.clone(),
                    other => {
                        return Err(CliError::Malformed(format!(
                            "coefficient {k} is not a number or string: {other}"
                        )))
                    }
                };
                parse_rational(&text)
                    .map_err(|e| CliError::Malformed(format!("coefficient {k}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Polynomial::new(coeffs).map_err(|e| CliError::Malformed(e.to_string()))
    }
}

/// C's `%.17g`: 17 significant digits, trailing zeros removed.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A float as a JSON number with the same 17-digit text, `null` when not finite.
pub fn json_f64(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    serde_json::from_str(&format_f64(x)).expect("formatted float is valid JSON")
}

pub fn json_rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}
