//! `reduce`: best degree-M approximation of a polynomial document.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use polyreduce::bench::{reduce_with, Method};
use polyreduce::{l2_error, parse_rational, Error, HalfWidth, Polynomial, Rational, Scalar, ScalarMode};
use serde::Serialize;
use serde_json::Value;

use crate::document::{json_f64, json_rational, PolynomialDocument};
use crate::error::CliError;
use crate::{write_output, MethodArg, ModeArg};

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// Polynomial document to reduce.
    #[arg(long)]
    pub input: PathBuf,
    /// Degree M of the result.
    #[arg(long)]
    pub target_degree: usize,
    /// Half-width l of the interval [-l, l], as "num/den", an integer or a decimal.
    #[arg(long, allow_hyphen_values = true)]
    pub half_width: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Direct)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Rational)]
    pub mode: ModeArg,
    /// Echo the input unchanged when M is not below its degree.
    #[arg(long)]
    pub allow_identity: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Leave out the wall time so the output bytes are reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Serialize)]
pub struct ReduceOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub method: Method,
    pub mode: ScalarMode,
    pub source_degree: usize,
    pub target_degree: usize,
    pub half_width: String,
    pub identity: bool,
    pub coefficients: Vec<Value>,
    pub l2_error: Value,
    pub rms_error: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<Value>,
}

pub fn run(args: &ReduceArgs) -> Result<(), CliError> {
    let doc = PolynomialDocument::read(&args.input)?;
    let p = doc.polynomial()?;
    let l = parse_half_width(&args.half_width)?;
    let degree = p.nominal_degree();
    let target = args.target_degree;
    let identity = target >= degree;
    if identity && !args.allow_identity {
        return Err(CliError::TargetTooHigh { target, degree });
    }
    let method = Method::from(args.method);
    let mode = ScalarMode::from(args.mode);

    let start = Instant::now();
    let q_exact = match mode {
        ScalarMode::ExactRational => {
            if identity {
                p.padded(target + 1)
            } else {
                reduce_with(method, &p, target, &l)?
            }
        }
        ScalarMode::Float64 => {
            let pf = p.to_f64();
            let q = if identity {
                pf.padded(target + 1)
            } else {
                reduce_with(method, &pf, target, &l.to_f64()?)?
            };
            let coeffs = q
                .coeffs()
                .iter()
                .map(|c| Rational::from_float(*c))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::InvalidArgument("float reduction overflowed".into()))?;
            Polynomial::new(coeffs)?
        }
    };
    let elapsed = start.elapsed().as_secs_f64();

    // The error of the printed result is evaluated exactly, so a float
    // result is judged without further rounding.
    let j = l2_error(&p, &q_exact, &l);
    let rms = Scalar::to_f64(&j).sqrt();
    let (coefficients, l2) = match mode {
        ScalarMode::ExactRational => (q_exact.coeffs().iter().map(json_rational).collect(), json_rational(&j)),
        ScalarMode::Float64 => (
            q_exact.coeffs().iter().map(|c| json_f64(Scalar::to_f64(c))).collect(),
            json_f64(Scalar::to_f64(&j)),
        ),
    };
    let out = ReduceOutput {
        label: doc.label,
        method,
        mode,
        source_degree: degree,
        target_degree: target,
        half_width: polyreduce::format_rational(l.get()),
        identity,
        coefficients,
        l2_error: l2,
        rms_error: json_f64(rms),
        elapsed_seconds: (!args.no_timing).then(|| json_f64(elapsed)),
    };
    let text = serde_json::to_string_pretty(&out).expect("output serializes") + "\n";
    write_output(args.output.as_deref(), text.as_bytes())
}

pub fn parse_half_width(text: &str) -> Result<HalfWidth<Rational>, CliError> {
    let l = parse_rational(text).map_err(|e| CliError::Malformed(format!("half-width: {e}")))?;
    HalfWidth::new(l).map_err(|_| CliError::NonPositiveHalfWidth)
}

