//! `sample`: a polynomial and its reduction on an equispaced grid, as CSV.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use num_bigint::BigInt;
use polyreduce::{Polynomial, Rational, Scalar};

use crate::document::{format_f64, PolynomialDocument};
use crate::error::CliError;
use crate::reduce::parse_half_width;
use crate::write_output;

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Original polynomial document.
    #[arg(long)]
    pub input: PathBuf,
    /// Reduced polynomial document, e.g. the output of `reduce`.
    #[arg(long)]
    pub reduced: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub half_width: String,
    /// Number of grid points K, at least 2.
    #[arg(long)]
    pub points: usize,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn run(args: &SampleArgs) -> Result<(), CliError> {
    let p = PolynomialDocument::read(&args.input)?.polynomial()?;
    let q = PolynomialDocument::read(&args.reduced)?.polynomial()?;
    let l = parse_half_width(&args.half_width)?;
    if args.points < 2 {
        return Err(CliError::Malformed(format!(
            "need at least 2 points, got {}",
            args.points
        )));
    }
    let csv = sample_csv(&p, &q, l.get(), args.points);
    write_output(args.output.as_deref(), csv.as_bytes())
}

/// Rows at `x_i = l (2i - (K-1)) / (K-1)`; each value is evaluated exactly
/// and rounded once.
pub fn sample_csv(p: &Polynomial<Rational>, q: &Polynomial<Rational>, l: &Rational, points: usize) -> String {
    let span = BigInt::from(points - 1);
    let mut out = String::from("x,p,q,abs_err\n");
    for i in 0..points {
        let step = BigInt::from(2 * i) - &span;
        let x = l * Rational::new(step, span.clone());
        let pv = p.eval(&x);
        let qv = q.eval(&x);
        let err = num_traits::Signed::abs(&(&pv - &qv));
        writeln!(
            out,
            "{},{},{},{}",
            format_f64(Scalar::to_f64(&x)),
            format_f64(Scalar::to_f64(&pv)),
            format_f64(Scalar::to_f64(&qv)),
            format_f64(Scalar::to_f64(&err))
        )
        .expect("writing to a String");
    }
    out
}
