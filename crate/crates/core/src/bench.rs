//! Scaling and stability experiments comparing the direct and the
//! matrix-product reductions.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classical::{build_v_tail_classical, reduce_classical};
use crate::direct::{build_v_direct, reduce};
use crate::error::{Error, Result};
use crate::instrument::{self, OpCounts};
use crate::poly::Polynomial;
use crate::scalar::{format_rational, HalfWidth, Rational, Scalar};

/// Minimum number of timed repetitions per grid point.
pub const MIN_REPETITIONS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Classical,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Direct, Method::Classical];

    pub fn other(self) -> Method {
        match self {
            Method::Direct => Method::Classical,
            Method::Classical => Method::Direct,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Classical => "classical",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "classical" => Ok(Method::Classical),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }
}

pub fn reduce_with<S: Scalar>(
    method: Method,
    p: &Polynomial<S>,
    target: usize,
    l: &HalfWidth<S>,
) -> Result<Polynomial<S>> {
    match method {
        Method::Direct => reduce(p, target, l),
        Method::Classical => reduce_classical(p, target, l),
    }
}

/// Coefficients drawn uniformly from `[-1, 1]` by a seeded ChaCha8 stream.
pub fn random_coefficients(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub method: Method,
    pub target_degree: usize,
    pub source_degree: usize,
    pub median_seconds: f64,
    pub samples_seconds: Vec<f64>,
    pub ops: OpCounts,
}

/// Least-squares exponent `b` in `ops / (N−M) ≈ c · M^b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub method: Method,
    pub exponent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub seed: u64,
    pub repetitions: usize,
    pub points: Vec<ScalingPoint>,
    pub fits: Vec<ScalingFit>,
}

impl BenchReport {
    pub fn point(&self, method: Method, target: usize, source: usize) -> Option<&ScalingPoint> {
        self.points
            .iter()
            .find(|p| p.method == method && p.target_degree == target && p.source_degree == source)
    }
}

fn median(samples: &[f64]) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let mid = s.len() / 2;
    if s.len() % 2 == 1 {
        s[mid]
    } else {
        0.5 * (s[mid - 1] + s[mid])
    }
}

fn fit_exponent(points: &[&ScalingPoint]) -> Option<f64> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.target_degree >= 1 && p.ops.total() > 0)
        .map(|p| {
            let width = (p.source_degree - p.target_degree) as f64;
            ((p.target_degree as f64).ln(), (p.ops.total() as f64 / width).ln())
        })
        .collect();
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if xy.len() < 2 || sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Times both methods in float mode on `l = 1` over a grid of `(M, N)`.
/// Operation counts come from the first repetition and are deterministic.
pub fn run_scaling_bench(grid: &[(usize, usize)], repetitions: usize, seed: u64) -> Result<BenchReport> {
    if repetitions < MIN_REPETITIONS {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_REPETITIONS} repetitions are required, got {repetitions}"
        )));
    }
    let l = HalfWidth::<f64>::unit();
    let mut points = Vec::new();
    for &(target, source) in grid {
        if target >= source {
            return Err(Error::InvalidShape {
                target,
                source_degree: source,
            });
        }
        let p = Polynomial::new(random_coefficients(source + 1, seed))?;
        for method in Method::ALL {
            let (_, ops) = instrument::measure(|| reduce_with(method, &p, target, &l));
            let mut samples = Vec::with_capacity(repetitions);
            for _ in 0..repetitions {
                let start = Instant::now();
                let q = reduce_with(method, &p, target, &l)?;
                samples.push(start.elapsed().as_secs_f64());
                std::hint::black_box(q);
            }
            points.push(ScalingPoint {
                method,
                target_degree: target,
                source_degree: source,
                median_seconds: median(&samples),
                samples_seconds: samples,
                ops,
            });
        }
    }
    let fits = Method::ALL
        .iter()
        .map(|&method| {
            let pts: Vec<&ScalingPoint> = points.iter().filter(|p| p.method == method).collect();
            ScalingFit {
                method,
                exponent: fit_exponent(&pts),
            }
        })
        .collect();
    Ok(BenchReport {
        seed,
        repetitions,
        points,
        fits,
    })
}

/// Operation counts only, without timing.
pub fn count_ops(method: Method, target: usize, source: usize, seed: u64) -> Result<OpCounts> {
    let p = Polynomial::new(random_coefficients(source + 1, seed))?;
    let (q, ops) = instrument::measure(|| reduce_with(method, &p, target, &HalfWidth::<f64>::unit()));
    q?;
    Ok(ops)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityConfig {
    pub source_degree: usize,
    pub target_degree: usize,
    pub half_width: HalfWidth<Rational>,
    pub seed: u64,
    pub grid_points: usize,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        StabilityConfig {
            source_degree: 150,
            target_degree: 40,
            half_width: HalfWidth::unit(),
            seed: 42,
            grid_points: 1001,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub max: f64,
    pub rms: f64,
}

impl Deviation {
    fn from_errors(errors: impl Iterator<Item = f64>) -> Self {
        let (mut max, mut sum_sq, mut n) = (0.0f64, 0.0f64, 0usize);
        for e in errors {
            max = max.max(e);
            sum_sq += e * e;
            n += 1;
        }
        Deviation {
            max,
            rms: if n == 0 { 0.0 } else { (sum_sq / n as f64).sqrt() },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

/// One grid point: the input polynomial, the exact reduced value rounded
/// once, and both float-mode reductions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilitySample {
    pub x: f64,
    pub p: f64,
    pub reference: f64,
    pub direct: f64,
    pub classical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub seed: u64,
    pub source_degree: usize,
    pub target_degree: usize,
    pub half_width: String,
    pub grid: SampleGrid,
    pub direct: Deviation,
    pub classical: Deviation,
    /// `classical.max / direct.max`; absent when the direct deviation is zero.
    pub gap: Option<f64>,
    pub direct_better: bool,
    #[serde(skip)]
    pub samples: Vec<StabilitySample>,
}

impl StabilityReport {
    pub fn deviation(&self, method: Method) -> Deviation {
        match method {
            Method::Direct => self.direct,
            Method::Classical => self.classical,
        }
    }
}

/// Exact rational polynomial evaluated at dyadic points with integer-only
/// Horner steps, rounded once at the end.
struct ExactEvaluator {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl ExactEvaluator {
    fn new(p: &Polynomial<Rational>) -> Self {
        let denominator = p
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let numerators = p
            .coeffs()
            .iter()
            .map(|c| c.numer() * (&denominator / c.denom()))
            .collect();
        ExactEvaluator {
            numerators,
            denominator,
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let xr = Rational::from_float(x).expect("finite grid point");
        let (u, d) = (xr.numer(), xr.denom());
        let deg = self.numerators.len() - 1;
        let mut d_pow = BigInt::one();
        let mut acc = self.numerators[deg].clone();
        for k in (0..deg).rev() {
            d_pow *= d;
            acc = acc * u + &self.numerators[k] * &d_pow;
        }
        ToPrimitive::to_f64(&Rational::new(acc, &self.denominator * d_pow)).unwrap_or(f64::NAN)
    }
}

fn grid_point(i: usize, points: usize, l: f64) -> f64 {
    let span = (points - 1) as f64;
    l * ((2 * i) as f64 - span) / span
}

/// Reduces a seeded random polynomial in float mode with both methods and
/// compares each against the exact rational reduction on an equispaced grid.
pub fn run_stability_experiment(config: &StabilityConfig) -> Result<StabilityReport> {
    let coeffs = random_coefficients(config.source_degree + 1, config.seed);
    stability_with_coefficients(config, &coeffs)
}

pub fn stability_with_coefficients(config: &StabilityConfig, coeffs: &[f64]) -> Result<StabilityReport> {
    if config.grid_points < 2 {
        return Err(Error::InvalidArgument("need at least 2 grid points".into()));
    }
    if coeffs.len() != config.source_degree + 1 {
        return Err(Error::InvalidArgument(format!(
            "expected {} coefficients, got {}",
            config.source_degree + 1,
            coeffs.len()
        )));
    }
    let target = config.target_degree;
    let l_exact = &config.half_width;
    let l_float = l_exact.to_f64()?;

    let p_float = Polynomial::new(coeffs.to_vec())?;
    let p_exact = p_float.map(|c| Rational::from_float(*c).expect("finite coefficient"));
    let reference = ExactEvaluator::new(&reduce(&p_exact, target, l_exact)?);
    let direct = reduce(&p_float, target, &l_float)?;
    let classical = reduce_classical(&p_float, target, &l_float)?;

    let lf = *l_float.get();
    let samples: Vec<StabilitySample> = (0..config.grid_points)
        .map(|i| {
            let x = grid_point(i, config.grid_points, lf);
            StabilitySample {
                x,
                p: p_float.eval(&x),
                reference: reference.eval(x),
                direct: direct.eval(&x),
                classical: classical.eval(&x),
            }
        })
        .collect();
    let direct_dev = Deviation::from_errors(samples.iter().map(|s| (s.direct - s.reference).abs()));
    let classical_dev =
        Deviation::from_errors(samples.iter().map(|s| (s.classical - s.reference).abs()));
    Ok(StabilityReport {
        seed: config.seed,
        source_degree: config.source_degree,
        target_degree: target,
        half_width: format_rational(l_exact.get()),
        grid: SampleGrid {
            start: -lf,
            end: lf,
            points: config.grid_points,
        },
        direct: direct_dev,
        classical: classical_dev,
        gap: (direct_dev.max > 0.0).then(|| classical_dev.max / direct_dev.max),
        direct_better: direct_dev.max < classical_dev.max,
        samples,
    })
}

/// What a stability run must show to count as a pass: the candidate's max
/// deviation is strictly below the other method's, and within `tolerance`
/// when one is given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityCriterion {
    pub candidate: Method,
    pub tolerance: Option<f64>,
}

impl Default for StabilityCriterion {
    fn default() -> Self {
        StabilityCriterion {
            candidate: Method::Direct,
            tolerance: None,
        }
    }
}

impl StabilityCriterion {
    pub fn holds(&self, report: &StabilityReport) -> bool {
        let mine = report.deviation(self.candidate).max;
        let theirs = report.deviation(self.candidate.other()).max;
        mine < theirs && self.tolerance.is_none_or(|t| mine <= t)
    }
}

/// Largest relative error of the float tail of `V` for each method,
/// against the exact entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VEntryError {
    pub direct: f64,
    pub classical: f64,
}

pub fn v_entry_error(target: usize, source: usize, l: &HalfWidth<Rational>) -> Result<VEntryError> {
    let lf = l.to_f64()?;
    let shape = build_v_direct(target, source)?;
    let exact = shape.evaluate(l);
    let direct = shape.evaluate(&lf);
    let classical = build_v_tail_classical(target, source, &lf)?;
    let mut err = VEntryError {
        direct: 0.0,
        classical: 0.0,
    };
    for row in 0..=target {
        for col in target + 1..=source {
            let e = exact.get(row, col);
            if e.is_zero() {
                continue;
            }
            let rel = |v: f64| {
                let v = Rational::from_float(v).expect("finite entry");
                Scalar::to_f64(&((&v - e) / e).abs())
            };
            err.direct = err.direct.max(rel(*direct.get(row, col)));
            err.classical = err.classical.max(rel(*classical.get(row, col - target - 1)));
        }
    }
    Ok(err)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilitySeries {
    pub criterion: StabilityCriterion,
    pub v_entry_error: VEntryError,
    pub runs: Vec<StabilityReport>,
    /// Seeds where the criterion failed.
    pub exceptions: Vec<u64>,
    pub passes: usize,
    pub required_passes: usize,
    pub passed: bool,
}

/// Runs `runs` consecutive seeds starting at `config.seed`, in parallel.
pub fn run_stability_series(
    config: &StabilityConfig,
    runs: usize,
    required_passes: usize,
    criterion: StabilityCriterion,
) -> Result<StabilitySeries> {
    let reports: Vec<Result<StabilityReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..runs as u64)
            .map(|k| {
                let cfg = StabilityConfig {
                    seed: config.seed + k,
                    ..config.clone()
                };
                scope.spawn(move || run_stability_experiment(&cfg))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("stability worker panicked"))
            .collect()
    });
    let runs = reports.into_iter().collect::<Result<Vec<_>>>()?;
    let exceptions: Vec<u64> = runs
        .iter()
        .filter(|r| !criterion.holds(r))
        .map(|r| r.seed)
        .collect();
    let passes = runs.len() - exceptions.len();
    Ok(StabilitySeries {
        criterion,
        v_entry_error: v_entry_error(config.target_degree, config.source_degree, &config.half_width)?,
        passes,
        required_passes,
        passed: passes >= required_passes,
        runs,
        exceptions,
    })
}
