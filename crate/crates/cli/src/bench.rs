//! `bench`: scaling and stability experiments driven by a JSON config.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use polyreduce::bench::{
    run_scaling_bench, run_stability_series, BenchReport, Method, StabilityConfig, StabilityCriterion,
    StabilitySeries,
};
use polyreduce::{parse_rational, HalfWidth};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::document::{format_f64, json_f64};
use crate::error::CliError;
use crate::write_output;

pub const SEED_ENV: &str = "POLYREDUCE_SEED";

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// JSON config; relative output paths resolve against its directory.
    #[arg(long)]
    pub config: PathBuf,
    /// Exit with status 5 when the stability criterion fails.
    #[arg(long)]
    pub strict: bool,
}

/// Missing sections take their defaults; an explicit `null` skips them.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_scaling")]
    pub scaling: Option<ScalingSection>,
    #[serde(default = "default_stability")]
    pub stability: Option<StabilitySection>,
    #[serde(default)]
    pub outputs: Outputs,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingSection {
    /// `[M, N]` pairs.
    #[serde(default = "default_grid")]
    pub grid: Vec<[usize; 2]>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilitySection {
    #[serde(default = "default_source")]
    pub source_degree: usize,
    #[serde(default = "default_target")]
    pub target_degree: usize,
    #[serde(default = "default_half_width")]
    pub half_width: String,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default = "default_required")]
    pub required_passes: usize,
    #[serde(default = "default_candidate")]
    pub candidate: Method,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Outputs {
    pub scaling_json: PathBuf,
    pub scaling_csv: PathBuf,
    pub stability_json: PathBuf,
    pub stability_csv: PathBuf,
    /// Pointwise values of the first stability run.
    pub stability_samples_csv: PathBuf,
}

impl Default for Outputs {
    fn default() -> Self {
        let dir = Path::new("bench-results");
        Outputs {
            scaling_json: dir.join("scaling.json"),
            scaling_csv: dir.join("scaling.csv"),
            stability_json: dir.join("stability.json"),
            stability_csv: dir.join("stability.csv"),
            stability_samples_csv: dir.join("stability_samples.csv"),
        }
    }
}

fn default_seed() -> u64 {
    42
}
fn default_scaling() -> Option<ScalingSection> {
    Some(ScalingSection {
        grid: default_grid(),
        repetitions: default_repetitions(),
    })
}
fn default_grid() -> Vec<[usize; 2]> {
    [20, 40, 80].iter().map(|&m| [m, m + 50]).collect()
}
fn default_repetitions() -> usize {
    polyreduce::bench::MIN_REPETITIONS
}
fn default_stability() -> Option<StabilitySection> {
    serde_json::from_str("{}").ok()
}
fn default_source() -> usize {
    150
}
fn default_target() -> usize {
    40
}
fn default_half_width() -> String {
    "1".into()
}
fn default_grid_points() -> usize {
    1001
}
fn default_runs() -> usize {
    10
}
fn default_required() -> usize {
    9
}
fn default_candidate() -> Method {
    Method::Direct
}

#[derive(Debug, Serialize)]
struct StabilityDocument<'a> {
    #[serde(flatten)]
    series: &'a StabilitySeries,
    /// Smallest and largest classical/direct max-deviation ratio over the runs.
    gap_range: Option<[f64; 2]>,
}

pub fn load_config(path: &Path) -> Result<BenchConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))?;
    let mut config: BenchConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    if let Ok(seed) = std::env::var(SEED_ENV) {
        config.seed = seed
            .trim()
            .parse()
            .map_err(|e| CliError::Malformed(format!("{SEED_ENV}={seed}: {e}")))?;
    }
    Ok(config)
}

pub fn run(args: &BenchArgs) -> Result<(), CliError> {
    let config = load_config(&args.config)?;
    let base = args.config.parent().unwrap_or(Path::new("."));
    let resolve = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
    let bad = |e: polyreduce::Error| CliError::Malformed(e.to_string());

    if let Some(scaling) = &config.scaling {
        let grid: Vec<(usize, usize)> = scaling.grid.iter().map(|&[m, n]| (m, n)).collect();
        let report = run_scaling_bench(&grid, scaling.repetitions, config.seed).map_err(bad)?;
        write_file(&resolve(&config.outputs.scaling_json), &to_json(&report))?;
        write_file(&resolve(&config.outputs.scaling_csv), &scaling_csv(&report))?;
        for fit in &report.fits {
            eprintln!(
                "scaling: {} ops/(N-M) grows as M^{}",
                fit.method,
                fit.exponent.map_or("?".into(), |e| format!("{e:.2}"))
            );
        }
    }

    let Some(section) = &config.stability else {
        return Ok(());
    };
    if section.required_passes > section.runs {
        return Err(CliError::Malformed(format!(
            "required_passes {} exceeds runs {}",
            section.required_passes, section.runs
        )));
    }
    let l = parse_rational(&section.half_width).map_err(bad)?;
    let cfg = StabilityConfig {
        source_degree: section.source_degree,
        target_degree: section.target_degree,
        half_width: HalfWidth::new(l).map_err(bad)?,
        seed: config.seed,
        grid_points: section.grid_points,
    };
    let criterion = StabilityCriterion {
        candidate: section.candidate,
        tolerance: section.tolerance,
    };
    let series =
        run_stability_series(&cfg, section.runs, section.required_passes, criterion).map_err(bad)?;
    let gaps: Vec<f64> = series.runs.iter().filter_map(|r| r.gap).collect();
    let gap_range = (!gaps.is_empty()).then(|| {
        [
            gaps.iter().copied().fold(f64::INFINITY, f64::min),
            gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ]
    });
    let doc = StabilityDocument {
        series: &series,
        gap_range,
    };
    write_file(&resolve(&config.outputs.stability_json), &to_json(&doc))?;
    write_file(&resolve(&config.outputs.stability_csv), &stability_csv(&series))?;
    write_file(&resolve(&config.outputs.stability_samples_csv), &samples_csv(&series))?;

    let summary = format!(
        "{} better in {}/{} runs (need {}), exceptions {:?}",
        criterion.candidate,
        series.passes,
        series.runs.len(),
        series.required_passes,
        series.exceptions
    );
    eprintln!("stability: {summary}");
    if args.strict && !series.passed {
        return Err(CliError::StrictFailure(summary));
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.display().to_string(),
            source,
        })?;
    }
    write_output(Some(path), contents.as_bytes())
}

/// Pretty JSON with every float printed to 17 significant digits.
fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report serializes");
    normalize_floats(&mut v);
    serde_json::to_string_pretty(&v).expect("report serializes") + "\n"
}

fn normalize_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => *v = json_f64(n.as_f64().expect("float")),
        Value::Array(items) => items.iter_mut().for_each(normalize_floats),
        Value::Object(map) => map.values_mut().for_each(normalize_floats),
        _ => {}
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_f64).unwrap_or_default()
}

fn scaling_csv(report: &BenchReport) -> String {
    let mut out = String::from("method,target_degree,source_degree,median_seconds,accumulate_ops,entry_ops,total_ops\n");
    for p in &report.points {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.method,
            p.target_degree,
            p.source_degree,
            format_f64(p.median_seconds),
            p.ops.accumulate,
            p.ops.entry,
            p.ops.total()
        )
        .expect("writing to a String");
    }
    out
}

fn stability_csv(series: &StabilitySeries) -> String {
    let mut out = String::from("seed,direct_max,direct_rms,classical_max,classical_rms,gap,pass\n");
    for r in &series.runs {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.seed,
            format_f64(r.direct.max),
            format_f64(r.direct.rms),
            format_f64(r.classical.max),
            format_f64(r.classical.rms),
            opt(r.gap),
            series.criterion.holds(r)
        )
        .expect("writing to a String");
    }
    out
}

fn samples_csv(series: &StabilitySeries) -> String {
    let mut out = String::from("x,p,reference,direct,classical\n");
    if let Some(first) = series.runs.first() {
        for s in &first.samples {
            writeln!(
                out,
                "{},{},{},{},{}",
                format_f64(s.x),
                format_f64(s.p),
                format_f64(s.reference),
                format_f64(s.direct),
                format_f64(s.classical)
            )
            .expect("writing to a String");
        }
    }
    out
}
