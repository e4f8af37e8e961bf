//! Acceptance criteria. Each prints one `PASS`/`FAIL` line with its
//! measured runtime and limit; the test fails if any criterion does.
//!
//! Run with `cargo test --release -p polyreduce --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use polyreduce::bench::{count_ops, run_stability_series, Method, StabilityConfig, StabilityCriterion};
use polyreduce::direct::ReductionShape;
use polyreduce::{
    build_v_classical, build_v_direct, inner_product, legendre, monomial_inner_product, ortho_poly, reduce,
    reduce_classical, HalfWidth, Polynomial, Rational,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Perturbation size for the float optimality check.
const PERTURBATION: f64 = 1e-3;
/// Fixed remainder degree for the op-count comparison.
const SPAN: usize = 50;
/// Required growth of the classical/direct op ratio from M = 20 to M = 80.
const RATIO_GROWTH: f64 = 2.0;
const STABILITY_RUNS: usize = 10;
const STABILITY_REQUIRED: usize = 9;

type Outcome = Result<String, String>;
/// Name, time limit in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn half_widths() -> Vec<HalfWidth<Rational>> {
    [r(1, 2), r(1, 1), r(3, 1)]
        .into_iter()
        .map(|l| HalfWidth::new(l).unwrap())
        .collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Degree-`n` integer polynomial with coefficients in [-9, 9] and a
/// nonzero leading term.
fn random_int_poly(n: usize, seed: u64) -> Polynomial<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs: Vec<Rational> = (0..=n).map(|_| r(rng.gen_range(-9..=9), 1)).collect();
    if coeffs[n].is_zero() {
        coeffs[n] = r(1, 1);
    }
    Polynomial::new(coeffs).unwrap()
}

/// The grid of criteria 4 and 5: every `0 <= M < N <= 25`, three half-widths
/// and three seeded polynomials per degree.
fn oracle_grid(mut visit: impl FnMut(&Polynomial<Rational>, usize, &HalfWidth<Rational>) -> Result<(), String>) -> Result<usize, String> {
    let mut cases = 0;
    for l in half_widths() {
        for n in 1..=25usize {
            for k in 0..3u64 {
                let p = random_int_poly(n, 1000 * n as u64 + k);
                for m in 0..n {
                    visit(&p, m, &l)?;
                    cases += 1;
                }
            }
        }
    }
    Ok(cases)
}

fn example_tail_entries() -> Outcome {
    let matrix = build_v_direct(5, 7).map_err(|e| e.to_string())?;
    let expected = [
        (0, 6, r(1440, 66528), 6),
        (1, 7, r(10080, 123552), 6),
        (2, 6, r(-720, 1584), 4),
        (3, 7, r(-5040, 6864), 4),
        (4, 6, r(720, 528), 2),
        (5, 7, r(5040, 3120), 2),
    ];
    for (row, col, frac, power) in &expected {
        let e = matrix.entry(*row, *col).map_err(|e| e.to_string())?;
        check(&e.fraction == frac && e.l_power == *power, || {
            format!("V[{row}][{col}] = {} l^{}, expected {frac} l^{power}", e.fraction, e.l_power)
        })?;
    }
    for row in 0..=5 {
        for col in 6..=7 {
            if (row + col) % 2 == 1 {
                let e = matrix.entry(row, col).map_err(|e| e.to_string())?;
                check(e.fraction.is_zero(), || format!("V[{row}][{col}] = {} is not 0", e.fraction))?;
            }
        }
    }
    Ok("6 nonzero tail entries and 6 mixed-parity zeros exact".into())
}

fn identity_block() -> Outcome {
    let mut blocks = 0;
    for l in half_widths() {
        for m in 0..=12 {
            let direct = build_v_direct(m, m + 2).map_err(|e| e.to_string())?.evaluate(&l);
            let classical = build_v_classical(m, m + 2, &l).map_err(|e| e.to_string())?;
            for v in [&direct, &classical] {
                for i in 0..=m {
                    for j in 0..=m {
                        let want = if i == j { Rational::one() } else { Rational::zero() };
                        check(v.get(i, j) == &want, || {
                            format!("M={m} l={}: V[{i}][{j}] = {}", l.get(), v.get(i, j))
                        })?;
                    }
                }
                blocks += 1;
            }
        }
    }
    Ok(format!("{blocks} leading blocks equal I"))
}

/// `L_m(X / l)` as a polynomial in `X`.
fn scaled_legendre(m: usize, l: &Rational) -> Polynomial<Rational> {
    let base = legendre(m);
    let mut scale = Rational::one();
    let coeffs = base
        .coeffs()
        .iter()
        .map(|c| {
            let out = c * &scale;
            scale /= l;
            out
        })
        .collect();
    Polynomial::new(coeffs).unwrap()
}

fn orthonormality() -> Outcome {
    for l in half_widths() {
        let basis: Vec<_> = (0..=20).map(|m| ortho_poly(m, &l)).collect();
        let scaled: Vec<_> = (0..=20).map(|m| scaled_legendre(m, l.get())).collect();
        for i in 0..=20 {
            for j in 0..=20 {
                let want = if i == j { Rational::one() } else { Rational::zero() };
                let got = basis[i].inner_product(&basis[j], &l).map_err(|e| e.to_string())?;
                check(got == want, || format!("l={}: <e_{i}, e_{j}> = {got}", l.get()))?;
                // Independent route: (2i+1)·<L_i(X/l), L_j(X/l)> by monomial moments.
                let plain = inner_product(&scaled[i], &scaled[j], &l);
                let normalized = if i == j { plain * r(2 * i as i64 + 1, 1) } else { plain };
                check(normalized == want, || format!("l={}: moment route <e_{i}, e_{j}>", l.get()))?;
            }
        }
    }
    Ok("441 pairs x 3 half-widths exact by two routes".into())
}

fn oracle_equivalence() -> Outcome {
    let cases = oracle_grid(|p, m, l| {
        let direct = reduce(p, m, l).map_err(|e| e.to_string())?;
        let classical = reduce_classical(p, m, l).map_err(|e| e.to_string())?;
        check(direct == classical, || {
            format!("M={m} N={} l={}: direct and classical differ", p.nominal_degree(), l.get())
        })
    })?;
    Ok(format!("{cases} reductions identical"))
}

/// Exact `J(Q + d X^k) - J(Q)` for a float `Q`, where `d` is the step the
/// float addition actually took: `d^2 <X^k, X^k> - 2 d <P - Q, X^k>`.
fn perturbation_gain(residual_moment: &Rational, q_k: f64, step: f64, k: usize, l: &HalfWidth<Rational>) -> Rational {
    let moved = q_k + step;
    let d = Rational::from_float(moved).unwrap() - Rational::from_float(q_k).unwrap();
    let norm = monomial_inner_product(k, k, l);
    &d * &d * norm - r(2, 1) * &d * residual_moment
}

/// Counts perturbations `Q ± PERTURBATION X^k` that lower the exact error.
fn lowering_perturbations(p: &Polynomial<Rational>, q: &Polynomial<f64>, l: &HalfWidth<Rational>) -> (usize, Option<usize>) {
    let exact_q = Polynomial::new(q.coeffs().iter().map(|v| Rational::from_float(*v).unwrap()).collect()).unwrap();
    let residual = p - &exact_q;
    let mut count = 0;
    let mut first = None;
    for (k, q_k) in q.coeffs().iter().enumerate() {
        let moment = inner_product(&residual, &Polynomial::monomial(k), l);
        for step in [PERTURBATION, -PERTURBATION] {
            if perturbation_gain(&moment, *q_k, step, k, l) < Rational::zero() {
                count += 1;
                first.get_or_insert(k);
            }
        }
    }
    (count, first)
}

fn optimality() -> Outcome {
    let mut perturbations = 0usize;
    let mut lowered = 0usize;
    let mut lowered_rounded = 0usize;
    let mut first_failure = None;
    let mut failing_l = std::collections::BTreeSet::new();
    let cases = oracle_grid(|p, m, l| {
        let n = p.nominal_degree();
        let q = reduce(p, m, l).map_err(|e| e.to_string())?;
        let residual = p - &q;
        for k in 0..=m {
            let ip = inner_product(&residual, &Polynomial::monomial(k), l);
            check(ip.is_zero(), || format!("M={m} N={n} l={}: <P-Q, X^{k}> = {ip}", l.get()))?;
        }

        let lf = l.to_f64().map_err(|e| e.to_string())?;
        let qf = reduce(&p.to_f64(), m, &lf).map_err(|e| e.to_string())?;
        let (count, first) = lowering_perturbations(p, &qf, l);
        perturbations += 2 * (m + 1);
        lowered += count;
        if let Some(k) = first {
            failing_l.insert(l.get().to_string());
            first_failure.get_or_insert((m, n, k, l.get().clone()));
        }
        // The exact optimum rounded to doubles, to tell method error from
        // what double coefficients can express at all.
        lowered_rounded += lowering_perturbations(p, &q.to_f64(), l).0;
        Ok(())
    })?;
    let detail = format!(
        "{cases} residuals orthogonal; {lowered}/{perturbations} float perturbations lower the error \
         (the correctly rounded optimum: {lowered_rounded})"
    );
    match first_failure {
        None => Ok(detail),
        Some((m, n, k, l)) => Err(format!(
            "{detail}; first at M={m} N={n} l={l} k={k}; failing l: {failing_l:?}"
        )),
    }
}

fn recurrence_agreement() -> Outcome {
    let mut entries = 0usize;
    for m in 0..=12 {
        for n in m + 1..=24 {
            let shape = ReductionShape::new(m, n).map_err(|e| e.to_string())?;
            let mut mismatch = None;
            shape
                .for_each_tail_entry(|e| {
                    entries += 1;
                    if mismatch.is_none() && shape.v_element(e.row, e.col).as_ref() != Ok(e) {
                        mismatch = Some((e.row, e.col));
                    }
                })
                .map_err(|e| e.to_string())?;
            if let Some((row, col)) = mismatch {
                return Err(format!("M={m} N={n}: stepped V[{row}][{col}] differs from the closed form"));
            }
        }
    }
    Ok(format!("{entries} stepped tail entries equal the closed form"))
}

fn complexity_separation() -> Outcome {
    let ratio = |m: usize| -> Result<f64, String> {
        let direct = count_ops(Method::Direct, m, m + SPAN, 1).map_err(|e| e.to_string())?;
        let classical = count_ops(Method::Classical, m, m + SPAN, 1).map_err(|e| e.to_string())?;
        Ok(classical.total() as f64 / direct.total() as f64)
    };
    let low = ratio(20)?;
    let high = ratio(80)?;
    let growth = high / low;
    check(growth >= RATIO_GROWTH, || {
        format!("op ratio {low:.2} at M=20, {high:.2} at M=80: growth {growth:.2} < {RATIO_GROWTH}")
    })?;
    Ok(format!("classical/direct ops {low:.2} at M=20, {high:.2} at M=80 (growth {growth:.2})"))
}

fn stability() -> Outcome {
    let config = StabilityConfig::default();
    let series = run_stability_series(&config, STABILITY_RUNS, STABILITY_REQUIRED, StabilityCriterion::default())
        .map_err(|e| e.to_string())?;
    let gaps: Vec<String> = series
        .runs
        .iter()
        .map(|r| r.gap.map_or("inf".into(), |g| format!("{g:.2}")))
        .collect();
    let detail = format!(
        "direct better for {}/{} seeds from {} (need {}); classical/direct max-deviation gap [{}]; \
         V tail max relative error direct {:.1e}, classical {:.1e}",
        series.passes,
        series.runs.len(),
        config.seed,
        STABILITY_REQUIRED,
        gaps.join(", "),
        series.v_entry_error.direct,
        series.v_entry_error.classical
    );
    if series.passed {
        Ok(detail)
    } else {
        Err(format!("{detail}; exceptions {:?}", series.exceptions))
    }
}

fn hand_reductions() -> Outcome {
    let unit = HalfWidth::<Rational>::unit();
    let q = reduce(&Polynomial::monomial(2), 0, &unit).map_err(|e| e.to_string())?;
    check(q.coeffs() == [r(1, 3)], || format!("X^2 -> {:?}", q.coeffs()))?;
    let q = reduce(&Polynomial::monomial(3), 1, &unit).map_err(|e| e.to_string())?;
    check(q.coeffs() == [r(0, 1), r(3, 5)], || format!("X^3 -> {:?}", q.coeffs()))?;
    Ok("X^2 -> [1/3], X^3 -> [0, 3/5]".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("AC1 example V[5,7] entries", 1, example_tail_entries),
        ("AC2 identity block", 5, identity_block),
        ("AC3 orthonormality", 30, orthonormality),
        ("AC4 oracle equivalence", 120, oracle_equivalence),
        ("AC5 optimality", 60, optimality),
        ("AC6 recurrence agreement", 30, recurrence_agreement),
        ("AC7 complexity separation", 60, complexity_separation),
        ("AC8 stability", 300, stability),
        ("AC9 hand reductions", 1, hand_reductions),
    ];
    let mut failed = Vec::new();
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(limit);
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; over the time limit")),
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!(
            "{status} {name} [{:.2}s / {}s]: {detail}",
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        if outcome.is_err() {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
