//! Direct degree reduction.
//!
//! The reduction matrix `V^[M,N,l] = (T^[M,M,l])⁻¹ T^[M,N,l]` maps the
//! canonical coefficients of `P` (degree `N`) to those of its best degree-`M`
//! approximation. Its leading `(M+1)×(M+1)` block is the identity, mixed
//! parity entries vanish, and every remaining tail entry is an exact fraction
//! times an even power of `l`:
//!
//! ```text
//! v[2m,2n]     = (−1)^(p−m) l^(2(n−m)) (2n)!   / (2^(n−m) (n−m)! (p−m)! (2m)!)
//!                · Π_{r=n−p}^{n−m−1} r · Π_{r=p+m+1}^{p+n} 1/(2r+1)
//! v[2m+1,2n+1] = (−1)^(p1−m) l^(2(n−m)) (2n+1)! / (2^(n−m) (n−m)! (p1−m)! (2m+1)!)
//!                · Π_{r=n−p1}^{n−m−1} r · Π_{r=p1+m+2}^{p1+n+1} 1/(2r+1)
//! ```
//!
//! with `p = ⌊M/2⌋` and `p1 = ⌊(M−1)/2⌋`. Neighbouring entries are related by
//! constant-cost ratios, so the reduction never needs a matrix product.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::instrument;
use crate::matrix::DenseMatrix;
use crate::ortho::{epsilon_row, moment_row};
use crate::poly::Polynomial;
use crate::scalar::{HalfWidth, Rational, Scalar, Surd};

/// `p = ⌊M/2⌋`, `p1 = ⌊(M−1)/2⌋`, `q = ⌊N/2⌋`, `q1 = ⌊(N−1)/2⌋`, floored
/// toward −∞ so that `M = 0` gives `p1 = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityBounds {
    pub p: i64,
    pub p1: i64,
    pub q: i64,
    pub q1: i64,
}

impl ParityBounds {
    pub fn new(target: usize, source: usize) -> Self {
        let (m, n) = (target as i64, source as i64);
        ParityBounds {
            p: m.div_euclid(2),
            p1: (m - 1).div_euclid(2),
            q: n.div_euclid(2),
            q1: (n - 1).div_euclid(2),
        }
    }

    /// Half-index bounds `(last row, last column)` of one parity family.
    fn family(&self, odd: bool) -> (i64, i64) {
        if odd {
            (self.p1, self.q1)
        } else {
            (self.p, self.q)
        }
    }
}

/// One entry of `V^[M,N,l]`: `fraction · l^l_power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VEntry {
    pub row: usize,
    pub col: usize,
    pub fraction: Rational,
    pub l_power: u32,
}

impl VEntry {
    fn zero(row: usize, col: usize) -> Self {
        VEntry {
            row,
            col,
            fraction: Rational::zero(),
            l_power: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.fraction.is_zero()
    }

    pub fn value<S: Scalar>(&self, l: &HalfWidth<S>) -> S {
        S::from_ratio(&self.fraction) * l.get().powi(self.l_power as i32)
    }
}

/// The `(M, N)` pair together with its parity bounds; the context for
/// closed-form entries and recurrence steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionShape {
    target: usize,
    source: usize,
    bounds: ParityBounds,
}

impl ReductionShape {
    pub fn new(target: usize, source: usize) -> Result<Self> {
        if target >= source {
            return Err(Error::InvalidShape {
                target,
                source_degree: source,
            });
        }
        Ok(ReductionShape {
            target,
            source,
            bounds: ParityBounds::new(target, source),
        })
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn bounds(&self) -> ParityBounds {
        self.bounds
    }

    fn check_tail(&self, row: usize, col: usize) -> Result<()> {
        if row > self.target || col <= self.target || col > self.source {
            return Err(Error::IndexOutOfRange {
                row,
                col,
                rows: self.target + 1,
                cols: self.source + 1,
            });
        }
        Ok(())
    }

    /// Closed-form tail entry `v[row, col]`, `row ≤ M < col ≤ N`.
    pub fn v_element(&self, row: usize, col: usize) -> Result<VEntry> {
        self.check_tail(row, col)?;
        if (row + col) % 2 == 1 {
            return Ok(VEntry::zero(row, col));
        }
        let odd = row % 2 == 1;
        let s = row % 2;
        let (top, _) = self.bounds.family(odd);
        let top = top as usize;
        let (m, n) = (row / 2, col / 2);

        let mut num = crate::factorial::factorial(2 * n + s);
        let mut den = (BigInt::one() << (n - m))
            * crate::factorial::factorial(n - m)
            * crate::factorial::factorial(top - m)
            * crate::factorial::factorial(2 * m + s);
        // Π_{r=n−top}^{n−m−1} r; n > top so every factor is positive.
        for r in (n - top)..(n - m) {
            num *= BigInt::from(r);
        }
        // Π 1/(2r+1) over r = top+m+1+s ..= top+n+s
        for r in (top + m + 1 + s)..=(top + n + s) {
            den *= BigInt::from(2 * r + 1);
        }
        instrument::entry(1 + (m.abs_diff(top) + n.abs_diff(m)) as u64);
        let mut fraction = Rational::new(num, den);
        if (top - m) % 2 == 1 {
            fraction = -fraction;
        }
        Ok(VEntry {
            row,
            col,
            fraction,
            l_power: (col - row) as u32,
        })
    }

    /// Same-parity entry of the half-indices `(m, n)` in family `odd`, or
    /// an error when the entry does not fall in the step's valid range.
    fn family_indices(&self, entry: &VEntry) -> Result<(bool, i64, i64)> {
        self.check_tail(entry.row, entry.col)?;
        if (entry.row + entry.col) % 2 == 1 {
            return Err(Error::StepOutOfRange {
                row: entry.row,
                col: entry.col,
            });
        }
        let odd = entry.row % 2 == 1;
        Ok((odd, (entry.row / 2) as i64, (entry.col / 2) as i64))
    }

    /// `v[row, col] → v[row + 2, col]`.
    pub fn step_row(&self, entry: &VEntry) -> Result<VEntry> {
        let (odd, m, n) = self.family_indices(entry)?;
        let (top, last) = self.bounds.family(odd);
        if !(m < top && n > top && n <= last) {
            return Err(Error::StepOutOfRange {
                row: entry.row,
                col: entry.col,
            });
        }
        let s = odd as i64;
        // −(n−m)(top−m)(2(top+m)+3+2s) / (l² (n−m−1)(2m+1+2s)(m+1))
        let num = BigInt::from((n - m) * (top - m) * (2 * (top + m) + 3 + 2 * s));
        let den = BigInt::from((n - m - 1) * (2 * m + 1 + 2 * s) * (m + 1));
        instrument::entry(1);
        Ok(VEntry {
            row: entry.row + 2,
            col: entry.col,
            fraction: -(&entry.fraction * Rational::new(num, den)),
            l_power: entry.l_power - 2,
        })
    }

    /// `v[row, col] → v[row, col + 2]`.
    pub fn step_col(&self, entry: &VEntry) -> Result<VEntry> {
        let (odd, m, n) = self.family_indices(entry)?;
        let (top, last) = self.bounds.family(odd);
        if !(m <= top && n > top && n < last) {
            return Err(Error::StepOutOfRange {
                row: entry.row,
                col: entry.col,
            });
        }
        let s = odd as i64;
        // l² (2n+1+2s)(n+1)(n−m) / ((n−m+1)(n−top)(2(top+n)+3+2s))
        let num = BigInt::from((2 * n + 1 + 2 * s) * (n + 1) * (n - m));
        let den = BigInt::from((n - m + 1) * (n - top) * (2 * (top + n) + 3 + 2 * s));
        instrument::entry(1);
        Ok(VEntry {
            row: entry.row,
            col: entry.col + 2,
            fraction: &entry.fraction * Rational::new(num, den),
            l_power: entry.l_power + 2,
        })
    }

    /// Visits every nonzero tail entry row by row: one closed-form seed per
    /// parity family, then recurrence steps down the first tail column and
    /// along each row.
    pub fn for_each_tail_entry(&self, mut visit: impl FnMut(&VEntry)) -> Result<()> {
        for odd in [false, true] {
            let (top, last) = self.bounds.family(odd);
            if top < 0 || last <= top {
                continue;
            }
            let s = odd as usize;
            let first_col = 2 * (top as usize + 1) + s;
            let mut row_head = self.v_element(s, first_col)?;
            for m in 0..=top {
                let mut e = row_head.clone();
                visit(&e);
                for _ in (top + 1)..last {
                    e = self.step_col(&e)?;
                    visit(&e);
                }
                if m < top {
                    row_head = self.step_row(&row_head)?;
                }
            }
        }
        Ok(())
    }
}

/// Closed-form `v[m, n]` of `V^[M,N,l]` for a tail position `m ≤ M < n ≤ N`.
pub fn v_element(m: usize, n: usize, target: usize, source: usize) -> Result<VEntry> {
    ReductionShape::new(target, source)?.v_element(m, n)
}

/// `V^[M,N,l]` with `l` symbolic: identity block plus the exact tail.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionMatrix {
    shape: ReductionShape,
    /// Row-major `(M+1) × (N−M)` tail, columns `M+1..=N`.
    tail: Vec<VEntry>,
}

impl ReductionMatrix {
    pub fn shape(&self) -> &ReductionShape {
        &self.shape
    }

    pub fn rows(&self) -> usize {
        self.shape.target + 1
    }

    pub fn cols(&self) -> usize {
        self.shape.source + 1
    }

    pub fn tail(&self) -> &[VEntry] {
        &self.tail
    }

    pub fn entry(&self, row: usize, col: usize) -> Result<VEntry> {
        let (target, source) = (self.shape.target, self.shape.source);
        if row > target || col > source {
            return Err(Error::IndexOutOfRange {
                row,
                col,
                rows: target + 1,
                cols: source + 1,
            });
        }
        if col <= target {
            let fraction = if row == col { Rational::one() } else { Rational::zero() };
            return Ok(VEntry {
                row,
                col,
                fraction,
                l_power: 0,
            });
        }
        Ok(self.tail[row * (source - target) + (col - target - 1)].clone())
    }

    pub fn evaluate<S: Scalar>(&self, l: &HalfWidth<S>) -> DenseMatrix<S> {
        DenseMatrix::from_fn(self.rows(), self.cols(), |r, c| {
            self.entry(r, c).expect("in range").value(l)
        })
    }
}

/// Builds `V^[M,N,l]` by seeding closed forms and chaining recurrences.
pub fn build_v_direct(target: usize, source: usize) -> Result<ReductionMatrix> {
    let shape = ReductionShape::new(target, source)?;
    let width = source - target;
    let mut tail: Vec<VEntry> = (0..=target)
        .flat_map(|r| (target + 1..=source).map(move |c| VEntry::zero(r, c)))
        .collect();
    shape.for_each_tail_entry(|e| {
        tail[e.row * width + (e.col - target - 1)] = e.clone();
    })?;
    Ok(ReductionMatrix { shape, tail })
}

/// Best degree-`target` approximation of `p` in `⟨·,·⟩_l`, computed entry by
/// entry from the closed form without materializing `V`.
pub fn reduce<S: Scalar>(p: &Polynomial<S>, target: usize, l: &HalfWidth<S>) -> Result<Polynomial<S>> {
    let source = p.nominal_degree();
    if target >= source {
        return Err(Error::TargetDegreeTooHigh {
            target,
            degree: source,
        });
    }
    let shape = ReductionShape::new(target, source)?;
    let a = p.coeffs();
    let mut b: Vec<S> = a[..=target].to_vec();
    let powers = l.powers(source);
    instrument::entry(source as u64);
    shape.for_each_tail_entry(|e| {
        let v = S::from_ratio(&e.fraction) * powers[e.l_power as usize].clone();
        instrument::entry(1);
        b[e.row] = b[e.row].clone() + v * a[e.col].clone();
        instrument::accumulate(2);
    })?;
    Polynomial::new(b)
}

/// Orthonormal coordinates `β_m = ⟨P, e_{m,l}⟩_l` for `m = 0..=target`.
pub fn project_to_orthonormal<S: Scalar>(
    p: &Polynomial<S>,
    target: usize,
    l: &HalfWidth<S>,
) -> Result<Vec<Surd<S>>> {
    let source = p.nominal_degree();
    (0..=target)
        .map(|m| {
            moment_row(m, source)
                .iter()
                .zip(p.coeffs())
                .try_fold(Surd::zero(), |acc, (t, a)| acc.add(&t.evaluate(l).scale(a)))
        })
        .collect()
}

/// `Σ β_m e_{m,l}` in the canonical basis.
pub fn from_orthonormal<S: Scalar>(beta: &[Surd<S>], l: &HalfWidth<S>) -> Result<Polynomial<S>> {
    let mut coeffs = vec![Surd::zero(); beta.len().max(1)];
    for (m, bm) in beta.iter().enumerate() {
        for (n, eps) in epsilon_row(m).iter().enumerate() {
            coeffs[n] = coeffs[n].add(&bm.mul(&eps.evaluate(l)))?;
        }
    }
    let coeffs = coeffs
        .iter()
        .map(|c| {
            c.to_scalar().ok_or(Error::UnresolvedRadical {
                left: c.radicand(),
                right: 1,
            })
        })
        .collect::<Result<Vec<S>>>()?;
    Polynomial::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn r(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    fn rpoly(c: &[i64]) -> Polynomial<Rational> {
        Polynomial::new(c.iter().map(|&v| r(v, 1)).collect()).unwrap()
    }

    #[test]
    fn parity_bounds() {
        let b = ParityBounds::new(0, 3);
        assert_eq!(b, ParityBounds { p: 0, p1: -1, q: 1, q1: 1 });
        let b = ParityBounds::new(5, 7);
        assert_eq!(b, ParityBounds { p: 2, p1: 2, q: 3, q1: 3 });
        let b = ParityBounds::new(4, 9);
        assert_eq!(b, ParityBounds { p: 2, p1: 1, q: 4, q1: 4 });
    }

    #[test]
    fn v_element_examples() {
        let e = v_element(4, 6, 5, 7).unwrap();
        assert_eq!((e.fraction.clone(), e.l_power), (r(720, 528), 2));
        assert!(v_element(2, 7, 5, 7).unwrap().is_zero());
        let e = v_element(0, 6, 5, 7).unwrap();
        assert_eq!((e.fraction, e.l_power), (r(1440, 66528), 6));
    }

    #[test]
    fn v_element_rejects_non_tail_indices() {
        assert!(matches!(v_element(2, 5, 5, 7), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(v_element(6, 6, 5, 7), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(v_element(0, 8, 5, 7), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(v_element(0, 6, 7, 7), Err(Error::InvalidShape { .. })));
    }

    #[test]
    fn step_examples() {
        let shape = ReductionShape::new(5, 7).unwrap();
        let v26 = shape.v_element(2, 6).unwrap();
        assert_eq!(v26.fraction, r(-720, 1584));
        // factor −(2·1·9)/(l²·1·3·2)
        let v46 = shape.step_row(&v26).unwrap();
        assert_eq!(v46.fraction, &v26.fraction * r(-2 * 9, 3 * 2));
        assert_eq!(v46, shape.v_element(4, 6).unwrap());
        let v06 = shape.v_element(0, 6).unwrap();
        let chained = shape.step_row(&shape.step_row(&v06).unwrap()).unwrap();
        assert_eq!(chained, v46);
    }

    #[test]
    fn steps_reject_out_of_range() {
        let shape = ReductionShape::new(5, 7).unwrap();
        let v46 = shape.v_element(4, 6).unwrap();
        assert!(matches!(shape.step_row(&v46), Err(Error::StepOutOfRange { .. })));
        assert!(matches!(shape.step_col(&v46), Err(Error::StepOutOfRange { .. })));
        let mixed = shape.v_element(2, 7).unwrap();
        assert!(matches!(shape.step_row(&mixed), Err(Error::StepOutOfRange { .. })));
    }

    #[test]
    fn build_v_direct_examples() {
        let v = build_v_direct(0, 2).unwrap();
        assert_eq!(v.entry(0, 2).unwrap().fraction, r(1, 3));
        let v = build_v_direct(1, 3).unwrap();
        assert_eq!(v.entry(1, 3).unwrap().fraction, r(3, 5));
        assert_eq!(v.entry(0, 2).unwrap().fraction, r(1, 3));
        assert!(v.entry(0, 3).unwrap().is_zero());
        assert!(matches!(build_v_direct(3, 3), Err(Error::InvalidShape { .. })));
    }

    #[test]
    fn reduce_examples() {
        let unit = HalfWidth::unit();
        assert_eq!(reduce(&rpoly(&[0, 0, 1]), 0, &unit).unwrap().coeffs(), &[r(1, 3)]);
        assert_eq!(
            reduce(&rpoly(&[0, 0, 0, 1]), 1, &unit).unwrap().coeffs(),
            &[r(0, 1), r(3, 5)]
        );
        assert!(matches!(
            reduce(&rpoly(&[1, 2]), 1, &unit),
            Err(Error::TargetDegreeTooHigh { target: 1, degree: 1 })
        ));
    }

    #[test]
    fn reduce_matches_example_coefficient_system() {
        let l = HalfWidth::new(r(3, 2)).unwrap();
        let lv = l.get().clone();
        let a: Vec<Rational> = (0..8).map(|k| r(k * k - 5, k + 1)).collect();
        let p = Polynomial::new(a.clone()).unwrap();
        let b = reduce(&p, 5, &l).unwrap();
        let l2 = &lv * &lv;
        let l4 = &l2 * &l2;
        let l6 = &l4 * &l2;
        let expected = [
            &a[0] + &l6 * r(1440, 66528) * &a[6],
            &a[1] + &l6 * r(10080, 123552) * &a[7],
            &a[2] - &l4 * r(720, 1584) * &a[6],
            &a[3] - &l4 * r(5040, 6864) * &a[7],
            &a[4] + &l2 * r(720, 528) * &a[6],
            &a[5] + &l2 * r(5040, 3120) * &a[7],
        ];
        assert_eq!(b.coeffs(), &expected);
    }

    #[test]
    fn projection_examples() {
        let unit = HalfWidth::unit();
        let beta = project_to_orthonormal(&rpoly(&[1]), 0, &unit).unwrap();
        assert_eq!(beta, vec![Surd::rational(r(1, 1))]);
        let beta = project_to_orthonormal(&rpoly(&[0, 0, 1]), 0, &unit).unwrap();
        assert_eq!(beta, vec![Surd::rational(r(1, 3))]);
        let x3 = rpoly(&[0, 0, 0, 1]);
        let beta = project_to_orthonormal(&x3, 1, &unit).unwrap();
        assert_eq!(beta[1], Surd::new(r(1, 5), 3));
        assert_eq!(from_orthonormal(&beta, &unit).unwrap().coeffs(), &[r(0, 1), r(3, 5)]);
    }
}
