//! Legendre polynomials and the orthonormal basis `e_{m,l} = √(2m+1)·L_m(X/l)`
//! of `⟨·,·⟩_l`.
//!
//! Two families of coefficients connect the canonical and orthonormal bases:
//!
//! * `ε_{m,n,l}`, the coefficient of `X^n` in `e_{m,l}` (orthonormal → canonical);
//! * the moments `⟨X^n, e_{m,l}⟩_l` (canonical → orthonormal).
//!
//! Both are `fraction · √(2m+1) · l^k` with an exact fraction. They are built
//! as [`ScaledSurd`] values so the fraction is always formed in big-integer
//! arithmetic, independent of the scalar backend.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::factorial::factorial;
use crate::instrument;
use crate::matrix::DenseMatrix;
use crate::poly::Polynomial;
use crate::scalar::{ratio, HalfWidth, Rational, Scalar, Surd};

/// Matrix of moments `⟨X^n, e_{m,l}⟩_l`, row `m`, column `n`.
pub type ProjectionMatrix<S> = DenseMatrix<Surd<S>>;

/// `fraction · √radicand · l^l_power` with the `l` factor left symbolic.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledSurd {
    pub fraction: Rational,
    pub radicand: u64,
    pub l_power: i32,
}

impl ScaledSurd {
    pub fn zero() -> Self {
        ScaledSurd {
            fraction: Rational::zero(),
            radicand: 1,
            l_power: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.fraction.is_zero()
    }

    pub fn evaluate<S: Scalar>(&self, l: &HalfWidth<S>) -> Surd<S> {
        if self.is_zero() {
            return Surd::zero();
        }
        let coeff = S::from_ratio(&self.fraction) * l.get().powi(self.l_power);
        Surd::new(coeff, self.radicand)
    }
}

fn pow2(k: usize) -> BigInt {
    BigInt::one() << k
}

fn big(v: usize) -> BigInt {
    BigInt::from(v)
}

/// Legendre polynomial `L_m` by the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1) X L_k − k L_{k−1}`.
pub fn legendre(m: usize) -> Polynomial<Rational> {
    let mut prev = vec![Rational::one()];
    if m == 0 {
        return Polynomial::new(prev).expect("non-empty");
    }
    let mut cur = vec![Rational::zero(), Rational::one()];
    for k in 1..m {
        let mut next = vec![Rational::zero(); k + 2];
        let a = ratio(2 * k as i64 + 1, k as i64 + 1);
        let b = ratio(k as i64, k as i64 + 1);
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += &a * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= &b * c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Polynomial::new(cur).expect("non-empty")
}

/// `ε_{m,n,l}` with `l` left symbolic, straight from the factorial form.
pub fn epsilon_term(m: usize, n: usize) -> ScaledSurd {
    if (m + n) % 2 == 1 || n > m {
        return ScaledSurd::zero();
    }
    let s = m % 2;
    let (a, b) = (m / 2, n / 2);
    let num = factorial(2 * (a + b) + s);
    let den = pow2(2 * a) * factorial(a + b) * factorial(a - b) * factorial(2 * b + s);
    let mut fraction = Rational::new(num, den);
    if (a - b) % 2 == 1 {
        fraction = -fraction;
    }
    ScaledSurd {
        fraction,
        radicand: 2 * m as u64 + 1,
        l_power: -(n as i32),
    }
}

pub fn epsilon<S: Scalar>(m: usize, n: usize, l: &HalfWidth<S>) -> Surd<S> {
    epsilon_term(m, n).evaluate(l)
}

/// `⟨X^n, e_{m,l}⟩_l` with `l` left symbolic, straight from the factorial form.
pub fn moment_term(n: usize, m: usize) -> ScaledSurd {
    if (m + n) % 2 == 1 || n < m {
        return ScaledSurd::zero();
    }
    let s = m % 2;
    let (a, b) = (m / 2, n / 2);
    let num = pow2(2 * a + 1) * factorial(2 * b + s) * factorial(a + b + 1);
    let den = factorial(b - a) * factorial(2 * (a + b + 1) + s);
    ScaledSurd {
        fraction: Rational::new(num, den),
        radicand: 2 * m as u64 + 1,
        l_power: n as i32,
    }
}

pub fn moment<S: Scalar>(n: usize, m: usize, l: &HalfWidth<S>) -> Surd<S> {
    moment_term(n, m).evaluate(l)
}

/// `ε_{m,n}` for `n = 0..=m`, stepping `n` by two with the ratio of
/// consecutive terms instead of full factorials.
pub fn epsilon_row(m: usize) -> Vec<ScaledSurd> {
    let mut out = vec![ScaledSurd::zero(); m + 1];
    let s = m % 2;
    let a = m / 2;
    let mut cur = epsilon_term(m, s);
    instrument::entry(1);
    for b in 0..=a {
        let n = 2 * b + s;
        if b < a {
            // ε(b+1)/ε(b) = −(2a+2b+1+2s)(a−b) / ((b+1)(2b+1+2s) l²)
            let num = big(2 * a + 2 * b + 1 + 2 * s) * big(a - b);
            let den = big(b + 1) * big(2 * b + 1 + 2 * s);
            let next = ScaledSurd {
                fraction: -(&cur.fraction * Rational::new(num, den)),
                radicand: cur.radicand,
                l_power: cur.l_power - 2,
            };
            instrument::entry(1);
            out[n] = std::mem::replace(&mut cur, next);
        } else {
            out[n] = cur.clone();
        }
    }
    out
}

/// Moments `⟨X^n, e_{m,l}⟩` for `n = 0..=max_n`, stepped incrementally in `n`.
pub fn moment_row(m: usize, max_n: usize) -> Vec<ScaledSurd> {
    let mut out = vec![ScaledSurd::zero(); max_n + 1];
    if m > max_n {
        return out;
    }
    let s = m % 2;
    let a = m / 2;
    let mut cur = moment_term(m, m);
    instrument::entry(1);
    let mut b = a;
    loop {
        let n = 2 * b + s;
        let next_n = n + 2;
        if next_n > max_n {
            out[n] = cur;
            break;
        }
        // F(b+1)/F(b) = (b+1)(2b+1+2s) l² / ((b−a+1)(2a+2b+3+2s))
        let num = big(b + 1) * big(2 * b + 1 + 2 * s);
        let den = big(b - a + 1) * big(2 * a + 2 * b + 3 + 2 * s);
        let next = ScaledSurd {
            fraction: &cur.fraction * Rational::new(num, den),
            radicand: cur.radicand,
            l_power: cur.l_power + 2,
        };
        instrument::entry(1);
        out[n] = std::mem::replace(&mut cur, next);
        b += 1;
    }
    out
}

/// `e_{m,l}` stored as `√radicand · scaled`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoPoly<S> {
    pub radicand: u64,
    pub scaled: Polynomial<S>,
}

impl<S: Scalar> OrthoPoly<S> {
    /// Coefficient of `X^n`.
    pub fn coefficient(&self, n: usize) -> Surd<S> {
        Surd::new(self.scaled.coeff(n), self.radicand)
    }

    /// Plain coefficients, when the backend can represent `√radicand`.
    pub fn materialize(&self) -> Option<Polynomial<S>> {
        let root = S::sqrt_u64(self.radicand)?;
        Some(self.scaled.scale(&root))
    }

    /// `⟨self, other⟩_l`, exact in rational mode because distinct radicands
    /// only ever meet a zero inner product.
    pub fn inner_product(&self, other: &OrthoPoly<S>, l: &HalfWidth<S>) -> Result<S> {
        let ip = crate::poly::inner_product(&self.scaled, &other.scaled, l);
        let prod = Surd::new(ip, self.radicand).mul(&Surd::new(S::one(), other.radicand));
        prod.to_scalar().ok_or(Error::UnresolvedRadical {
            left: self.radicand,
            right: other.radicand,
        })
    }
}

/// `e_{m,l} = √(2m+1)·L_m(X/l)`.
pub fn ortho_poly<S: Scalar>(m: usize, l: &HalfWidth<S>) -> OrthoPoly<S> {
    let lm = legendre(m);
    let inv_l = S::one() / l.get().clone();
    let mut scale = S::one();
    let mut coeffs = Vec::with_capacity(m + 1);
    for c in lm.coeffs() {
        coeffs.push(S::from_ratio(c) * scale.clone());
        scale = scale * inv_l.clone();
    }
    OrthoPoly {
        radicand: 2 * m as u64 + 1,
        scaled: Polynomial::new(coeffs).expect("non-empty"),
    }
}

/// `T^[M,N,l]`: the `(M+1)×(N+1)` matrix of moments, row `m`, column `n`.
pub fn build_t<S: Scalar>(target: usize, source: usize, l: &HalfWidth<S>) -> Result<ProjectionMatrix<S>> {
    if target > source {
        return Err(Error::InvalidShape {
            target,
            source_degree: source,
        });
    }
    let rows: Vec<Vec<Surd<S>>> = (0..=target)
        .map(|m| moment_row(m, source).iter().map(|t| t.evaluate(l)).collect())
        .collect();
    Ok(DenseMatrix::from_fn(target + 1, source + 1, |m, n| rows[m][n].clone()))
}

/// `(T^[M,M,l])⁻¹`, filled analytically with entry `(m, n) = ε_{n,m,l}`.
pub fn build_t_transition_inverse<S: Scalar>(target: usize, l: &HalfWidth<S>) -> ProjectionMatrix<S> {
    // Column n holds the canonical coefficients of e_{n,l}.
    let cols: Vec<Vec<Surd<S>>> = (0..=target)
        .map(|n| epsilon_row(n).iter().map(|t| t.evaluate(l)).collect())
        .collect();
    DenseMatrix::from_fn(target + 1, target + 1, |m, n| {
        cols[n].get(m).cloned().unwrap_or_else(Surd::zero)
    })
}
