//! Dense polynomials in the canonical basis and the normalized L² inner
//! product `⟨A, B⟩_l = (1/2l) ∫_{-l}^{l} A(x) B(x) dx`.

use std::ops::Sub;

use crate::error::{Error, Result};
use crate::scalar::{HalfWidth, Rational, Scalar};

/// Ascending coefficients: index `k` holds the coefficient of `X^k`.
///
/// Trailing zeros are kept. Every formula indexes by position, so the
/// nominal degree is `len - 1` regardless of the mathematical degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        Ok(Polynomial { coeffs })
    }

    pub fn zero() -> Self {
        Polynomial {
            coeffs: vec![S::zero()],
        }
    }

    /// `X^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![S::zero(); k + 1];
        coeffs[k] = S::one();
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn nominal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `X^k`, zero past the end.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, k: &S) -> Self {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
        }
    }

    /// Zero-pads to `len` coefficients; never truncates.
    pub fn padded(&self, len: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < len {
            coeffs.resize(len, S::zero());
        }
        Polynomial { coeffs }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// True when both coefficient vectors agree after zero-padding.
    pub fn same_padded(&self, other: &Self) -> bool {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len).all(|k| self.coeff(k) == other.coeff(k))
    }
}

impl Polynomial<Rational> {
    pub fn to_f64(&self) -> Polynomial<f64> {
        self.map(Scalar::to_f64)
    }
}

impl<S: Scalar> Sub for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn sub(self, rhs: &Polynomial<S>) -> Polynomial<S> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial {
            coeffs: (0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect(),
        }
    }
}

/// `⟨X^i, X^j⟩_l`: zero when `i + j` is odd, `l^(i+j) / (i+j+1)` otherwise.
pub fn monomial_inner_product<S: Scalar>(i: usize, j: usize, l: &HalfWidth<S>) -> S {
    let k = i + j;
    if k % 2 == 1 {
        return S::zero();
    }
    l.get().powi(k as i32) / S::from_i64(k as i64 + 1)
}

pub fn inner_product<S: Scalar>(a: &Polynomial<S>, b: &Polynomial<S>, l: &HalfWidth<S>) -> S {
    let na = a.nominal_degree();
    let nb = b.nominal_degree();
    let powers = l.powers(na + nb);
    let mut acc = S::zero();
    for (i, ai) in a.coeffs.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        // Only j with i + j even contribute.
        for j in ((i % 2)..=nb).step_by(2) {
            let bj = &b.coeffs[j];
            if bj.is_zero() {
                continue;
            }
            let k = i + j;
            acc = acc + ai.clone() * bj.clone() * powers[k].clone() / S::from_i64(k as i64 + 1);
        }
    }
    acc
}

/// `J_P(Q) = ⟨Q − P, Q − P⟩_l`, the mean squared error on `[-l, l]`.
pub fn l2_error<S: Scalar>(p: &Polynomial<S>, q: &Polynomial<S>, l: &HalfWidth<S>) -> S {
    let diff = q - p;
    inner_product(&diff, &diff, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn rpoly(c: &[(i64, i64)]) -> Polynomial<Rational> {
        Polynomial::new(c.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
    }

    fn unit() -> HalfWidth<Rational> {
        HalfWidth::unit()
    }

    #[test]
    fn rejects_empty() {
        assert_eq!(Polynomial::<f64>::new(vec![]).unwrap_err(), Error::EmptyPolynomial);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(Polynomial::new(vec![0.0]).unwrap().eval(&7.0), 0.0);
        assert_eq!(Polynomial::new(vec![1.0, 2.0, 3.0]).unwrap().eval(&1.0), 6.0);
        // 2³ computed directly
        let cube = Polynomial::<Rational>::monomial(3);
        assert_eq!(cube.eval(&ratio(2, 1)), ratio(2 * 2 * 2, 1));
    }

    #[test]
    fn monomial_inner_product_examples() {
        assert_eq!(monomial_inner_product(0, 0, &unit()), ratio(1, 1));
        let five = HalfWidth::new(ratio(5, 1)).unwrap();
        assert_eq!(monomial_inner_product(1, 2, &five), ratio(0, 1));
        assert_eq!(monomial_inner_product(2, 0, &unit()), ratio(1, 3));
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(inner_product(&rpoly(&[(1, 1)]), &rpoly(&[(1, 1)]), &unit()), ratio(1, 1));
        assert_eq!(
            inner_product(&rpoly(&[(0, 1), (1, 1)]), &rpoly(&[(1, 1)]), &unit()),
            ratio(0, 1)
        );
        let two = HalfWidth::new(ratio(2, 1)).unwrap();
        let x = rpoly(&[(0, 1), (1, 1)]);
        assert_eq!(inner_product(&x, &x, &two), ratio(4, 3));
    }

    #[test]
    fn l2_error_examples() {
        let p = rpoly(&[(1, 1), (2, 1)]);
        assert_eq!(l2_error(&p, &p, &unit()), ratio(0, 1));
        let x2 = rpoly(&[(0, 1), (0, 1), (1, 1)]);
        // 1/5 − 2/9 + 1/9
        assert_eq!(l2_error(&x2, &rpoly(&[(1, 3)]), &unit()), ratio(4, 45));
        assert_eq!(l2_error(&x2, &rpoly(&[(0, 1)]), &unit()), ratio(1, 5));
    }

    #[test]
    fn sub_pads_shorter_operand() {
        let a = rpoly(&[(1, 1)]);
        let b = rpoly(&[(1, 1), (0, 1), (2, 1)]);
        assert_eq!((&a - &b).coeffs(), &[ratio(0, 1), ratio(0, 1), ratio(-2, 1)]);
        assert!(a.same_padded(&a.padded(4)));
        assert!(!a.same_padded(&b));
    }
}
