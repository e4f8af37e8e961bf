//! Matrix-product reduction: `V = (T^[M,M,l])⁻¹ · T^[M,N,l]` evaluated as an
//! explicit product. Used as the correctness oracle for [`crate::direct`] and
//! as the baseline in benchmarks.
//!
//! In rational mode the product runs over surds, and each term pairs
//! `√(2k+1)` from `ε_{k,m}` with `√(2k+1)` from `⟨X^n, e_k⟩`, so the result is
//! exact. In float mode both factors are rounded to `f64` first and the sum
//! accumulates naively in input order.

use crate::error::{Error, Result};
use crate::instrument;
use crate::matrix::{matmul, matmul_surd, DenseMatrix};
use crate::ortho::{build_t, build_t_transition_inverse};
use crate::poly::Polynomial;
use crate::scalar::{HalfWidth, Scalar, Surd};

fn product<S: Scalar>(
    left: &DenseMatrix<Surd<S>>,
    right: &DenseMatrix<Surd<S>>,
) -> Result<DenseMatrix<S>> {
    if S::EXACT {
        matmul_surd(left, right)?.resolve()
    } else {
        matmul(&left.resolve()?, &right.resolve()?)
    }
}

/// The full `(M+1)×(N+1)` matrix `V^[M,N,l]` by matrix product.
pub fn build_v_classical<S: Scalar>(
    target: usize,
    source: usize,
    l: &HalfWidth<S>,
) -> Result<DenseMatrix<S>> {
    let t = build_t(target, source, l)?;
    let t_inv = build_t_transition_inverse(target, l);
    product(&t_inv, &t)
}

/// Columns `M+1..=N` of `V^[M,N,l]`; the identity block is never computed.
pub fn build_v_tail_classical<S: Scalar>(
    target: usize,
    source: usize,
    l: &HalfWidth<S>,
) -> Result<DenseMatrix<S>> {
    let t_tail = build_t(target, source, l)?.columns(target + 1, source + 1);
    let t_inv = build_t_transition_inverse(target, l);
    product(&t_inv, &t_tail)
}

/// Reduction of `p` to degree `target` through the explicit matrix product.
pub fn reduce_classical<S: Scalar>(
    p: &Polynomial<S>,
    target: usize,
    l: &HalfWidth<S>,
) -> Result<Polynomial<S>> {
    let source = p.nominal_degree();
    if target >= source {
        return Err(Error::TargetDegreeTooHigh {
            target,
            degree: source,
        });
    }
    let tail = build_v_tail_classical(target, source, l)?;
    let a = p.coeffs();
    let b = (0..=target)
        .map(|m| {
            let mut acc = a[m].clone();
            for (j, v) in tail.row(m).iter().enumerate() {
                acc = acc + v.clone() * a[target + 1 + j].clone();
            }
            instrument::accumulate(2 * tail.cols() as u64);
            acc
        })
        .collect();
    Polynomial::new(b)
}
