//! Best L² degree reduction of polynomials on a symmetric interval `[-l, l]`.
//!
//! Given `P` of degree `N` in the canonical basis, [`reduce`] returns the
//! degree-`M` polynomial `Q` minimizing `(1/2l) ∫_{-l}^{l} (Q − P)²` using
//! closed-form entries of the reduction matrix, without any matrix product.
//! [`reduce_classical`] computes the same projection through the explicit
//! product `(T^[M,M,l])⁻¹ T^[M,N,l]` and serves as an oracle and baseline.
//!
//! Everything is generic over [`Scalar`], with an exact rational backend
//! ([`Rational`]) and `f64`.
//!
//! ```
//! use polyreduce::{reduce, HalfWidth, Polynomial, Rational};
//!
//! let x2 = Polynomial::new(vec![0i64, 0, 1].into_iter().map(|c| Rational::from_integer(c.into())).collect()).unwrap();
//! let q = reduce(&x2, 0, &HalfWidth::unit()).unwrap();
//! assert_eq!(q.coeffs(), &[Rational::new(1.into(), 3.into())]);
//! ```

pub mod bench;
pub mod classical;
pub mod direct;
pub mod error;
pub mod factorial;
pub mod instrument;
pub mod matrix;
pub mod ortho;
pub mod poly;
pub mod scalar;

pub use classical::{build_v_classical, reduce_classical};
pub use direct::{build_v_direct, project_to_orthonormal, reduce, v_element, ReductionMatrix, VEntry};
pub use error::{Error, Result};
pub use matrix::{matmul, DenseMatrix};
pub use ortho::{build_t, build_t_transition_inverse, epsilon, legendre, moment, ortho_poly};
pub use poly::{inner_product, l2_error, monomial_inner_product, Polynomial};
pub use scalar::{format_rational, parse_rational, HalfWidth, Rational, Scalar, ScalarMode, Surd};
