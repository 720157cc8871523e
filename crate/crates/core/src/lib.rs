//! Closed-form linear algebra for real tridiagonal Toeplitz matrices.
//!
//! `A_n(a, b, c)` is the `n x n` matrix with `b` on the diagonal, `a` on the
//! subdiagonal and `c` on the superdiagonal. When `a * c > 0` it is diagonally
//! similar to a symmetric Toeplitz matrix with off-diagonal `s = sqrt(a c)`,
//! and almost everything about it has a closed form:
//!
//! - [`model`]: parameter validation, the symmetrised parameters `(s, q, x)`,
//!   the weight vector of the inner product making `A_n` self-adjoint, and
//!   an `O(n)` matrix-vector product.
//! - [`cheby`]: Chebyshev polynomials of the second kind in plain and
//!   sign/log-magnitude form.
//! - [`spectral`]: eigenpairs, extremal eigenvalues, determinant and
//!   characteristic polynomial.
//! - [`greens`]: the Green-kernel inverse, `O(n)` inverse application, a
//!   Thomas-algorithm baseline and the exponential decay bound.
//! - [`conditioning`]: weighted inner products, norms and condition numbers.
//! - [`repunit`]: exact big-integer and rational results for `A_n(d, d+1, 1)`.
//! - [`oracle`]: naive dense reference implementations used for
//!   cross-validation.

#![forbid(unsafe_code)]

pub mod cheby;
pub mod conditioning;
mod error;
pub mod greens;
pub mod model;
pub mod oracle;
pub mod repunit;
mod scaled;
pub mod spectral;

pub use error::{Error, Result};
pub use model::{SymmetrisedForm, TriToeplitzSpec, WeightVector};
pub use scaled::ScaledValue;

/// Default relative tolerance used to decide that a matrix is numerically
/// singular (Green kernel construction, condition numbers).
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-12;

/// Default pivot tolerance of [`greens::thomas_solve`], relative to the row
/// magnitude `|a| + |b| + |c|`.
pub const DEFAULT_PIVOT_TOL: f64 = 1e-300;
