//! Weighted inner products, norms and condition numbers.
//!
//! `A_n` is self-adjoint for `<u, v>_W = u^T W v` with `W = D^-2`, so its
//! `W`-operator norm is the spectral radius and its `W`-condition number is
//! the ratio of extreme eigenvalue magnitudes.

use crate::model::{symmetrise, TriToeplitzSpec, WeightVector};
use crate::spectral::{eigenvalues, extremal_cosine};
use crate::{Error, Result, DEFAULT_SINGULAR_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub positive_definite: bool,
    /// `max_k |lambda_k| / min_k |lambda_k|`.
    pub cond_weighted: f64,
    /// `(b + 2s cos(pi/(n+1))) / (b - 2s cos(pi/(n+1)))`, only when positive definite.
    pub formula_value: Option<f64>,
}

fn check_lengths(w: &WeightVector, u: &[f64], v: &[f64]) -> Result<()> {
    for len in [u.len(), v.len()] {
        if len != w.len() {
            return Err(Error::DimensionMismatch { expected: w.len(), found: len });
        }
    }
    Ok(())
}

pub fn weighted_inner(w: &WeightVector, u: &[f64], v: &[f64]) -> Result<f64> {
    check_lengths(w, u, v)?;
    Ok(w.entries().iter().zip(u).zip(v).map(|((w, u), v)| w * u * v).sum())
}

pub fn weighted_norm(w: &WeightVector, u: &[f64]) -> Result<f64> {
    Ok(weighted_inner(w, u, u)?.sqrt())
}

/// Spectral radius `max(|b + 2s cos(pi/(n+1))|, |b - 2s cos(pi/(n+1))|)`.
pub fn weighted_operator_norm(spec: &TriToeplitzSpec) -> Result<f64> {
    let form = symmetrise(spec)?;
    let spread = 2.0 * form.s() * extremal_cosine(spec.n());
    Ok((spec.b() + spread).abs().max((spec.b() - spread).abs()))
}

/// Weighted condition number with [`DEFAULT_SINGULAR_TOL`].
pub fn weighted_condition(spec: &TriToeplitzSpec) -> Result<ConditionReport> {
    weighted_condition_with_tol(spec, DEFAULT_SINGULAR_TOL)
}

/// Weighted condition number; [`Error::SingularMatrix`] when
/// `min |lambda_k| <= singular_tol * max |lambda_k|`.
pub fn weighted_condition_with_tol(spec: &TriToeplitzSpec, singular_tol: f64) -> Result<ConditionReport> {
    let form = symmetrise(spec)?;
    let spread = 2.0 * form.s() * extremal_cosine(spec.n());
    let b = spec.b();
    let (lambda_max, lambda_min) = (b + spread, b - spread);
    let positive_definite = b > spread;

    let (max_abs, min_abs) = eigenvalues(spec)?
        .into_iter()
        .map(f64::abs)
        .fold((0.0f64, f64::INFINITY), |(hi, lo), v| (hi.max(v), lo.min(v)));
    if min_abs <= singular_tol * max_abs {
        return Err(Error::SingularMatrix);
    }

    let formula_value = positive_definite.then(|| lambda_max / lambda_min);
    let cond_weighted = formula_value.unwrap_or(max_abs / min_abs);
    Ok(ConditionReport { lambda_max, lambda_min, positive_definite, cond_weighted, formula_value })
}
