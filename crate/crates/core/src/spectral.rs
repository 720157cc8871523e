//! Closed-form spectrum, determinant and characteristic polynomial.
//!
//! For `1 <= k <= n`, with `theta_k = k pi / (n+1)`:
//!
//! ```text
//! lambda_k = b + 2 s cos(theta_k)
//! r_j      = q^(j-1) sin(j theta_k)      (right eigenvector)
//! det A_n  = s^n U_n(b / 2s)
//! chi_n(t) = s^n U_n((t - b) / 2s)
//! ```
//!
//! Eigenvalues come out in `k` order, which is strictly decreasing. Left
//! eigenvectors are `W r` by weighted self-adjointness and are not provided
//! separately.

use std::f64::consts::PI;

use crate::cheby::eval_u_scaled;
use crate::model::{symmetrise, SymmetrisedForm, TriToeplitzSpec};
use crate::{Error, Result, ScaledValue};

/// Relative threshold below which [`char_poly_eval`] reports an exact zero.
pub const CHAR_POLY_ZERO_TOL: f64 = 1e-10;

/// Scaling applied to an eigenvector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Entries `q^(j-1) sin(j theta_k)` verbatim.
    #[default]
    Raw,
    /// Unit norm in the `W` inner product.
    UnitWeighted,
    /// Unit Euclidean norm, first nonzero entry positive.
    UnitEuclidean,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub k: usize,
    pub theta: f64,
    pub value: f64,
    pub right_vector: Vec<f64>,
    pub symmetric_vector: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSummary {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub positive_definite: bool,
}

fn theta(k: usize, n: usize) -> f64 {
    k as f64 * PI / (n + 1) as f64
}

/// `cos(k pi / (n+1))`, formed as `sin((n+1-2k) pi / (2(n+1)))` so the
/// middle index gives an exact zero and `k`, `n+1-k` give exact negatives.
pub(crate) fn cos_theta(k: usize, n: usize) -> f64 {
    let offset = (n + 1) as f64 - 2.0 * k as f64;
    (offset * PI / (2 * (n + 1)) as f64).sin()
}

/// `cos(pi / (n+1))`.
pub(crate) fn extremal_cosine(n: usize) -> f64 {
    cos_theta(1, n)
}

pub fn eigenvalue(spec: &TriToeplitzSpec, k: usize) -> Result<f64> {
    let form = symmetrise(spec)?;
    spec.check_index(k)?;
    Ok(form.b() + 2.0 * form.s() * cos_theta(k, spec.n()))
}

/// `(lambda_1, ..., lambda_n)`, strictly decreasing.
pub fn eigenvalues(spec: &TriToeplitzSpec) -> Result<Vec<f64>> {
    let form = symmetrise(spec)?;
    let n = spec.n();
    Ok((1..=n).map(|k| spec.b() + 2.0 * form.s() * cos_theta(k, n)).collect())
}

/// `sin(j theta_k)` for `j = 1..=n`.
fn sine_vector(k: usize, n: usize) -> Vec<f64> {
    let t = theta(k, n);
    (1..=n).map(|j| (j as f64 * t).sin()).collect()
}

/// Entries `D u` in sign/log form, normalised so the largest magnitude is
/// `e^0`; returns the shift that was subtracted.
fn scaled_right_vector(form: &SymmetrisedForm, u: &[f64]) -> (Vec<ScaledValue>, f64) {
    let entries: Vec<ScaledValue> = u
        .iter()
        .enumerate()
        .map(|(idx, &uj)| form.scaling_entry(idx + 1) * ScaledValue::from_f64(uj))
        .collect();
    let max_log = entries.iter().map(|e| e.log_mag()).fold(f64::NEG_INFINITY, f64::max);
    (entries.into_iter().map(|e| e.scale_ln(-max_log)).collect(), max_log)
}

/// Right eigenvector `r^(k)` of `A_n` under the chosen normalisation.
///
/// [`Normalization::Raw`] can overflow for large `n` with `|q| != 1`; the
/// unit normalisations are assembled in log space and do not.
pub fn eigenvector(spec: &TriToeplitzSpec, k: usize, normalization: Normalization) -> Result<Vec<f64>> {
    let form = symmetrise(spec)?;
    spec.check_index(k)?;
    let n = spec.n();
    let u = sine_vector(k, n);
    match normalization {
        Normalization::Raw => u
            .iter()
            .enumerate()
            .map(|(idx, &uj)| (form.scaling_entry(idx + 1) * ScaledValue::from_f64(uj)).to_f64())
            .collect(),
        Normalization::UnitWeighted => {
            // ||D u||_W = ||u||_2 since W = D^-2.
            let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
            u.iter()
                .enumerate()
                .map(|(idx, &uj)| {
                    (form.scaling_entry(idx + 1) * ScaledValue::from_f64(uj / norm)).to_f64()
                })
                .collect()
        }
        Normalization::UnitEuclidean => {
            let (entries, _) = scaled_right_vector(&form, &u);
            let mut plain: Vec<f64> = entries.iter().map(|e| e.to_f64_saturating()).collect();
            let norm = plain.iter().map(|v| v * v).sum::<f64>().sqrt();
            let flip = plain.iter().find(|v| **v != 0.0).is_some_and(|v| *v < 0.0);
            let scale = if flip { -1.0 / norm } else { 1.0 / norm };
            plain.iter_mut().for_each(|v| *v *= scale);
            Ok(plain)
        }
    }
}

/// Full eigenpair with raw right vector and the symmetric sine vector.
pub fn eigenpair(spec: &TriToeplitzSpec, k: usize) -> Result<EigenPair> {
    let value = eigenvalue(spec, k)?;
    Ok(EigenPair {
        k,
        theta: theta(k, spec.n()),
        value,
        right_vector: eigenvector(spec, k, Normalization::Raw)?,
        symmetric_vector: sine_vector(k, spec.n()),
    })
}

/// `lambda_max = b + 2s cos(pi/(n+1))`, `lambda_min = b - 2s cos(pi/(n+1))`,
/// positive definite iff `b > 2s cos(pi/(n+1))`.
pub fn extremal_eigenvalues(spec: &TriToeplitzSpec) -> Result<SpectrumSummary> {
    let form = symmetrise(spec)?;
    let spread = 2.0 * form.s() * extremal_cosine(spec.n());
    let b = spec.b();
    Ok(SpectrumSummary {
        lambda_min: b - spread,
        lambda_max: b + spread,
        positive_definite: b > spread,
    })
}

/// `det A_n = s^n U_n(x)` in sign/log form.
pub fn determinant(spec: &TriToeplitzSpec) -> Result<ScaledValue> {
    let form = symmetrise(spec)?;
    let n = spec.n();
    Ok(eval_u_scaled(n, form.x()).scale_ln(n as f64 * form.s().ln()))
}

/// Determinant from the continuant `D_k = b D_{k-1} - s^2 D_{k-2}`,
/// `D_0 = 1`, `D_1 = b`, with both terms rescaled whenever they grow large.
pub fn determinant_continuant(spec: &TriToeplitzSpec) -> Result<ScaledValue> {
    let form = symmetrise(spec)?;
    let b = spec.b();
    let s = form.s();
    // Work with D_k / s^k to keep the recurrence O(1) in magnitude per step:
    // d_k = (b/s) d_{k-1} - d_{k-2}.
    let ratio = b / s;
    let mut prev = 1.0;
    let mut cur = ratio;
    let mut log_scale = 0.0;
    for _ in 1..spec.n() {
        let next = ratio * cur - prev;
        prev = cur;
        cur = next;
        let m = cur.abs().max(prev.abs());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            prev /= m;
            cur /= m;
            log_scale += m.ln();
        }
    }
    Ok(ScaledValue::from_f64(cur).scale_ln(log_scale + spec.n() as f64 * s.ln()))
}

/// `chi_n(t) = det(t I - A_n) = s^n U_n((t - b) / 2s)`.
///
/// Returns an exact zero when `|U_n| <= CHAR_POLY_ZERO_TOL * (n + 1)`, the
/// magnitude bound of `U_n` on `[-1, 1]`.
pub fn char_poly_eval(spec: &TriToeplitzSpec, t: f64) -> Result<ScaledValue> {
    let form = symmetrise(spec)?;
    let n = spec.n();
    let y = (t - spec.b()) / (2.0 * form.s());
    let u = eval_u_scaled(n, y);
    if u.log_mag() <= (CHAR_POLY_ZERO_TOL * (n + 1) as f64).ln() {
        return Ok(ScaledValue::ZERO);
    }
    Ok(u.scale_ln(n as f64 * form.s().ln()))
}

/// Sum of `ln|lambda_k|` and the product sign, for comparison with the
/// determinant. Fails with [`Error::SingularMatrix`] on a zero eigenvalue.
pub fn log_abs_eigen_product(spec: &TriToeplitzSpec) -> Result<ScaledValue> {
    let mut sign = 1i8;
    let mut log = 0.0;
    for l in eigenvalues(spec)? {
        if l == 0.0 {
            return Err(Error::SingularMatrix);
        }
        if l < 0.0 {
            sign = -sign;
        }
        log += l.abs().ln();
    }
    Ok(ScaledValue::new(sign, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{apply_matvec, make_spec};

    fn spec(a: f64, b: f64, c: f64, n: usize) -> TriToeplitzSpec {
        make_spec(a, b, c, n).unwrap()
    }

    fn close(v: &[f64], e: &[f64], tol: f64) -> bool {
        v.len() == e.len() && v.iter().zip(e).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn eigenvalue_examples() {
        assert!(close(&eigenvalues(&spec(1.0, 0.0, 1.0, 2)).unwrap(), &[1.0, -1.0], 1e-15));
        let r2 = 2f64.sqrt();
        assert!(close(
            &eigenvalues(&spec(1.0, 2.0, 1.0, 3)).unwrap(),
            &[2.0 + r2, 2.0, 2.0 - r2],
            1e-15
        ));
        assert!(close(&eigenvalues(&spec(3.0, -4.0, 7.0, 1)).unwrap(), &[-4.0], 1e-15));
    }

    #[test]
    fn eigenvalues_are_strictly_decreasing() {
        let ev = eigenvalues(&spec(-2.0, 1.0, -0.5, 40)).unwrap();
        assert!(ev.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn eigenvector_examples() {
        let h = 3f64.sqrt() / 2.0;
        let v = eigenvector(&spec(1.0, 0.0, 1.0, 2), 1, Normalization::Raw).unwrap();
        assert!(close(&v, &[h, h], 1e-15));
        let v = eigenvector(&spec(4.0, 5.0, 1.0, 2), 1, Normalization::Raw).unwrap();
        assert!(close(&v, &[h, 2.0 * h], 1e-15));
        let v = eigenvector(&spec(2.0, 9.0, 3.0, 1), 1, Normalization::UnitEuclidean).unwrap();
        assert!(close(&v, &[1.0], 1e-15));
    }

    #[test]
    fn eigenvector_index_errors() {
        let s = spec(1.0, 0.0, 1.0, 3);
        assert_eq!(
            eigenvector(&s, 0, Normalization::Raw),
            Err(Error::IndexOutOfRange { index: 0, n: 3 })
        );
        assert!(eigenvector(&s, 4, Normalization::Raw).is_err());
        assert!(matches!(
            eigenvalues(&spec(1.0, 0.0, -1.0, 3)),
            Err(Error::NotSymmetrisable { .. })
        ));
    }

    #[test]
    fn unit_normalisations() {
        let s = spec(-4.0, 1.0, -1.0, 5);
        let w = crate::model::weight_vector(&s).unwrap();
        for k in 1..=5 {
            let v = eigenvector(&s, k, Normalization::UnitWeighted).unwrap();
            let wn: f64 = v.iter().zip(w.entries()).map(|(x, w)| w * x * x).sum();
            assert!((wn - 1.0).abs() < 1e-13);

            let e = eigenvector(&s, k, Normalization::UnitEuclidean).unwrap();
            let en: f64 = e.iter().map(|x| x * x).sum();
            assert!((en - 1.0).abs() < 1e-13);
            assert!(e.iter().find(|x| **x != 0.0).unwrap() > &0.0);
        }
    }

    #[test]
    fn unit_euclidean_survives_large_q_powers() {
        let s = spec(100.0, 250.0, 1.0, 600);
        assert!(eigenvector(&s, 1, Normalization::Raw).is_err());
        let e = eigenvector(&s, 1, Normalization::UnitEuclidean).unwrap();
        assert!(e.iter().all(|x| x.is_finite()));
        let en: f64 = e.iter().map(|x| x * x).sum();
        assert!((en - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_residual_small_case() {
        let s = spec(4.0, 5.0, 1.0, 6);
        for k in 1..=6 {
            let p = eigenpair(&s, k).unwrap();
            let av = apply_matvec(&s, &p.right_vector).unwrap();
            let inf = p.right_vector.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            for (x, r) in av.iter().zip(&p.right_vector) {
                assert!((x - p.value * r).abs() <= 1e-12 * 10.0 * inf);
            }
        }
    }

    #[test]
    fn extremal_examples() {
        let r2 = 2f64.sqrt();
        let e = extremal_eigenvalues(&spec(1.0, 4.0, 1.0, 3)).unwrap();
        assert!((e.lambda_max - (4.0 + r2)).abs() < 1e-15);
        assert!((e.lambda_min - (4.0 - r2)).abs() < 1e-15);
        assert!(e.positive_definite);

        let e = extremal_eigenvalues(&spec(1.0, 0.0, 1.0, 3)).unwrap();
        assert!((e.lambda_max - r2).abs() < 1e-15);
        assert!((e.lambda_min + r2).abs() < 1e-15);
        assert!(!e.positive_definite);

        let e = extremal_eigenvalues(&spec(1.0, 5.0, 1.0, 1)).unwrap();
        assert!((e.lambda_max - 5.0).abs() < 1e-15 && (e.lambda_min - 5.0).abs() < 1e-15);
        assert!(e.positive_definite);
    }

    #[test]
    fn determinant_examples() {
        for (s, expected) in [
            (spec(1.0, 2.0, 1.0, 2), 3.0),
            (spec(10.0, 11.0, 1.0, 3), 1111.0),
            (spec(1.0, 0.0, 1.0, 2), -1.0),
        ] {
            let d = determinant(&s).unwrap().to_f64().unwrap();
            assert!((d - expected).abs() <= 1e-12 * expected.abs(), "{d} vs {expected}");
        }
    }

    #[test]
    fn continuant_examples() {
        for (s, expected) in [
            (spec(1.0, 2.0, 1.0, 2), 3.0),
            (spec(1.0, 7.0, 1.0, 1), 7.0),
            (spec(10.0, 11.0, 1.0, 3), 1111.0),
        ] {
            let d = determinant_continuant(&s).unwrap().to_f64().unwrap();
            assert!((d - expected).abs() <= 1e-12 * expected.abs(), "{d} vs {expected}");
        }
    }

    #[test]
    fn determinant_beyond_f64_range() {
        let s = spec(3.0, 10.0, 2.0, 2000);
        let d = determinant(&s).unwrap();
        let c = determinant_continuant(&s).unwrap();
        assert!(d.log_mag() > 710.0);
        assert_eq!(d.sign(), c.sign());
        assert!((d.log_mag() - c.log_mag()).abs() <= 1e-10 * d.log_mag().abs());
    }

    #[test]
    fn char_poly_examples() {
        let v = char_poly_eval(&spec(1.0, 0.0, 1.0, 2), 0.0).unwrap().to_f64().unwrap();
        assert!((v + 1.0).abs() < 1e-14);
        let v = char_poly_eval(&spec(1.0, 3.0, 1.0, 1), 5.0).unwrap().to_f64().unwrap();
        assert!((v - 2.0).abs() < 1e-14);
        assert!(char_poly_eval(&spec(1.0, 2.0, 1.0, 3), 2.0).unwrap().is_zero());
    }

    #[test]
    fn char_poly_vanishes_at_eigenvalues() {
        let s = spec(-2.0, 0.5, -3.0, 40);
        for l in eigenvalues(&s).unwrap() {
            assert!(char_poly_eval(&s, l).unwrap().is_zero(), "lambda = {l}");
        }
    }
}
