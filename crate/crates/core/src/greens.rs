//! Green-kernel inverse of `A_n`.
//!
//! With `f_k = (-1)^(k-1) U_{k-1}(x)` and `g_k = (-1)^(k-1) U_{n-k}(x)` for
//! `k = 0..=n+1` (so `f_0 = g_{n+1} = 0`), the inverse is
//!
//! ```text
//! (A_n^-1)_ij = q^(i-j) f_min(i,j) g_max(i,j) / (s U_n(x))
//! ```
//!
//! and `f_k g_{k+1} - f_{k+1} g_k = U_n(x)` for every `k`. The kernel is
//! semiseparable, which gives the `O(n)` [`apply_inverse`]. Everything is
//! kept in sign/log form until the final entry, so `n` in the thousands is
//! fine even when `U_n(x)` itself overflows.

use crate::cheby::u_sequence_scaled;
use crate::model::{symmetrise, SymmetrisedForm, TriToeplitzSpec};
use crate::{Error, Result, ScaledValue, DEFAULT_SINGULAR_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct GreenKernel {
    form: SymmetrisedForm,
    f: Vec<ScaledValue>,
    g: Vec<ScaledValue>,
    wronskian: ScaledValue,
    wronskian_residual: f64,
    invertible: bool,
}

/// Constants of the exponential decay bound in the gapped regime `x > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayEnvelope {
    /// `eta = x + sqrt(x^2 - 1) > 1`.
    pub eta: f64,
    /// `(2 / s) / (eta - 1/eta)`.
    pub prefactor: f64,
    /// `|q|`, the one-sided weighting of `A_n^-1` relative to `S^-1`.
    pub abs_q: f64,
}

impl GreenKernel {
    pub fn n(&self) -> usize {
        self.form.n()
    }

    pub fn form(&self) -> &SymmetrisedForm {
        &self.form
    }

    /// `f_0, ..., f_{n+1}`.
    pub fn f(&self) -> &[ScaledValue] {
        &self.f
    }

    /// `g_0, ..., g_{n+1}`.
    pub fn g(&self) -> &[ScaledValue] {
        &self.g
    }

    /// `U_n(x)`, the constant value of the discrete Wronskian.
    pub fn wronskian(&self) -> ScaledValue {
        self.wronskian
    }

    /// `max_k |W_k / U_n(x) - 1|` measured at construction. Infinite when
    /// `U_n(x)` is exactly zero.
    pub fn wronskian_residual(&self) -> f64 {
        self.wronskian_residual
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    /// The discrete Wronskian `f_k g_{k+1} - f_{k+1} g_k`, `0 <= k <= n`.
    pub fn discrete_wronskian(&self, k: usize) -> ScaledValue {
        self.f[k] * self.g[k + 1] - self.f[k + 1] * self.g[k]
    }

    fn require_invertible(&self) -> Result<()> {
        if self.invertible {
            Ok(())
        } else {
            Err(Error::SingularMatrix)
        }
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if (1..=self.n()).contains(&index) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, n: self.n() })
        }
    }

    /// `(A_n^-1)_ij` in sign/log form.
    ///
    /// Both triangles are evaluated from their own formula; the lower one is
    /// not obtained by transposing the upper.
    pub fn inverse_entry_scaled(&self, i: usize, j: usize) -> Result<ScaledValue> {
        self.require_invertible()?;
        self.check_index(i)?;
        self.check_index(j)?;
        let product = if i <= j { self.f[i] * self.g[j] } else { self.f[j] * self.g[i] };
        let denom = self.wronskian.scale_ln(self.form.s().ln());
        Ok(self.form.q_power(i as i64 - j as i64) * product / denom)
    }

    /// `(A_n^-1)_ij` for 1-based indices.
    pub fn inverse_entry(&self, i: usize, j: usize) -> Result<f64> {
        self.inverse_entry_scaled(i, j)?.to_f64()
    }
}

/// Assembles the kernel for `A_n`.
///
/// `singular_tol` is relative: the kernel is invertible iff
/// `|U_n(x)| > singular_tol * max(1, |U_{n-1}(x)|)`. Singularity is a flag;
/// only the entry and solve routines raise [`Error::SingularMatrix`].
pub fn build_kernel(spec: &TriToeplitzSpec, singular_tol: f64) -> Result<GreenKernel> {
    let form = symmetrise(spec)?;
    let n = spec.n();
    let u = u_sequence_scaled(n, form.x());
    let alternate = |k: usize, v: ScaledValue| if k % 2 == 1 { v } else { -v };

    // f_k = (-1)^(k-1) U_{k-1}, g_k = (-1)^(k-1) U_{n-k}, with U_{-1} = 0.
    let f: Vec<ScaledValue> = (0..=n + 1)
        .map(|k| if k == 0 { ScaledValue::ZERO } else { alternate(k, u[k - 1]) })
        .collect();
    let g: Vec<ScaledValue> = (0..=n + 1)
        .map(|k| if k == n + 1 { ScaledValue::ZERO } else { alternate(k, u[n - k]) })
        .collect();

    let wronskian = u[n];
    let scale = u[n - 1].log_mag().max(0.0);
    let invertible = !wronskian.is_zero() && wronskian.log_mag() > singular_tol.ln() + scale;

    let mut kernel = GreenKernel {
        form,
        f,
        g,
        wronskian,
        wronskian_residual: f64::INFINITY,
        invertible,
    };
    if !wronskian.is_zero() {
        kernel.wronskian_residual = (0..=n)
            .map(|k| kernel.discrete_wronskian(k).relative_diff(wronskian))
            .fold(0.0, f64::max);
    }
    Ok(kernel)
}

/// [`build_kernel`] with [`DEFAULT_SINGULAR_TOL`].
pub fn build_kernel_default(spec: &TriToeplitzSpec) -> Result<GreenKernel> {
    build_kernel(spec, DEFAULT_SINGULAR_TOL)
}

pub fn inverse_entry(kernel: &GreenKernel, i: usize, j: usize) -> Result<f64> {
    kernel.inverse_entry(i, j)
}

/// A value `mantissa * e^log_scale` whose scale is kept near the mantissa's
/// magnitude.
#[derive(Clone, Copy)]
struct Rescaled {
    mantissa: f64,
    log_scale: f64,
}

impl Rescaled {
    /// `self * e^shift * sign + term`, renormalised.
    fn step(self, shift: f64, sign: f64, term: ScaledValue, rhs: f64) -> Self {
        let carried = self.log_scale + shift;
        let log_scale = carried.max(term.log_mag());
        let mut mantissa = sign * self.mantissa * (carried - log_scale).exp();
        if !term.is_zero() {
            mantissa +=
                f64::from(term.sign()) * (term.log_mag() - log_scale).exp() * rhs;
        }
        Rescaled { mantissa, log_scale }
    }

    fn times(self, factor: ScaledValue, shift: f64) -> f64 {
        if factor.is_zero() || self.mantissa == 0.0 {
            return 0.0;
        }
        f64::from(factor.sign()) * self.mantissa * (factor.log_mag() + self.log_scale + shift).exp()
    }
}

/// `A_n^-1 rhs` in `O(n)`.
///
/// `y_i = (g_i P_i + f_i Q_i) / (s U_n)` with `P_i = sum_{j<=i} q^(i-j) f_j r_j`
/// and `Q_i = sum_{j>i} q^(i-j) g_j r_j`, both carried by their one-step
/// recurrences `P_i = q P_{i-1} + f_i r_i`, `Q_i = (Q_{i+1} + g_{i+1} r_{i+1}) / q`
/// with a running log scale.
pub fn apply_inverse(kernel: &GreenKernel, rhs: &[f64]) -> Result<Vec<f64>> {
    kernel.require_invertible()?;
    let n = kernel.n();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: rhs.len() });
    }
    let form = &kernel.form;
    let ln_q = form.ln_abs_q();
    let q_sign = if form.q() < 0.0 { -1.0 } else { 1.0 };
    let (f, g) = (&kernel.f, &kernel.g);

    let mut prefix = vec![Rescaled { mantissa: 0.0, log_scale: 0.0 }; n + 1];
    let mut acc = Rescaled { mantissa: 0.0, log_scale: f[1].log_mag() };
    for i in 1..=n {
        acc = acc.step(ln_q, q_sign, f[i], rhs[i - 1]);
        prefix[i] = acc;
    }

    let mut suffix = vec![Rescaled { mantissa: 0.0, log_scale: 0.0 }; n + 1];
    let mut acc = Rescaled { mantissa: 0.0, log_scale: g[n].log_mag() };
    for i in (1..n).rev() {
        // Q_i = q^-1 (Q_{i+1} + g_{i+1} r_{i+1})
        let summed = acc.step(0.0, 1.0, g[i + 1], rhs[i]);
        acc = Rescaled { mantissa: q_sign * summed.mantissa, log_scale: summed.log_scale - ln_q };
        suffix[i] = acc;
    }

    let shift = -(kernel.wronskian.log_mag() + form.s().ln());
    let w_sign = f64::from(kernel.wronskian.sign());
    let out = (1..=n)
        .map(|i| {
            let lower = prefix[i].times(g[i], shift);
            let upper = if i < n { suffix[i].times(f[i], shift) } else { 0.0 };
            w_sign * (lower + upper)
        })
        .collect();
    Ok(out)
}

/// Solves `A_n x = rhs` by tridiagonal elimination without pivoting.
///
/// Works for any nonzero `a, c` (no symmetrisability needed). Fails with
/// [`Error::NearSingularPivot`] when a pivot magnitude drops below
/// `pivot_tol * (|a| + |b| + |c|)`.
pub fn thomas_solve(spec: &TriToeplitzSpec, rhs: &[f64], pivot_tol: f64) -> Result<Vec<f64>> {
    spec.check_len(rhs.len())?;
    let n = spec.n();
    let (a, b, c) = (spec.a(), spec.b(), spec.c());
    let threshold = pivot_tol * (a.abs() + b.abs() + c.abs());

    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    let mut pivot = b;
    for i in 0..n {
        if i > 0 {
            pivot = b - a * c_prime[i - 1];
        }
        if !pivot.is_finite() || pivot.abs() < threshold || pivot == 0.0 {
            return Err(Error::NearSingularPivot { row: i + 1, pivot });
        }
        c_prime[i] = c / pivot;
        d_prime[i] = if i > 0 { (rhs[i] - a * d_prime[i - 1]) / pivot } else { rhs[0] / pivot };
    }

    let mut x = d_prime;
    for i in (0..n - 1).rev() {
        x[i] -= c_prime[i] * x[i + 1];
    }
    Ok(x)
}

pub fn decay_envelope(spec: &TriToeplitzSpec) -> Result<DecayEnvelope> {
    let form = symmetrise(spec)?;
    let x = form.x();
    if x <= 1.0 {
        return Err(Error::NotInGappedRegime { x });
    }
    // eta - 1/eta = 2 sqrt(x^2 - 1)
    let root = ((x - 1.0) * (x + 1.0)).sqrt();
    let eta = x + root;
    Ok(DecayEnvelope { eta, prefactor: 1.0 / (form.s() * root), abs_q: form.q().abs() })
}

impl DecayEnvelope {
    /// Bound on `|(A_n^-1)_ij|`: `prefactor |q|^(i-j) eta^-|i-j|`.
    pub fn bound(&self, i: usize, j: usize) -> f64 {
        let offset = i as f64 - j as f64;
        (self.prefactor.ln() + offset * self.abs_q.ln() - offset.abs() * self.eta.ln()).exp()
    }
}

/// The exponential decay bound on `|(A_n^-1)_ij|`; requires `x > 1`.
pub fn decay_bound(spec: &TriToeplitzSpec, i: usize, j: usize) -> Result<f64> {
    let envelope = decay_envelope(spec)?;
    spec.check_index(i)?;
    spec.check_index(j)?;
    Ok(envelope.bound(i, j))
}

/// `ln sinh(t)` for `t > 0`.
fn ln_sinh(t: f64) -> f64 {
    t + (-(-2.0 * t).exp_m1()).ln() - std::f64::consts::LN_2
}

/// Symmetric-case inverse entry in hyperbolic form, `x = cosh(gamma) > 1`:
///
/// ```text
/// (S^-1)_ij = (-1)^(i+j) sinh(i g) sinh((n+1-j) g) / (s sinh((n+1) g) sinh g),  i <= j
/// ```
///
/// The `i > j` case uses the mirrored indices. Ignores `q`: this is the
/// entry of `S_n(b, s)`, not of `A_n`.
pub fn hyperbolic_inverse_entry(form: &SymmetrisedForm, i: usize, j: usize) -> Result<f64> {
    let x = form.x();
    if x <= 1.0 {
        return Err(Error::NotInGappedRegime { x });
    }
    let n = form.n();
    for idx in [i, j] {
        if !(1..=n).contains(&idx) {
            return Err(Error::IndexOutOfRange { index: idx, n });
        }
    }
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    let t = x - 1.0;
    let gamma = (t + (t * (t + 2.0)).sqrt()).ln_1p();
    let log_mag = ln_sinh(lo as f64 * gamma) + ln_sinh((n + 1 - hi) as f64 * gamma)
        - ln_sinh((n + 1) as f64 * gamma)
        - ln_sinh(gamma)
        - form.s().ln();
    let sign = if (i + j).is_multiple_of(2) { 1 } else { -1 };
    ScaledValue::new(sign, log_mag).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_spec;

    fn spec(a: f64, b: f64, c: f64, n: usize) -> TriToeplitzSpec {
        make_spec(a, b, c, n).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn kernel_examples() {
        let k = build_kernel_default(&spec(1.0, 2.0, 1.0, 2)).unwrap();
        assert!(close(k.wronskian().to_f64().unwrap(), 3.0, 1e-14));
        assert!(k.is_invertible());

        let k = build_kernel_default(&spec(1.0, 0.0, 1.0, 3)).unwrap();
        assert!(k.wronskian().to_f64().unwrap().abs() < 1e-15);
        assert!(!k.is_invertible());
        assert_eq!(k.inverse_entry(1, 1), Err(Error::SingularMatrix));
        assert_eq!(apply_inverse(&k, &[1.0, 0.0, 0.0]), Err(Error::SingularMatrix));

        let k = build_kernel_default(&spec(1.0, 5.0, 1.0, 1)).unwrap();
        assert!(close(k.wronskian().to_f64().unwrap(), 5.0, 1e-14));
        assert!(k.f()[0].is_zero() && k.g()[2].is_zero());
        assert_eq!(k.f()[1].to_f64().unwrap().abs(), 1.0);
        assert_eq!(k.g()[1].to_f64().unwrap().abs(), 1.0);
        assert!(close(k.inverse_entry(1, 1).unwrap(), 0.2, 1e-14));
    }

    #[test]
    fn boundary_values_and_wronskian() {
        let k = build_kernel_default(&spec(-2.0, 0.3, -0.7, 37)).unwrap();
        assert!(k.f()[0].is_zero());
        assert!(k.g()[38].is_zero());
        assert!(k.wronskian_residual() <= 1e-9);
    }

    #[test]
    fn inverse_entry_examples() {
        let k = build_kernel_default(&spec(1.0, 2.0, 1.0, 2)).unwrap();
        assert!(close(k.inverse_entry(1, 1).unwrap(), 2.0 / 3.0, 1e-14));
        assert!(close(k.inverse_entry(1, 2).unwrap(), -1.0 / 3.0, 1e-14));

        let k = build_kernel_default(&spec(10.0, 11.0, 1.0, 2)).unwrap();
        assert!(close(k.inverse_entry(1, 2).unwrap(), -1.0 / 111.0, 1e-14));
        assert!(close(k.inverse_entry(2, 1).unwrap(), -10.0 / 111.0, 1e-14));
        assert!(close(k.inverse_entry(1, 1).unwrap(), 11.0 / 111.0, 1e-14));
        assert!(close(k.inverse_entry(2, 2).unwrap(), 11.0 / 111.0, 1e-14));

        assert_eq!(k.inverse_entry(3, 1), Err(Error::IndexOutOfRange { index: 3, n: 2 }));
        assert_eq!(k.inverse_entry(1, 0), Err(Error::IndexOutOfRange { index: 0, n: 2 }));
    }

    #[test]
    fn apply_inverse_examples() {
        let k = build_kernel_default(&spec(1.0, 2.0, 1.0, 2)).unwrap();
        let y = apply_inverse(&k, &[1.0, 0.0]).unwrap();
        assert!(close(y[0], 2.0 / 3.0, 1e-14) && close(y[1], -1.0 / 3.0, 1e-14));

        let k = build_kernel_default(&spec(1.0, 5.0, 1.0, 1)).unwrap();
        assert!(close(apply_inverse(&k, &[10.0]).unwrap()[0], 2.0, 1e-14));
        assert_eq!(
            apply_inverse(&k, &[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn apply_inverse_is_deterministic() {
        let s = spec(0.5, 3.0, 2.0, 500);
        let k = build_kernel_default(&s).unwrap();
        let rhs: Vec<f64> = (0..500).map(|i| ((i * 37 % 11) as f64) - 5.0).collect();
        let y1 = apply_inverse(&k, &rhs).unwrap();
        let y2 = apply_inverse(&k, &rhs).unwrap();
        assert!(y1.iter().zip(&y2).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn thomas_examples() {
        let y = thomas_solve(&spec(1.0, 2.0, 1.0, 2), &[1.0, 0.0], crate::DEFAULT_PIVOT_TOL).unwrap();
        assert!(close(y[0], 2.0 / 3.0, 1e-14) && close(y[1], -1.0 / 3.0, 1e-14));
        let y = thomas_solve(&spec(10.0, 11.0, 1.0, 2), &[1.0, 0.0], crate::DEFAULT_PIVOT_TOL).unwrap();
        assert!(close(y[0], 11.0 / 111.0, 1e-14) && close(y[1], -10.0 / 111.0, 1e-14));
        let y = thomas_solve(&spec(1.0, 5.0, 1.0, 1), &[10.0], crate::DEFAULT_PIVOT_TOL).unwrap();
        assert!(close(y[0], 2.0, 1e-14));
    }

    #[test]
    fn thomas_handles_non_symmetrisable_and_flags_zero_pivots() {
        // [[1, 1], [-1, 1]] x = (2, 0) -> x = (1, 1)
        let y = thomas_solve(&spec(-1.0, 1.0, 1.0, 2), &[2.0, 0.0], crate::DEFAULT_PIVOT_TOL).unwrap();
        assert!(close(y[0], 1.0, 1e-14) && close(y[1], 1.0, 1e-14));
        assert!(matches!(
            thomas_solve(&spec(1.0, 0.0, 1.0, 2), &[1.0, 0.0], crate::DEFAULT_PIVOT_TOL),
            Err(Error::NearSingularPivot { row: 1, .. })
        ));
        assert!(matches!(
            thomas_solve(&spec(1.0, 2.0, 1.0, 2), &[1.0], crate::DEFAULT_PIVOT_TOL),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn decay_bound_examples() {
        let s = spec(1.0, 2.5, 1.0, 10);
        let env = decay_envelope(&s).unwrap();
        assert!(close(env.eta, 2.0, 1e-15));
        assert!(close(decay_bound(&s, 1, 4).unwrap(), 1.0 / 6.0, 1e-14));
        assert!(close(decay_bound(&s, 7, 4).unwrap(), 1.0 / 6.0, 1e-14));
        assert!(close(decay_bound(&s, 5, 5).unwrap(), 4.0 / 3.0, 1e-14));
        assert!(matches!(
            decay_bound(&spec(1.0, 2.0, 1.0, 3), 1, 1),
            Err(Error::NotInGappedRegime { .. })
        ));
    }

    #[test]
    fn hyperbolic_examples() {
        let form = SymmetrisedForm::symmetric(2.5, 1.0, 2).unwrap();
        assert!(close(hyperbolic_inverse_entry(&form, 1, 1).unwrap(), 10.0 / 21.0, 1e-14));
        assert!(close(hyperbolic_inverse_entry(&form, 1, 2).unwrap(), -4.0 / 21.0, 1e-14));
        assert!(close(hyperbolic_inverse_entry(&form, 2, 1).unwrap(), -4.0 / 21.0, 1e-14));

        let form = SymmetrisedForm::symmetric(7.0, 3.0, 1).unwrap();
        assert!(close(hyperbolic_inverse_entry(&form, 1, 1).unwrap(), 1.0 / 7.0, 1e-14));

        let form = SymmetrisedForm::symmetric(2.0, 1.0, 3).unwrap();
        assert!(matches!(
            hyperbolic_inverse_entry(&form, 1, 1),
            Err(Error::NotInGappedRegime { .. })
        ));
    }

    #[test]
    fn large_order_entries_stay_finite() {
        // U_n(x) overflows f64 here; entries do not.
        let s = spec(2.0, 10.0, 3.0, 3000);
        let k = build_kernel_default(&s).unwrap();
        assert!(k.wronskian().log_mag() > 710.0);
        let e = k.inverse_entry(1500, 1500).unwrap();
        assert!(e.is_finite() && e > 0.0);
        let env = decay_envelope(&s).unwrap();
        assert!(e.abs() <= env.bound(1500, 1500));
    }
}
