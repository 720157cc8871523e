//! The repunit matrix `V_n(d) = A_n(d, d+1, 1)`.
//!
//! `det V_n(d) = R_{n+1}(d) = 1 + d + ... + d^n`, the eigenvalues of `V_n(d)`
//! factor that repunit as a finite cosine product, and the inverse kernel
//! has entries that are ratios of repunits. For integer bases every result
//! here is available exactly as a big integer or reduced big rational.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cheby::eval_u_scaled;
use crate::model::TriToeplitzSpec;
use crate::{Error, Result};

/// `R_m(d) = sum_{j<m} d^j` for `d > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepunitValue {
    pub base: f64,
    pub length: usize,
    /// Present when `d` is a positive integer.
    pub exact_value: Option<BigUint>,
    pub float_value: f64,
}

impl RepunitValue {
    /// `ln R_m(d)`, finite even when `float_value` overflows.
    pub fn ln(&self) -> f64 {
        match &self.exact_value {
            Some(v) => ln_biguint(v),
            None => repunit_ln(self.length, self.base),
        }
    }
}

/// One entry of `V_n(d)^-1` in exact form.
///
/// The value is `sign * d^d_power * rational_part` with
/// `rational_part = R_i R_{n+1-j} / R_{n+1}` when `i <= j` and the mirrored
/// `R_j R_{n+1-i} / R_{n+1}` with `d_power = i - j` when `i > j`.
///
/// The `d`-powers coming from `s = q = sqrt(d)` and from
/// `U_m((d+1)/(2 sqrt d)) = d^(-m/2) R_{m+1}(d)` cancel exactly in the upper
/// triangle. A variant of this formula carrying an extra
/// `d^((i-j-1)/2)` factor does not invert `V_n(d)`
/// (see [`inverse_entry_extra_prefactor`]).
#[derive(Debug, Clone, PartialEq)]
pub struct RepunitInverseEntry {
    pub i: usize,
    pub j: usize,
    pub sign: i8,
    pub d_power: u32,
    pub rational_part: BigRational,
    pub float_value: f64,
}

impl RepunitInverseEntry {
    /// The signed exact value, reduced.
    pub fn exact(&self, d: u64) -> BigRational {
        let weight = BigInt::from(d).pow(self.d_power);
        let v = &self.rational_part * BigRational::from_integer(weight);
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }
}

fn check_base(d: f64) -> Result<()> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidBase(d))
    }
}

fn check_int_base(d: u64) -> Result<()> {
    if d >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidBase(d as f64))
    }
}

/// `d` as an integer when it is a positive integer exactly representable.
fn as_integer_base(d: f64) -> Option<u64> {
    (d >= 1.0 && d.fract() == 0.0 && d < 9.007_199_254_740_992e15).then_some(d as u64)
}

/// `R_m(d)` as an exact big integer.
pub fn repunit_exact(m: usize, d: u64) -> BigUint {
    let base = BigUint::from(d);
    let mut acc = BigUint::zero();
    for _ in 0..m {
        acc = acc * &base + 1u32;
    }
    acc
}

/// `ln R_m(d)` for real `d > 0`, without forming `d^m`.
pub fn repunit_ln(m: usize, d: f64) -> f64 {
    let mf = m as f64;
    if d == 1.0 {
        return mf.ln();
    }
    let ln_d = d.ln();
    if d > 1.0 {
        mf * ln_d + (-(-mf * ln_d).exp_m1()).ln() - (d - 1.0).ln()
    } else {
        (-(mf * ln_d).exp_m1()).ln() - (1.0 - d).ln()
    }
}

/// Natural log of a positive big integer.
pub fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().map_or(f64::NAN, f64::ln);
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of `|r|` for a nonzero big rational.
pub fn ln_bigrational(r: &BigRational) -> f64 {
    let num = r.numer().abs().to_biguint().unwrap_or_default();
    let den = r.denom().abs().to_biguint().unwrap_or_default();
    ln_biguint(&num) - ln_biguint(&den)
}

/// `R_m(d)`; exact for positive integer `d`, `R_m(1) = m`.
pub fn repunit(m: usize, d: f64) -> Result<RepunitValue> {
    check_base(d)?;
    if m < 1 {
        return Err(Error::InvalidOrder(m));
    }
    let (exact_value, float_value) = match as_integer_base(d) {
        Some(di) => {
            let exact = repunit_exact(m, di);
            let float = exact.to_f64().unwrap_or(f64::INFINITY);
            (Some(exact), float)
        }
        None => {
            let mf = m as f64;
            let ln_d = d.ln();
            (None, (mf * ln_d).exp_m1() / (d - 1.0))
        }
    };
    Ok(RepunitValue { base: d, length: m, exact_value, float_value })
}

/// `V_n(d) = A_n(d, d+1, 1)`, with `s = q = sqrt(d)`.
pub fn repunit_matrix_spec(d: f64, n: usize) -> Result<TriToeplitzSpec> {
    check_base(d)?;
    TriToeplitzSpec::new(d, d + 1.0, 1.0, n)
}

/// `det V_n(d)` by the exact continuant `D_k = (d+1) D_{k-1} - d D_{k-2}`.
pub fn repunit_det_exact(d: u64, n: usize) -> Result<BigUint> {
    check_int_base(d)?;
    let base = BigInt::from(d);
    let diag = &base + 1u32;
    let mut prev = BigInt::one();
    let mut cur = diag.clone();
    for _ in 1..n {
        let next = &diag * &cur - &base * &prev;
        prev = cur;
        cur = next;
    }
    cur.to_biguint().ok_or(Error::InvalidBase(d as f64))
}

/// `ln prod_{k=1..n} (d + 1 + 2 sqrt(d) cos(k pi/(n+1)))`.
///
/// Each factor is formed as `(sqrt d - 1)^2 + 4 sqrt d cos^2(k pi/(2(n+1)))`,
/// a sum of nonnegative terms.
pub fn cosine_product_ln(d: f64, n: usize) -> Result<f64> {
    check_base(d)?;
    let r = d.sqrt();
    let gap = (r - 1.0) * (r - 1.0);
    let h = PI / (2 * (n + 1)) as f64;
    Ok((1..=n)
        .map(|k| {
            let c = (k as f64 * h).cos();
            (gap + 4.0 * r * c * c).ln()
        })
        .sum())
}

/// The cosine product itself; `+inf` once it leaves the `f64` range.
pub fn cosine_product(d: f64, n: usize) -> Result<f64> {
    Ok(cosine_product_ln(d, n)?.exp())
}

/// Weighted condition number of `V_n(d)`:
/// `(d + 1 + 2 sqrt(d) cos(pi/(n+1))) / (d + 1 - 2 sqrt(d) cos(pi/(n+1)))`.
pub fn repunit_condition(d: f64, n: usize) -> Result<f64> {
    check_base(d)?;
    let r = d.sqrt();
    let half = (PI / (2 * (n + 1)) as f64).sin();
    let tail = 4.0 * r * half * half;
    let numer = (r + 1.0) * (r + 1.0) - tail;
    let denom = (r - 1.0) * (r - 1.0) + tail;
    Ok(numer / denom)
}

/// Exact entry `(V_n(d)^-1)_ij` for an integer base.
pub fn repunit_inverse_entry(d: u64, n: usize, i: usize, j: usize) -> Result<RepunitInverseEntry> {
    check_int_base(d)?;
    for idx in [i, j] {
        if !(1..=n).contains(&idx) {
            return Err(Error::IndexOutOfRange { index: idx, n });
        }
    }
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    let r = |m: usize| BigInt::from(repunit_exact(m, d));
    let rational_part = BigRational::new(r(lo) * r(n + 1 - hi), r(n + 1));
    let mut entry = RepunitInverseEntry {
        i,
        j,
        sign: if (i + j).is_multiple_of(2) { 1 } else { -1 },
        d_power: (i - lo) as u32,
        rational_part,
        float_value: 0.0,
    };
    entry.float_value = rational_to_f64(&entry.exact(d));
    Ok(entry)
}

fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    match r.to_f64() {
        Some(v) if v.is_finite() && v != 0.0 => v,
        _ => {
            let sign = if r.is_negative() { -1.0 } else { 1.0 };
            sign * ln_bigrational(r).exp()
        }
    }
}

/// The upper-triangle formula with the extra prefactor
/// `d^((i-j)/2) / sqrt(d)`:
///
/// ```text
/// (-1)^(i+j) d^((i-j)/2) / sqrt(d) * R_i R_{n+1-j} / R_{n+1}
/// ```
///
/// This is *not* an entry of `V_n(d)^-1` (it is off by `d^((i-j-1)/2)`, e.g.
/// `-1/1110` instead of `-1/111` for `d = 10, n = 2, (i, j) = (1, 2)`).
/// Kept so the discrepancy can be reproduced; use [`repunit_inverse_entry`].
pub fn inverse_entry_extra_prefactor(d: f64, n: usize, i: usize, j: usize) -> Result<f64> {
    check_base(d)?;
    for idx in [i, j] {
        if !(1..=n).contains(&idx) {
            return Err(Error::IndexOutOfRange { index: idx, n });
        }
    }
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    let sign = if (i + j).is_multiple_of(2) { 1.0 } else { -1.0 };
    let offset = i as f64 - j as f64;
    let ln_mag = 0.5 * (offset - 1.0) * d.ln() + repunit_ln(lo, d) + repunit_ln(n + 1 - hi, d)
        - repunit_ln(n + 1, d);
    Ok(sign * ln_mag.exp())
}

/// `|U_m(x) - d^(-m/2) R_{m+1}(d)| / (d^(-m/2) R_{m+1}(d))` with
/// `x = (d+1)/(2 sqrt d)`, evaluated in log space.
pub fn cheb_repunit_identity_residual(d: f64, m: usize) -> Result<f64> {
    check_base(d)?;
    let x = (d + 1.0) / (2.0 * d.sqrt());
    let u = eval_u_scaled(m, x);
    if u.sign() <= 0 {
        return Ok(f64::INFINITY);
    }
    let ln_rhs = -0.5 * m as f64 * d.ln() + repunit_ln(m + 1, d);
    Ok((u.log_mag() - ln_rhs).exp_m1().abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::{build_kernel_default, decay_bound};
    use crate::model::symmetrise;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn repunit_examples() {
        assert_eq!(repunit(4, 10.0).unwrap().exact_value, Some(BigUint::from(1111u32)));
        let r = repunit(5, 1.0).unwrap();
        assert_eq!(r.exact_value, Some(BigUint::from(5u32)));
        assert_eq!(r.float_value, 5.0);
        assert_eq!(repunit(3, 2.0).unwrap().float_value, 7.0);
        assert!(matches!(repunit(3, 0.0), Err(Error::InvalidBase(_))));
        assert!(matches!(repunit(3, -2.0), Err(Error::InvalidBase(_))));
    }

    #[test]
    fn repunit_float_path() {
        let r = repunit(4, 0.5).unwrap();
        assert!(r.exact_value.is_none());
        assert!((r.float_value - 1.875).abs() < 1e-15);
        assert!((r.ln() - 1.875f64.ln()).abs() < 1e-15);
        let r = repunit(3, 1.5).unwrap();
        assert!((r.float_value - 4.75).abs() < 1e-14);
    }

    #[test]
    fn float_agrees_with_exact() {
        for d in [2u64, 3, 10, 16] {
            for m in 1..=60 {
                let r = repunit(m, d as f64).unwrap();
                let exact = r.exact_value.as_ref().unwrap().to_f64().unwrap();
                assert!((r.float_value - exact).abs() <= 1e-14 * exact);
                assert!((r.ln() - repunit_ln(m, d as f64)).abs() <= 1e-12 * r.ln().max(1.0));
            }
        }
    }

    #[test]
    fn matrix_spec_examples() {
        let s = repunit_matrix_spec(10.0, 3).unwrap();
        assert_eq!((s.a(), s.b(), s.c(), s.n()), (10.0, 11.0, 1.0, 3));
        assert!((symmetrise(&s).unwrap().s() - 10f64.sqrt()).abs() < 1e-15);

        let f = symmetrise(&repunit_matrix_spec(1.0, 5).unwrap()).unwrap();
        assert_eq!(f.x(), 1.0);

        let f = symmetrise(&repunit_matrix_spec(4.0, 2).unwrap()).unwrap();
        assert_eq!(f.q(), 2.0);
        assert!(repunit_matrix_spec(0.0, 2).is_err());
    }

    #[test]
    fn det_exact_examples() {
        assert_eq!(repunit_det_exact(10, 3).unwrap(), BigUint::from(1111u32));
        assert_eq!(repunit_det_exact(1, 4).unwrap(), BigUint::from(5u32));
        assert_eq!(repunit_det_exact(2, 5).unwrap(), BigUint::from(63u32));
        assert!(repunit_det_exact(0, 5).is_err());
    }

    #[test]
    fn cosine_product_examples() {
        assert!((cosine_product(10.0, 3).unwrap() - 1111.0).abs() <= 1e-10 * 1111.0);
        assert!((cosine_product(1.0, 4).unwrap() - 5.0).abs() <= 1e-12);
        assert!((cosine_product(2.0, 1).unwrap() - 3.0).abs() <= 1e-14);
        assert!(cosine_product(-1.0, 1).is_err());
    }

    #[test]
    fn condition_examples() {
        assert!((repunit_condition(4.0, 2).unwrap() - 7.0 / 3.0).abs() < 1e-14);
        assert!((repunit_condition(1.0, 1).unwrap() - 1.0).abs() < 1e-15);
        // 2 sqrt(10) cos(pi/4) = sqrt(20)
        let r20 = 20f64.sqrt();
        let expected = (11.0 + r20) / (11.0 - r20);
        assert!((repunit_condition(10.0, 3).unwrap() - expected).abs() < 1e-13 * expected);
    }

    #[test]
    fn inverse_entry_examples() {
        let e = repunit_inverse_entry(10, 2, 1, 2).unwrap();
        assert_eq!(e.exact(10), rat(-1, 111));
        assert!((e.float_value + 1.0 / 111.0).abs() < 1e-17);

        let e = repunit_inverse_entry(10, 2, 2, 1).unwrap();
        assert_eq!(e.exact(10), rat(-10, 111));
        assert_eq!(e.d_power, 1);

        let e = repunit_inverse_entry(1, 2, 1, 1).unwrap();
        assert_eq!(e.exact(1), rat(2, 3));

        assert!(matches!(
            repunit_inverse_entry(10, 2, 3, 1),
            Err(Error::IndexOutOfRange { index: 3, n: 2 })
        ));
        assert!(repunit_inverse_entry(0, 2, 1, 1).is_err());
    }

    #[test]
    fn extra_prefactor_variant_is_off() {
        let v = inverse_entry_extra_prefactor(10.0, 2, 1, 2).unwrap();
        assert!((v + 1.0 / 1110.0).abs() < 1e-16);
    }

    #[test]
    fn identity_residual_examples() {
        assert!(cheb_repunit_identity_residual(10.0, 2).unwrap() <= 1e-12);
        assert!(cheb_repunit_identity_residual(1.0, 5).unwrap() <= 1e-15);
        assert!(cheb_repunit_identity_residual(4.0, 1).unwrap() <= 1e-15);
        assert!(cheb_repunit_identity_residual(0.0, 1).is_err());
    }

    #[test]
    fn identity_residual_over_parameter_grid() {
        for d in [0.1, 0.5, 0.9, 1.0, 1.1, 2.0, 10.0, 37.5, 100.0] {
            for m in [0usize, 1, 5, 50, 150, 300] {
                let r = cheb_repunit_identity_residual(d, m).unwrap();
                assert!(r <= 1e-10, "d = {d}, m = {m}, residual = {r}");
            }
        }
    }

    #[test]
    fn matches_green_kernel() {
        for d in [1u64, 2, 10] {
            for n in 1..=8 {
                let k = build_kernel_default(&repunit_matrix_spec(d as f64, n).unwrap()).unwrap();
                for i in 1..=n {
                    for j in 1..=n {
                        let exact = repunit_inverse_entry(d, n, i, j).unwrap().float_value;
                        let kernel = k.inverse_entry(i, j).unwrap();
                        assert!((exact - kernel).abs() <= 1e-10 * exact.abs());
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_base_is_not_gapped_but_invertible() {
        let s = repunit_matrix_spec(1.0, 6).unwrap();
        assert!(matches!(decay_bound(&s, 1, 1), Err(Error::NotInGappedRegime { .. })));
        let k = build_kernel_default(&s).unwrap();
        // A_6(1, 2, 1)^-1 has (1,1) entry 6/7.
        assert!((k.inverse_entry(1, 1).unwrap() - 6.0 / 7.0).abs() < 1e-14);
    }
}
