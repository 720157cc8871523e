//! Chebyshev polynomials of the second kind, `U_0 = 1`, `U_1 = 2x`,
//! `U_{m+1} = 2x U_m - U_{m-1}`.
//!
//! Production evaluation uses the closed forms
//!
//! ```text
//! |x| < 1:  U_m(cos t)  = sin((m+1) t) / sin t
//! x > 1:    U_m(cosh g) = sinh((m+1) g) / sinh g
//! x = 1:    U_m(1)      = m + 1
//! ```
//!
//! with `x < 0` reduced through `U_m(-x) = (-1)^m U_m(x)`. The angle and
//! `sin t`, `sinh g` are computed from `1 - x` and `x - 1` directly, so there
//! is no cancellation next to the confluent point `|x| = 1`. The three-term
//! recurrence is kept as an independent cross-check in
//! [`eval_u_recurrence`].

use crate::{Result, ScaledValue};

/// Above this `(m+1) g` the hyperbolic quotient is formed in log space.
const MAX_DIRECT_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, Copy)]
enum Regime {
    /// `|x| < 1`, `x = cos(theta)`.
    Oscillatory { theta: f64, sin_theta: f64 },
    /// `|x| = 1`.
    Confluent,
    /// `|x| > 1`, `|x| = cosh(gamma)`.
    Hyperbolic { gamma: f64, ln_sinh_gamma: f64 },
}

/// Regime data for one `x`, reused across many degrees.
#[derive(Debug, Clone, Copy)]
struct Evaluator {
    x: f64,
    negative: bool,
    regime: Regime,
}

impl Evaluator {
    fn new(x: f64) -> Self {
        let negative = x < 0.0;
        let ax = x.abs();
        let regime = if ax < 1.0 {
            let sin_theta = ((1.0 - ax) * (1.0 + ax)).sqrt();
            Regime::Oscillatory { theta: ax.acos(), sin_theta }
        } else if ax == 1.0 {
            Regime::Confluent
        } else {
            let (gamma, ln_sinh_gamma) = acosh_and_ln_sinh(ax);
            Regime::Hyperbolic { gamma, ln_sinh_gamma }
        };
        Evaluator { x, negative, regime }
    }

    fn parity_sign(&self, m: usize) -> i8 {
        if self.negative && m % 2 == 1 {
            -1
        } else {
            1
        }
    }

    fn scaled(&self, m: usize) -> ScaledValue {
        match m {
            0 => return ScaledValue::ONE,
            1 => return ScaledValue::from_f64(2.0 * self.x),
            _ => {}
        }
        let k = (m + 1) as f64;
        let value = match self.regime {
            Regime::Oscillatory { theta, sin_theta } => {
                ScaledValue::from_f64((k * theta).sin() / sin_theta)
            }
            Regime::Confluent => ScaledValue::new(1, k.ln()),
            Regime::Hyperbolic { gamma, ln_sinh_gamma } => {
                let t = k * gamma;
                // ln sinh(t) = t + ln(1 - e^{-2t}) - ln 2
                let ln_sinh_t = t + (-(-2.0 * t).exp_m1()).ln() - std::f64::consts::LN_2;
                ScaledValue::new(1, ln_sinh_t - ln_sinh_gamma)
            }
        };
        if self.parity_sign(m) < 0 {
            -value
        } else {
            value
        }
    }

    fn plain(&self, m: usize) -> Result<f64> {
        match m {
            0 => return Ok(1.0),
            1 => return Ok(2.0 * self.x),
            _ => {}
        }
        let k = (m + 1) as f64;
        let value = match self.regime {
            Regime::Oscillatory { theta, sin_theta } => (k * theta).sin() / sin_theta,
            Regime::Confluent => k,
            Regime::Hyperbolic { gamma, ln_sinh_gamma } => {
                if k * gamma <= MAX_DIRECT_EXPONENT && ln_sinh_gamma < MAX_DIRECT_EXPONENT {
                    (k * gamma).sinh() / ln_sinh_gamma.exp()
                } else {
                    return self.scaled(m).to_f64();
                }
            }
        };
        Ok(f64::from(self.parity_sign(m)) * value)
    }
}

/// `(acosh(x), ln sinh(acosh(x)))` for `x > 1`, accurate next to 1.
fn acosh_and_ln_sinh(x: f64) -> (f64, f64) {
    let t = x - 1.0;
    if x < 1e150 {
        // sinh(acosh x) = sqrt(x^2 - 1) = sqrt(t (t + 2))
        let sinh = (t * (t + 2.0)).sqrt();
        ((t + sinh).ln_1p(), sinh.ln())
    } else {
        let ln_x = x.ln();
        (ln_x + std::f64::consts::LN_2, ln_x)
    }
}

/// `U_m(x)` as a plain float.
///
/// Fails with [`crate::Error::Overflow`] when the value is outside the `f64`
/// range; use [`eval_u_scaled`] for large degrees with `|x| > 1`.
pub fn eval_u(m: usize, x: f64) -> Result<f64> {
    Evaluator::new(x).plain(m)
}

/// `U_m(x)` as sign and log-magnitude. Never overflows.
pub fn eval_u_scaled(m: usize, x: f64) -> ScaledValue {
    Evaluator::new(x).scaled(m)
}

/// `U_{-1}(x) = 0` extension used by the inverse kernel.
pub fn eval_u_scaled_ext(m: isize, x: f64) -> ScaledValue {
    if m < 0 {
        ScaledValue::ZERO
    } else {
        eval_u_scaled(m as usize, x)
    }
}

/// `U_0(x), ..., U_{m_max}(x)` in scaled form.
pub fn u_sequence_scaled(m_max: usize, x: f64) -> Vec<ScaledValue> {
    let eval = Evaluator::new(x);
    (0..=m_max).map(|m| eval.scaled(m)).collect()
}

/// `U_m(x)` by the forward three-term recurrence. Cross-check path only;
/// overflows to `+-inf` like plain float arithmetic.
pub fn eval_u_recurrence(m: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for _ in 1..m {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// The zeros of `U_n`: `cos(k pi / (n+1))` for `k = 1..=n`, decreasing.
pub fn zeros(n: usize) -> Vec<f64> {
    let h = std::f64::consts::PI / (n + 1) as f64;
    (1..=n).map(|k| (k as f64 * h).cos()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn low_degree_examples() {
        for x in [-3.0, -0.5, 0.0, 0.7, 1.0, 2.0] {
            assert_eq!(eval_u(0, x).unwrap(), 1.0);
        }
        assert_eq!(eval_u(1, 0.3).unwrap(), 0.6);
        assert_eq!(eval_u(3, 1.0).unwrap(), 4.0);
        assert!(rel(eval_u(2, 1.25).unwrap(), 5.25) < 1e-14);
        assert!((eval_u(2, 0.0).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(eval_u(4, -1.0).unwrap(), 5.0);
        assert_eq!(eval_u(3, -1.0).unwrap(), -4.0);
    }

    #[test]
    fn hyperbolic_example_matches_sinh_quotient() {
        // x = 1.25 = cosh(ln 2)
        let g = 2f64.ln();
        let expected = (3.0 * g).sinh() / g.sinh();
        assert!(rel(eval_u(2, 1.25).unwrap(), expected) < 1e-14);
    }

    #[test]
    fn scaled_examples() {
        let v = eval_u_scaled(2, 1.25);
        assert_eq!(v.sign(), 1);
        assert!((v.log_mag() - 5.25f64.ln()).abs() < 1e-14);
        assert_eq!(eval_u_scaled(0, 7.0), ScaledValue::ONE);
        assert_eq!(eval_u_scaled_ext(-1, 0.3), ScaledValue::ZERO);
    }

    #[test]
    fn sequence_examples() {
        let seq = u_sequence_scaled(3, 1.0);
        let vals: Vec<f64> = seq.iter().map(|v| v.to_f64().unwrap()).collect();
        assert!(seq.iter().all(|v| v.sign() == 1));
        for (v, e) in vals.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!(rel(*v, e) < 1e-14);
        }

        let seq = u_sequence_scaled(2, 0.0);
        assert_eq!(seq[0].to_f64().unwrap(), 1.0);
        assert!(seq[1].is_zero());
        assert!((seq[2].to_f64().unwrap() + 1.0).abs() < 1e-15);

        let seq = u_sequence_scaled(2, 1.25);
        for (v, e) in seq.iter().zip([1.0, 2.5, 5.25]) {
            assert!(rel(v.to_f64().unwrap(), e) < 1e-14);
        }
    }

    #[test]
    fn plain_overflow_is_signalled() {
        assert!(matches!(eval_u(2000, 3.0), Err(Error::Overflow { .. })));
        let s = eval_u_scaled(2000, 3.0);
        assert_eq!(s.sign(), 1);
        // ln U_m(cosh g) ~ (m+1) g - ln(2 sinh g)
        let g = 3f64.acosh();
        let approx = 2001.0 * g - (2.0 * g.sinh()).ln();
        assert!((s.log_mag() - approx).abs() < 1e-9);
        assert_eq!(eval_u_scaled(2001, -3.0).sign(), -1);
    }

    #[test]
    fn zeros_of_u_n_evaluate_to_nearly_zero() {
        for n in [1usize, 2, 7, 50, 200] {
            for z in zeros(n) {
                assert!(eval_u(n, z).unwrap().abs() <= 1e-9, "n = {n}, z = {z}");
            }
        }
    }

    #[test]
    fn continuous_across_the_confluent_point() {
        // U_m(1 + e) ~ (m + 1) + e m (m + 1) (m + 2) / 3
        for m in [2usize, 10, 100] {
            let slope = (m * (m + 1) * (m + 2)) as f64 / 3.0;
            for e in [1e-9, -1e-9, 1e-12, -1e-12] {
                let expected = (m + 1) as f64 + e * slope;
                assert!(rel(eval_u(m, 1.0 + e).unwrap(), expected) < 1e-9);
                let expected_neg = if m % 2 == 0 { expected } else { -expected };
                assert!(rel(eval_u(m, -1.0 - e).unwrap(), expected_neg) < 1e-9);
            }
        }
    }

    proptest! {
        #[test]
        fn recursion_residual_is_small(x in -3.0..3.0f64, m in 1usize..500) {
            // Residual measured relative to max(1, |U_{m+1}|), in scaled form.
            let next = eval_u_scaled(m + 1, x);
            let shift = -next.log_mag().max(0.0);
            let plain = |k: usize| eval_u_scaled(k, x).scale_ln(shift).to_f64_saturating();
            let residual = (plain(m + 1) - 2.0 * x * plain(m) + plain(m - 1)).abs();
            prop_assert!(residual <= 1e-10, "residual {}", residual);
        }

        #[test]
        fn parity(x in -3.0..3.0f64, m in 0usize..400) {
            let a = eval_u_scaled(m, x);
            let b = eval_u_scaled(m, -x);
            let expected = if m % 2 == 0 { b } else { -b };
            prop_assert!(a.relative_diff(expected) <= 1e-12 || (a.is_zero() && b.is_zero()));
        }

        #[test]
        fn plain_and_scaled_agree_in_hyperbolic_regime(x in 1.0001..5.0f64, m in 0usize..300) {
            let plain = eval_u(m, x).unwrap();
            let scaled = eval_u_scaled(m, x);
            prop_assert!(scaled.relative_diff(ScaledValue::from_f64(plain)) <= 1e-12);
        }

        #[test]
        fn closed_form_matches_recurrence(x in -2.0..2.0f64, m in 0usize..60) {
            let closed = eval_u(m, x).unwrap();
            let rec = eval_u_recurrence(m, x);
            prop_assert!((closed - rec).abs() <= 1e-9 * rec.abs().max(1.0));
        }
    }
}
