use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::{Error, Result};

/// A real number stored as a sign and the natural log of its magnitude.
///
/// Chebyshev values, kernel sequences and determinants grow like `eta^n`
/// and overflow `f64` long before the quantities built from them do, so
/// they are carried in this form and only exponentiated at the end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    sign: i8,
    log_mag: f64,
}

impl ScaledValue {
    pub const ZERO: ScaledValue = ScaledValue { sign: 0, log_mag: f64::NEG_INFINITY };
    pub const ONE: ScaledValue = ScaledValue { sign: 1, log_mag: 0.0 };

    /// Builds a value from a sign in `{-1, 0, 1}` and `ln|value|`.
    ///
    /// A zero sign or a `-inf` log-magnitude both produce [`ScaledValue::ZERO`].
    pub fn new(sign: i8, log_mag: f64) -> Self {
        if sign == 0 || log_mag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            ScaledValue { sign: sign.signum(), log_mag }
        }
    }

    pub fn from_f64(value: f64) -> Self {
        match value.partial_cmp(&0.0) {
            Some(Ordering::Greater) => ScaledValue { sign: 1, log_mag: value.ln() },
            Some(Ordering::Less) => ScaledValue { sign: -1, log_mag: (-value).ln() },
            _ => Self::ZERO,
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn log_mag(&self) -> f64 {
        self.log_mag
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        ScaledValue { sign: self.sign.abs(), ..self }
    }

    /// Converts to a plain float, failing when the magnitude is not representable.
    pub fn to_f64(self) -> Result<f64> {
        let v = self.to_f64_saturating();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow { log_mag: self.log_mag })
        }
    }

    /// Converts to a plain float, returning `+-inf` on overflow.
    pub fn to_f64_saturating(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.log_mag.exp()
        }
    }

    /// Multiplies by `e^shift`.
    pub fn scale_ln(self, shift: f64) -> Self {
        if self.sign == 0 {
            self
        } else {
            ScaledValue { sign: self.sign, log_mag: self.log_mag + shift }
        }
    }

    /// Relative distance `|self / other - 1|`, computed without leaving log space.
    ///
    /// Returns `inf` when exactly one of the two is zero or the signs differ
    /// by more than rounding can explain.
    pub fn relative_diff(self, other: Self) -> f64 {
        match (self.sign, other.sign) {
            (0, 0) => 0.0,
            (0, _) | (_, 0) => f64::INFINITY,
            (s, t) if s == t => (self.log_mag - other.log_mag).exp_m1().abs(),
            _ => f64::INFINITY,
        }
    }
}

impl Default for ScaledValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<f64> for ScaledValue {
    fn from(value: f64) -> Self {
        Self::from_f64(value)
    }
}

impl fmt::Display for ScaledValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "" }, self.log_mag),
        }
    }
}

impl Neg for ScaledValue {
    type Output = ScaledValue;

    fn neg(self) -> ScaledValue {
        ScaledValue { sign: -self.sign, ..self }
    }
}

impl Mul for ScaledValue {
    type Output = ScaledValue;

    fn mul(self, rhs: ScaledValue) -> ScaledValue {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        ScaledValue { sign: self.sign * rhs.sign, log_mag: self.log_mag + rhs.log_mag }
    }
}

impl Div for ScaledValue {
    type Output = ScaledValue;

    /// Division by zero yields a value with `+inf` log-magnitude.
    fn div(self, rhs: ScaledValue) -> ScaledValue {
        if self.sign == 0 {
            return Self::ZERO;
        }
        if rhs.sign == 0 {
            return ScaledValue { sign: self.sign, log_mag: f64::INFINITY };
        }
        ScaledValue { sign: self.sign * rhs.sign, log_mag: self.log_mag - rhs.log_mag }
    }
}

impl Add for ScaledValue {
    type Output = ScaledValue;

    fn add(self, rhs: ScaledValue) -> ScaledValue {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (hi, lo) = if self.log_mag >= rhs.log_mag { (self, rhs) } else { (rhs, self) };
        let ratio = (lo.log_mag - hi.log_mag).exp();
        if hi.sign == lo.sign {
            ScaledValue { sign: hi.sign, log_mag: hi.log_mag + ratio.ln_1p() }
        } else if ratio >= 1.0 {
            Self::ZERO
        } else {
            ScaledValue { sign: hi.sign, log_mag: hi.log_mag + (-ratio).ln_1p() }
        }
    }
}

impl Sub for ScaledValue {
    type Output = ScaledValue;

    fn sub(self, rhs: ScaledValue) -> ScaledValue {
        self + (-rhs)
    }
}
