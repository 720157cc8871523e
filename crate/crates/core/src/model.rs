//! The `A_n(a, b, c)` parameter record, its diagonal symmetrisation and the
//! weighted inner-product structure in which it is self-adjoint.

use crate::{Error, Result, ScaledValue};

/// Parameters of the `n x n` tridiagonal Toeplitz matrix with diagonal `b`,
/// subdiagonal `a` and superdiagonal `c`.
///
/// Validated on construction: `a` and `c` are nonzero, all entries are
/// finite and `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriToeplitzSpec {
    a: f64,
    b: f64,
    c: f64,
    n: usize,
}

impl TriToeplitzSpec {
    pub fn new(a: f64, b: f64, c: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::NonFinite);
        }
        if a == 0.0 || c == 0.0 {
            return Err(Error::ZeroOffDiagonal { a, c });
        }
        if n < 1 {
            return Err(Error::InvalidOrder(n));
        }
        Ok(TriToeplitzSpec { a, b, c, n })
    }

    /// Subdiagonal entry.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Diagonal entry.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Superdiagonal entry.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Matrix order.
    pub fn n(&self) -> usize {
        self.n
    }

    /// True when `a * c > 0`.
    pub fn is_symmetrisable(&self) -> bool {
        (self.a > 0.0) == (self.c > 0.0)
    }

    /// `max(|a|, |b|, |c|)`.
    pub fn max_abs_entry(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    pub(crate) fn require_symmetrisable(&self) -> Result<()> {
        if self.is_symmetrisable() {
            Ok(())
        } else {
            Err(Error::NotSymmetrisable { product: self.a * self.c })
        }
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.n, found: len })
        }
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if (1..=self.n).contains(&index) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, n: self.n })
        }
    }
}

/// Validates and builds a [`TriToeplitzSpec`].
pub fn make_spec(a: f64, b: f64, c: f64, n: usize) -> Result<TriToeplitzSpec> {
    TriToeplitzSpec::new(a, b, c, n)
}

/// The symmetrised parameters of a symmetrisable spec.
///
/// With `s = sqrt(a c)`, `q = s / c` and `D = diag(1, q, ..., q^(n-1))`,
/// `D^-1 A_n D` is the symmetric Toeplitz matrix with diagonal `b` and
/// off-diagonal `s`. `x = b / (2 s)` is the Chebyshev argument for every
/// closed form downstream. `D` itself is never stored; its entries are
/// available in sign/log form through [`SymmetrisedForm::scaling_entry`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetrisedForm {
    s: f64,
    q: f64,
    x: f64,
    n: usize,
}

impl SymmetrisedForm {
    /// Builds the form for the symmetric matrix `S_n(b, s)` directly.
    pub fn symmetric(b: f64, s: f64, n: usize) -> Result<Self> {
        let spec = TriToeplitzSpec::new(s, b, s, n)?;
        if s <= 0.0 {
            return Err(Error::NotSymmetrisable { product: -s * s });
        }
        symmetrise(&spec)
    }

    /// Off-diagonal of the symmetrised matrix, `sqrt(a c) > 0`.
    pub fn s(&self) -> f64 {
        self.s
    }

    /// Similarity ratio `s / c`; negative when `a, c < 0`.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Chebyshev argument `b / (2 s)`.
    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Diagonal `b` of the symmetrised matrix.
    pub fn b(&self) -> f64 {
        2.0 * self.s * self.x
    }

    pub fn ln_abs_q(&self) -> f64 {
        self.q.abs().ln()
    }

    /// `q^power` in sign/log form; `power` may be negative.
    pub fn q_power(&self, power: i64) -> ScaledValue {
        let sign = if self.q < 0.0 && power.rem_euclid(2) == 1 { -1 } else { 1 };
        ScaledValue::new(sign, power as f64 * self.ln_abs_q())
    }

    /// `D_jj = q^(j-1)` for 1-based `j`.
    pub fn scaling_entry(&self, j: usize) -> ScaledValue {
        self.q_power(j as i64 - 1)
    }
}

/// Computes `(s, q, x)` for a symmetrisable spec.
pub fn symmetrise(spec: &TriToeplitzSpec) -> Result<SymmetrisedForm> {
    spec.require_symmetrisable()?;
    let (a, b, c) = (spec.a, spec.b, spec.c);
    let product = a * c;
    let s = if product.is_finite() && product.is_normal() {
        product.sqrt()
    } else {
        a.abs().sqrt() * c.abs().sqrt()
    };
    Ok(SymmetrisedForm { s, q: s / c, x: b / (2.0 * s), n: spec.n })
}

/// Diagonal of `W = D^-2`, the weight of the inner product `<u, v>_W = u^T W v`
/// in which `A_n` is self-adjoint.
///
/// `w_j = (c/a)^(j-1)`. Entries are positive in exact arithmetic; for large
/// `n` with `|q|` far from 1 the stored floats can under- or overflow, in
/// which case [`WeightVector::ln_entry`] is still exact.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    ln_ratio: f64,
    entries: Vec<f64>,
}

impl WeightVector {
    pub fn from_entries(entries: Vec<f64>) -> Self {
        let ln_ratio = match entries.as_slice() {
            [w1, w2, ..] => (w2 / w1).ln(),
            _ => 0.0,
        };
        WeightVector { ln_ratio, entries }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `ln w_j` for 1-based `j`.
    pub fn ln_entry(&self, j: usize) -> f64 {
        (j as f64 - 1.0) * self.ln_ratio
    }
}

pub fn weight_vector(spec: &TriToeplitzSpec) -> Result<WeightVector> {
    spec.require_symmetrisable()?;
    // c/a = q^-2 with a single rounding.
    let ratio = spec.c / spec.a;
    let mut entries = Vec::with_capacity(spec.n);
    let mut w = 1.0;
    for j in 0..spec.n {
        if j > 0 {
            w = ratio.powi(j as i32);
            if !w.is_normal() {
                w = ((j as f64) * ratio.ln()).exp();
            }
        }
        entries.push(w);
    }
    Ok(WeightVector { ln_ratio: ratio.ln(), entries })
}

/// `A_n v` in `O(n)`: `(A v)_i = a v_{i-1} + b v_i + c v_{i+1}`.
pub fn apply_matvec(spec: &TriToeplitzSpec, v: &[f64]) -> Result<Vec<f64>> {
    spec.check_len(v.len())?;
    let n = spec.n;
    let out = (0..n)
        .map(|i| {
            let mut acc = spec.b * v[i];
            if i > 0 {
                acc += spec.a * v[i - 1];
            }
            if i + 1 < n {
                acc += spec.c * v[i + 1];
            }
            acc
        })
        .collect();
    Ok(out)
}

/// `max |(A^T W - W A)_{ij}|`, evaluated on the tridiagonal pattern only.
///
/// The diagonal cancels identically; both off-diagonals reduce to
/// `|a w_{i+1} - c w_i|`.
pub fn weighted_selfadjoint_residual(spec: &TriToeplitzSpec) -> Result<f64> {
    let w = weight_vector(spec)?;
    let residual = w
        .entries
        .windows(2)
        .map(|pair| (spec.a * pair[1] - spec.c * pair[0]).abs())
        .fold(0.0, f64::max);
    Ok(residual)
}
