//! Dense brute-force reference routines.
//!
//! Nothing here knows about Toeplitz structure beyond
//! [`dense_from_spec`]: `O(n^3)` elimination with partial pivoting, cyclic
//! Jacobi for symmetric spectra, and bisection on `det(tI - M)` for real
//! roots. Intended for `n` up to a few hundred.

use crate::model::TriToeplitzSpec;
use crate::{Error, Result, ScaledValue};

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: entries.len() });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(DenseMatrix { n, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let entries: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(n, entries)
    }

    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, entries: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// 0-based access.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: v.len() });
        }
        Ok((0..self.n).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// `diag(d)^-1 M diag(d)`.
    pub fn conjugate_by_diagonal(&self, d: &[f64]) -> Result<DenseMatrix> {
        if d.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: d.len() });
        }
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j) * d[j] / d[i]);
            }
        }
        Ok(out)
    }

    /// `t I - M`.
    pub fn shifted(&self, t: f64) -> DenseMatrix {
        let mut out = self.clone();
        for v in out.entries.iter_mut() {
            *v = -*v;
        }
        for i in 0..self.n {
            out.entries[i * self.n + i] += t;
        }
        out
    }
}

/// Materialises `A_n(a, b, c)`: `b` on the diagonal, `c` above, `a` below.
pub fn dense_from_spec(spec: &TriToeplitzSpec) -> DenseMatrix {
    let n = spec.n();
    let mut m = DenseMatrix::zeros(n);
    for i in 0..n {
        m.set(i, i, spec.b());
        if i + 1 < n {
            m.set(i, i + 1, spec.c());
            m.set(i + 1, i, spec.a());
        }
    }
    m
}

struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    swaps: usize,
    singular: bool,
    zero_pivot: bool,
}

fn lu_factor(m: &DenseMatrix) -> Lu {
    let n = m.n;
    let mut lu = m.entries.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0;
    let mut singular = false;
    let mut zero_pivot = false;
    let tiny = m.max_abs() * f64::EPSILON * n as f64;
    for col in 0..n {
        let (pivot_row, pivot_abs) = (col..n)
            .map(|r| (r, lu[r * n + col].abs()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot_abs <= tiny {
            singular = true;
        }
        if pivot_abs == 0.0 {
            zero_pivot = true;
            continue;
        }
        if pivot_row != col {
            for j in 0..n {
                lu.swap(col * n + j, pivot_row * n + j);
            }
            perm.swap(col, pivot_row);
            swaps += 1;
        }
        let pivot = lu[col * n + col];
        for r in col + 1..n {
            let factor = lu[r * n + col] / pivot;
            lu[r * n + col] = factor;
            if factor != 0.0 {
                for j in col + 1..n {
                    lu[r * n + j] -= factor * lu[col * n + j];
                }
            }
        }
    }
    Lu { n, lu, perm, swaps, singular, zero_pivot }
}

impl Lu {
    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            for k in 0..i {
                y[i] -= self.lu[i * n + k] * y[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] -= self.lu[i * n + k] * y[k];
            }
            y[i] /= self.lu[i * n + i];
        }
        y
    }

    fn log_det(&self) -> ScaledValue {
        if self.zero_pivot {
            return ScaledValue::ZERO;
        }
        let mut sign: i8 = if self.swaps.is_multiple_of(2) { 1 } else { -1 };
        let mut log = 0.0;
        for i in 0..self.n {
            let d = self.lu[i * self.n + i];
            if d < 0.0 {
                sign = -sign;
            }
            log += d.abs().ln();
        }
        ScaledValue::new(sign, log)
    }
}

/// Solves `M x = rhs` by Gaussian elimination with partial pivoting.
pub fn lu_solve(m: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != m.n {
        return Err(Error::DimensionMismatch { expected: m.n, found: rhs.len() });
    }
    let lu = lu_factor(m);
    if lu.singular {
        return Err(Error::SingularMatrix);
    }
    Ok(lu.solve(rhs))
}

/// Determinant from the pivoted factorisation; `0` only on an exactly zero pivot.
pub fn lu_det(m: &DenseMatrix) -> f64 {
    lu_log_det(m).to_f64_saturating()
}

/// Determinant in sign/log form.
pub fn lu_log_det(m: &DenseMatrix) -> ScaledValue {
    lu_factor(m).log_det()
}

/// Inverse, column by column.
pub fn dense_inverse(m: &DenseMatrix) -> Result<DenseMatrix> {
    let lu = lu_factor(m);
    if lu.singular {
        return Err(Error::SingularMatrix);
    }
    let n = m.n;
    let mut inv = DenseMatrix::zeros(n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[j] = 1.0;
        for (i, v) in lu.solve(&e).into_iter().enumerate() {
            inv.set(i, j, v);
        }
    }
    Ok(inv)
}

/// `||M v - value v||_inf / ||v||_inf`.
pub fn eigen_check(m: &DenseMatrix, value: f64, vector: &[f64]) -> Result<f64> {
    let mv = m.matvec(vector)?;
    let scale = vector.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::ZeroVector);
    }
    let residual = mv
        .iter()
        .zip(vector)
        .fold(0.0f64, |acc, (mv, v)| acc.max((mv - value * v).abs()));
    Ok(residual / scale)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
pub fn symmetric_eigenvalues(m: &DenseMatrix) -> Vec<f64> {
    let n = m.n;
    let mut a = m.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.get(i, j).powi(2))
            .sum();
        let total: f64 = a.entries.iter().map(|v| v * v).sum();
        if off <= 1e-30 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let tau = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// Real roots of `det(t I - M)` found by scanning `[-R, R]` (`R` the
/// infinity norm) on `samples` points and bisecting each sign change.
/// Returns roots in descending order. Only simple roots are found.
pub fn char_poly_roots(m: &DenseMatrix, samples: usize) -> Vec<f64> {
    let radius = (0..m.n)
        .map(|i| m.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0f64, f64::max)
        * (1.0 + 1e-9)
        + 1e-12;
    let sign_at = |t: f64| lu_log_det(&m.shifted(t)).sign();
    let mut roots = Vec::new();
    let step = 2.0 * radius / samples as f64;
    let mut lo = -radius;
    let mut lo_sign = sign_at(lo);
    for k in 1..=samples {
        let hi = -radius + k as f64 * step;
        let hi_sign = sign_at(hi);
        if hi_sign == 0 {
            roots.push(hi);
        } else if lo_sign != 0 && hi_sign != lo_sign {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let s = sign_at(mid);
                if s == 0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if s == lo_sign {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        lo = hi;
        lo_sign = hi_sign;
    }
    roots.sort_by(|x, y| y.total_cmp(x));
    roots
}
