//! Timing table for the three linear solvers.

use std::time::Instant;

use tritoeplitz::greens::{apply_inverse, build_kernel, thomas_solve};
use tritoeplitz::oracle::{dense_from_spec, lu_solve};
use tritoeplitz::{Result, TriToeplitzSpec, DEFAULT_PIVOT_TOL};

use crate::output::{Body, Val};

/// Dense LU is cubic; larger orders are reported as n/a.
pub const DENSE_MAX_ORDER: usize = 1024;

fn median_seconds<T>(reps: usize, mut f: impl FnMut() -> T) -> (f64, T) {
    let mut times = Vec::with_capacity(reps);
    let mut last = None;
    for _ in 0..reps {
        let start = Instant::now();
        let out = f();
        times.push(start.elapsed().as_secs_f64());
        last = Some(out);
    }
    times.sort_by(f64::total_cmp);
    (times[reps / 2], last.expect("reps >= 1"))
}

fn rhs(n: usize) -> Vec<f64> {
    (0..n).map(|j| ((j * 37 + 11) % 101) as f64 / 50.0 - 1.0).collect()
}

/// One row per grid order, in grid order.
pub fn run(a: f64, b: f64, c: f64, grid: &[usize], reps: usize, timings: bool, tol: f64) -> Result<Body> {
    let mut columns = vec!["n".to_string()];
    if timings {
        columns.extend(["apply_inverse_s", "thomas_s", "dense_lu_s"].map(String::from));
    }
    columns.extend(["apply_inverse", "dense_lu", "max_discrepancy"].map(String::from));

    let reps = if timings { reps } else { 1 };
    let mut rows = Vec::with_capacity(grid.len());
    for &n in grid {
        let spec = TriToeplitzSpec::new(a, b, c, n)?;
        let form = tritoeplitz::model::symmetrise(&spec)?;
        let r = rhs(n);

        let green = if form.x() > 1.0 {
            let (t, x) = median_seconds(reps, || {
                build_kernel(&spec, tol).and_then(|k| apply_inverse(&k, &r))
            });
            Some((t, x?))
        } else {
            None
        };
        let (thomas_t, thomas_x) = median_seconds(reps, || thomas_solve(&spec, &r, DEFAULT_PIVOT_TOL));
        let thomas_x = thomas_x?;
        let dense = if n <= DENSE_MAX_ORDER {
            let m = dense_from_spec(&spec);
            let (t, x) = median_seconds(reps, || lu_solve(&m, &r));
            x.ok().map(|x| (t, x))
        } else {
            None
        };

        let scale = thomas_x.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let discrepancy = [green.as_ref(), dense.as_ref()]
            .into_iter()
            .flatten()
            .map(|(_, x)| x.iter().zip(&thomas_x).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max) / scale)
            .fold(0.0, f64::max);

        let mut row = vec![Val::U(n)];
        if timings {
            row.extend([green.as_ref().map(|g| g.0).into(), Val::F(thomas_t), dense.as_ref().map(|d| d.0).into()]);
        }
        let state = |present: bool| Val::S(if present { "ok" } else { "n/a" }.into());
        row.extend([state(green.is_some()), state(dense.is_some()), Val::F(discrepancy)]);
        rows.push(row);
    }
    Ok(Body::Table { columns, rows })
}
