//! `tritoep`: command-line access to the tridiagonal Toeplitz toolkit.

mod bench;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use tritoeplitz::conditioning::weighted_condition_with_tol;
use tritoeplitz::greens::{apply_inverse, build_kernel, decay_envelope, thomas_solve};
use tritoeplitz::repunit::{
    cheb_repunit_identity_residual, cosine_product_ln, inverse_entry_extra_prefactor, repunit,
    repunit_condition, repunit_det_exact, repunit_inverse_entry, repunit_matrix_spec,
};
use tritoeplitz::spectral::{
    char_poly_eval, determinant, eigenvalues, eigenvector, Normalization, CHAR_POLY_ZERO_TOL,
};
use tritoeplitz::{TriToeplitzSpec, DEFAULT_PIVOT_TOL, DEFAULT_SINGULAR_TOL};

use output::{Body, Format, Report, SpecEcho, Val};

#[derive(Parser)]
#[command(name = "tritoep", version, about = "Closed-form tools for tridiagonal Toeplitz matrices A_n(a, b, c)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct SpecArgs {
    /// Subdiagonal entry
    #[arg(short = 'a', allow_negative_numbers = true)]
    a: Option<f64>,
    /// Diagonal entry
    #[arg(short = 'b', allow_negative_numbers = true)]
    b: Option<f64>,
    /// Superdiagonal entry
    #[arg(short = 'c', allow_negative_numbers = true)]
    c: Option<f64>,
    /// Order of the matrix
    #[arg(short = 'n')]
    n: Option<usize>,
    /// JSON file holding a spec echo (`{"a":..,"b":..,"c":..,"n":..}`), optionally under a `spec` key
    #[arg(long)]
    spec_file: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct OutArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Relative singularity tolerance
    #[arg(long, default_value_t = DEFAULT_SINGULAR_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Raw,
    Weighted,
    Euclidean,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Green,
    Thomas,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepunitOp {
    Det,
    Value,
    Product,
    Cond,
    Inverse,
    Identity,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues, optionally with eigenvectors
    Eig {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(long)]
        vectors: bool,
        #[arg(long, value_enum, default_value = "raw")]
        normalization: NormArg,
    },
    /// Determinant s^n U_n(x)
    Det {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Exact continuant for integer entries
        #[arg(long)]
        exact: bool,
    },
    /// Characteristic polynomial det(tI - A) at one point
    Charpoly {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(short = 't', long = "at", allow_negative_numbers = true)]
        t: f64,
    },
    /// One inverse entry, or the whole inverse
    Inverse {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(short = 'i')]
        i: Option<usize>,
        #[arg(short = 'j')]
        j: Option<usize>,
    },
    /// Solve A x = rhs
    Solve {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Comma-separated right-hand side of length n
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        rhs: Vec<f64>,
        #[arg(long, value_enum, default_value = "green")]
        method: Method,
    },
    /// Weighted condition number
    Cond {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exponential decay bound on inverse entries (x > 1)
    Decay {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(short = 'i')]
        i: Option<usize>,
        #[arg(short = 'j')]
        j: Option<usize>,
    },
    /// Repunit matrix V_n(d) = A_n(d, d+1, 1)
    Repunit {
        #[arg(value_enum)]
        op: RepunitOp,
        #[arg(long, allow_negative_numbers = true)]
        base: f64,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        exact: bool,
        #[arg(short = 'i')]
        i: Option<usize>,
        #[arg(short = 'j')]
        j: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Cross-check every identity against the dense oracle (n <= 200)
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Time apply_inverse, thomas_solve and dense LU over a grid of orders
    Bench {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Comma-separated orders
        #[arg(long, value_delimiter = ',')]
        grid: Vec<usize>,
        /// Repetitions per timing; the median is reported
        #[arg(long, default_value_t = 9)]
        reps: usize,
        /// Omit wall-clock columns so the output is reproducible
        #[arg(long)]
        no_timings: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eig { .. } => "eig",
            Command::Det { .. } => "det",
            Command::Charpoly { .. } => "charpoly",
            Command::Inverse { .. } => "inverse",
            Command::Solve { .. } => "solve",
            Command::Cond { .. } => "cond",
            Command::Decay { .. } => "decay",
            Command::Repunit { .. } => "repunit",
            Command::Verify { .. } => "verify",
            Command::Bench { .. } => "bench",
        }
    }
}

pub enum CliError {
    Usage(String),
    Domain(tritoeplitz::Error),
}

impl From<tritoeplitz::Error> for CliError {
    fn from(e: tritoeplitz::Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A successful run: the report and whether every check passed.
pub struct Outcome {
    report: Report,
    format: Format,
    ok: bool,
}

impl SpecArgs {
    fn echo(&self) -> CliResult<SpecEcho> {
        let mut echo = match &self.spec_file {
            Some(path) => read_spec_file(path)?,
            None => SpecEcho { a: f64::NAN, b: f64::NAN, c: f64::NAN, n: None, symmetrisable: false },
        };
        echo.a = self.a.unwrap_or(echo.a);
        echo.b = self.b.unwrap_or(echo.b);
        echo.c = self.c.unwrap_or(echo.c);
        echo.n = self.n.or(echo.n);
        for (flag, v) in [("-a", echo.a), ("-b", echo.b), ("-c", echo.c)] {
            if v.is_nan() {
                return Err(CliError::Usage(format!("missing {flag} (or --spec-file)")));
            }
        }
        echo.symmetrisable = echo.a * echo.c > 0.0;
        Ok(echo)
    }

    fn resolve(&self) -> CliResult<(TriToeplitzSpec, SpecEcho)> {
        let echo = self.echo()?;
        let n = echo.n.ok_or_else(|| CliError::Usage("missing -n (or --spec-file)".into()))?;
        Ok((TriToeplitzSpec::new(echo.a, echo.b, echo.c, n)?, echo))
    }
}

fn read_spec_file(path: &PathBuf) -> CliResult<SpecEcho> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid JSON in {}: {e}", path.display())))?;
    let inner = value.get("spec").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| CliError::Usage(format!("invalid spec in {}: {e}", path.display())))
}

fn echo_of(spec: &TriToeplitzSpec) -> SpecEcho {
    SpecEcho { a: spec.a(), b: spec.b(), c: spec.c(), n: Some(spec.n()), symmetrisable: spec.is_symmetrisable() }
}

fn tolerances(out: &OutArgs) -> Vec<(&'static str, f64)> {
    vec![("singular", out.tol), ("pivot", DEFAULT_PIVOT_TOL), ("char_poly_zero", CHAR_POLY_ZERO_TOL)]
}

fn report(echo: SpecEcho, out: &OutArgs, default: Format, body: Body) -> Outcome {
    Outcome { report: Report { spec: echo, body, tolerances: tolerances(out) }, format: out.format.unwrap_or(default), ok: true }
}

fn scaled_record(v: tritoeplitz::ScaledValue) -> Vec<(&'static str, Val)> {
    vec![
        ("value", Val::F(v.to_f64_saturating())),
        ("sign", Val::I(v.sign() as i64)),
        ("log_abs", Val::F(v.log_mag())),
    ]
}

fn as_integer(v: f64) -> Option<BigInt> {
    (v.is_finite() && v.fract() == 0.0 && v.abs() < 9.007_199_254_740_992e15).then(|| BigInt::from(v as i64))
}

/// Exact continuant `D_k = b D_{k-1} - a c D_{k-2}` for integer entries.
fn exact_det(spec: &TriToeplitzSpec) -> CliResult<BigInt> {
    let (Some(a), Some(b), Some(c)) = (as_integer(spec.a()), as_integer(spec.b()), as_integer(spec.c())) else {
        return Err(CliError::Usage("--exact requires integer a, b, c".into()));
    };
    let ac = a * c;
    let (mut prev, mut cur) = (BigInt::from(1), b.clone());
    for _ in 1..spec.n() {
        let next = &b * &cur - &ac * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

fn run(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Eig { spec, out, vectors, normalization } => {
            let (spec, echo) = spec.resolve()?;
            let values = eigenvalues(&spec)?;
            let body = if vectors {
                let norm = match normalization {
                    NormArg::Raw => Normalization::Raw,
                    NormArg::Weighted => Normalization::UnitWeighted,
                    NormArg::Euclidean => Normalization::UnitEuclidean,
                };
                let mut columns = vec!["k".to_string(), "value".to_string()];
                columns.extend((1..=spec.n()).map(|j| format!("v{j}")));
                let mut rows = Vec::with_capacity(spec.n());
                for (k, value) in values.iter().enumerate() {
                    let mut row = vec![Val::U(k + 1), Val::F(*value)];
                    row.extend(eigenvector(&spec, k + 1, norm)?.into_iter().map(Val::F));
                    rows.push(row);
                }
                Body::Table { columns, rows }
            } else {
                Body::List { name: "eigenvalue", values: values.into_iter().map(Val::F).collect() }
            };
            Ok(report(echo, &out, Format::Plain, body))
        }
        Command::Det { spec, out, exact } => {
            let (spec, echo) = spec.resolve()?;
            let body = if exact {
                if !spec.is_symmetrisable() {
                    return Err(tritoeplitz::Error::NotSymmetrisable { product: spec.a() * spec.c() }.into());
                }
                Body::Scalar { name: "det", value: Val::S(exact_det(&spec)?.to_string()) }
            } else {
                Body::Record(scaled_record(determinant(&spec)?))
            };
            Ok(report(echo, &out, Format::Plain, body))
        }
        Command::Charpoly { spec, out, t } => {
            let (spec, echo) = spec.resolve()?;
            let mut fields = vec![("t", Val::F(t))];
            fields.extend(scaled_record(char_poly_eval(&spec, t)?));
            Ok(report(echo, &out, Format::Plain, Body::Record(fields)))
        }
        Command::Inverse { spec, out, i, j } => {
            let (spec, echo) = spec.resolve()?;
            let kernel = build_kernel(&spec, out.tol)?;
            if !kernel.is_invertible() {
                return Err(tritoeplitz::Error::SingularMatrix.into());
            }
            let body = match (i, j) {
                (Some(i), Some(j)) => {
                    let v = kernel.inverse_entry_scaled(i, j)?;
                    let mut fields = vec![("i", Val::U(i)), ("j", Val::U(j))];
                    fields.extend(scaled_record(v));
                    Body::Record(fields)
                }
                (None, None) => {
                    let n = spec.n();
                    let mut rows = Vec::with_capacity(n);
                    for i in 1..=n {
                        rows.push((1..=n).map(|j| kernel.inverse_entry(i, j).map(Val::F)).collect::<Result<_, _>>()?);
                    }
                    Body::Matrix(rows)
                }
                _ => return Err(CliError::Usage("give both -i and -j, or neither".into())),
            };
            Ok(report(echo, &out, Format::Plain, body))
        }
        Command::Solve { spec, out, rhs, method } => {
            let (spec, echo) = spec.resolve()?;
            if rhs.len() != spec.n() {
                return Err(CliError::Usage(format!("--rhs has {} entries, expected {}", rhs.len(), spec.n())));
            }
            let x = match method {
                Method::Green => {
                    let kernel = build_kernel(&spec, out.tol)?;
                    if !kernel.is_invertible() {
                        return Err(tritoeplitz::Error::SingularMatrix.into());
                    }
                    apply_inverse(&kernel, &rhs)?
                }
                Method::Thomas => thomas_solve(&spec, &rhs, DEFAULT_PIVOT_TOL)?,
            };
            Ok(report(echo, &out, Format::Plain, Body::List { name: "x", values: x.into_iter().map(Val::F).collect() }))
        }
        Command::Cond { spec, out } => {
            let (spec, echo) = spec.resolve()?;
            let r = weighted_condition_with_tol(&spec, out.tol)?;
            let body = Body::Record(vec![
                ("lambda_max", Val::F(r.lambda_max)),
                ("lambda_min", Val::F(r.lambda_min)),
                ("positive_definite", Val::B(r.positive_definite)),
                ("cond_weighted", Val::F(r.cond_weighted)),
                ("formula_value", r.formula_value.into()),
            ]);
            Ok(report(echo, &out, Format::Plain, body))
        }
        Command::Decay { spec, out, i, j } => {
            let (spec, echo) = spec.resolve()?;
            let env = decay_envelope(&spec)?;
            let mut fields =
                vec![("eta", Val::F(env.eta)), ("prefactor", Val::F(env.prefactor)), ("abs_q", Val::F(env.abs_q))];
            match (i, j) {
                (Some(i), Some(j)) => {
                    for idx in [i, j] {
                        if !(1..=spec.n()).contains(&idx) {
                            return Err(tritoeplitz::Error::IndexOutOfRange { index: idx, n: spec.n() }.into());
                        }
                    }
                    let kernel = build_kernel(&spec, out.tol)?;
                    fields.extend([
                        ("i", Val::U(i)),
                        ("j", Val::U(j)),
                        ("bound", Val::F(env.bound(i, j))),
                        ("entry", Val::F(kernel.inverse_entry(i, j)?)),
                    ]);
                }
                (None, None) => {}
                _ => return Err(CliError::Usage("give both -i and -j, or neither".into())),
            }
            Ok(report(echo, &out, Format::Plain, Body::Record(fields)))
        }
        Command::Repunit { op, base, n, exact, i, j, out } => run_repunit(op, base, n, exact, i, j, out),
        Command::Verify { spec, out } => {
            let (spec, echo) = spec.resolve()?;
            if spec.n() > verify::MAX_ORDER {
                return Err(CliError::Usage(format!("verify supports n <= {} (got {})", verify::MAX_ORDER, spec.n())));
            }
            let checks = verify::run_checks(&spec, out.tol)?;
            let ok = checks.iter().all(|c| c.status != verify::Status::Fail);
            let mut outcome = report(echo, &out, Format::Plain, verify::body(&checks));
            outcome.ok = ok;
            Ok(outcome)
        }
        Command::Bench { spec, out, grid, reps, no_timings } => {
            let mut echo = spec.echo()?;
            let grid = if grid.is_empty() { echo.n.into_iter().collect() } else { grid };
            if grid.is_empty() {
                return Err(CliError::Usage("give --grid or -n".into()));
            }
            if grid.contains(&0) || reps == 0 {
                return Err(CliError::Usage("grid orders and --reps must be positive".into()));
            }
            let body = bench::run(echo.a, echo.b, echo.c, &grid, reps, !no_timings, out.tol)?;
            echo.n = None;
            Ok(report(echo, &out, Format::Csv, body))
        }
    }
}

fn run_repunit(
    op: RepunitOp,
    base: f64,
    n: usize,
    exact: bool,
    i: Option<usize>,
    j: Option<usize>,
    out: OutArgs,
) -> CliResult<Outcome> {
    let spec = repunit_matrix_spec(base, n)?;
    let echo = echo_of(&spec);
    let int_base = || -> CliResult<u64> {
        as_integer(base)
            .and_then(|v| u64::try_from(v).ok())
            .ok_or_else(|| CliError::Usage("--exact requires a positive integer --base".into()))
    };
    let body = match op {
        RepunitOp::Det => {
            if exact {
                Body::Scalar { name: "det", value: Val::S(repunit_det_exact(int_base()?, n)?.to_string()) }
            } else {
                let r = repunit(n + 1, base)?;
                Body::Record(vec![("value", Val::F(r.float_value)), ("log", Val::F(r.ln()))])
            }
        }
        RepunitOp::Value => {
            let r = repunit(n, base)?;
            if exact {
                let v = r.exact_value.ok_or_else(|| CliError::Usage("--exact requires a positive integer --base".into()))?;
                Body::Scalar { name: "repunit", value: Val::S(v.to_string()) }
            } else {
                Body::Record(vec![("value", Val::F(r.float_value)), ("log", Val::F(r.ln()))])
            }
        }
        RepunitOp::Product => {
            let ln = cosine_product_ln(base, n)?;
            Body::Record(vec![("value", Val::F(ln.exp())), ("log", Val::F(ln))])
        }
        RepunitOp::Cond => Body::Scalar { name: "cond", value: Val::F(repunit_condition(base, n)?) },
        RepunitOp::Identity => {
            let worst = (0..=n).map(|m| cheb_repunit_identity_residual(base, m)).try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))?;
            Body::Scalar { name: "max_relative_residual", value: Val::F(worst) }
        }
        RepunitOp::Inverse => {
            let (Some(i), Some(j)) = (i, j) else {
                return Err(CliError::Usage("repunit inverse needs -i and -j".into()));
            };
            let variant = inverse_entry_extra_prefactor(base, n, i, j)?;
            if exact {
                let e = repunit_inverse_entry(int_base()?, n, i, j)?;
                Body::Record(vec![
                    ("i", Val::U(i)),
                    ("j", Val::U(j)),
                    ("exact", Val::S(e.exact(int_base()?).to_string())),
                    ("value", Val::F(e.float_value)),
                    ("extra_prefactor_value", Val::F(variant)),
                ])
            } else {
                let kernel = build_kernel(&spec, out.tol)?;
                Body::Record(vec![
                    ("i", Val::U(i)),
                    ("j", Val::U(j)),
                    ("value", Val::F(kernel.inverse_entry(i, j)?)),
                    ("extra_prefactor_value", Val::F(variant)),
                ])
            }
        }
    };
    Ok(report(echo, &out, Format::Plain, body))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    match run(cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.report.render(outcome.format));
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Domain(e)) => {
            let kind = format!("{e:?}");
            let kind = kind.split([' ', '(', '{']).next().unwrap_or_default();
            eprintln!("error: {kind}: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n");
            let mut cmd = Cli::command();
            if let Some(sub) = cmd.find_subcommand_mut(name) {
                eprint!("{}", sub.render_help());
            }
            ExitCode::from(2)
        }
    }
}
