//! Command-line front end: exports exact wave functions, energy records,
//! time scans, verification reports and symmetry checks as CSV/JSON.
//!
//! Exit codes: 0 success, 1 verification failure or runtime fault, 2 usage,
//! 3 grid truncation/reflection, 4 capability (unsupported level/method).

mod parse;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use pt_spectrum::{
    crank_nicolson_propagate, energy_closed, energy_quadrature, parity_condition_check,
    pde_residual, pt_check_hamiltonian, pt_check_state, report_closed, report_quadrature,
    solve_shift_analytic, solve_shift_numeric, u_imag_expectation, ClosedFormState, Drive, Error,
    ExpectationReport, PropagationConfig, ShiftSolution, SHIFT_RESIDUAL_TOL,
};

const DEFAULT_GRID: &str = "-12:12:2401";
const DEFAULT_CN_DT: f64 = 1e-4;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(std::io::Error),
    Lib(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
            CliError::Lib(e) => match e {
                Error::Truncation(_) | Error::Reflection(_) => 3,
                Error::HermiteOrder { .. } | Error::Unsupported(_) => 4,
                Error::Divergence(_) => 1,
                _ => 2,
            },
        }
    }
}

#[derive(Parser)]
#[command(
    name = "pt-spectrum",
    version,
    about = "Exact states and complex energy spectra of the oscillator driven by an imaginary linear potential"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand that needs a drive.
#[derive(Args)]
struct DriveOpts {
    /// Drive spec: const:<f0> | poly:<c0>,<c1>,... | file:<path> (CSV t,f)
    #[arg(long)]
    drive: String,

    /// RK4 step used to solve the shift system for sampled drives
    #[arg(long, default_value_t = 1e-3)]
    dt_ode: f64,

    /// Initial g at the sampled span start (default mimics the polynomial
    /// particular solution)
    #[arg(long, allow_hyphen_values = true)]
    g0: Option<f64>,

    /// Initial g' at the sampled span start
    #[arg(long, allow_hyphen_values = true)]
    gdot0: Option<f64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Quadrature,
    Both,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Sample an exact eigenfunction and write x,re_psi,im_psi,abs2 rows
    Solve {
        #[command(flatten)]
        drive: DriveOpts,
        /// Quantum number
        #[arg(long)]
        n: usize,
        /// Evaluation time
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Grid spec xmin:xmax:npts
        #[arg(long, default_value = DEFAULT_GRID, allow_hyphen_values = true)]
        grid: String,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Print one energy expectation record
    Energy {
        #[command(flatten)]
        drive: DriveOpts,
        /// Quantum number
        #[arg(long)]
        n: usize,
        /// Evaluation time
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// closed needs n <= 1; quadrature works for any level
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Record layout on stdout
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Grid spec xmin:xmax:npts (quadrature routes only)
        #[arg(long, default_value = DEFAULT_GRID, allow_hyphen_values = true)]
        grid: String,
    },
    /// Sweep quadrature energies over a time mesh and write t,re_E,im_E,u_imag
    Scan {
        #[command(flatten)]
        drive: DriveOpts,
        /// Quantum number
        #[arg(long)]
        n: usize,
        /// Mesh start time
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
        /// Mesh end time
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        /// Number of mesh points (>= 2, endpoints included)
        #[arg(long)]
        steps: usize,
        /// Grid spec xmin:xmax:npts
        #[arg(long, default_value = DEFAULT_GRID, allow_hyphen_values = true)]
        grid: String,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the verification pipeline and emit a JSON report (exit 1 on failure)
    Verify {
        #[command(flatten)]
        drive: DriveOpts,
        /// Comma-separated quantum numbers
        #[arg(long, default_value = "0,1")]
        n_list: String,
        /// Time the checks are evaluated at (the oracle propagates 0 <-> t)
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Grid spec xmin:xmax:npts
        #[arg(long, default_value = DEFAULT_GRID, allow_hyphen_values = true)]
        grid: String,
        /// Crank-Nicolson step for the oracle comparison
        #[arg(long, default_value_t = DEFAULT_CN_DT)]
        dt_cn: f64,
        /// Tolerance for the PDE residual check
        #[arg(long, default_value_t = 1e-4)]
        tol_pde: f64,
        /// Tolerance for the propagation-vs-closed-form check
        #[arg(long, default_value_t = 1e-3)]
        tol_oracle: f64,
        /// Tolerance for |Im<E> - <U_I>|
        #[arg(long, default_value_t = 1e-8)]
        tol_imag: f64,
        /// Absolute tolerance for the shift ODE residual
        /// (default 1e-9 * (1 + max |f|))
        #[arg(long)]
        tol_ode: Option<f64>,
    },
    /// Report the Hamiltonian/state PT checks and the parity condition
    CheckPt {
        #[command(flatten)]
        drive: DriveOpts,
        /// Quantum number
        #[arg(long)]
        n: usize,
        /// Evaluation time (the state check also needs -t reachable)
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Grid spec xmin:xmax:npts (must be symmetric)
        #[arg(long, default_value = DEFAULT_GRID, allow_hyphen_values = true)]
        grid: String,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            drive,
            n,
            t,
            grid,
            out,
        } => run_solve(&drive, n, t, &grid, &out),
        Command::Energy {
            drive,
            n,
            t,
            method,
            format,
            grid,
        } => run_energy(&drive, n, t, method, format, &grid),
        Command::Scan {
            drive,
            n,
            t0,
            t1,
            steps,
            grid,
            out,
        } => run_scan(&drive, n, t0, t1, steps, &grid, &out),
        Command::Verify {
            drive,
            n_list,
            t,
            grid,
            dt_cn,
            tol_pde,
            tol_oracle,
            tol_imag,
            tol_ode,
        } => run_verify(
            &drive, &n_list, t, &grid, dt_cn, tol_pde, tol_oracle, tol_imag, tol_ode,
        ),
        Command::CheckPt { drive, n, t, grid } => run_check_pt(&drive, n, t, &grid),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

/// 17 significant digits: enough to round-trip any f64.
fn fmt_f(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Shift solution for the drive: the analytic particular solution where one
/// exists, an RK4 trajectory over the whole sampled span otherwise.
fn build_shift(drive: &Drive, opts: &DriveOpts) -> Result<ShiftSolution, CliError> {
    match drive {
        Drive::Constant { .. } | Drive::Polynomial { .. } => Ok(solve_shift_analytic(drive)?),
        Drive::Sampled(_) => {
            let (lo, hi) = drive.span().expect("sampled drives have a span");
            if !(lo <= 0.0 && hi >= 0.0) {
                return Err(CliError::Usage(format!(
                    "sampled drive span [{lo}, {hi}] must contain t = 0 (phase anchor)"
                )));
            }
            // defaults continue the polynomial particular solution
            // g = f - f''/4 + ..., truncated after two terms
            let g0 = match opts.g0 {
                Some(v) => v,
                None => drive.eval(lo)? - drive.deriv(lo, 2)? / 4.0,
            };
            let gdot0 = match opts.gdot0 {
                Some(v) => v,
                None => drive.deriv(lo, 1)? - drive.deriv(lo, 3)? / 4.0,
            };
            Ok(solve_shift_numeric(
                drive,
                (lo, hi),
                (g0, gdot0),
                opts.dt_ode,
            )?)
        }
    }
}

fn build_state(drive: &Drive, opts: &DriveOpts, n: usize) -> Result<ClosedFormState, CliError> {
    let shift = build_shift(drive, opts)?;
    Ok(ClosedFormState::new(n, drive.clone(), shift)?)
}

fn run_solve(
    opts: &DriveOpts,
    n: usize,
    t: f64,
    grid: &str,
    out: &PathBuf,
) -> Result<i32, CliError> {
    let drive = parse::parse_drive(&opts.drive)?;
    let grid = parse::parse_grid(grid)?;
    let state = build_state(&drive, opts, n)?;
    let sampled = state.sample(&grid, t)?;

    let mut w = BufWriter::new(File::create(out)?);
    writeln!(w, "x,re_psi,im_psi,abs2")?;
    for (j, a) in sampled.amplitudes.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_f(grid.node(j)),
            fmt_f(a.re),
            fmt_f(a.im),
            fmt_f(a.norm_sqr())
        )?;
    }
    Ok(0)
}

fn run_energy(
    opts: &DriveOpts,
    n: usize,
    t: f64,
    method: Method,
    format: Format,
    grid: &str,
) -> Result<i32, CliError> {
    let drive = parse::parse_drive(&opts.drive)?;
    let shift = build_shift(&drive, opts)?;

    let quadrature = |shift: &ShiftSolution| -> Result<ExpectationReport, CliError> {
        let grid = parse::parse_grid(grid)?;
        let state = ClosedFormState::new(n, drive.clone(), shift.clone())?;
        Ok(report_quadrature(&state.sample(&grid, t)?, &drive)?)
    };

    let record = match method {
        Method::Closed => {
            let rep = report_closed(n, &drive, &shift, t)?;
            json!({
                "re_E": rep.energy.re,
                "im_E": rep.energy.im,
                "u_imag": rep.u_imag,
                "method": "closed",
            })
        }
        Method::Quadrature => {
            let rep = quadrature(&shift)?;
            json!({
                "re_E": rep.energy.re,
                "im_E": rep.energy.im,
                "u_imag": rep.u_imag,
                "method": "quadrature",
            })
        }
        Method::Both => {
            let closed = energy_closed(n, &drive, &shift, t)?;
            let rep = quadrature(&shift)?;
            let disagreement = (closed.as_complex() - rep.energy.as_complex()).norm();
            json!({
                "re_E": closed.re,
                "im_E": closed.im,
                "re_E_quadrature": rep.energy.re,
                "im_E_quadrature": rep.energy.im,
                "u_imag": rep.u_imag,
                "disagreement": disagreement,
                "method": "both",
            })
        }
    };

    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&record).expect("valid json")
        ),
        Format::Csv => {
            let keys: Vec<&str> = match method {
                Method::Both => vec![
                    "re_E",
                    "im_E",
                    "re_E_quadrature",
                    "im_E_quadrature",
                    "u_imag",
                    "disagreement",
                    "method",
                ],
                _ => vec!["re_E", "im_E", "u_imag", "method"],
            };
            println!("{}", keys.join(","));
            let row: Vec<String> = keys
                .iter()
                .map(|k| match &record[k] {
                    serde_json::Value::String(s) => s.clone(),
                    v => fmt_f(v.as_f64().expect("numeric field")),
                })
                .collect();
            println!("{}", row.join(","));
        }
    }
    Ok(0)
}

fn run_scan(
    opts: &DriveOpts,
    n: usize,
    t0: f64,
    t1: f64,
    steps: usize,
    grid: &str,
    out: &PathBuf,
) -> Result<i32, CliError> {
    if steps < 2 {
        return Err(CliError::Usage(format!(
            "scan needs steps >= 2, got {steps}"
        )));
    }
    if !(t0 < t1) {
        return Err(CliError::Usage(format!(
            "scan needs t0 < t1, got [{t0}, {t1}]"
        )));
    }
    let drive = parse::parse_drive(&opts.drive)?;
    let grid = parse::parse_grid(grid)?;
    let state = build_state(&drive, opts, n)?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("PT_SPECTRUM_THREADS") {
        match v.parse::<usize>() {
            Ok(k) if k >= 1 => pool = pool.num_threads(k),
            _ => eprintln!("warning: ignoring invalid PT_SPECTRUM_THREADS='{v}'"),
        }
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;

    use rayon::prelude::*;
    let times: Vec<f64> = (0..steps)
        .map(|k| t0 + (t1 - t0) * k as f64 / (steps - 1) as f64)
        .collect();
    let rows: Result<Vec<(f64, ExpectationReport)>, CliError> = pool.install(|| {
        times
            .par_iter()
            .map(|&t| {
                let sampled = state.sample(&grid, t)?;
                Ok((t, report_quadrature(&sampled, &drive)?))
            })
            .collect()
    });
    let rows = rows?;

    let mut w = BufWriter::new(File::create(out)?);
    writeln!(w, "t,re_E,im_E,u_imag")?;
    for (t, rep) in rows {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_f(t),
            fmt_f(rep.energy.re),
            fmt_f(rep.energy.im),
            fmt_f(rep.u_imag)
        )?;
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    opts: &DriveOpts,
    n_list: &str,
    t: f64,
    grid_spec: &str,
    dt_cn: f64,
    tol_pde: f64,
    tol_oracle: f64,
    tol_imag: f64,
    tol_ode: Option<f64>,
) -> Result<i32, CliError> {
    let drive = parse::parse_drive(&opts.drive)?;
    let grid = parse::parse_grid(grid_spec)?;
    let levels = parse::parse_n_list(n_list)?;
    if !(dt_cn > 0.0) {
        return Err(CliError::Usage(format!(
            "dt-cn must be positive, got {dt_cn}"
        )));
    }
    let shift = build_shift(&drive, opts)?;

    let mut checks = Vec::new();
    let mut all_pass = true;
    let push = |checks: &mut Vec<serde_json::Value>,
                all_pass: &mut bool,
                name: &str,
                n: Option<usize>,
                outcome: Result<(f64, f64), CliError>| {
        let value = match outcome {
            Ok((measured, tolerance)) => {
                let pass = measured <= tolerance;
                *all_pass &= pass;
                json!({"name": name, "n": n, "measured": measured, "tolerance": tolerance, "pass": pass})
            }
            Err(e) => {
                *all_pass = false;
                json!({"name": name, "n": n, "error": e.to_string(), "pass": false})
            }
        };
        checks.push(value);
    };

    // shift ODE residual, once per drive
    let ode_tol = tol_ode.unwrap_or_else(|| {
        let (lo, hi) = shift.span().unwrap_or((t.min(0.0), t.max(0.0)));
        let samples = 257;
        let max_f = (0..samples)
            .filter_map(|i| {
                let ti = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
                drive.eval(ti).ok().map(f64::abs)
            })
            .fold(0.0f64, f64::max);
        SHIFT_RESIDUAL_TOL * (1.0 + max_f)
    });
    push(
        &mut checks,
        &mut all_pass,
        "ode_residual",
        None,
        shift
            .residual_sup(&drive)
            .map(|r| (r, ode_tol))
            .map_err(CliError::from),
    );

    for &n in &levels {
        let state = match ClosedFormState::new(n, drive.clone(), shift.clone()) {
            Ok(s) => s,
            Err(e) => {
                push(
                    &mut checks,
                    &mut all_pass,
                    "state_construction",
                    Some(n),
                    Err(e.into()),
                );
                continue;
            }
        };

        push(
            &mut checks,
            &mut all_pass,
            "pde_residual",
            Some(n),
            pde_residual(&state, &grid, t, 1e-4)
                .map(|r| (r, tol_pde))
                .map_err(CliError::from),
        );

        if t.abs() < 1e-12 {
            checks.push(json!({
                "name": "oracle_l2", "n": n, "skipped": "t = 0 leaves nothing to propagate", "pass": true
            }));
        } else {
            let outcome = (|| -> Result<(f64, f64), CliError> {
                let (a, b) = if t > 0.0 { (0.0, t) } else { (t, 0.0) };
                let n_steps = ((b - a) / dt_cn).ceil().max(1.0);
                let dt_eff = (b - a) / n_steps;
                let initial = state.sample(&grid, a)?;
                let cfg = PropagationConfig::for_drive(grid, dt_eff, a, b, &drive)?;
                let got = crank_nicolson_propagate(&initial, &cfg)?;
                let want = state.sample(&grid, b)?;
                let mut diff = 0.0;
                let mut norm = 0.0;
                for (x, y) in got.amplitudes.iter().zip(&want.amplitudes) {
                    diff += (x - y).norm_sqr();
                    norm += y.norm_sqr();
                }
                Ok(((diff / norm).sqrt(), tol_oracle))
            })();
            push(&mut checks, &mut all_pass, "oracle_l2", Some(n), outcome);
        }

        let outcome = (|| -> Result<(f64, f64), CliError> {
            let sampled = state.sample(&grid, t)?;
            let e = energy_quadrature(&sampled, &drive)?;
            let u = u_imag_expectation(&sampled, &drive)?;
            Ok(((e.im - u).abs(), tol_imag))
        })();
        push(
            &mut checks,
            &mut all_pass,
            "imag_identity",
            Some(n),
            outcome,
        );
    }

    let report = json!({
        "drive": opts.drive,
        "t": t,
        "grid": grid_spec,
        "n_list": levels,
        "checks": checks,
        "pass": all_pass,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("valid json")
    );
    Ok(if all_pass { 0 } else { 1 })
}

fn run_check_pt(opts: &DriveOpts, n: usize, t: f64, grid: &str) -> Result<i32, CliError> {
    let drive = parse::parse_drive(&opts.drive)?;
    let grid = parse::parse_grid(grid)?;
    let hamiltonian_pt = pt_check_hamiltonian(&drive)?;
    let state = build_state(&drive, opts, n)?;
    let parity = parity_condition_check(&state, &grid, t)?;

    let (status, deviation, phase): (&str, Option<f64>, Option<Complex64>) = if hamiltonian_pt {
        let check = pt_check_state(&state, &grid, t)?;
        ("ok", Some(check.deviation), Some(check.phase))
    } else {
        ("not-applicable", None, None)
    };

    let record = json!({
        "hamiltonian_pt": hamiltonian_pt,
        "state_pt": status,
        "state_pt_deviation": deviation,
        "state_pt_phase_re": phase.map(|p| p.re),
        "state_pt_phase_im": phase.map(|p| p.im),
        "parity_condition_satisfied": parity.satisfied,
        "uimag_odd_defect": parity.uimag_odd_defect,
        "modulus_even_defect": parity.modulus_even_defect,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&record).expect("valid json")
    );
    Ok(0)
}
