//! The `qorth` command line. Exit codes: 0 success, 1 check failure or
//! numerical error, 2 configuration or usage error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qorth::qgrid::{jackson_integral, Branch, GridWindow};
use qorth::specialfn::{big_b, weight_w, Family};
use qorth::spectral::{
    gram_halfline, gram_pq, matrix_spectrum_experiment, spectrum_report, GramReport, SpectrumReport,
};
use serde::Serialize;

use crate::complex::format_c64;
use crate::config::RunConfig;
use crate::eval::{eval_command, EvalError};
use crate::runner::{run_checks, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Writes to stdout; a closed pipe (`qorth verify | head`) is not an error.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

#[derive(Parser, Debug)]
#[command(
    name = "qorth",
    version,
    about = "Numerical checks for the Al-Salam-Carlitz II spectral problem"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ConfigArg {
    /// TOML run configuration with [params], [tolerances], [windows].
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the check registry and report PASS/FAIL per check.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long)]
        seed: Option<u64>,
        /// Run only these check ids (repeatable).
        #[arg(long = "only")]
        only: Vec<String>,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the flat CSV table here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        cfg: ConfigArg,
    },
    /// Evaluate one function, e.g. `eval P 3 0.5+0i`.
    Eval {
        name: String,
        #[arg(allow_hyphen_values = true)]
        args: Vec<String>,
        #[command(flatten)]
        cfg: ConfigArg,
    },
    /// Gram matrix of P_n and Q_n, or of V_n on the half-line.
    Gram {
        #[arg(long, conflicts_with = "halfline", required_unless_present = "halfline")]
        pq: bool,
        #[arg(long)]
        halfline: bool,
        /// Largest P degree (--pq); omit to drop P.
        #[arg(long)]
        np: Option<u32>,
        /// Q indices |n| <= nq (--pq); omit to drop Q.
        #[arg(long)]
        nq: Option<u32>,
        /// Largest V degree (--halfline).
        #[arg(long, default_value_t = 8)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        cfg: ConfigArg,
    },
    /// Eigenfunction residuals and Parseval defect; --exploratory adds the
    /// truncated-matrix experiment.
    Spectrum {
        /// Lattice window as KMIN:KMAX.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long)]
        exploratory: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        cfg: ConfigArg,
    },
    /// Jackson quadrature of w against the closed form B.
    BetaIntegral {
        #[command(flatten)]
        cfg: ConfigArg,
    },
}

impl clap::ValueEnum for Suite {
    fn value_variants<'a>() -> &'a [Self] {
        &[
            Suite::Identities,
            Suite::Orthogonality,
            Suite::Spectral,
            Suite::Asymptotics,
            Suite::All,
        ]
    }
    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.name()))
    }
}

fn load(cfg: &ConfigArg) -> Result<RunConfig, i32> {
    match &cfg.config {
        None => Ok(RunConfig::default()),
        Some(p) => RunConfig::from_path(p).map_err(|e| {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }),
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), i32> {
    match out {
        None => {
            say!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", p.display());
            EXIT_FAIL
        }),
    }
}

#[derive(Serialize)]
struct GramDoc {
    labels: Vec<String>,
    matrix: Vec<Vec<String>>,
    closed_form_diagonal: Vec<String>,
    max_offdiag_rel: f64,
    max_diag_rel_err: f64,
}

impl From<&GramReport> for GramDoc {
    fn from(r: &GramReport) -> Self {
        GramDoc {
            labels: r.labels.clone(),
            matrix: r
                .matrix
                .iter()
                .map(|row| row.iter().map(|&z| format_c64(z)).collect())
                .collect(),
            closed_form_diagonal: r.closed_form_diagonal.iter().map(|&z| format_c64(z)).collect(),
            max_offdiag_rel: r.max_offdiag_rel,
            max_diag_rel_err: r.max_diag_rel_err,
        }
    }
}

#[derive(Serialize)]
struct PointDoc {
    family: String,
    gamma: String,
    eigen_residual: f64,
}

#[derive(Serialize)]
struct SpectrumDoc {
    window: (i32, i32),
    points: Vec<PointDoc>,
    parseval_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix_eigenvalues: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigenvalue_distances: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix_asymmetry: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigenvector_overlaps: Option<Vec<f64>>,
}

fn family_name(f: Family) -> String {
    match f {
        Family::Poly(n) => format!("POLY {n}"),
        Family::Aux(n) => format!("AUX {n}"),
        Family::Generic => "GENERIC".into(),
    }
}

impl SpectrumDoc {
    fn new(w: &GridWindow, r: &SpectrumReport) -> Self {
        SpectrumDoc {
            window: (w.k_min, w.k_max),
            points: r
                .tested_points
                .iter()
                .zip(&r.eigen_residuals)
                .map(|(p, &e)| PointDoc {
                    family: family_name(p.family),
                    gamma: format_c64(p.gamma),
                    eigen_residual: e,
                })
                .collect(),
            parseval_defect: r.parseval_defect,
            matrix_eigenvalues: r.matrix_eigenvalues.clone(),
            eigenvalue_distances: r.eigenvalue_distances.clone(),
            matrix_asymmetry: r.matrix_asymmetry,
            eigenvector_overlaps: r.eigenvector_overlaps.clone(),
        }
    }
}

fn parse_window(s: &str) -> Result<GridWindow, String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("window '{s}' must be KMIN:KMAX"))?;
    let lo: i32 = a.trim().parse().map_err(|_| format!("bad KMIN '{a}'"))?;
    let hi: i32 = b.trim().parse().map_err(|_| format!("bad KMAX '{b}'"))?;
    GridWindow::new(lo, hi, &Branch::BOTH).map_err(|e| e.to_string())
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("document serializes")
}

fn run(cli: Cli) -> Result<i32, i32> {
    match cli.command {
        Command::Verify {
            suite,
            seed,
            only,
            json: json_out,
            csv,
            cfg,
        } => {
            let mut cfg = load(&cfg)?;
            if let Some(s) = seed {
                cfg = cfg.with_seed(s);
            }
            let known = crate::registry::check_ids();
            if let Some(bad) = only.iter().find(|id| !known.contains(&id.as_str())) {
                eprintln!("error: unknown check id '{bad}'");
                return Err(EXIT_CONFIG);
            }
            let ids: Vec<&str> = only.iter().map(String::as_str).collect();
            let report = run_checks(&cfg, suite, (!ids.is_empty()).then_some(&ids[..]));
            say!("{}", report.to_table().trim_end_matches('\n'));
            let fails = report.failures();
            say!("{} checks, {} failed", report.checks.len(), fails);
            if let Some(p) = json_out {
                std::fs::write(&p, report.to_json()).map_err(|e| {
                    eprintln!("error: cannot write {}: {e}", p.display());
                    EXIT_FAIL
                })?;
            }
            if let Some(p) = csv {
                std::fs::write(&p, report.to_csv()).map_err(|e| {
                    eprintln!("error: cannot write {}: {e}", p.display());
                    EXIT_FAIL
                })?;
            }
            Ok(if fails == 0 { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Eval { name, args, cfg } => {
            let cfg = load(&cfg)?;
            match eval_command(&name, &args, &cfg.params, &cfg.halfline) {
                Ok(line) => {
                    say!("{line}");
                    Ok(EXIT_OK)
                }
                Err(e @ EvalError::Library(_)) => {
                    eprintln!("error: {e}");
                    Err(EXIT_FAIL)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Err(EXIT_CONFIG)
                }
            }
        }
        Command::Gram {
            pq: _,
            halfline,
            np,
            nq,
            n,
            out,
            cfg,
        } => {
            let cfg = load(&cfg)?;
            let r = if halfline {
                gram_halfline(n, &cfg.halfline, 1e-12)
            } else {
                gram_pq(np, nq, &cfg.window, &cfg.params, 1e-12)
            };
            let r = r.map_err(|e| {
                eprintln!("error: {e}");
                EXIT_FAIL
            })?;
            eprintln!(
                "{}x{} Gram matrix: max_offdiag_rel {:.3e}, max_diag_rel_err {:.3e}",
                r.labels.len(),
                r.labels.len(),
                r.max_offdiag_rel,
                r.max_diag_rel_err
            );
            emit(&json(&GramDoc::from(&r)), &out)?;
            Ok(EXIT_OK)
        }
        Command::Spectrum {
            window,
            exploratory,
            out,
            cfg,
        } => {
            let cfg = load(&cfg)?;
            let w = match window {
                Some(s) => parse_window(&s).map_err(|e| {
                    eprintln!("error: {e}");
                    EXIT_CONFIG
                })?,
                None => cfg.matrix_window.clone(),
            };
            let r = if exploratory {
                matrix_spectrum_experiment(&w, &cfg.params)
            } else {
                spectrum_report(&w, &cfg.params, false)
            };
            let r = r.map_err(|e| {
                eprintln!("error: {e}");
                EXIT_FAIL
            })?;
            emit(&json(&SpectrumDoc::new(&w, &r)), &out)?;
            Ok(EXIT_OK)
        }
        Command::BetaIntegral { cfg } => {
            let cfg = load(&cfg)?;
            let p = &cfg.params;
            let go = || -> qorth::Result<(qorth::qcore::SeriesValue, qorth::C64)> {
                let j = jackson_integral(|x| Ok(weight_w(x, p)?.value), p, 1e-16)?;
                Ok((j, big_b(p)?))
            };
            let (j, b) = go().map_err(|e| {
                eprintln!("error: {e}");
                EXIT_FAIL
            })?;
            let rel = (j.value - b).norm() / b.norm();
            say!(
                "quadrature={} terms_used={} tail_bound={:e}",
                format_c64(j.value),
                j.terms_used,
                j.tail_bound
            );
            say!("closed_form={}", format_c64(b));
            say!("relative_difference={rel:e}");
            Ok(if rel <= 1e-11 { EXIT_OK } else { EXIT_FAIL })
        }
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(c) | Err(c) => c,
    }
}
