//! `qorth eval NAME ARGS…`: evaluate one library function and print a
//! machine-parseable line.

use std::fmt;

use qorth::qcore::{phi11, phi20_terminating, phi21, poch_finite, poch_infinite, theta, SeriesValue, DEFAULT_TOL};
use qorth::qgrid::{HalfLineParams, QParams};
use qorth::specialfn::{
    big_b, c_functions, casorati_d, eig_phi, eig_phi_pm, eig_psi, func_q, halfline_d_tilde, halfline_psi,
    halfline_weight, norm_factor, poly_p, poly_v, residue_inv_d, spectral_d_factor, weight_w, Side, SpectralPoint,
};
use qorth::{QError, C64};

use crate::complex::{format_c64, parse_c64};

pub const FUNCTIONS: &[(&str, &str)] = &[
    ("poch", "a [n]"),
    ("theta", "x"),
    ("phi11", "a b z"),
    ("phi21", "a b c z"),
    ("phi20", "n w z"),
    ("w", "x"),
    ("B", ""),
    ("P", "n x"),
    ("Q", "n x"),
    ("V", "n a z"),
    ("psi", "gamma x"),
    ("psidag", "gamma x"),
    ("Phi", "gamma x"),
    ("phip", "gamma x"),
    ("phim", "gamma x"),
    ("cfun", "gamma"),
    ("D", "gamma"),
    ("dfac", "poly|aux n"),
    ("res", "poly|aux n"),
    ("W4", "k"),
    ("Psi4", "gamma k"),
    ("Dtilde", "gamma"),
];

#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    UnknownFunction(String),
    Arity { name: String, expected: String, got: usize },
    BadArgument(String),
    Library(QError),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::UnknownFunction(n) => {
                let names: Vec<&str> = FUNCTIONS.iter().map(|(n, _)| *n).collect();
                write!(f, "unknown function '{n}'; known: {}", names.join(", "))
            }
            EvalError::Arity { name, expected, got } => {
                write!(f, "{name} takes arguments '{expected}', got {got}")
            }
            EvalError::BadArgument(m) => write!(f, "{m}"),
            EvalError::Library(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EvalError {}

impl From<QError> for EvalError {
    fn from(e: QError) -> Self {
        EvalError::Library(e)
    }
}

fn cplx(s: &str) -> Result<C64, EvalError> {
    parse_c64(s).map_err(EvalError::BadArgument)
}

fn real(s: &str) -> Result<f64, EvalError> {
    let z = cplx(s)?;
    if z.im != 0.0 {
        return Err(EvalError::BadArgument(format!("'{s}' must be real")));
    }
    Ok(z.re)
}

fn int<T: std::str::FromStr>(s: &str) -> Result<T, EvalError> {
    s.parse()
        .map_err(|_| EvalError::BadArgument(format!("'{s}' must be an integer in range")))
}

fn spoint(kind: &str, n: &str, p: &QParams) -> Result<SpectralPoint, EvalError> {
    match kind {
        "poly" => Ok(SpectralPoint::poly(int(n)?, p)),
        "aux" => Ok(SpectralPoint::aux(int(n)?, p)),
        _ => Err(EvalError::BadArgument(format!("family '{kind}' must be poly or aux"))),
    }
}

fn line(name: &str, v: SeriesValue) -> String {
    format!(
        "{name} value={} terms_used={} tail_bound={:e}",
        format_c64(v.value),
        v.terms_used,
        v.tail_bound
    )
}

fn exact(name: &str, v: C64) -> String {
    line(name, SeriesValue::exact(v))
}

/// Evaluates `name` on `args` and returns the output line.
pub fn eval_command(name: &str, args: &[String], p: &QParams, hl: &HalfLineParams) -> Result<String, EvalError> {
    let Some(&(_, sig)) = FUNCTIONS.iter().find(|(n, _)| *n == name) else {
        return Err(EvalError::UnknownFunction(name.to_string()));
    };
    let arity: Vec<usize> = match name {
        "poch" => vec![1, 2],
        _ => vec![sig.split_whitespace().count()],
    };
    if !arity.contains(&args.len()) {
        return Err(EvalError::Arity {
            name: name.to_string(),
            expected: sig.to_string(),
            got: args.len(),
        });
    }
    let a = |i: usize| args[i].as_str();
    let q = p.q;
    Ok(match name {
        "poch" if args.len() == 2 => exact(name, poch_finite(cplx(a(0))?, int(a(1))?, q)),
        "poch" => line(name, poch_infinite(cplx(a(0))?, q, DEFAULT_TOL)?),
        "theta" => line(name, theta(cplx(a(0))?, q, DEFAULT_TOL)?),
        "phi11" => line(name, phi11(cplx(a(0))?, cplx(a(1))?, q, cplx(a(2))?, DEFAULT_TOL)?),
        "phi21" => line(
            name,
            phi21(cplx(a(0))?, cplx(a(1))?, cplx(a(2))?, q, cplx(a(3))?, DEFAULT_TOL)?,
        ),
        "phi20" => line(name, phi20_terminating(int(a(0))?, cplx(a(1))?, q, cplx(a(2))?)),
        "w" => line(name, weight_w(real(a(0))?, p)?),
        "B" => exact(name, big_b(p)?),
        "P" => exact(name, poly_p(int(a(0))?, cplx(a(1))?, p)),
        "Q" => line(name, func_q(int(a(0))?, real(a(1))?, p)?),
        "V" => exact(name, poly_v(int(a(0))?, cplx(a(1))?, cplx(a(2))?, q)),
        "psi" => line(name, eig_psi(cplx(a(0))?, real(a(1))?, p, false)?),
        "psidag" => line(name, eig_psi(cplx(a(0))?, real(a(1))?, p, true)?),
        "Phi" => line(name, eig_phi(cplx(a(0))?, real(a(1))?, p)?),
        "phip" => line(name, eig_phi_pm(cplx(a(0))?, real(a(1))?, p, Side::Plus)?),
        "phim" => line(name, eig_phi_pm(cplx(a(0))?, real(a(1))?, p, Side::Minus)?),
        "cfun" => {
            let s = c_functions(cplx(a(0))?, p)?;
            format!(
                "cfun c_plus={} c_plus_dagger={} c_minus={} c_minus_dagger={}",
                format_c64(s.c_plus),
                format_c64(s.c_plus_dagger),
                format_c64(s.c_minus),
                format_c64(s.c_minus_dagger)
            )
        }
        "D" => exact(name, casorati_d(cplx(a(0))?, p)?),
        "dfac" => exact(name, spectral_d_factor(spoint(a(0), a(1), p)?, p)?),
        "res" => {
            let sp = spoint(a(0), a(1), p)?;
            format!(
                "res value={} norm_factor={}",
                format_c64(residue_inv_d(sp, p)?),
                format_c64(norm_factor(sp, p)?)
            )
        }
        "W4" => exact(name, C64::new(halfline_weight(int(a(0))?, hl)?, 0.0)),
        "Psi4" => line(name, halfline_psi(cplx(a(0))?, int(a(1))?, hl)?),
        "Dtilde" => exact(name, halfline_d_tilde(cplx(a(0))?, hl)?),
        _ => unreachable!("registry and dispatch disagree on '{name}'"),
    })
}
