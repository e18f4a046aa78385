use super::{check_tol, LogValue, QBase, SeriesValue, MAX_TERMS};
use crate::{QError, Result, C64};

/// (a;q)_n as an exact finite product.
pub fn poch_finite(a: C64, n: u32, q: QBase) -> C64 {
    let mut p = C64::new(1.0, 0.0);
    let mut qk = 1.0;
    for _ in 0..n {
        p *= 1.0 - a * qk;
        qk *= q.value();
    }
    p
}

/// Number of leading factors of (a;q)_∞ needed so that the relative effect of
/// the remaining ones is at most `tol`, together with the relative tail bound.
///
/// For |a|q^N < 1/2 the tail satisfies |log ∏_{k≥N}(1 − aq^k)| ≤ τ with
/// τ = |a|q^N / ((1 − q)(1 − |a|q^N)), so the relative error is e^τ − 1.
fn truncation(a: f64, q: f64, tol: f64) -> Result<(usize, f64)> {
    let target = tol.ln_1p();
    let mut aq = a;
    for n in 0..MAX_TERMS {
        if aq < 0.5 {
            let tau = aq / ((1.0 - q) * (1.0 - aq));
            if tau <= target {
                return Ok((n, tau.exp_m1()));
            }
        }
        aq *= q;
    }
    Err(QError::NonConvergence { terms: MAX_TERMS })
}

/// (a;q)_∞, truncated once |a|q^N/((1 − q)(1 − |a|q^N)) ≤ log(1 + tol).
///
/// An exactly vanishing factor (a = q^{−m}) yields an exact zero.
pub fn poch_infinite(a: C64, q: QBase, tol: f64) -> Result<SeriesValue> {
    check_tol(tol)?;
    let (n, rel) = truncation(a.norm(), q.value(), tol)?;
    let mut p = C64::new(1.0, 0.0);
    let mut qk = 1.0;
    for _ in 0..n {
        let f = 1.0 - a * qk;
        if f == C64::new(0.0, 0.0) {
            return Ok(SeriesValue {
                value: f,
                terms_used: n,
                tail_bound: 0.0,
                scale: 0.0,
            });
        }
        p *= f;
        qk *= q.value();
    }
    if !p.is_finite() {
        return Err(QError::Overflow(format!("({a};q)_inf")));
    }
    let m = p.norm();
    Ok(SeriesValue {
        value: p,
        terms_used: n,
        tail_bound: m * rel,
        scale: m * (n as f64 + 1.0) / 8.0,
    })
}

/// (a;q)_∞ in log-modulus form; never overflows.
pub fn ln_poch_infinite(a: C64, q: QBase, tol: f64) -> Result<LogValue> {
    check_tol(tol)?;
    let (n, _) = truncation(a.norm(), q.value(), tol)?;
    let mut out = LogValue::ONE;
    let mut qk = 1.0;
    for _ in 0..n {
        out = out * LogValue::from_complex(1.0 - a * qk);
        if out.is_zero() {
            break;
        }
        qk *= q.value();
    }
    Ok(out)
}

/// θ(x;q) = (x;q)_∞ (q/x;q)_∞. Vanishes exactly on q^ℤ; x = 0 is a pole.
pub fn theta(x: C64, q: QBase, tol: f64) -> Result<SeriesValue> {
    if x == C64::new(0.0, 0.0) {
        return Err(QError::Pole("theta at x = 0".into()));
    }
    Ok(poch_infinite(x, q, tol)? * poch_infinite(q.value() / x, q, tol)?)
}

/// θ(x₁,…,x_m;q) = ∏ θ(x_j;q).
pub fn theta_prod(xs: &[C64], q: QBase, tol: f64) -> Result<SeriesValue> {
    let mut acc = SeriesValue::exact(C64::new(1.0, 0.0));
    for &x in xs {
        acc = acc * theta(x, q, tol)?;
    }
    Ok(acc)
}
