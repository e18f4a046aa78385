use serde::{Deserialize, Serialize};

use super::{guard_nonzero, Abscissa};
use crate::qcore::{phi11_regularized, phi21, poch_infinite, theta, theta_prod, SeriesValue, DEFAULT_TOL};
use crate::qgrid::QParams;
use crate::{QError, Result, C64};

/// Which end of ℝ_q an eigenfunction is recessive at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn z(self, params: &QParams) -> f64 {
        match self {
            Side::Plus => params.z_plus,
            Side::Minus => params.z_minus,
        }
    }

    fn matches(self, x: f64) -> bool {
        match self {
            Side::Plus => x > 0.0,
            Side::Minus => x < 0.0,
        }
    }
}

/// The better of two evaluations of the same quantity, by error bound.
pub fn better_of(a: Result<SeriesValue>, b: Result<SeriesValue>) -> Result<SeriesValue> {
    let ok = |r: &Result<SeriesValue>| matches!(r, Ok(v) if v.is_finite() && v.error_bound().is_finite());
    match (ok(&a), ok(&b)) {
        (true, true) => {
            let (a, b) = (a?, b?);
            Ok(if b.error_bound() < a.error_bound() { b } else { a })
        }
        (true, false) => a,
        (false, true) => b,
        (false, false) => match a {
            Ok(v) => Err(QError::Overflow(format!("no finite evaluation ({})", v.value))),
            Err(e) => Err(e),
        },
    }
}

fn check_gamma(gamma: C64) -> Result<()> {
    if !gamma.is_finite() || gamma.norm() <= 1e-9 {
        return Err(QError::Domain(format!(
            "spectral parameter gamma = {gamma} must be nonzero"
        )));
    }
    Ok(())
}

/// ψ_γ(x) = (dx;q)_∞ · reg₁φ₁(qγ; cqγx; q, cq/d); with `dagger`, c and d are
/// interchanged. Entire in x and γ.
pub fn eig_psi(gamma: C64, x: impl Abscissa, params: &QParams, dagger: bool) -> Result<SeriesValue> {
    let x = x.coord(params)?;
    let (c, d) = if dagger {
        (params.d, params.c)
    } else {
        (params.c, params.d)
    };
    let qv = params.q.value();
    Ok(poch_infinite(d * x, params.q, DEFAULT_TOL)?
        * phi11_regularized(gamma * qv, c * gamma * (qv * x), params.q, c * qv / d, DEFAULT_TOL)?)
}

/// Φ_γ(x) = (cx)_∞ / ((q/dx)_∞ θ(cγx)) · reg₁φ₁(q/cx; q/(cγx); q, q/(dγx)).
///
/// Recessive as |x| → ∞; conditioning degrades as x → 0.
pub fn eig_phi(gamma: C64, x: impl Abscissa, params: &QParams) -> Result<SeriesValue> {
    check_gamma(gamma)?;
    let x = x.coord(params)?;
    let (q, c, d) = (params.q, params.c, params.d);
    let qv = q.value();
    let den = poch_infinite(qv / (d * x), q, DEFAULT_TOL)? * theta(c * gamma * x, q, DEFAULT_TOL)?;
    guard_nonzero(&den, "(q/dx;q)_inf theta(c gamma x)")?;
    let s = phi11_regularized(qv / (c * x), qv / (c * gamma * x), q, qv / (d * gamma * x), DEFAULT_TOL)?;
    Ok(poch_infinite(c * x, q, DEFAULT_TOL)? * den.recip() * s)
}

/// Φ_γ through (cx, 1/γ)_∞ / ((q/dx)_∞ θ(cγx)) ₂φ₁(q/cx, q/dx; 0; q, 1/γ), |γ| > 1.
pub fn eig_phi_2phi1(gamma: C64, x: impl Abscissa, params: &QParams) -> Result<SeriesValue> {
    check_gamma(gamma)?;
    if gamma.norm() <= 1.0 {
        return Err(QError::Domain("2phi1 form of Phi needs |gamma| > 1".into()));
    }
    let x = x.coord(params)?;
    let (q, c, d) = (params.q, params.c, params.d);
    let qv = q.value();
    let den = poch_infinite(qv / (d * x), q, DEFAULT_TOL)? * theta(c * gamma * x, q, DEFAULT_TOL)?;
    guard_nonzero(&den, "(q/dx;q)_inf theta(c gamma x)")?;
    let zero = C64::new(0.0, 0.0);
    let s = phi21(qv / (c * x), qv / (d * x), zero, q, 1.0 / gamma, DEFAULT_TOL)?;
    Ok(poch_infinite(c * x, q, DEFAULT_TOL)? * poch_infinite(1.0 / gamma, q, DEFAULT_TOL)? * den.recip() * s)
}

/// Connection coefficients of φ^± in the basis ψ, ψ†.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CFunctionSet {
    pub c_plus: C64,
    pub c_plus_dagger: C64,
    pub c_minus: C64,
    pub c_minus_dagger: C64,
}

impl CFunctionSet {
    pub fn get(&self, side: Side) -> (C64, C64) {
        match side {
            Side::Plus => (self.c_plus, self.c_plus_dagger),
            Side::Minus => (self.c_minus, self.c_minus_dagger),
        }
    }
}

/// c_±(γ) = θ(cz_±, dγz_±)/θ(d/c), c†_±(γ) = θ(dz_±, cγz_±)/θ(c/d).
pub fn c_functions(gamma: C64, params: &QParams) -> Result<CFunctionSet> {
    check_gamma(gamma)?;
    let (q, c, d) = (params.q, params.c, params.d);
    let tdc = theta(d / c, q, DEFAULT_TOL)?;
    let tcd = theta(c / d, q, DEFAULT_TOL)?;
    guard_nonzero(&tdc, "theta(d/c)")?;
    let one =
        |z: f64, a: C64, b: C64| -> Result<C64> { Ok(theta_prod(&[a * z, b * gamma * z], q, DEFAULT_TOL)?.value) };
    let (zp, zm) = (params.z_plus, params.z_minus);
    Ok(CFunctionSet {
        c_plus: one(zp, c, d)? / tdc.value,
        c_plus_dagger: one(zp, d, c)? / tcd.value,
        c_minus: one(zm, c, d)? / tdc.value,
        c_minus_dagger: one(zm, d, c)? / tcd.value,
    })
}

/// φ^±_γ = c_±(γ)ψ_γ + c†_±(γ)ψ†_γ, valid on both branches. Suffers
/// cancellation where φ^± is recessive (|x| large on its own branch).
pub fn phi_pm_expansion(gamma: C64, x: impl Abscissa, params: &QParams, side: Side) -> Result<SeriesValue> {
    let cf = c_functions(gamma, params)?;
    let (a, b) = cf.get(side);
    Ok(eig_psi(gamma, x, params, false)?.scaled(a) + eig_psi(gamma, x, params, true)?.scaled(b))
}

/// (qγ)_∞ θ(dz_±, cγz_±) Φ_γ(x): equals φ^±_γ(x) for x on the ± branch.
pub fn phi_pm_recessive(gamma: C64, x: impl Abscissa, params: &QParams, side: Side) -> Result<SeriesValue> {
    let z = side.z(params);
    let pre = poch_infinite(gamma * params.q.value(), params.q, DEFAULT_TOL)?
        * theta_prod(&[params.d * z, params.c * gamma * z], params.q, DEFAULT_TOL)?;
    Ok(pre * eig_phi(gamma, x, params)?)
}

/// φ^±_γ(x) on all of ℝ_q. On its own branch the recessive Φ-representation
/// and the c-function expansion are both computed and the one with the smaller
/// error bound is returned; on the other branch only the expansion applies.
pub fn eig_phi_pm(gamma: C64, x: impl Abscissa, params: &QParams, side: Side) -> Result<SeriesValue> {
    let xv = x.coord(params)?;
    let e = phi_pm_expansion(gamma, xv, params, side);
    if !side.matches(xv) {
        return e;
    }
    better_of(e, phi_pm_recessive(gamma, xv, params, side))
}
