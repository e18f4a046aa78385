use serde::{Deserialize, Serialize};

use super::eigen::{better_of, eig_phi_pm, Side};
use super::poly::{func_q, poly_p};
use super::Abscissa;
use crate::qcore::{poch_infinite, theta_prod, SeriesValue, DEFAULT_TOL};
use crate::qgrid::QParams;
use crate::{QError, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// γ = q^n, n ≥ 0.
    Poly(u32),
    /// γ = q^{n+1} s, s = 1/(cdz₋z₊).
    Aux(i32),
    Generic,
}

/// A value of the spectral parameter; the eigenvalue of L is γ − 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub gamma: C64,
    pub family: Family,
}

impl SpectralPoint {
    pub fn poly(n: u32, params: &QParams) -> Self {
        SpectralPoint {
            gamma: C64::new(params.q.pow(n as i32), 0.0),
            family: Family::Poly(n),
        }
    }

    pub fn aux(n: i32, params: &QParams) -> Self {
        SpectralPoint {
            gamma: params.s() * params.q.pow(n + 1),
            family: Family::Aux(n),
        }
    }

    pub fn generic(gamma: C64) -> Self {
        SpectralPoint {
            gamma,
            family: Family::Generic,
        }
    }

    pub fn eigenvalue(&self) -> C64 {
        self.gamma - 1.0
    }
}

/// D(γ) = D(φ⁺_γ, φ⁻_γ) = −(1 − q) z₊ γ (qγ)_∞ θ(z₋/z₊, 1/γ, cdγz₋z₊).
pub fn casorati_d(gamma: C64, params: &QParams) -> Result<C64> {
    if gamma.norm() == 0.0 {
        return Err(QError::Domain("D(gamma) needs gamma != 0".into()));
    }
    let (q, zm, zp) = (params.q, params.z_minus, params.z_plus);
    let one = C64::new(1.0, 0.0);
    let t = theta_prod(
        &[one * (zm / zp), 1.0 / gamma, params.c * params.d * gamma * zm * zp],
        q,
        DEFAULT_TOL,
    )?;
    let p = poch_infinite(gamma * q.value(), q, DEFAULT_TOL)?;
    Ok(-(1.0 - q.value()) * zp * gamma * p.value * t.value)
}

fn reject_generic() -> QError {
    QError::Domain("operation needs a POLY or AUX spectral point".into())
}

/// d(γ) with φ⁺_γ = d(γ) φ⁻_γ at spectral points:
/// (z₋/z₊)^n θ(cz₊, dz₊)/θ(cz₋, dz₋) for γ = q^n, (z₋/z₊)^n for γ = q^{n+1}s.
pub fn spectral_d_factor(p: SpectralPoint, params: &QParams) -> Result<C64> {
    let r = params.z_minus / params.z_plus;
    let (c, d, zm, zp) = (params.c, params.d, params.z_minus, params.z_plus);
    match p.family {
        Family::Poly(n) => {
            let num = theta_prod(&[c * zp, d * zp], params.q, DEFAULT_TOL)?;
            let den = theta_prod(&[c * zm, d * zm], params.q, DEFAULT_TOL)?;
            super::guard_nonzero(&den, "theta(cz-, dz-)")?;
            Ok(r.powi(n as i32) * num.value / den.value)
        }
        Family::Aux(n) => Ok(C64::new(r.powi(n), 0.0)),
        Family::Generic => Err(reject_generic()),
    }
}

/// Res_{γ'=γ} 1/D(γ') from the closed reciprocal forms
/// POLY: (1−q)z₊(−1)^{n+1} q^{n(n−1)/2 − n²} (q, q, q^{n+1})_∞ θ(z₋/z₊, cdz₋z₊q^n),
/// AUX:  (1−q)z₊(−1)^{n+1} q^{−n(n+1)/2} (q, q, q^{n+2}s)_∞ θ(z₋/z₊, cdz₋z₊q^{−1−n}).
pub fn residue_inv_d(p: SpectralPoint, params: &QParams) -> Result<C64> {
    let (q, zm, zp) = (params.q, params.z_minus, params.z_plus);
    let one = C64::new(1.0, 0.0);
    let cdz = params.c * params.d * zm * zp;
    let qq = poch_infinite(one * q.value(), q, DEFAULT_TOL)?.value;
    let (sign_pow, qpow, tail, arg) = match p.family {
        Family::Poly(n) => {
            let n = n as i32;
            (
                n + 1,
                q.pow(n * (n - 1) / 2 - n * n),
                one * q.pow(n + 1),
                cdz * q.pow(n),
            )
        }
        Family::Aux(n) => (
            n + 1,
            q.pow(-n * (n + 1) / 2),
            params.s() * q.pow(n + 2),
            cdz * q.pow(-1 - n),
        ),
        Family::Generic => return Err(reject_generic()),
    };
    let sign = if sign_pow.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let inv = (1.0 - q.value())
        * zp
        * sign
        * qpow
        * qq
        * qq
        * poch_infinite(tail, q, DEFAULT_TOL)?.value
        * theta_prod(&[one * (zm / zp), arg], q, DEFAULT_TOL)?.value;
    Ok(1.0 / inv)
}

/// Res 1/D by symmetric difference quotients h/D(γ+h), −h/D(γ−h) at relative
/// steps `h1` > `h2`, combined by one Richardson step (error O(h²) → O(h⁴)).
pub fn residue_inv_d_numeric(p: SpectralPoint, params: &QParams, h1: f64, h2: f64) -> Result<C64> {
    if matches!(p.family, Family::Generic) {
        return Err(reject_generic());
    }
    let g = p.gamma;
    let est = |h: f64| -> Result<C64> {
        let h = C64::new(h * g.norm(), 0.0);
        Ok((h / casorati_d(g + h, params)? - h / casorati_d(g - h, params)?) / 2.0)
    };
    let (r1, r2) = (est(h1)?, est(h2)?);
    let ratio = (h1 / h2).powi(2);
    Ok(r2 + (r2 - r1) / (ratio - 1.0))
}

/// −(1/d(γ)) Res 1/D = 1/‖φ⁺_γ‖²; positive real at spectral points.
pub fn norm_factor(p: SpectralPoint, params: &QParams) -> Result<C64> {
    Ok(-residue_inv_d(p, params)? / spectral_d_factor(p, params)?)
}

/// φ⁺_γ at a spectral point through its closed form:
/// POLY (cdz₊)^{−n}(q^{n+1})_∞θ(cz₊, dz₊) P_n(x), AUX z₋^n (q^{n+2}s)_∞ Q_n(x);
/// GENERIC falls back to the hybrid evaluation.
pub fn spectral_eigenfunction(p: SpectralPoint, x: impl Abscissa, params: &QParams) -> Result<SeriesValue> {
    let xv = x.coord(params)?;
    let q = params.q;
    let one = C64::new(1.0, 0.0);
    match p.family {
        Family::Poly(n) => {
            let ni = n as i32;
            let pre = poch_infinite(one * q.pow(ni + 1), q, DEFAULT_TOL)?
                * theta_prod(&[params.c * params.z_plus, params.d * params.z_plus], q, DEFAULT_TOL)?;
            let c = (params.c * params.d * params.z_plus).powi(-ni);
            Ok(pre.scaled(c * poly_p(n, C64::new(xv, 0.0), params)))
        }
        Family::Aux(n) => {
            let pre =
                poch_infinite(params.s() * q.pow(n + 2), q, DEFAULT_TOL)?.scaled(C64::new(params.z_minus.powi(n), 0.0));
            Ok(pre * func_q(n, xv, params)?)
        }
        Family::Generic => better_of(
            eig_phi_pm(p.gamma, xv, params, Side::Plus),
            Err(QError::Domain(String::new())),
        ),
    }
}
