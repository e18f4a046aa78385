//! The half-line problem on I_q = (1/c)q^{−ℕ} with c, d > 0; every function is
//! indexed by k with x = q^{−k}/c.

use serde::{Deserialize, Serialize};

use super::eigen::better_of;
use crate::qcore::{phi11_regularized, phi20_terminating, poch_infinite, theta, SeriesValue, DEFAULT_TOL};
use crate::qgrid::HalfLineParams;
use crate::{QError, Result, C64};

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// W(q^{−k}/c) = (c/d)^k q^{k(k+1)} (cq^{k+1}/d, q^{k+1};q)_∞.
pub fn halfline_weight(k: u32, hl: &HalfLineParams) -> Result<f64> {
    Ok(crate::qgrid::ln_weight_halfline(k, hl)?.exp())
}

/// Ψ_γ(q^{−k}/c) = (qγ)_∞ ₂φ₀(q^{−k}, 1/γ; —; q, dγ/c); satisfies the
/// boundary condition at x = 1/c.
pub fn halfline_psi(gamma: C64, k: u32, hl: &HalfLineParams) -> Result<SeriesValue> {
    if gamma.norm() == 0.0 {
        return Err(QError::Domain("Psi needs gamma != 0".into()));
    }
    let p = poch_infinite(gamma * hl.q.value(), hl.q, DEFAULT_TOL)?;
    Ok(p * phi20_terminating(k, 1.0 / gamma, hl.q, gamma * (hl.d / hl.c)))
}

/// Ψ_γ through its ₁φ₁ display
/// q^{−k(k+1)/2} (−d/c)^k reg₁φ₁(qγ; γq^{1−k}; cq/d) / (cq^{1+k}/d)_∞.
pub fn halfline_psi_1phi1(gamma: C64, k: u32, hl: &HalfLineParams) -> Result<SeriesValue> {
    let (q, c, d) = (hl.q, hl.c, hl.d);
    let ki = k as i32;
    let pre = q.pow(-ki * (ki + 1) / 2) * (-d / c).powi(ki);
    let den = poch_infinite(re(c * q.pow(ki + 1) / d), q, DEFAULT_TOL)?;
    let s = phi11_regularized(
        gamma * q.value(),
        gamma * q.pow(1 - ki),
        q,
        re(c * q.value() / d),
        DEFAULT_TOL,
    )?;
    Ok(s.scaled(re(pre)) * den.recip())
}

/// Ψ†_γ(q^{−k}/c) = (−1)^k q^{−k(k+1)/2} reg₁φ₁(qγ; dγq^{1−k}/c; dq/c) / (q^{1+k})_∞.
pub fn halfline_psi_dagger(gamma: C64, k: u32, hl: &HalfLineParams) -> Result<SeriesValue> {
    let (q, c, d) = (hl.q, hl.c, hl.d);
    let ki = k as i32;
    let pre = q.pow(-ki * (ki + 1) / 2) * if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let den = poch_infinite(re(q.pow(ki + 1)), q, DEFAULT_TOL)?;
    let s = phi11_regularized(
        gamma * q.value(),
        gamma * (d * q.pow(1 - ki) / c),
        q,
        re(d * q.value() / c),
        DEFAULT_TOL,
    )?;
    Ok(s.scaled(re(pre)) * den.recip())
}

/// C(γ) = θ(dγ/c)/θ(d/c).
pub fn halfline_c(gamma: C64, hl: &HalfLineParams) -> Result<C64> {
    let den = theta(re(hl.d / hl.c), hl.q, DEFAULT_TOL)?;
    super::guard_nonzero(&den, "theta(d/c)")?;
    Ok(theta(gamma * (hl.d / hl.c), hl.q, DEFAULT_TOL)?.value / den.value)
}

/// C†(γ) = θ(γ)/θ(c/d); vanishes on q^ℤ.
pub fn halfline_c_dagger(gamma: C64, hl: &HalfLineParams) -> Result<C64> {
    let den = theta(re(hl.c / hl.d), hl.q, DEFAULT_TOL)?;
    super::guard_nonzero(&den, "theta(c/d)")?;
    Ok(theta(gamma, hl.q, DEFAULT_TOL)?.value / den.value)
}

/// φ_γ = C(γ)Ψ_γ + C†(γ)Ψ†_γ, the connection formula on I_q.
pub fn halfline_phi(gamma: C64, k: u32, hl: &HalfLineParams) -> Result<SeriesValue> {
    let a = halfline_psi(gamma, k, hl)?.scaled(halfline_c(gamma, hl)?);
    let cd = halfline_c_dagger(gamma, hl)?;
    if cd == C64::new(0.0, 0.0) {
        return Ok(a);
    }
    Ok(a + halfline_psi_dagger(gamma, k, hl)?.scaled(cd))
}

/// φ_γ(q^{−k}/c) = (qγ)_∞ γ^{−k} / ((q^{k+1}, cq^{k+1}/d)_∞)
///   · reg₁φ₁(q^{k+1}; q^{k+1}/γ; cq^{k+1}/(dγ)),
/// the limit z₊ → 1/c of the recessive representation; decays as k grows.
pub fn halfline_phi_recessive(gamma: C64, k: u32, hl: &HalfLineParams) -> Result<SeriesValue> {
    if gamma.norm() == 0.0 {
        return Err(QError::Domain("phi needs gamma != 0".into()));
    }
    let (q, c, d) = (hl.q, hl.c, hl.d);
    let qk = q.pow(k as i32 + 1);
    let den = poch_infinite(re(qk), q, DEFAULT_TOL)? * poch_infinite(re(c * qk / d), q, DEFAULT_TOL)?;
    let num = poch_infinite(gamma * q.value(), q, DEFAULT_TOL)?.scaled(gamma.powi(-(k as i32)));
    let s = phi11_regularized(re(qk), re(qk) / gamma, q, re(c * qk / d) / gamma, DEFAULT_TOL)?;
    Ok(num * den.recip() * s)
}

/// D̃(γ) = D̃(φ_γ, Ψ_γ) = −((1 − q)γ/c)(qγ)_∞ θ(1/γ).
pub fn halfline_d_tilde(gamma: C64, hl: &HalfLineParams) -> Result<C64> {
    if gamma.norm() == 0.0 {
        return Err(QError::Domain("D~ needs gamma != 0".into()));
    }
    let q = hl.q;
    Ok(-(1.0 - q.value()) * gamma / hl.c
        * poch_infinite(gamma * q.value(), q, DEFAULT_TOL)?.value
        * theta(1.0 / gamma, q, DEFAULT_TOL)?.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfLineRecord {
    pub w: f64,
    pub psi: C64,
    pub psi_dagger: C64,
    pub phi: C64,
    pub c: C64,
    pub c_dagger: C64,
    pub d_tilde: C64,
}

/// All half-line quantities at (γ, k). φ is taken from whichever of the
/// connection formula and the recessive form has the smaller error bound.
pub fn halfline_family(gamma: C64, k: u32, hl: &HalfLineParams) -> Result<HalfLineRecord> {
    let phi = better_of(halfline_phi(gamma, k, hl), halfline_phi_recessive(gamma, k, hl))?;
    Ok(HalfLineRecord {
        w: halfline_weight(k, hl)?,
        psi: halfline_psi(gamma, k, hl)?.value,
        psi_dagger: halfline_psi_dagger(gamma, k, hl)?.value,
        phi: phi.value,
        c: halfline_c(gamma, hl)?,
        c_dagger: halfline_c_dagger(gamma, hl)?,
        d_tilde: halfline_d_tilde(gamma, hl)?,
    })
}
