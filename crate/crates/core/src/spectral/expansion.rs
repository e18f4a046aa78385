use serde::{Deserialize, Serialize};

use crate::qcore::SeriesValue;
use crate::qgrid::{inner_product, ln_weight, point_value, GridFunction, QParams};
use crate::qgrid::{Branch, GridPoint};
use crate::specialfn::{
    eig_phi_pm, norm_factor, phi_pm_expansion, phi_pm_recessive, spectral_d_factor, spectral_eigenfunction, Side,
    SpectralPoint,
};
use crate::{Result, C64};

/// φ⁻_γ at γ ∈ 𝒮 through Φ_γ rather than the closed forms. On ℝ_q⁺ the
/// c-function expansion cancels catastrophically for large x, but at these γ
/// the Φ-based display with the z₋ prefactor continues φ⁻ there by theta
/// quasi-periodicity, so it competes with the expansion.
fn phi_minus_spectral(p: SpectralPoint, x: GridPoint, params: &QParams) -> Result<SeriesValue> {
    match x.branch {
        Branch::Minus => eig_phi_pm(p.gamma, x, params, Side::Minus),
        Branch::Plus => crate::specialfn::better_of(
            phi_pm_expansion(p.gamma, x, params, Side::Minus),
            phi_pm_recessive(p.gamma, x, params, Side::Minus),
        ),
    }
}

/// Which spectral points enter a truncated expansion: POLY n ≤ n_p and
/// AUX |n| ≤ n_q, `None` dropping the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub n_p: Option<u32>,
    pub n_q: Option<u32>,
}

impl Truncation {
    pub fn new(n_p: u32, n_q: u32) -> Self {
        Truncation {
            n_p: Some(n_p),
            n_q: Some(n_q),
        }
    }

    pub fn poly_only(n_p: u32) -> Self {
        Truncation {
            n_p: Some(n_p),
            n_q: None,
        }
    }
}

pub fn spectral_points(t: Truncation, params: &QParams) -> Vec<SpectralPoint> {
    let mut out = Vec::new();
    if let Some(np) = t.n_p {
        out.extend((0..=np).map(|n| SpectralPoint::poly(n, params)));
    }
    if let Some(nq) = t.n_q {
        let nq = nq as i32;
        out.extend((-nq..=nq).map(|n| SpectralPoint::aux(n, params)));
    }
    out
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub reconstruction: GridFunction,
    pub parseval_defect: f64,
    pub points: Vec<SpectralPoint>,
    /// ⟨f, φ⁺_γ⟩ / ‖φ⁺_γ‖² in the order of `points`.
    pub coefficients: Vec<C64>,
}

/// Truncated expansion f ≈ Σ_γ ⟨f, φ⁺_γ⟩ φ⁺_γ · (−1/d(γ)) Res 1/D.
///
/// With `Side::Minus` the eigenfunctions are built as d(γ) φ⁻_γ instead of the
/// closed forms for φ⁺_γ; both describe the same function at spectral points.
pub fn spectral_reconstruct(
    f: &GridFunction,
    trunc: Truncation,
    params: &QParams,
    side: Side,
    tol: f64,
) -> Result<Reconstruction> {
    let window = f.window().clone();
    let points = spectral_points(trunc, params);
    let mut rec = GridFunction::zeros(window.clone());
    let mut coefficients = Vec::with_capacity(points.len());
    let mut captured = 0.0;
    for &p in &points {
        let phi = match side {
            Side::Plus => GridFunction::from_fn(window.clone(), |x| Ok(spectral_eigenfunction(p, x, params)?.value))?,
            Side::Minus => {
                let d = spectral_d_factor(p, params)?;
                GridFunction::from_fn(window.clone(), |x| Ok(d * phi_minus_spectral(p, x, params)?.value))?
            }
        };
        let nf = norm_factor(p, params)?;
        let ip = inner_product(f, &phi, params, tol)?.value;
        let a = ip * nf;
        captured += ip.norm_sqr() * nf.re;
        for (x, v) in phi.iter() {
            rec.set(x, rec.get(x) + a * v)?;
        }
        coefficients.push(a);
    }
    let total = inner_product(f, f, params, tol)?.value.re;
    Ok(Reconstruction {
        reconstruction: rec,
        parseval_defect: (total - captured).abs() / total,
        points,
        coefficients,
    })
}

/// max_x √μ(x) |a(x) − b(x)| / ‖b‖ over b's window, μ the Jackson mass
/// (1 − q)|x| w(x). On the unbounded branch ends this is the natural scale:
/// coefficient rounding times polynomial growth of |x| is not.
pub fn weighted_sup_error(a: &GridFunction, b: &GridFunction, params: &QParams, tol: f64) -> Result<f64> {
    let norm = inner_product(b, b, params, tol)?.value.re.sqrt();
    let mut worst = 0.0f64;
    for (x, v) in b.iter() {
        let xv = point_value(x, params)?;
        let lw = ln_weight(xv, params)?;
        let ln_mu = (1.0 - params.q.value()).ln() + xv.abs().ln() + lw.ln_abs;
        let diff = (a.get(x) - v).norm();
        if diff > 0.0 {
            worst = worst.max((0.5 * ln_mu + diff.ln()).exp());
        }
    }
    Ok(worst / norm)
}
