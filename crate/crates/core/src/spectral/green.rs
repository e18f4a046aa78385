use crate::qgrid::{ln_weight, point_value, GridFunction, GridPoint, GridWindow, QParams};
use crate::specialfn::{casorati_d, eig_phi_pm, Side};
use crate::{QError, Result, C64};

/// Relative distance below which γ counts as sitting on a zero of D.
const POLE_GUARD: f64 = 1e-8;

fn lattice_distance(t: C64, q: f64) -> f64 {
    let m = (t.norm().ln() / q.ln()).round() as i32;
    (t / q.powi(m) - 1.0).norm()
}

/// Smallest relative distance from γ to the zero set q^ℤ ∪ s q^ℤ of D(γ).
pub fn pole_distance(gamma: C64, params: &QParams) -> f64 {
    let q = params.q.value();
    lattice_distance(gamma, q).min(lattice_distance(gamma / params.s(), q))
}

fn check_gamma(gamma: C64, params: &QParams) -> Result<()> {
    if gamma.norm() < 1e-9 {
        return Err(QError::PoleProximity {
            factor: "gamma = 0".into(),
            magnitude: gamma.norm(),
        });
    }
    let dist = pole_distance(gamma, params);
    if dist < POLE_GUARD {
        return Err(QError::PoleProximity {
            factor: "D(gamma)".into(),
            magnitude: dist,
        });
    }
    Ok(())
}

/// K_γ(x, y) = φ⁻_γ(min(x, y)) φ⁺_γ(max(x, y)) / D(γ), ordered as reals.
pub fn green_kernel(gamma: C64, x: GridPoint, y: GridPoint, params: &QParams) -> Result<C64> {
    check_gamma(gamma, params)?;
    let (xv, yv) = (point_value(x, params)?, point_value(y, params)?);
    let (lo, hi) = if xv <= yv { (x, y) } else { (y, x) };
    let m = eig_phi_pm(gamma, lo, params, Side::Minus)?.value;
    let p = eig_phi_pm(gamma, hi, params, Side::Plus)?.value;
    Ok(m * p / casorati_d(gamma, params)?)
}

/// φ⁺_γ and φ⁻_γ tabulated on a window, for repeated kernel evaluation.
#[derive(Clone, Debug)]
pub struct GreenTable {
    pub gamma: C64,
    plus: GridFunction,
    minus: GridFunction,
    d: C64,
}

impl GreenTable {
    pub fn new(gamma: C64, window: &GridWindow, params: &QParams) -> Result<Self> {
        check_gamma(gamma, params)?;
        let plus = GridFunction::from_fn(window.clone(), |p| Ok(eig_phi_pm(gamma, p, params, Side::Plus)?.value))?;
        let minus = GridFunction::from_fn(window.clone(), |p| Ok(eig_phi_pm(gamma, p, params, Side::Minus)?.value))?;
        Ok(GreenTable {
            gamma,
            plus,
            minus,
            d: casorati_d(gamma, params)?,
        })
    }

    pub fn kernel(&self, x: GridPoint, y: GridPoint, params: &QParams) -> Result<C64> {
        let (xv, yv) = (point_value(x, params)?, point_value(y, params)?);
        let (lo, hi) = if xv <= yv { (x, y) } else { (y, x) };
        Ok(self.minus.get(lo) * self.plus.get(hi) / self.d)
    }
}

/// g(y) = ⟨f, conj K_γ(·, y)⟩ = ∫ f(x) K_γ(x, y) w(x) d_qx for finitely
/// supported f, evaluated on the points of `out`.
pub fn resolvent_apply(f: &GridFunction, gamma: C64, out: &GridWindow, params: &QParams) -> Result<GridFunction> {
    let span = GridWindow::new(
        f.window().k_min.min(out.k_min),
        f.window().k_max.max(out.k_max),
        &crate::qgrid::Branch::BOTH,
    )?;
    let table = GreenTable::new(gamma, &span, params)?;
    let mw = 1.0 - params.q.value();
    let mut mass = Vec::new();
    for (p, v) in f.iter() {
        if v != C64::new(0.0, 0.0) {
            let x = point_value(p, params)?;
            let mu = ln_weight(x, params)?.to_complex().re * mw * x.abs();
            mass.push((p, v * mu));
        }
    }
    GridFunction::from_fn(out.clone(), |y| {
        let mut s = C64::new(0.0, 0.0);
        for &(p, m) in &mass {
            s += m * table.kernel(p, y, params)?;
        }
        Ok(s)
    })
}

/// max over interior points of |(L − μ)g − f| / max(1, |f|) with g the
/// resolvent applied to f at γ = μ + 1.
pub fn resolvent_residual(f: &GridFunction, gamma: C64, params: &QParams) -> Result<f64> {
    let w = f.window();
    let out = GridWindow::new(w.k_min - 1, w.k_max + 1, &w.branches)?;
    let g = resolvent_apply(f, gamma, &out, params)?;
    let mut worst = 0.0f64;
    for p in w.points() {
        let lg = crate::qgrid::apply_l(|y| Ok(g.get(y)), p, params)?;
        let r = lg - (gamma - 1.0) * g.get(p) - f.get(p);
        worst = worst.max(r.norm() / f.get(p).norm().max(1.0));
    }
    Ok(worst)
}
