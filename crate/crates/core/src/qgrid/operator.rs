use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lattice::{ln_weight, ln_weight_halfline};
use super::{point_value, Branch, GridFunction, GridPoint, GridWindow, HalfLineParams, QParams};
use crate::qcore::{ln_poch_infinite, LogValue, DEFAULT_TOL};
use crate::{QError, Result, C64};

/// A(x) = (1 − 1/(cx))(1 − 1/(dx)).
pub fn coeff_a(x: f64, c: C64, d: C64) -> C64 {
    (1.0 - 1.0 / (c * x)) * (1.0 - 1.0 / (d * x))
}

/// B(x) = q/(cdx²).
pub fn coeff_b(x: f64, c: C64, d: C64, q: f64) -> C64 {
    q / (c * d * x * x)
}

/// (D_q f)(x) = (f(x) − f(qx)) / (x(1 − q)).
pub fn q_derivative(mut f: impl FnMut(GridPoint) -> Result<C64>, x: GridPoint, params: &QParams) -> Result<C64> {
    let xv = point_value(x, params)?;
    point_value(x.shift_down(), params)?;
    Ok((f(x)? - f(x.shift_down())?) / (xv * (1.0 - params.q.value())))
}

/// (Lf)(x) = A(x)(f(qx) − f(x)) + B(x)(f(x/q) − f(x)).
pub fn apply_l(mut f: impl FnMut(GridPoint) -> Result<C64>, x: GridPoint, params: &QParams) -> Result<C64> {
    let xv = point_value(x, params)?;
    point_value(x.shift_down(), params)?;
    point_value(x.shift_up(), params)?;
    let fx = f(x)?;
    let a = coeff_a(xv, params.c, params.d);
    let b = coeff_b(xv, params.c, params.d, params.q.value());
    Ok(a * (f(x.shift_down())? - fx) + b * (f(x.shift_up())? - fx))
}

/// L on I_q, index k ↔ x = q^{−k}/c (so qx ↔ k − 1 and x/q ↔ k + 1). At the
/// boundary k = 0 only the B-term survives.
pub fn apply_l_halfline(mut f: impl FnMut(u32) -> Result<C64>, k: u32, hl: &HalfLineParams) -> Result<C64> {
    let x = hl.point(k);
    let (c, d) = (C64::new(hl.c, 0.0), C64::new(hl.d, 0.0));
    let fx = f(k)?;
    let b = coeff_b(x, c, d, hl.q.value());
    let up = b * (f(k + 1)? - fx);
    if k == 0 {
        return Ok(up);
    }
    Ok(coeff_a(x, c, d) * (f(k - 1)? - fx) + up)
}

/// v(x) = (1 − q)/(cdx) · 1/(cqx, dqx;q)_∞ in log form.
pub fn v_factor(x: f64, params: &QParams) -> Result<LogValue> {
    let q = params.q.value();
    let a = ln_poch_infinite(params.c * (q * x), params.q, DEFAULT_TOL)?;
    let b = ln_poch_infinite(params.d * (q * x), params.q, DEFAULT_TOL)?;
    if a.is_zero() || b.is_zero() {
        return Err(QError::Pole(format!("v at x = {x}")));
    }
    Ok(LogValue::from_complex((1.0 - q) / (params.c * params.d * x)) * (a * b).recip())
}

/// ṽ(q^{−k}/c) = θ(cz₊, dz₊) v(x)|_{z₊=1/c} = (1 − q) x A(x) W(x), k ≥ 1.
pub fn v_factor_halfline(k: u32, hl: &HalfLineParams) -> Result<LogValue> {
    if k == 0 {
        return Err(QError::Domain("half-line Casorati needs k >= 1".into()));
    }
    let x = hl.point(k);
    let a = coeff_a(x, C64::new(hl.c, 0.0), C64::new(hl.d, 0.0));
    let mut out = LogValue::from_complex(a * ((1.0 - hl.q.value()) * x));
    out.ln_abs += ln_weight_halfline(k, hl)?;
    Ok(out)
}

/// f(x)g(qx) − f(qx)g(x) times a log-form factor, rescaled so that large but
/// finite values do not overflow in the products.
fn scaled_det(fx: C64, fqx: C64, gx: C64, gqx: C64, v: LogValue) -> C64 {
    let s = fx.norm().max(fqx.norm());
    let t = gx.norm().max(gqx.norm());
    if s == 0.0 || t == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let det = (fx / s) * (gqx / t) - (fqx / s) * (gx / t);
    let mut out = LogValue::from_complex(det) * v;
    out.ln_abs += s.ln() + t.ln();
    out.to_complex()
}

/// D(f, g)(x) = (f(x)g(qx) − f(qx)g(x)) v(x).
pub fn casorati(
    mut f: impl FnMut(GridPoint) -> Result<C64>,
    mut g: impl FnMut(GridPoint) -> Result<C64>,
    x: GridPoint,
    params: &QParams,
) -> Result<C64> {
    let xv = point_value(x, params)?;
    point_value(x.shift_down(), params)?;
    let v = v_factor(xv, params)?;
    let qx = x.shift_down();
    Ok(scaled_det(f(x)?, f(qx)?, g(x)?, g(qx)?, v))
}

/// D̃(f, g)(q^{−k}/c) = (f(x)g(qx) − f(qx)g(x)) ṽ(x), k ≥ 1.
pub fn casorati_halfline(
    mut f: impl FnMut(u32) -> Result<C64>,
    mut g: impl FnMut(u32) -> Result<C64>,
    k: u32,
    hl: &HalfLineParams,
) -> Result<C64> {
    let v = v_factor_halfline(k, hl)?;
    Ok(scaled_det(f(k)?, f(k - 1)?, g(k)?, g(k - 1)?, v))
}

/// Relative defect of μ(x)A(x) = μ(qx)B(qx), μ(x) = (1 − q)|x|w(x): the
/// identity that makes L symmetric, i.e. the single-point case of the
/// telescoping sum.
pub fn detailed_balance_defect(x: GridPoint, params: &QParams) -> Result<f64> {
    let xv = point_value(x, params)?;
    let qxv = point_value(x.shift_down(), params)?;
    let lhs = LogValue::from_complex(coeff_a(xv, params.c, params.d)) * ln_weight(xv, params)?;
    let rhs = LogValue::from_complex(coeff_b(qxv, params.c, params.d, params.q.value())) * ln_weight(qxv, params)?;
    // ratio of μ(x) to μ(qx) contributes |x|/|qx| = 1/q
    let ratio = (lhs * rhs.recip()).to_complex() / params.q.value();
    Ok((ratio - 1.0).norm())
}

fn lf_on(f: &GridFunction, p: GridPoint, params: &QParams) -> Result<C64> {
    apply_l(|y| Ok(f.get(y)), p, params)
}

/// Pairing ⟨Lf, g⟩ − ⟨f, Lg⟩ restricted to `window`, the boundary Casorati
/// combination predicted by the telescoping identity, and the total absolute
/// mass of the summands (for relative reporting).
pub fn truncated_l_pairing(
    f: &GridFunction,
    g: &GridFunction,
    window: &GridWindow,
    params: &QParams,
) -> Result<(C64, C64, f64)> {
    let mw = 1.0 - params.q.value();
    let mut lhs = C64::new(0.0, 0.0);
    let mut mass = 0.0;
    for p in window.points() {
        let x = point_value(p, params)?;
        let mu = (ln_weight(x, params)?.to_complex() * (mw * x.abs())).re;
        let a = lf_on(f, p, params)? * g.get(p).conj() * mu;
        let b = f.get(p) * lf_on(g, p, params)?.conj() * mu;
        lhs += a - b;
        mass += a.norm() + b.norm();
    }
    let gbar = |y: GridPoint| Ok(g.get(y).conj());
    let fv = |y: GridPoint| Ok(f.get(y));
    let mut boundary = C64::new(0.0, 0.0);
    for &br in &window.branches {
        let lo = casorati(fv, gbar, GridPoint::new(br, window.k_min - 1), params)?;
        let hi = casorati(fv, gbar, GridPoint::new(br, window.k_max), params)?;
        boundary += match br {
            Branch::Plus => lo - hi,
            Branch::Minus => hi - lo,
        };
        mass += lo.norm() + hi.norm();
    }
    Ok((lhs, boundary, mass))
}

/// Largest relative defect of the finite-window telescoping identity
/// ⟨Lf,g⟩_W − ⟨f,Lg⟩_W = Σ_branches ±[D(f,ḡ)(z q^{k_min−1}) − D(f,ḡ)(z q^{k_max})]
/// over `trials` random pairs. The supports extend up to three points past
/// either end of W, or stop up to two points short of it, so both vanishing
/// and non-vanishing boundary terms occur.
pub fn symmetry_defect(params: &QParams, window: &GridWindow, trials: usize, seed: u64) -> Result<f64> {
    if window.len_per_branch() < 3 {
        return Err(QError::Domain("window interior is empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mw = 1.0 - params.q.value();
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let lo = window.k_min - rng.gen_range(-2..=3);
        let hi = window.k_max + rng.gen_range(-2..=3);
        let support = GridWindow::new(lo, hi.max(lo), &window.branches)?;
        let mut draw = || -> Result<GridFunction> {
            GridFunction::from_fn(support.clone(), |p| {
                let x = point_value(p, params)?;
                let mu = ln_weight(x, params)?.ln_abs + (mw * x.abs()).ln();
                let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                Ok(z * (-0.5 * mu).exp())
            })
        };
        let f = draw()?;
        let g = draw()?;
        let (lhs, boundary, mass) = truncated_l_pairing(&f, &g, window, params)?;
        worst = worst.max((lhs - boundary).norm() / mass);
    }
    Ok(worst)
}
