use super::eigen::{phi_pm_expansion, Side};
use super::{guard_nonzero, Abscissa};
use crate::qcore::{
    phi11_regularized, phi20_terminating, poch_infinite, theta, theta_prod, QBase, SeriesValue, DEFAULT_TOL,
};
use crate::qgrid::QParams;
use crate::{Result, C64};

/// V_n^{(a)}(z;q) = (−a)^n q^{−n(n−1)/2} ₂φ₀(q^{−n}, z; —; q, q^n/a).
pub fn poly_v(n: u32, a: C64, z: C64, q: QBase) -> C64 {
    let ni = n as i32;
    let pre = (-a).powi(ni) * q.pow(-ni * (ni - 1) / 2);
    pre * phi20_terminating(n, z, q, q.pow(ni) / a).value
}

/// P_n(x) = d^n V_n^{(c/d)}(cx;q); symmetric in c and d.
pub fn poly_p(n: u32, x: C64, params: &QParams) -> C64 {
    params.d.powi(n as i32) * poly_v(n, params.c / params.d, params.c * x, params.q)
}

/// Q_n from its defining display,
/// (−d)^n q^{−n(n+1)/2} θ(dz₋, dz₊) (cx)_∞ / ((q/dx)_∞ θ(dz₋z₊q^{−n}/x))
///   · reg₁φ₁(q/cx; dz₋z₊q^{−n}/x; cz₋z₊q^{−n}/x),
/// where (b)_∞(q/b)_∞ = θ(b) absorbs the regularising factor. Accurate for
/// large |x|; loses digits near 0.
pub fn func_q_display(n: i32, x: impl Abscissa, params: &QParams) -> Result<SeriesValue> {
    let x = x.coord(params)?;
    let (q, c, d, zm, zp) = (params.q, params.c, params.d, params.z_minus, params.z_plus);
    let qv = q.value();
    let b = d * zm * zp * q.pow(-n) / x;
    let den = poch_infinite(qv / (d * x), q, DEFAULT_TOL)? * theta(b, q, DEFAULT_TOL)?;
    guard_nonzero(&den, "(q/dx;q)_inf theta(dz-z+q^-n/x)")?;
    let pre = (-d).powi(n) * q.pow(-n * (n + 1) / 2);
    let num = theta_prod(&[d * zm, d * zp], q, DEFAULT_TOL)?.scaled(pre) * poch_infinite(c * x, q, DEFAULT_TOL)?;
    let s = phi11_regularized(qv / (c * x), b, q, c * zm * zp * q.pow(-n) / x, DEFAULT_TOL)?;
    Ok(num * den.recip() * s)
}

/// Q_n through φ⁺_{q^{n+1}s} = z₋^n (q^{n+2}s)_∞ Q_n and the c-function
/// expansion of φ⁺. Accurate near 0, loses digits for large |x|.
pub fn func_q_expansion(n: i32, x: impl Abscissa, params: &QParams) -> Result<SeriesValue> {
    let s = params.s();
    let gamma = s * params.q.pow(n + 1);
    let norm =
        poch_infinite(s * params.q.pow(n + 2), params.q, DEFAULT_TOL)?.scaled(C64::new(params.z_minus.powi(n), 0.0));
    guard_nonzero(&norm, "(q^(n+2)s;q)_inf")?;
    Ok(phi_pm_expansion(gamma, x, params, Side::Plus)? * norm.recip())
}

/// Q_n(x), taking whichever of the display and the expansion has the smaller
/// error bound at this point.
pub fn func_q(n: i32, x: impl Abscissa, params: &QParams) -> Result<SeriesValue> {
    let e = func_q_expansion(n, x, params);
    let d = func_q_display(n, x, params);
    super::eigen::better_of(e, d)
}
