use super::{guard_nonzero, Abscissa};
use crate::qcore::{poch_infinite, theta_prod, DEFAULT_TOL};
use crate::qgrid::QParams;
use crate::{QError, Result, C64};

/// w(x) = 1/(cx, dx;q)_∞, checked to be positive real.
pub fn weight_w(x: impl Abscissa, params: &QParams) -> Result<crate::qcore::SeriesValue> {
    let x = x.coord(params)?;
    let den = match (
        poch_infinite(params.c * x, params.q, DEFAULT_TOL),
        poch_infinite(params.d * x, params.q, DEFAULT_TOL),
    ) {
        (Ok(a), Ok(b)) if (a * b).is_finite() => a * b,
        // far out the product overflows while w itself underflows gracefully
        _ => {
            let lw = crate::qgrid::ln_weight(x, params)?;
            if lw.phase.re <= 0.0 {
                return Err(QError::Positivity(format!("w({x}) has phase {}", lw.phase)));
            }
            return Ok(crate::qcore::SeriesValue::exact(C64::new(lw.ln_abs.exp(), 0.0)));
        }
    };
    guard_nonzero(&den, "(cx,dx;q)_inf")?;
    let mut w = den.recip();
    if w.value.im.abs() > 1e-13 * w.value.norm() || w.value.re <= 0.0 {
        return Err(QError::Positivity(format!("w({x}) = {}", w.value)));
    }
    w.value.im = 0.0;
    Ok(w)
}

/// B(c, d; z₋, z₊) = (1 − q) z₊ (q;q)_∞ θ(z₋/z₊, cdz₋z₊) / θ(cz₋, dz₋, cz₊, dz₊).
pub fn beta_constant(q: crate::qcore::QBase, c: C64, d: C64, zm: f64, zp: f64) -> Result<C64> {
    let one = C64::new(1.0, 0.0);
    let den = theta_prod(&[c * zm, d * zm, c * zp, d * zp], q, DEFAULT_TOL)?;
    guard_nonzero(&den, "theta(cz-, dz-, cz+, dz+)")?;
    let num = theta_prod(&[one * (zm / zp), c * d * zm * zp], q, DEFAULT_TOL)?;
    let qq = poch_infinite(one * q.value(), q, DEFAULT_TOL)?;
    Ok((1.0 - q.value()) * zp * qq.value * num.value / den.value)
}

/// B(c, d; z₋, z₊) for the parameters at hand; the total mass of w.
pub fn big_b(params: &QParams) -> Result<C64> {
    beta_constant(params.q, params.c, params.d, params.z_minus, params.z_plus)
}
