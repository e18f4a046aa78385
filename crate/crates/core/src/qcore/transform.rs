//! Residuals of the ₁φ₁ transformation formulas, written for the regularised
//! series so that they stay finite on the poles of the lower parameter.

use super::{phi11_regularized, phi20_terminating, phi21, poch_finite, poch_infinite, theta, QBase};
use crate::{QError, Result, C64};

fn rel_residual(lhs: C64, rhs: C64) -> f64 {
    let s = lhs.norm().max(rhs.norm());
    if s == 0.0 {
        0.0
    } else {
        (lhs - rhs).norm() / s
    }
}

/// The four ₂φ₁/₁φ₁ representations of (b;q)_∞ ₁φ₁(a; b; q, z).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitTransform {
    /// (b/a;q)_∞ ₂φ₁(a, az/b; 0; q, b/a), needs |b/a| < 1.
    BOverA,
    /// (b, az/b;q)_∞ ₂φ₁(0, b/a; b; q, az/b), needs |az/b| < 1.
    AzOverB,
    /// (a, z;q)_∞ ₂φ₁(0, b/a; z; q, a), needs |a| < 1.
    A,
    /// (z;q)_∞ ₁φ₁(az/b; z; q, b).
    Swap,
}

impl LimitTransform {
    pub const ALL: [LimitTransform; 4] = [
        LimitTransform::BOverA,
        LimitTransform::AzOverB,
        LimitTransform::A,
        LimitTransform::Swap,
    ];

    /// Whether the right-hand side converges for these parameters.
    pub fn admissible(self, a: C64, b: C64, z: C64) -> bool {
        match self {
            LimitTransform::BOverA => (b / a).norm() < 1.0,
            LimitTransform::AzOverB => (a * z / b).norm() < 1.0,
            LimitTransform::A => a.norm() < 1.0,
            LimitTransform::Swap => true,
        }
    }
}

/// Relative residual of one of the four limit transformations.
pub fn verify_limit_transform(form: LimitTransform, a: C64, b: C64, z: C64, q: QBase, tol: f64) -> Result<f64> {
    if !form.admissible(a, b, z) {
        return Err(QError::Domain(format!("{form:?} not admissible")));
    }
    let zero = C64::new(0.0, 0.0);
    let lhs = phi11_regularized(a, b, q, z, tol)?.value;
    let rhs = match form {
        LimitTransform::BOverA => poch_infinite(b / a, q, tol)?.value * phi21(a, a * z / b, zero, q, b / a, tol)?.value,
        LimitTransform::AzOverB => {
            poch_infinite(b, q, tol)?.value
                * poch_infinite(a * z / b, q, tol)?.value
                * phi21(zero, b / a, b, q, a * z / b, tol)?.value
        }
        LimitTransform::A => {
            poch_infinite(a, q, tol)?.value * poch_infinite(z, q, tol)?.value * phi21(zero, b / a, z, q, a, tol)?.value
        }
        LimitTransform::Swap => phi11_regularized(a * z / b, z, q, b, tol)?.value,
    };
    Ok(rel_residual(lhs, rhs))
}

/// Right-hand side of the three-term transformation multiplied by θ(z):
/// (b)_∞θ(az)/θ(b/a) reg₁φ₁(a; aq/b; q²/(bz)) + (a)_∞θ(bz)/θ(a/b) reg₁φ₁(b; bq/a; q²/(az)).
fn three_term_rhs(a: C64, b: C64, z: C64, q: QBase, tol: f64) -> Result<C64> {
    let qv = q.value();
    let t1 = poch_infinite(b, q, tol)?.value * theta(a * z, q, tol)?.value / theta(b / a, q, tol)?.value
        * phi11_regularized(a, a * qv / b, q, qv * qv / (b * z), tol)?.value;
    let t2 = poch_infinite(a, q, tol)?.value * theta(b * z, q, tol)?.value / theta(a / b, q, tol)?.value
        * phi11_regularized(b, b * qv / a, q, qv * qv / (a * z), tol)?.value;
    Ok(t1 + t2)
}

/// Relative residual of the three-term transformation
/// (az)_∞/(z)_∞ ₁φ₁(a; az; q, bz) = [two-term ₁φ₁ expansion in q²/(bz), q²/(az)].
///
/// Both sides are multiplied by θ(z) (so the left side becomes
/// (q/z)_∞ · reg₁φ₁(a; az; bz)). Errors when z or b/a lie on q^ℤ.
pub fn verify_three_term_transform(a: C64, b: C64, z: C64, q: QBase, tol: f64) -> Result<f64> {
    let tz = theta(z, q, tol)?;
    let tba = theta(b / a, q, tol)?;
    for (name, t) in [("theta(z)", tz), ("theta(b/a)", tba)] {
        if t.value.norm() <= 1e-12 * t.scale.max(1.0) {
            return Err(QError::PoleProximity {
                factor: name.into(),
                magnitude: t.value.norm(),
            });
        }
    }
    let lhs = poch_infinite(q.value() / z, q, tol)?.value * phi11_regularized(a, a * z, q, b * z, tol)?.value;
    Ok(rel_residual(lhs, three_term_rhs(a, b, z, q, tol)?))
}

/// Relative difference between the three-term right-hand side evaluated with
/// (a, b) and with (b, a); the expansion is symmetric.
pub fn three_term_swap_defect(a: C64, b: C64, z: C64, q: QBase, tol: f64) -> Result<f64> {
    Ok(rel_residual(
        three_term_rhs(a, b, z, q, tol)?,
        three_term_rhs(b, a, z, q, tol)?,
    ))
}

/// Relative residual of the terminating transformation
/// ₁φ₁(a; aq^{−n}; q, bq^{−n}) = (b)_∞/(q/a)_n (b/a)^n ₂φ₀(q^{−n}, q/a; —; q, aq^n/b),
/// both sides multiplied by (aq^{−n};q)_∞.
pub fn verify_terminating_transform(n: u32, a: C64, b: C64, q: QBase, tol: f64) -> Result<f64> {
    let qv = q.value();
    let qmn = qv.powi(-(n as i32));
    let den = poch_finite(qv / a, n, q);
    if den.norm() <= 1e-12 {
        return Err(QError::PoleProximity {
            factor: "(q/a;q)_n".into(),
            magnitude: den.norm(),
        });
    }
    let lhs = phi11_regularized(a, a * qmn, q, b * qmn, tol)?.value;
    let rhs = poch_infinite(a * qmn, q, tol)?.value * poch_infinite(b, q, tol)?.value / den
        * (b / a).powi(n as i32)
        * phi20_terminating(n, qv / a, q, a / (b * qmn)).value;
    Ok(rel_residual(lhs, rhs))
}
