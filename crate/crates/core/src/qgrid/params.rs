use serde::{Deserialize, Serialize};

use crate::qcore::QBase;
use crate::{QError, Result, C64};

pub const DEFAULT_K_CAP: i32 = 128;
/// Default Jackson window at q = 1/2: wide enough for every integrand in the
/// crate, narrow enough that raw eigenfunction values stay finite.
pub const DEFAULT_WINDOW: (i32, i32) = (-24, 80);

/// Relative distance to q^ℤ below which parameters are rejected.
const LATTICE_MARGIN: f64 = 1e-9;

/// Which positivity condition on (c, d) makes the weight 1/(cx,dx;q)_∞ positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// c ∉ ℝ, d = c̄.
    Conjugate,
    /// c, d > 0 inside one gap (q^k, q^{k−1}) of z₊q^ℤ.
    Positive,
    /// c, d < 0 inside one gap of z₋q^ℤ.
    Negative,
}

/// Parameters of the bilateral problem on ℝ_q.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QParams {
    pub q: QBase,
    pub c: C64,
    pub d: C64,
    pub z_minus: f64,
    pub z_plus: f64,
    pub k_cap: i32,
    regime: Regime,
}

fn near_lattice(y: f64, q: f64) -> bool {
    let t = y.ln() / q.ln();
    let k = t.round();
    (y / q.powi(k as i32) - 1.0).abs() < LATTICE_MARGIN
}

/// Index k with q^k < y < q^{k−1}, or None if y is (nearly) on q^ℤ.
fn gap_index(y: f64, q: f64) -> Option<i64> {
    if y.is_nan() || y <= 0.0 || near_lattice(y, q) {
        return None;
    }
    Some((y.ln() / q.ln()).ceil() as i64)
}

fn is_real(z: C64) -> bool {
    z.im.abs() <= 1e-14 * z.re.abs()
}

impl QParams {
    pub fn new(q: f64, c: C64, d: C64, z_minus: f64, z_plus: f64) -> Result<Self> {
        let q = QBase::new(q)?;
        if !(z_minus < 0.0 && z_plus > 0.0 && z_minus.is_finite() && z_plus.is_finite()) {
            return Err(QError::InvalidParams(format!(
                "need z_minus < 0 < z_plus, got z_minus = {z_minus}, z_plus = {z_plus}"
            )));
        }
        if !(c.norm() > 0.0 && d.norm() > 0.0 && c.is_finite() && d.is_finite()) {
            return Err(QError::InvalidParams("c and d must be finite and nonzero".into()));
        }
        let qv = q.value();
        let regime = if !is_real(c) {
            if (c - d.conj()).norm() > 1e-12 * c.norm() {
                return Err(QError::InvalidParams(format!(
                    "non-real c = {c} requires d = conj(c), got d = {d}"
                )));
            }
            Regime::Conjugate
        } else if !is_real(d) {
            return Err(QError::InvalidParams(format!("real c = {c} with non-real d = {d}")));
        } else if c.re > 0.0 && d.re > 0.0 {
            match (gap_index(z_plus * c.re, qv), gap_index(z_plus * d.re, qv)) {
                (Some(a), Some(b)) if a == b => Regime::Positive,
                _ => {
                    return Err(QError::InvalidParams(format!(
                        "c = {}, d = {} must lie in one gap of (1/z_plus) q^Z",
                        c.re, d.re
                    )))
                }
            }
        } else if c.re < 0.0 && d.re < 0.0 {
            match (gap_index(z_minus * c.re, qv), gap_index(z_minus * d.re, qv)) {
                (Some(a), Some(b)) if a == b => Regime::Negative,
                _ => {
                    return Err(QError::InvalidParams(format!(
                        "c = {}, d = {} must lie in one gap of (1/z_minus) q^Z",
                        c.re, d.re
                    )))
                }
            }
        } else {
            return Err(QError::InvalidParams(format!(
                "real c = {}, d = {} must have the same sign",
                c.re, d.re
            )));
        };
        if near_lattice_c(d / c, qv) {
            return Err(QError::InvalidParams(format!("d/c = {} lies on q^Z", d / c)));
        }
        let s = 1.0 / (c * d * z_minus * z_plus);
        if !(s.is_finite() && s.norm() > 0.0) {
            return Err(QError::InvalidParams("s = 1/(cd z_minus z_plus) not finite".into()));
        }
        Ok(QParams {
            q,
            c,
            d,
            z_minus,
            z_plus,
            k_cap: DEFAULT_K_CAP,
            regime,
        })
    }

    /// q = 1/2, c = 1 + i, d = 1 − i, z₋ = −1, z₊ = 1.
    pub fn default_set() -> Self {
        QParams::new(0.5, C64::new(1.0, 1.0), C64::new(1.0, -1.0), -1.0, 1.0).unwrap()
    }

    pub fn with_k_cap(mut self, k_cap: i32) -> Self {
        self.k_cap = k_cap;
        self
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// s = 1/(c d z₋ z₊); the auxiliary spectrum is s q^ℤ.
    pub fn s(&self) -> C64 {
        1.0 / (self.c * self.d * self.z_minus * self.z_plus)
    }

    pub fn z(&self, branch: super::Branch) -> f64 {
        match branch {
            super::Branch::Plus => self.z_plus,
            super::Branch::Minus => self.z_minus,
        }
    }

    /// Same parameters with c and d interchanged.
    pub fn swapped(&self) -> Self {
        QParams {
            c: self.d,
            d: self.c,
            ..*self
        }
    }

    /// Copy with a different d, skipping validation (used by the moment
    /// identity, where B(c, dq^m) appears).
    pub fn with_d_unchecked(&self, d: C64) -> Self {
        QParams { d, ..*self }
    }

    /// Copy with other z₋, z₊, skipping validation; only formula-level
    /// symmetry checks should evaluate anything with it.
    pub fn with_z_unchecked(&self, z_minus: f64, z_plus: f64) -> Self {
        QParams {
            z_minus,
            z_plus,
            ..*self
        }
    }
}

fn near_lattice_c(z: C64, q: f64) -> bool {
    is_real(z) && z.re > 0.0 && near_lattice(z.re, q)
}

/// Parameters of the half-line problem on I_q = (1/c) q^{−ℕ}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfLineParams {
    pub q: QBase,
    pub c: f64,
    pub d: f64,
}

impl HalfLineParams {
    /// Requires c, d > 0, c/d < 1/q (positivity of W) and d/c ∉ q^ℤ.
    pub fn new(q: f64, c: f64, d: f64) -> Result<Self> {
        let q = QBase::new(q)?;
        if !(c > 0.0 && d > 0.0 && c.is_finite() && d.is_finite()) {
            return Err(QError::InvalidParams(format!("need c, d > 0, got c = {c}, d = {d}")));
        }
        if c * q.value() / d >= 1.0 {
            return Err(QError::InvalidParams(format!(
                "W is not positive: need c/d < 1/q, got c/d = {}",
                c / d
            )));
        }
        if near_lattice(d / c, q.value()) {
            return Err(QError::InvalidParams(format!("d/c = {} lies on q^Z", d / c)));
        }
        Ok(HalfLineParams { q, c, d })
    }

    /// q = 1/2, c = 1, d = 1.3.
    pub fn default_set() -> Self {
        HalfLineParams::new(0.5, 1.0, 1.3).unwrap()
    }

    /// x = q^{−k}/c.
    pub fn point(&self, k: u32) -> f64 {
        self.q.pow(-(k as i32)) / self.c
    }
}
