use std::ops::{Add, Mul};

use crate::{QError, Result, C64};

/// Base of the q-lattice, validated to lie strictly in (0, 1).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct QBase(f64);

impl QBase {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 && q < 1.0 {
            Ok(QBase(q))
        } else {
            Err(QError::InvalidBase(q))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// q^k for any integer k.
    #[inline]
    pub fn pow(self, k: i32) -> f64 {
        self.0.powi(k)
    }
}

/// Result of a truncated infinite evaluation.
///
/// `tail_bound` bounds the discarded tail; `scale` is the sum of the absolute
/// contributions, so `EPSILON * scale` estimates accumulated rounding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: C64,
    pub terms_used: usize,
    pub tail_bound: f64,
    pub scale: f64,
}

const ROUNDING: f64 = 8.0 * f64::EPSILON;

impl SeriesValue {
    pub fn exact(value: C64) -> Self {
        SeriesValue {
            value,
            terms_used: 0,
            tail_bound: 0.0,
            scale: value.norm(),
        }
    }

    /// Absolute error estimate: tail plus rounding.
    pub fn error_bound(&self) -> f64 {
        self.tail_bound + ROUNDING * self.scale
    }

    /// Error estimate relative to the value (infinite if the value is zero
    /// but the error is not).
    pub fn rel_error(&self) -> f64 {
        let e = self.error_bound();
        if e == 0.0 {
            0.0
        } else {
            e / self.value.norm()
        }
    }

    pub fn scaled(self, c: C64) -> Self {
        let m = c.norm();
        SeriesValue {
            value: self.value * c,
            terms_used: self.terms_used,
            tail_bound: self.tail_bound * m,
            scale: self.scale * m,
        }
    }

    pub fn recip(self) -> Self {
        let a = self.value.norm();
        let r = 1.0 / a;
        SeriesValue {
            value: inv_scaled(self.value),
            terms_used: self.terms_used,
            tail_bound: self.tail_bound * r * r,
            scale: self.scale * r * r,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.re.is_finite() && self.value.im.is_finite()
    }
}

impl Mul for SeriesValue {
    type Output = SeriesValue;
    fn mul(self, o: SeriesValue) -> SeriesValue {
        let (a, b) = (self.value.norm(), o.value.norm());
        SeriesValue {
            value: self.value * o.value,
            terms_used: self.terms_used + o.terms_used,
            tail_bound: a * o.tail_bound + b * self.tail_bound + self.tail_bound * o.tail_bound,
            scale: a * o.scale + b * self.scale,
        }
    }
}

impl Add for SeriesValue {
    type Output = SeriesValue;
    fn add(self, o: SeriesValue) -> SeriesValue {
        SeriesValue {
            value: self.value + o.value,
            terms_used: self.terms_used + o.terms_used,
            tail_bound: self.tail_bound + o.tail_bound,
            scale: self.scale + o.scale,
        }
    }
}

/// A complex number stored as log-modulus and unit phase, for products whose
/// modulus leaves the binary64 range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue {
    pub ln_abs: f64,
    pub phase: C64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        ln_abs: f64::NEG_INFINITY,
        phase: C64 { re: 0.0, im: 0.0 },
    };
    pub const ONE: LogValue = LogValue {
        ln_abs: 0.0,
        phase: C64 { re: 1.0, im: 0.0 },
    };

    pub fn from_complex(z: C64) -> Self {
        let r = z.norm();
        if r == 0.0 {
            LogValue::ZERO
        } else {
            LogValue {
                ln_abs: r.ln(),
                phase: z / r,
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ln_abs == f64::NEG_INFINITY
    }

    pub fn to_complex(self) -> C64 {
        if self.is_zero() {
            C64::new(0.0, 0.0)
        } else {
            self.phase * self.ln_abs.exp()
        }
    }

    pub fn recip(self) -> Self {
        LogValue {
            ln_abs: -self.ln_abs,
            phase: self.phase.conj(),
        }
    }

    pub fn conj(self) -> Self {
        LogValue {
            ln_abs: self.ln_abs,
            phase: self.phase.conj(),
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, o: LogValue) -> LogValue {
        if self.is_zero() || o.is_zero() {
            return LogValue::ZERO;
        }
        let p = self.phase * o.phase;
        LogValue {
            ln_abs: self.ln_abs + o.ln_abs,
            phase: p / p.norm(),
        }
    }
}

/// 1/z without forming |z|², which overflows once |z| exceeds ~1e154.
pub fn inv_scaled(z: C64) -> C64 {
    let s = z.re.abs().max(z.im.abs());
    if s == 0.0 {
        return C64::new(f64::INFINITY, 0.0);
    }
    let w = z / s;
    w.conj() / (w.norm_sqr() * s)
}
