use super::{check_tol, poch_infinite, QBase, SeriesValue, MAX_TERMS};
use crate::{QError, Result, C64};

const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Number of consecutive negligible terms required before a sum may stop.
const QUIET_RUN: usize = 3;

/// (bq^n;q)_∞ for n = 0, 1, …, computed by the backward recursion
/// (bq^n)_∞ = (1 − bq^n)(bq^{n+1})_∞ from the first index where |b|q^n is
/// small, and directly beyond it.
struct ShiftedPoch {
    b: C64,
    q: QBase,
    tol: f64,
    head: Vec<SeriesValue>,
}

impl ShiftedPoch {
    fn new(b: C64, q: QBase, tol: f64) -> Result<Self> {
        let mut m = 0usize;
        let mut bq = b.norm();
        while bq > 0.25 {
            bq *= q.value();
            m += 1;
            if m > MAX_TERMS {
                return Err(QError::NonConvergence { terms: m });
            }
        }
        let mut head = vec![SeriesValue::exact(ZERO); m + 1];
        head[m] = poch_infinite(b * q.value().powi(m as i32), q, tol)?;
        for n in (0..m).rev() {
            let f = 1.0 - b * q.value().powi(n as i32);
            let next = head[n + 1];
            head[n] = SeriesValue {
                value: next.value * f,
                terms_used: next.terms_used + 1,
                tail_bound: next.tail_bound * f.norm(),
                scale: next.scale * f.norm() + next.value.norm() * f.norm() / 8.0,
            };
        }
        Ok(ShiftedPoch { b, q, tol, head })
    }

    fn get(&self, n: usize) -> Result<SeriesValue> {
        match self.head.get(n) {
            Some(v) => Ok(*v),
            None => poch_infinite(self.b * self.q.value().powi(n as i32), self.q, self.tol),
        }
    }
}

/// Regularised ₁φ₁: (b;q)_∞ ₁φ₁(a; b; q, z)
/// = Σ_n (a;q)_n/(q;q)_n (bq^n;q)_∞ (−1)^n q^{n(n−1)/2} z^n.
///
/// Entire in b, so it stays finite on the poles b ∈ q^{−ℕ} of ₁φ₁. Summation
/// stops after three consecutive terms below `tol` relative to the partial sum,
/// once the ratio bound R_n guarantees the tail is at most |t_n| R_n/(1 − R_n).
pub fn phi11_regularized(a: C64, b: C64, q: QBase, z: C64, tol: f64) -> Result<SeriesValue> {
    check_tol(tol)?;
    let qv = q.value();
    let tails = ShiftedPoch::new(b, q, tol)?;
    let (abs_a, abs_b, abs_z) = (a.norm(), b.norm(), z.norm());
    let mut coef = ONE;
    let mut sum = ZERO;
    let mut abs_sum = 0.0;
    let mut inner_tail = 0.0;
    let mut quiet = 0;
    let mut qn = 1.0;
    for n in 0..MAX_TERMS {
        let p = tails.get(n)?;
        let t = coef * p.value;
        sum += t;
        let ct = coef.norm();
        abs_sum += t.norm() + ct * p.scale;
        inner_tail += ct * p.tail_bound;
        if !sum.is_finite() {
            return Err(QError::Overflow("regularised 1phi1".into()));
        }
        let fa = 1.0 - a * qn;
        coef = coef * fa / (1.0 - qn * qv) * (-qn) * z;
        if coef == ZERO {
            return Ok(SeriesValue {
                value: sum,
                terms_used: n + 1,
                tail_bound: inner_tail,
                scale: abs_sum,
            });
        }
        let floor = tol * sum.norm().max(f64::EPSILON * abs_sum);
        quiet = if t.norm() <= floor { quiet + 1 } else { 0 };
        if quiet >= QUIET_RUN && abs_b * qn < 0.5 {
            let r = (1.0 + abs_a * qn) * abs_z * qn / ((1.0 - qn * qv) * (1.0 - abs_b * qn));
            if r < 0.5 {
                let tail = t.norm() * r / (1.0 - r);
                if tail <= floor {
                    return Ok(SeriesValue {
                        value: sum,
                        terms_used: n + 1,
                        tail_bound: tail + inner_tail,
                        scale: abs_sum,
                    });
                }
            }
        }
        qn *= qv;
    }
    Err(QError::NonConvergence { terms: MAX_TERMS })
}

/// ₁φ₁(a; b; q, z) = regularised value / (b;q)_∞. Errors at the poles
/// b ∈ q^{−ℕ}.
pub fn phi11(a: C64, b: C64, q: QBase, z: C64, tol: f64) -> Result<SeriesValue> {
    let den = poch_infinite(b, q, tol)?;
    if den.value.norm() <= 4.0 * f64::EPSILON * den.scale.max(1.0) {
        return Err(QError::Pole(format!("1phi1 lower parameter b = {b} in q^(-N)")));
    }
    Ok(phi11_regularized(a, b, q, z, tol)? * den.recip())
}

fn vanishes(f: C64) -> bool {
    f.norm() <= 4.0 * f64::EPSILON
}

/// ₂φ₁(a, b; c; q, z) = Σ (a,b;q)_n / (c,q;q)_n z^n.
///
/// Converges for |z| < 1; for |z| ≥ 1 only terminating series (a or b in
/// q^{−ℕ}) are accepted. A vanishing (c;q)_n before termination is a pole.
pub fn phi21(a: C64, b: C64, c: C64, q: QBase, z: C64, tol: f64) -> Result<SeriesValue> {
    check_tol(tol)?;
    let qv = q.value();
    let (abs_a, abs_b, abs_c, abs_z) = (a.norm(), b.norm(), c.norm(), z.norm());
    if abs_z >= 1.0 && !terminates(a, q) && !terminates(b, q) {
        return Err(QError::Divergent(format!("2phi1 with |z| = {abs_z} >= 1")));
    }
    let mut t = ONE;
    let mut sum = ZERO;
    let mut abs_sum = 0.0;
    let mut quiet = 0;
    let mut qn = 1.0;
    for n in 0..MAX_TERMS {
        sum += t;
        abs_sum += t.norm();
        if !sum.is_finite() {
            return Err(QError::Overflow("2phi1".into()));
        }
        let (fa, fb, fc) = (1.0 - a * qn, 1.0 - b * qn, 1.0 - c * qn);
        if vanishes(fa) || vanishes(fb) {
            return Ok(SeriesValue {
                value: sum,
                terms_used: n + 1,
                tail_bound: 0.0,
                scale: abs_sum,
            });
        }
        if vanishes(fc) {
            return Err(QError::Pole(format!("2phi1 lower parameter c = {c} in q^(-N)")));
        }
        let last = t.norm();
        t = t * fa * fb / (fc * (1.0 - qn * qv)) * z;
        let floor = tol * sum.norm().max(f64::EPSILON * abs_sum);
        quiet = if last <= floor { quiet + 1 } else { 0 };
        if quiet >= QUIET_RUN && abs_c * qn < 0.5 {
            let r = (1.0 + abs_a * qn) * (1.0 + abs_b * qn) * abs_z / ((1.0 - abs_c * qn) * (1.0 - qn * qv));
            if r < 1.0 {
                let tail = t.norm() / (1.0 - r);
                if tail <= floor {
                    return Ok(SeriesValue {
                        value: sum,
                        terms_used: n + 1,
                        tail_bound: tail,
                        scale: abs_sum,
                    });
                }
            }
        }
        qn *= qv;
    }
    Err(QError::NonConvergence { terms: MAX_TERMS })
}

fn terminates(a: C64, q: QBase) -> bool {
    let mut qn = 1.0;
    for _ in 0..MAX_TERMS {
        if vanishes(1.0 - a * qn) {
            return true;
        }
        if a.norm() * qn < 0.5 {
            return false;
        }
        qn *= q.value();
    }
    false
}

/// Terminating ₂φ₀(q^{−n}, w; —; q, z)
/// = Σ_{k=0}^{n} (q^{−n}, w;q)_k/(q;q)_k (−1)^k q^{−k(k−1)/2} z^k.
///
/// Always exactly n + 1 terms; `scale` is the sum of term moduli.
pub fn phi20_terminating(n: u32, w: C64, q: QBase, z: C64) -> SeriesValue {
    let qv = q.value();
    let qmn = qv.powi(-(n as i32));
    let mut t = ONE;
    let mut sum = ZERO;
    let mut abs_sum = 0.0;
    let mut qk = 1.0;
    for k in 0..=n {
        sum += t;
        abs_sum += t.norm();
        if k == n {
            break;
        }
        t = t * (1.0 - qmn * qk) * (1.0 - w * qk) / (1.0 - qk * qv) * (-z / qk);
        qk *= qv;
    }
    SeriesValue {
        value: sum,
        terms_used: n as usize + 1,
        tail_bound: 0.0,
        scale: abs_sum * (n as f64 + 1.0),
    }
}
