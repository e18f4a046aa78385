use serde::{Deserialize, Serialize};

use super::{HalfLineParams, QParams};
use crate::qcore::{ln_poch_infinite, LogValue, SeriesValue, DEFAULT_TOL};
use crate::{QError, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    Minus,
    Plus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// x = z_branch q^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridPoint {
    pub branch: Branch,
    pub k: i32,
}

impl GridPoint {
    pub fn new(branch: Branch, k: i32) -> Self {
        GridPoint { branch, k }
    }

    pub fn plus(k: i32) -> Self {
        GridPoint::new(Branch::Plus, k)
    }

    pub fn minus(k: i32) -> Self {
        GridPoint::new(Branch::Minus, k)
    }

    /// The point qx.
    pub fn shift_down(self) -> Self {
        GridPoint { k: self.k + 1, ..self }
    }

    /// The point x/q.
    pub fn shift_up(self) -> Self {
        GridPoint { k: self.k - 1, ..self }
    }
}

/// z_branch q^k, checked against the configured cap on |k|.
pub fn point_value(p: GridPoint, params: &QParams) -> Result<f64> {
    if p.k.abs() > params.k_cap {
        return Err(QError::OutOfRange {
            k: p.k,
            cap: params.k_cap,
        });
    }
    Ok(params.z(p.branch) * params.q.pow(p.k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridWindow {
    pub k_min: i32,
    pub k_max: i32,
    pub branches: Vec<Branch>,
}

impl GridWindow {
    pub fn new(k_min: i32, k_max: i32, branches: &[Branch]) -> Result<Self> {
        if k_min > k_max {
            return Err(QError::InvalidParams(format!("empty window [{k_min}, {k_max}]")));
        }
        let mut b = branches.to_vec();
        b.sort();
        b.dedup();
        Ok(GridWindow {
            k_min,
            k_max,
            branches: b,
        })
    }

    /// Both branches over [k_min, k_max].
    pub fn symmetric(k_min: i32, k_max: i32) -> Result<Self> {
        GridWindow::new(k_min, k_max, &Branch::BOTH)
    }

    pub fn default_window() -> Self {
        GridWindow::symmetric(super::DEFAULT_WINDOW.0, super::DEFAULT_WINDOW.1).unwrap()
    }

    pub fn len_per_branch(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.len_per_branch() * self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn contains(&self, p: GridPoint) -> bool {
        p.k >= self.k_min && p.k <= self.k_max && self.branches.contains(&p.branch)
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        self.branches
            .iter()
            .flat_map(move |&b| (self.k_min..=self.k_max).map(move |k| GridPoint::new(b, k)))
    }

    fn index(&self, p: GridPoint) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let bi = self.branches.iter().position(|&b| b == p.branch)?;
        Some(bi * self.len_per_branch() + (p.k - self.k_min) as usize)
    }

    pub fn intersect(&self, other: &GridWindow) -> Option<GridWindow> {
        let branches: Vec<Branch> = self
            .branches
            .iter()
            .copied()
            .filter(|b| other.branches.contains(b))
            .collect();
        let (lo, hi) = (self.k_min.max(other.k_min), self.k_max.min(other.k_max));
        if branches.is_empty() || lo > hi {
            None
        } else {
            GridWindow::new(lo, hi, &branches).ok()
        }
    }
}

/// Dense table of values on a window; zero outside it.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    window: GridWindow,
    values: Vec<C64>,
}

impl GridFunction {
    pub fn zeros(window: GridWindow) -> Self {
        let n = window.len();
        GridFunction {
            window,
            values: vec![C64::new(0.0, 0.0); n],
        }
    }

    pub fn from_fn(window: GridWindow, mut f: impl FnMut(GridPoint) -> Result<C64>) -> Result<Self> {
        let values = window.points().map(&mut f).collect::<Result<Vec<_>>>()?;
        Ok(GridFunction { window, values })
    }

    pub fn window(&self) -> &GridWindow {
        &self.window
    }

    /// Value at p, zero outside the window.
    pub fn get(&self, p: GridPoint) -> C64 {
        self.window.index(p).map_or(C64::new(0.0, 0.0), |i| self.values[i])
    }

    pub fn set(&mut self, p: GridPoint, v: C64) -> Result<()> {
        let i = self
            .window
            .index(p)
            .ok_or_else(|| QError::Domain(format!("{p:?} outside window")))?;
        self.values[i] = v;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (GridPoint, C64)> + '_ {
        self.window.points().zip(self.values.iter().copied())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> GridFunction {
        GridFunction {
            window: self.window.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

const QUIET_RUN: usize = 3;

/// Sums (1 − q) Σ f(x)|x| along one direction of one branch until three
/// consecutive terms fall below `tol` relative to the running total.
fn one_direction(
    params: &QParams,
    f: &mut impl FnMut(GridPoint) -> Result<C64>,
    branch: Branch,
    ks: impl Iterator<Item = i32>,
    total: &mut C64,
    abs_total: &mut f64,
    tol: f64,
) -> Result<(usize, f64)> {
    let mw = 1.0 - params.q.value();
    let mut quiet = 0;
    let mut prev = f64::NAN;
    for (n, k) in ks.enumerate() {
        let p = GridPoint::new(branch, k);
        let x = point_value(p, params)?;
        let t = f(p)? * (mw * x.abs());
        if !(t.re.is_finite() && t.im.is_finite()) {
            return Err(QError::Overflow(format!("Jackson summand at {p:?}")));
        }
        *total += t;
        *abs_total += t.norm();
        let a = t.norm();
        quiet = if a <= tol * total.norm() { quiet + 1 } else { 0 };
        if quiet >= QUIET_RUN {
            let r = if prev > 0.0 { a / prev } else { 0.0 };
            let tail = if r < 1.0 {
                a * r / (1.0 - r)
            } else {
                a * params.k_cap as f64
            };
            return Ok((n + 1, tail));
        }
        prev = a;
    }
    Err(QError::NonConvergence {
        terms: 2 * params.k_cap as usize,
    })
}

/// Jackson integral (1 − q) Σ_k [f(z₊q^k) z₊q^k − f(z₋q^k) z₋q^k], summed
/// outward from k = 0 in both directions on both branches.
///
/// `tail_bound` adds the geometric-ratio estimates at the four stopping points.
pub fn jackson_integral(
    mut f: impl FnMut(GridPoint) -> Result<C64>,
    params: &QParams,
    tol: f64,
) -> Result<SeriesValue> {
    crate::qcore::check_tol(tol)?;
    let mut total = C64::new(0.0, 0.0);
    let mut abs_total = 0.0;
    let mut terms = 0;
    let mut tail = 0.0;
    for branch in Branch::BOTH {
        let (n, t) = one_direction(
            params,
            &mut f,
            branch,
            0..=params.k_cap,
            &mut total,
            &mut abs_total,
            tol,
        )?;
        terms += n;
        tail += t;
        let (n, t) = one_direction(
            params,
            &mut f,
            branch,
            (-params.k_cap..=-1).rev(),
            &mut total,
            &mut abs_total,
            tol,
        )?;
        terms += n;
        tail += t;
    }
    Ok(SeriesValue {
        value: total,
        terms_used: terms,
        tail_bound: tail,
        scale: abs_total,
    })
}

/// ln w(x) = −ln|(cx, dx;q)_∞| with its phase (w is real positive under the
/// positivity conditions, so the phase is 1 up to rounding).
pub fn ln_weight(x: f64, params: &QParams) -> Result<LogValue> {
    let a = ln_poch_infinite(params.c * x, params.q, DEFAULT_TOL)?;
    let b = ln_poch_infinite(params.d * x, params.q, DEFAULT_TOL)?;
    if a.is_zero() || b.is_zero() {
        return Err(QError::Pole(format!("weight at x = {x}")));
    }
    Ok((a * b).recip())
}

fn log_sum(terms: impl Iterator<Item = Result<(LogValue, bool)>>, tol: f64) -> Result<SeriesValue> {
    let items = terms.collect::<Result<Vec<_>>>()?;
    let max_ln = items.iter().map(|(t, _)| t.ln_abs).fold(f64::NEG_INFINITY, f64::max);
    if max_ln == f64::NEG_INFINITY {
        return Ok(SeriesValue::exact(C64::new(0.0, 0.0)));
    }
    // Sum relative to the largest term, then restore the scale.
    let mut sum = C64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut edge = 0.0f64;
    for (t, is_edge) in &items {
        if t.is_zero() {
            continue;
        }
        let r = (t.ln_abs - max_ln).exp();
        sum += t.phase * r;
        abs_sum += r;
        if *is_edge {
            edge = edge.max(r);
        }
    }
    if edge > tol * abs_sum {
        return Err(QError::NonConvergence { terms: items.len() });
    }
    let s = max_ln.exp();
    if !s.is_finite() {
        return Err(QError::Overflow("inner product".into()));
    }
    Ok(SeriesValue {
        value: sum * s,
        terms_used: items.len(),
        tail_bound: 2.0 * edge * s,
        scale: abs_sum * s * 2.0,
    })
}

/// ⟨f, g⟩ = ∫ f ḡ w d_qx over the common window, each summand formed as a
/// log-modulus plus phase.
///
/// Errors with non-convergence if a summand at the window edge exceeds `tol`
/// relative to the total absolute mass (the window clipped the integral).
pub fn inner_product(f: &GridFunction, g: &GridFunction, params: &QParams, tol: f64) -> Result<SeriesValue> {
    crate::qcore::check_tol(tol)?;
    let win = match f.window().intersect(g.window()) {
        Some(w) => w,
        None => return Ok(SeriesValue::exact(C64::new(0.0, 0.0))),
    };
    let ln_mw = (1.0 - params.q.value()).ln();
    let terms = win.points().map(|p| {
        let (a, b) = (f.get(p), g.get(p));
        if a == C64::new(0.0, 0.0) || b == C64::new(0.0, 0.0) {
            return Ok((LogValue::ZERO, false));
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(QError::Overflow(format!("grid value at {p:?}")));
        }
        let x = point_value(p, params)?;
        let mut t = LogValue::from_complex(a) * LogValue::from_complex(b).conj() * ln_weight(x, params)?;
        t.ln_abs += x.abs().ln() + ln_mw;
        Ok((t, p.k == win.k_min || p.k == win.k_max))
    });
    log_sum(terms, tol)
}

/// x = q^{−k}/c on the half-line lattice I_q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfLinePoint(pub u32);

/// Values on k = 0..=k_max of I_q.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfLineFunction {
    pub values: Vec<C64>,
}

impl HalfLineFunction {
    pub fn from_fn(k_max: u32, f: impl FnMut(u32) -> Result<C64>) -> Result<Self> {
        Ok(HalfLineFunction {
            values: (0..=k_max).map(f).collect::<Result<Vec<_>>>()?,
        })
    }

    pub fn get(&self, k: u32) -> C64 {
        self.values.get(k as usize).copied().unwrap_or(C64::new(0.0, 0.0))
    }
}

/// ∫_{I_q} f d_qx = (1 − q) Σ_{k≥0} f(q^{−k}/c) q^{−k}/c.
pub fn jackson_integral_halfline(
    mut f: impl FnMut(u32) -> Result<C64>,
    hl: &HalfLineParams,
    tol: f64,
) -> Result<SeriesValue> {
    crate::qcore::check_tol(tol)?;
    let mw = 1.0 - hl.q.value();
    let mut total = C64::new(0.0, 0.0);
    let mut abs_total = 0.0;
    let mut quiet = 0;
    let mut prev = f64::NAN;
    for k in 0..=super::DEFAULT_K_CAP as u32 {
        let t = f(k)? * (mw * hl.point(k));
        if !(t.re.is_finite() && t.im.is_finite()) {
            return Err(QError::Overflow(format!("half-line summand at k = {k}")));
        }
        total += t;
        abs_total += t.norm();
        let a = t.norm();
        quiet = if a <= tol * total.norm() { quiet + 1 } else { 0 };
        if quiet >= QUIET_RUN {
            let r = if prev > 0.0 { a / prev } else { 0.0 };
            let tail = if r < 1.0 { a * r / (1.0 - r) } else { a * 128.0 };
            return Ok(SeriesValue {
                value: total,
                terms_used: k as usize + 1,
                tail_bound: tail,
                scale: abs_total,
            });
        }
        prev = a;
    }
    Err(QError::NonConvergence {
        terms: super::DEFAULT_K_CAP as usize,
    })
}

/// ln W(q^{−k}/c) = ln[(c/d)^k q^{k(k+1)} (cq^{k+1}/d, q^{k+1};q)_∞].
pub fn ln_weight_halfline(k: u32, hl: &HalfLineParams) -> Result<f64> {
    let q = hl.q.value();
    let kf = k as f64;
    let qk1 = q.powi(k as i32 + 1);
    let a = ln_poch_infinite(C64::new(hl.c * qk1 / hl.d, 0.0), hl.q, DEFAULT_TOL)?;
    let b = ln_poch_infinite(C64::new(qk1, 0.0), hl.q, DEFAULT_TOL)?;
    if a.phase.re < 0.0 || b.phase.re < 0.0 {
        return Err(QError::Positivity(format!("W at k = {k}")));
    }
    Ok(kf * (hl.c / hl.d).ln() + kf * (kf + 1.0) * q.ln() + a.ln_abs + b.ln_abs)
}

/// ⟨f, g⟩_H = ∫_{I_q} f ḡ W d_qx over the common range of k.
pub fn inner_product_halfline(
    f: &HalfLineFunction,
    g: &HalfLineFunction,
    hl: &HalfLineParams,
    tol: f64,
) -> Result<SeriesValue> {
    crate::qcore::check_tol(tol)?;
    let n = f.values.len().min(g.values.len());
    let ln_mw = (1.0 - hl.q.value()).ln();
    let terms = (0..n).map(|i| {
        let k = i as u32;
        let (a, b) = (f.get(k), g.get(k));
        if a == C64::new(0.0, 0.0) || b == C64::new(0.0, 0.0) {
            return Ok((LogValue::ZERO, false));
        }
        let mut t = LogValue::from_complex(a) * LogValue::from_complex(b).conj();
        t.ln_abs += ln_weight_halfline(k, hl)? + hl.point(k).ln() + ln_mw;
        Ok((t, i + 1 == n))
    });
    log_sum(terms, tol)
}
