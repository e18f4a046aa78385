use serde::{Deserialize, Serialize};

use crate::qcore::{poch_finite, poch_infinite, theta, DEFAULT_TOL};
use crate::qgrid::{
    inner_product, inner_product_halfline, point_value, GridFunction, GridWindow, HalfLineFunction, HalfLineParams,
    QParams,
};
use crate::specialfn::{big_b, func_q, poly_p, poly_v};
use crate::{QError, Result, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<C64>>,
    pub closed_form_diagonal: Vec<C64>,
    pub max_offdiag_rel: f64,
    pub max_diag_rel_err: f64,
}

impl GramReport {
    fn assemble(labels: Vec<String>, matrix: Vec<Vec<C64>>, closed: Vec<C64>) -> Self {
        let n = labels.len();
        let mut off = 0.0f64;
        let mut diag = 0.0f64;
        for i in 0..n {
            diag = diag.max((matrix[i][i] - closed[i]).norm() / closed[i].norm());
            for j in 0..n {
                if i != j {
                    off = off.max(Self::rel(&matrix, i, j));
                }
            }
        }
        GramReport {
            labels,
            matrix,
            closed_form_diagonal: closed,
            max_offdiag_rel: off,
            max_diag_rel_err: diag,
        }
    }

    fn rel(m: &[Vec<C64>], i: usize, j: usize) -> f64 {
        m[i][j].norm() / (m[i][i].norm() * m[j][j].norm()).sqrt()
    }

    /// Largest |G_ij|/√(G_ii G_jj) with i in `rows`, j in `cols`.
    pub fn block_max_rel(&self, rows: impl Fn(&str) -> bool, cols: impl Fn(&str) -> bool) -> f64 {
        let n = self.labels.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j && rows(&self.labels[i]) && cols(&self.labels[j]) {
                    worst = worst.max(Self::rel(&self.matrix, i, j));
                }
            }
        }
        worst
    }

    /// Largest |G_ij − conj G_ji| relative to the diagonal scale.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.labels.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let s = (self.matrix[i][i].norm() * self.matrix[j][j].norm()).sqrt();
                worst = worst.max((self.matrix[i][j] - self.matrix[j][i].conj()).norm() / s);
            }
        }
        worst
    }
}

/// ‖P_n‖² = B (q;q)_n (cd)^n q^{−n²}.
pub fn norm_p_closed(n: u32, params: &QParams) -> Result<C64> {
    let q = params.q;
    let one = C64::new(1.0, 0.0);
    let ni = n as i32;
    Ok(big_b(params)? * poch_finite(one * q.value(), n, q) * (params.c * params.d).powi(ni) * q.pow(-ni * ni))
}

/// ‖Q_n‖² = (1 − q)(cdz₋z₊q^{−n−1})_∞ / ((−z₋z₊)^n q^{n(n+1)/2}) · z₊ (q)_∞² θ(z₋/z₊).
pub fn norm_q_closed(n: i32, params: &QParams) -> Result<C64> {
    let q = params.q;
    let (zm, zp) = (params.z_minus, params.z_plus);
    let one = C64::new(1.0, 0.0);
    let num = poch_infinite(params.c * params.d * zm * zp * q.pow(-n - 1), q, DEFAULT_TOL)?.value;
    let qq = poch_infinite(one * q.value(), q, DEFAULT_TOL)?.value;
    let th = theta(one * (zm / zp), q, DEFAULT_TOL)?.value;
    let den = (-zm * zp).powi(n) * q.pow(n * (n + 1) / 2);
    Ok((1.0 - q.value()) * num / den * zp * qq * qq * th)
}

/// ‖V_n^{(c/d)}(c·)‖²_H = ((1 − q)/c)(q)_∞ (c/d)^n q^{−n²} (q)_n.
pub fn norm_v_closed(n: u32, hl: &HalfLineParams) -> Result<f64> {
    let q = hl.q;
    let one = C64::new(1.0, 0.0);
    let ni = n as i32;
    let qq = poch_infinite(one * q.value(), q, DEFAULT_TOL)?.value.re;
    let qn = poch_finite(one * q.value(), n, q).re;
    Ok((1.0 - q.value()) / hl.c * qq * (hl.c / hl.d).powi(ni) * q.pow(-ni * ni) * qn)
}

fn gram(fs: &[GridFunction], params: &QParams, tol: f64) -> Result<Vec<Vec<C64>>> {
    let n = fs.len();
    let mut m = vec![vec![C64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = inner_product(&fs[i], &fs[j], params, tol)?.value;
            m[i][j] = v;
            m[j][i] = v.conj();
        }
    }
    Ok(m)
}

/// Gram matrix of {P_n}_{n ≤ n_p} ∪ {Q_n}_{|n| ≤ n_q} over `window`;
/// `None` drops a family.
pub fn gram_pq(
    n_p: Option<u32>,
    n_q: Option<u32>,
    window: &GridWindow,
    params: &QParams,
    tol: f64,
) -> Result<GramReport> {
    if n_p.unwrap_or(0) > 10 || n_q.unwrap_or(0) > 6 {
        return Err(QError::InvalidParams("gram_pq needs n_p <= 10 and n_q <= 6".into()));
    }
    let mut labels = Vec::new();
    let mut fs = Vec::new();
    let mut closed = Vec::new();
    if let Some(np) = n_p {
        for n in 0..=np {
            labels.push(format!("P{n}"));
            fs.push(GridFunction::from_fn(window.clone(), |p| {
                Ok(poly_p(n, C64::new(point_value(p, params)?, 0.0), params))
            })?);
            closed.push(norm_p_closed(n, params)?);
        }
    }
    if let Some(nq) = n_q {
        let nq = nq as i32;
        for n in -nq..=nq {
            labels.push(format!("Q{n}"));
            fs.push(GridFunction::from_fn(window.clone(), |p| {
                Ok(func_q(n, p, params)?.value)
            })?);
            closed.push(norm_q_closed(n, params)?);
        }
    }
    if fs.is_empty() {
        return Err(QError::InvalidParams("gram_pq needs at least one family".into()));
    }
    let m = gram(&fs, params, tol)?;
    Ok(GramReport::assemble(labels, m, closed))
}

/// Gram matrix of {V_n^{(c/d)}(c·)}_{n ≤ n_max} under W on I_q.
pub fn gram_halfline(n_max: u32, hl: &HalfLineParams, tol: f64) -> Result<GramReport> {
    if n_max > 10 {
        return Err(QError::InvalidParams("gram_halfline needs n <= 10".into()));
    }
    let a = C64::new(hl.c / hl.d, 0.0);
    let k_max = crate::qgrid::DEFAULT_K_CAP as u32 / 2;
    let fs = (0..=n_max)
        .map(|n| HalfLineFunction::from_fn(k_max, |k| Ok(poly_v(n, a, C64::new(hl.q.pow(-(k as i32)), 0.0), hl.q))))
        .collect::<Result<Vec<_>>>()?;
    let n = fs.len();
    let mut m = vec![vec![C64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = inner_product_halfline(&fs[i], &fs[j], hl, tol)?.value;
            m[i][j] = v;
            m[j][i] = v.conj();
        }
    }
    let labels = (0..=n_max).map(|n| format!("V{n}")).collect();
    let closed = (0..=n_max)
        .map(|n| Ok(C64::new(norm_v_closed(n, hl)?, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GramReport::assemble(labels, m, closed))
}
