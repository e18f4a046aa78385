use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::expansion::{spectral_reconstruct, Truncation};
use crate::qgrid::{
    apply_l, coeff_a, coeff_b, ln_weight, point_value, Branch, GridFunction, GridPoint, GridWindow, QParams, Regime,
};
use crate::specialfn::{spectral_eigenfunction, Side, SpectralPoint};
use crate::{QError, Result, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub tested_points: Vec<SpectralPoint>,
    pub eigen_residuals: Vec<f64>,
    pub parseval_defect: f64,
    /// Sorted eigenvalues of the Dirichlet-truncated matrix (exploratory).
    pub matrix_eigenvalues: Option<Vec<f64>>,
    /// Distance of each eigenvalue to the nearest point of 𝒮 − 1.
    pub eigenvalue_distances: Option<Vec<f64>>,
    /// max |M_ij − M_ji| / max(|M_ij|, |M_ji|) before symmetrization, together
    /// with the relative imaginary parts of the coefficients.
    pub matrix_asymmetry: Option<f64>,
    /// Squared overlap of the nearest eigenvector with normalized φ⁺_γ, per
    /// tested POLY point.
    pub eigenvector_overlaps: Option<Vec<f64>>,
}

/// |(L − (γ − 1))f(x)| relative to the magnitudes of the terms that cancel in it.
pub fn scaled_eigen_residual(
    mut f: impl FnMut(GridPoint) -> Result<C64>,
    gamma: C64,
    x: GridPoint,
    params: &QParams,
) -> Result<f64> {
    let xv = point_value(x, params)?;
    let (fx, fd, fu) = (f(x)?, f(x.shift_down())?, f(x.shift_up())?);
    let a = coeff_a(xv, params.c, params.d);
    let b = coeff_b(xv, params.c, params.d, params.q.value());
    let r = apply_l(&mut f, x, params)? - (gamma - 1.0) * fx;
    let scale =
        a.norm() * (fd.norm() + fx.norm()) + b.norm() * (fu.norm() + fx.norm()) + (gamma - 1.0).norm() * fx.norm();
    Ok(if scale == 0.0 { r.norm() } else { r.norm() / scale })
}

fn tested_points(params: &QParams) -> Vec<SpectralPoint> {
    let mut pts: Vec<_> = (0..=3).map(|n| SpectralPoint::poly(n, params)).collect();
    pts.extend((-2..=2).map(|n| SpectralPoint::aux(n, params)));
    pts
}

fn analytic_distance(lambda: f64, params: &QParams) -> f64 {
    let q = params.q.value();
    let mut best = (lambda + 1.0).abs();
    for n in 0..200 {
        best = best.min((lambda - (q.powi(n) - 1.0)).abs());
    }
    for n in -60..200 {
        best = best.min((C64::new(lambda, 0.0) - (params.s() * q.powi(n + 1) - 1.0)).norm());
    }
    best
}

/// ln μ(x) with μ(x) = (1 − q)|x| w(x).
fn ln_mu(x: f64, params: &QParams) -> Result<f64> {
    Ok(ln_weight(x, params)?.ln_abs + ((1.0 - params.q.value()) * x.abs()).ln())
}

struct MatrixRun {
    eigenvalues: Vec<f64>,
    distances: Vec<f64>,
    asymmetry: f64,
    overlaps: Vec<f64>,
}

fn run_matrix(window: &GridWindow, params: &QParams, pts: &[SpectralPoint]) -> Result<MatrixRun> {
    if window.len_per_branch() > 120 {
        return Err(QError::InvalidParams(
            "matrix experiment allows at most 120 points per branch".into(),
        ));
    }
    if params.regime() != Regime::Conjugate {
        return Err(QError::InvalidParams(
            "matrix experiment needs a real operator (d = conj c)".into(),
        ));
    }
    let pts_list: Vec<GridPoint> = window.points().collect();
    let n = pts_list.len();
    let index = |p: GridPoint| pts_list.iter().position(|&r| r == p);
    let mut m = DMatrix::<f64>::zeros(n, n);
    let mut asym = 0.0f64;
    for (i, &p) in pts_list.iter().enumerate() {
        let x = point_value(p, params)?;
        let a = coeff_a(x, params.c, params.d);
        let b = coeff_b(x, params.c, params.d, params.q.value());
        asym = asym.max(a.im.abs() / a.norm()).max(b.im.abs() / b.norm());
        m[(i, i)] = -(a.re + b.re);
        // e_x ↦ row p of L e_y with y = qx (A-term) and y = x/q (B-term)
        let mu = ln_mu(x, params)?;
        if let Some(j) = index(p.shift_down()) {
            let my = ln_mu(point_value(p.shift_down(), params)?, params)?;
            m[(i, j)] = a.re * (0.5 * (mu - my)).exp();
        }
        if let Some(j) = index(p.shift_up()) {
            let my = ln_mu(point_value(p.shift_up(), params)?, params)?;
            m[(i, j)] = b.re * (0.5 * (mu - my)).exp();
        }
    }
    for i in 0..n {
        for j in 0..n {
            let s = m[(i, j)].abs().max(m[(j, i)].abs());
            if s > 0.0 {
                asym = asym.max((m[(i, j)] - m[(j, i)]).abs() / s);
            }
        }
    }
    let sym = (&m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let distances = eigenvalues.iter().map(|&l| analytic_distance(l, params)).collect();

    let interior = GridWindow::new(window.k_min + 1, window.k_max - 1, &window.branches)?;
    let mut overlaps = Vec::new();
    for p in pts
        .iter()
        .filter(|p| matches!(p.family, crate::specialfn::Family::Poly(_)))
    {
        let target = p.gamma.re - 1.0;
        let col = (0..n)
            .min_by(|&i, &j| {
                (eig.eigenvalues[i] - target)
                    .abs()
                    .total_cmp(&(eig.eigenvalues[j] - target).abs())
            })
            .ok_or_else(|| QError::Domain("empty window".into()))?;
        let mut dot = C64::new(0.0, 0.0);
        let (mut nv, mut nf) = (0.0, 0.0);
        for (i, &gp) in pts_list.iter().enumerate() {
            if !interior.contains(gp) {
                continue;
            }
            let x = point_value(gp, params)?;
            let phi = spectral_eigenfunction(*p, gp, params)?.value * (0.5 * ln_mu(x, params)?).exp();
            let v = eig.eigenvectors[(i, col)];
            dot += phi * v;
            nv += v * v;
            nf += phi.norm_sqr();
        }
        overlaps.push(dot.norm_sqr() / (nv * nf));
    }
    Ok(MatrixRun {
        eigenvalues,
        distances,
        asymmetry: asym,
        overlaps,
    })
}

/// Eigenfunction residuals at a fixed set of spectral points, the delta-function
/// Parseval defect at z₊q³ and, with `with_matrix`, the truncated-matrix
/// eigenvalue experiment on `window`.
pub fn spectrum_report(window: &GridWindow, params: &QParams, with_matrix: bool) -> Result<SpectrumReport> {
    let pts = tested_points(params);
    let interior = GridWindow::new(window.k_min + 1, window.k_max - 1, &window.branches)?;
    let mut residuals = Vec::with_capacity(pts.len());
    for &p in &pts {
        let mut worst = 0.0f64;
        for x in interior.points() {
            let r = scaled_eigen_residual(|y| Ok(spectral_eigenfunction(p, y, params)?.value), p.gamma, x, params)?;
            worst = worst.max(r);
        }
        residuals.push(worst);
    }
    let mut delta = GridFunction::zeros(GridWindow::new(-20, 60, &Branch::BOTH)?);
    delta.set(GridPoint::plus(3), C64::new(1.0, 0.0))?;
    let parseval = spectral_reconstruct(&delta, Truncation::new(12, 10), params, Side::Plus, 1e-12)?.parseval_defect;
    let mut report = SpectrumReport {
        tested_points: pts.clone(),
        eigen_residuals: residuals,
        parseval_defect: parseval,
        matrix_eigenvalues: None,
        eigenvalue_distances: None,
        matrix_asymmetry: None,
        eigenvector_overlaps: None,
    };
    if with_matrix {
        let run = run_matrix(window, params, &pts)?;
        report.matrix_eigenvalues = Some(run.eigenvalues);
        report.eigenvalue_distances = Some(run.distances);
        report.matrix_asymmetry = Some(run.asymmetry);
        report.eigenvector_overlaps = Some(run.overlaps);
    }
    Ok(report)
}

pub fn matrix_spectrum_experiment(window: &GridWindow, params: &QParams) -> Result<SpectrumReport> {
    spectrum_report(window, params, true)
}
