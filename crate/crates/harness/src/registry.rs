//! The registered checks. Each one reduces to a single residual compared
//! against its tolerance; random draws are seeded from the run seed and the
//! check id, so any check can be re-run alone with the same result.

use std::sync::OnceLock;

use qorth::qcore::{
    phi20_terminating, poch_finite, poch_infinite, theta, theta_prod, verify_limit_transform,
    verify_terminating_transform, verify_three_term_transform, LimitTransform, DEFAULT_TOL,
};
use qorth::qgrid::{
    apply_l, apply_l_halfline, casorati, casorati_halfline, jackson_integral, jackson_integral_halfline, point_value,
    Branch, GridFunction, GridPoint, HalfLineParams, QParams,
};
use qorth::specialfn::{
    beta_constant, big_b, casorati_d, eig_phi, eig_phi_pm, eig_psi, func_q, halfline_c_dagger, halfline_d_tilde,
    halfline_family, halfline_psi, phi_pm_expansion, poly_p, residue_inv_d, residue_inv_d_numeric, weight_w, Side,
    SpectralPoint,
};
use qorth::spectral::{
    gram_halfline, gram_pq, pole_distance, resolvent_residual, spectral_reconstruct, spectrum_report,
    weighted_sup_error, GramReport, Truncation,
};
use qorth::{QError, Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Category {
    Identity,
    Orthogonality,
    Spectral,
    Asymptotic,
}

#[derive(Clone, Debug)]
pub struct CheckSpec {
    pub id: &'static str,
    pub description: &'static str,
    /// Overrides the run parameters for this check.
    pub parameters: Option<QParams>,
    pub tolerance: f64,
    pub category: Category,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Measured { residual: f64, details: String },
    Skipped(String),
}

fn measured(residual: f64, details: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome::Measured {
        residual,
        details: details.into(),
    })
}

type CheckFn = fn(&Ctx, &QParams) -> Result<Outcome>;

struct Entry {
    id: &'static str,
    category: Category,
    description: &'static str,
    tolerance: fn(&QParams) -> f64,
    run: CheckFn,
}

pub struct Check {
    pub spec: CheckSpec,
    run: CheckFn,
}

impl Check {
    pub fn run(&self, ctx: &Ctx) -> Result<Outcome> {
        let p = self.spec.parameters.unwrap_or(ctx.cfg.params);
        (self.run)(ctx, &p)
    }
}

/// Shared state of one run: the configuration and lazily built Gram
/// matrices, which several checks read.
pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    gram_pq: OnceLock<Result<GramReport>>,
    gram_v: OnceLock<Result<GramReport>>,
}

impl<'a> Ctx<'a> {
    pub fn new(cfg: &'a RunConfig) -> Self {
        Ctx {
            cfg,
            gram_pq: OnceLock::new(),
            gram_v: OnceLock::new(),
        }
    }

    fn pq(&self, p: &QParams) -> Result<&GramReport> {
        self.gram_pq
            .get_or_init(|| gram_pq(Some(8), Some(4), &self.cfg.window, p, 1e-12))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn halfline_gram(&self) -> Result<&GramReport> {
        self.gram_v
            .get_or_init(|| gram_halfline(8, &self.cfg.halfline, 1e-12))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn rng(&self, id: &str) -> ChaCha8Rng {
        // FNV-1a of the id keeps streams independent across checks
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in id.bytes() {
            h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
        }
        ChaCha8Rng::seed_from_u64(self.cfg.seed ^ h)
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

const ENTRIES: &[Entry] = &[
    Entry {
        id: "identity.beta_integral",
        category: Category::Identity,
        description: "Jackson quadrature of w over the lattice against the closed form B",
        tolerance: |_| 1e-11,
        run: beta_integral,
    },
    Entry {
        id: "identity.moments",
        category: Category::Identity,
        description: "moments of the terminating 2phi0 against (dx)_m, 0 <= m, n <= 6",
        tolerance: |_| 1e-9,
        run: moments,
    },
    Entry {
        id: "identity.limit_b_over_a",
        category: Category::Identity,
        description: "1phi1 = (b/a)_inf 2phi1(a, az/b; 0; b/a) on 100 draws",
        tolerance: |_| 1e-11,
        run: |x, p| limit(x, p, LimitTransform::BOverA, "identity.limit_b_over_a"),
    },
    Entry {
        id: "identity.limit_az_over_b",
        category: Category::Identity,
        description: "1phi1 = (b, az/b)_inf 2phi1(0, b/a; b; az/b) on 100 draws",
        tolerance: |_| 1e-11,
        run: |x, p| limit(x, p, LimitTransform::AzOverB, "identity.limit_az_over_b"),
    },
    Entry {
        id: "identity.limit_a",
        category: Category::Identity,
        description: "1phi1 = (a, z)_inf 2phi1(0, b/a; z; a) on 100 draws",
        tolerance: |_| 1e-11,
        run: |x, p| limit(x, p, LimitTransform::A, "identity.limit_a"),
    },
    Entry {
        id: "identity.limit_swap",
        category: Category::Identity,
        description: "1phi1(a; b; z) = (z)_inf/(b)_inf 1phi1(az/b; z; b) on 100 draws",
        tolerance: |_| 1e-11,
        run: |x, p| limit(x, p, LimitTransform::Swap, "identity.limit_swap"),
    },
    Entry {
        id: "identity.three_term",
        category: Category::Identity,
        description: "three-term 1phi1 transformation on 100 draws",
        tolerance: |_| 1e-10,
        run: three_term,
    },
    Entry {
        id: "identity.terminating",
        category: Category::Identity,
        description: "terminating 1phi1 to 2phi0 transformation on 100 draws",
        tolerance: |_| 1e-11,
        run: terminating,
    },
    Entry {
        id: "identity.eigen_residuals",
        category: Category::Identity,
        description: "L f = (gamma - 1) f for psi, psi^dagger, Phi, phi+, phi- at 20 gamma x 15 points",
        tolerance: |_| 1e-9,
        run: eigen_residuals,
    },
    Entry {
        id: "identity.halfline_boundary",
        category: Category::Identity,
        description: "half-line eigen-equation for Psi at x = 1/c",
        tolerance: |_| 1e-11,
        run: halfline_boundary,
    },
    Entry {
        id: "identity.casorati_constancy",
        category: Category::Identity,
        description: "spread of Casorati determinants of solution pairs across the grid",
        tolerance: |_| 1e-10,
        run: casorati_constancy,
    },
    Entry {
        id: "identity.casorati_closed_forms",
        category: Category::Identity,
        description: "Casorati determinants against their closed forms, including the half-line one",
        tolerance: |_| 1e-10,
        run: casorati_closed_forms,
    },
    Entry {
        id: "identity.degeneration",
        category: Category::Identity,
        description: "phi+- vanish and d^n psi = c^n psi^dagger at gamma = q^(-n-1), n <= 3",
        tolerance: |_| 1e-9,
        run: degeneration,
    },
    Entry {
        id: "identity.c_dagger_zero",
        category: Category::Identity,
        description: "C^dagger(q^n) = 0 exactly for n <= 3",
        tolerance: |_| f64::MIN_POSITIVE,
        run: c_dagger_zero,
    },
    Entry {
        id: "orthogonality.p_offdiag",
        category: Category::Orthogonality,
        description: "Gram matrix of P_n, n <= 8: off-diagonal entries",
        tolerance: |_| 1e-9,
        run: |x, p| Ok(block(x.pq(p)?, 'P', 'P')),
    },
    Entry {
        id: "orthogonality.p_diag",
        category: Category::Orthogonality,
        description: "Gram matrix of P_n, n <= 8: diagonal against B (q)_n (cd)^n q^(-n^2)",
        tolerance: |_| 1e-9,
        run: |x, p| Ok(diag(x.pq(p)?, 'P')),
    },
    Entry {
        id: "orthogonality.q_offdiag",
        category: Category::Orthogonality,
        description: "Gram matrix of Q_n, |n| <= 4: off-diagonal entries",
        tolerance: |_| 1e-8,
        run: |x, p| Ok(block(x.pq(p)?, 'Q', 'Q')),
    },
    Entry {
        id: "orthogonality.q_diag",
        category: Category::Orthogonality,
        description: "Gram matrix of Q_n, |n| <= 4: diagonal against the closed form",
        tolerance: |_| 1e-8,
        run: |x, p| Ok(diag(x.pq(p)?, 'Q')),
    },
    Entry {
        id: "orthogonality.pq_cross",
        category: Category::Orthogonality,
        description: "P-Q cross block of the Gram matrix",
        tolerance: |_| 1e-8,
        run: |x, p| Ok(block(x.pq(p)?, 'P', 'Q')),
    },
    Entry {
        id: "orthogonality.v_offdiag",
        category: Category::Orthogonality,
        description: "half-line Gram matrix of V_n, n <= 8: off-diagonal entries",
        tolerance: |_| 1e-9,
        run: |x, _| Ok(block(x.halfline_gram()?, 'V', 'V')),
    },
    Entry {
        id: "orthogonality.v_diag",
        category: Category::Orthogonality,
        description: "half-line Gram matrix of V_n, n <= 8: diagonal against the closed form",
        tolerance: |_| 1e-9,
        run: |x, _| Ok(diag(x.halfline_gram()?, 'V')),
    },
    Entry {
        id: "orthogonality.halfline_weight_integral",
        category: Category::Orthogonality,
        description: "integral of W over the half-line lattice against (1-q)(q)_inf/c",
        tolerance: |_| 1e-11,
        run: halfline_weight_integral,
    },
    Entry {
        id: "spectral.residues",
        category: Category::Spectral,
        description: "closed-form residues of 1/D against Richardson limits, POLY n <= 4, AUX |n| <= 3",
        tolerance: |_| 1e-7,
        run: residues,
    },
    Entry {
        id: "spectral.parseval_delta",
        category: Category::Spectral,
        description: "Parseval defect of a delta at z+ q^3 with (N_p, N_q) = (12, 10)",
        tolerance: |_| 1e-3,
        run: parseval_delta,
    },
    Entry {
        id: "spectral.non_density",
        category: Category::Spectral,
        description: "fraction of the same delta captured by P_n alone, n <= 12 (must stay below 0.99)",
        tolerance: |_| 0.99,
        run: non_density,
    },
    Entry {
        id: "spectral.basis_reconstruction",
        category: Category::Spectral,
        description: "weighted sup error reconstructing P_0..P_3 and Q_-1..Q_1 from the spectral expansion",
        tolerance: |_| 1e-8,
        run: basis_reconstruction,
    },
    Entry {
        id: "spectral.resolvent",
        category: Category::Spectral,
        description: "(L - mu) R f = f for the Green-kernel resolvent at three gamma",
        tolerance: |_| 1e-8,
        run: resolvent,
    },
    Entry {
        id: "spectral.eigenfunctions",
        category: Category::Spectral,
        description: "scaled eigen-residual of the closed-form eigenfunctions at POLY 0..3, AUX -2..2",
        tolerance: |_| 1e-10,
        run: spectral_eigenfunctions,
    },
    Entry {
        id: "asymptotic.weight_k10",
        category: Category::Asymptotic,
        description: "w(z q^k) theta(cz, dz)/((cdz^2)^k q^(k(k-1))) - 1 at k = -10, both branches",
        tolerance: |p| p.q.pow(9),
        run: |_, p| weight_asymptotic(p, -10),
    },
    Entry {
        id: "asymptotic.weight_k15",
        category: Category::Asymptotic,
        description: "w(z q^k) theta(cz, dz)/((cdz^2)^k q^(k(k-1))) - 1 at k = -15, both branches",
        tolerance: |p| p.q.pow(14),
        run: |_, p| weight_asymptotic(p, -15),
    },
    Entry {
        id: "asymptotic.phi_k12",
        category: Category::Asymptotic,
        description: "Phi(z+ q^k) theta(c gamma z+)/(theta(c z+) gamma^k) - 1 at k = -12",
        tolerance: |p| p.q.pow(10),
        run: |_, p| phi_asymptotic(p, -12),
    },
    Entry {
        id: "asymptotic.phi_k20",
        category: Category::Asymptotic,
        description: "Phi(z+ q^k) theta(c gamma z+)/(theta(c z+) gamma^k) - 1 at k = -20",
        tolerance: |p| p.q.pow(18),
        run: |_, p| phi_asymptotic(p, -20),
    },
];

pub fn check_ids() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.id).collect()
}

/// All checks in registry order, with tolerances from the configuration
/// where it names them.
pub fn registry(cfg: &RunConfig) -> Vec<Check> {
    ENTRIES
        .iter()
        .map(|e| Check {
            spec: CheckSpec {
                id: e.id,
                description: e.description,
                parameters: None,
                tolerance: cfg.tolerances.get(e.id).copied().unwrap_or((e.tolerance)(&cfg.params)),
                category: e.category,
            },
            run: e.run,
        })
        .collect()
}

// ---- shared helpers ----

/// Uniform modulus in [lo, hi] and uniform phase.
fn draw(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> C64 {
    C64::from_polar(
        rng.gen_range(lo..hi),
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

/// γ with |γ| ∈ [0.1, 3], at relative distance > 1e−2 from q^ℤ ∪ s q^ℤ.
fn generic_gammas(rng: &mut ChaCha8Rng, n: usize, p: &QParams) -> Vec<C64> {
    gammas_up_to(rng, n, 3.0, p)
}

fn gammas_up_to(rng: &mut ChaCha8Rng, n: usize, max_abs: f64, p: &QParams) -> Vec<C64> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let g = draw(rng, 0.1, max_abs);
        if pole_distance(g, p) > 1e-2 {
            out.push(g);
        }
    }
    out
}

/// 15 points alternating branches over k = −7..7.
fn grid15() -> Vec<GridPoint> {
    (-7..=7)
        .map(|k: i32| {
            GridPoint::new(
                if k.rem_euclid(2) == 0 {
                    Branch::Plus
                } else {
                    Branch::Minus
                },
                k,
            )
        })
        .collect()
}

fn eigen_residual(f: impl Fn(GridPoint) -> Result<C64>, gamma: C64, x: GridPoint, p: &QParams) -> Result<f64> {
    let lf = apply_l(&f, x, p)?;
    let v = f(x)?;
    Ok((lf - (gamma - 1.0) * v).norm() / v.norm().max(1.0))
}

/// Draws admissible parameters until `n` residuals are collected; draws
/// that land on a pole of the identity are rejected, not counted.
fn sampled(
    ctx: &Ctx,
    id: &str,
    n: usize,
    mut one: impl FnMut(&mut ChaCha8Rng) -> Option<Result<f64>>,
) -> Result<Outcome> {
    let mut rng = ctx.rng(id);
    let (mut worst, mut got, mut tries, mut rejected) = (0.0f64, 0usize, 0usize, 0usize);
    while got < n {
        tries += 1;
        if tries > 100 * n {
            return Err(QError::NonConvergence { terms: tries });
        }
        match one(&mut rng) {
            None => rejected += 1,
            Some(Err(QError::PoleProximity { .. })) => rejected += 1,
            Some(Err(e)) => return Err(e),
            Some(Ok(r)) => {
                worst = worst.max(r);
                got += 1;
            }
        }
    }
    measured(worst, format!("{n} draws, {rejected} rejected as inadmissible"))
}

// ---- identities ----

fn beta_integral(_: &Ctx, p: &QParams) -> Result<Outcome> {
    let j = jackson_integral(|x| Ok(weight_w(x, p)?.value), p, 1e-16)?;
    let b = big_b(p)?;
    measured(rel(j.value, b), format!("quadrature {} vs B {}", j.value, b))
}

fn moments(_: &Ctx, p: &QParams) -> Result<Outcome> {
    let q = p.q;
    let mut worst = 0.0f64;
    for m in 0..=6u32 {
        for n in 0..=6u32 {
            let z = p.d * q.pow(n as i32) / p.c;
            let j =
                jackson_integral(
                    |x| {
                        let xv = c(point_value(x, p)?);
                        Ok(phi20_terminating(n, p.c * xv, q, z).value
                            * poch_finite(p.d * xv, m, q)
                            * weight_w(x, p)?.value)
                    },
                    p,
                    1e-16,
                )?;
            let rhs = beta_constant(q, p.c, p.d * q.pow(m as i32), p.z_minus, p.z_plus)?
                * poch_finite(c(q.pow(-(m as i32))), n, q);
            let r = if n > m { j.value.norm() } else { rel(j.value, rhs) };
            worst = worst.max(r);
        }
    }
    measured(worst, "relative for n <= m, absolute for n > m")
}

fn limit(ctx: &Ctx, p: &QParams, form: LimitTransform, id: &str) -> Result<Outcome> {
    let q = p.q;
    sampled(ctx, id, 100, |rng| {
        let (a, b, z) = (draw(rng, 0.2, 2.0), draw(rng, 0.1, 2.0), draw(rng, 0.1, 2.0));
        let margin = match form {
            LimitTransform::BOverA => (b / a).norm() < 0.9,
            LimitTransform::AzOverB => (a * z / b).norm() < 0.9,
            LimitTransform::A => a.norm() < 0.9,
            LimitTransform::Swap => true,
        };
        margin.then(|| verify_limit_transform(form, a, b, z, q, DEFAULT_TOL))
    })
}

fn three_term(ctx: &Ctx, p: &QParams) -> Result<Outcome> {
    let q = p.q;
    sampled(ctx, "identity.three_term", 100, |rng| {
        let (a, b, z) = (draw(rng, 0.3, 2.0), draw(rng, 0.3, 2.0), draw(rng, 0.3, 2.0));
        Some(verify_three_term_transform(a, b, z, q, DEFAULT_TOL))
    })
}

fn terminating(ctx: &Ctx, p: &QParams) -> Result<Outcome> {
    let q = p.q;
    sampled(ctx, "identity.terminating", 100, |rng| {
        let n = rng.gen_range(0..6u32);
        let (a, b) = (draw(rng, 0.3, 2.0), draw(rng, 0.3, 2.0));
        Some(verify_terminating_transform(n, a, b, q, DEFAULT_TOL))
    })
}

fn eigen_residuals(ctx: &Ctx, p: &QParams) -> Result<Outcome> {
    let mut rng = ctx.rng("identity.eigen_residuals");
    let mut worst = 0.0f64;
    for g in generic_gammas(&mut rng, 20, p) {
        for x in grid15() {
            for r in [
                eigen_residual(|y| Ok(eig_psi(g, y, p, false)?.value), g, x, p)?,
                eigen_residual(|y| Ok(eig_psi(g, y, p, true)?.value), g, x, p)?,
                eigen_residual(|y| Ok(eig_phi(g, y, p)?.value), g, x, p)?,
                eigen_residual(|y| Ok(eig_phi_pm(g, y, p, Side::Plus)?.value), g, x, p)?,
                eigen_residual(|y| Ok(eig_phi_pm(g, y, p, Side::Minus)?.value), g, x, p)?,
            ] {
                worst = worst.max(r);
            }
        }
    }
    measured(
        worst,
        "|L f - (gamma-1) f| / max(1, |f|), k = -7..7 alternating branches",
    )
}

fn halfline_boundary(ctx: &Ctx, p: &QParams) -> Result<Outcome> {
    let hl = &ctx.cfg.halfline;
    let mut rng = ctx.rng("identity.halfline_boundary");
    let mut worst = 0.0f64;
    for g in generic_gammas(&mut rng, 20, p) {
        let psi = |k: u32| Ok(halfline_psi(g, k, hl)?.value);
        let r = apply_l_halfline(psi, 0, hl)? - (g - 1.0) * psi(0)?;
        worst = worst.max(r.norm() / psi(0)?.norm().max(1.0));
    }
    measured(worst, "20 gamma")
}

/// The solution pairs whose Casorati determinants have closed forms.
struct Pairs<'p> {
    g: C64,
    p: &'p QParams,
}

impl Pairs<'_> {
    fn psi(&self, x: GridPoint, dagger: bool) -> Result<C64> {
        Ok(eig_psi(self.g, x, self.p, dagger)?.value)
    }
    fn phi_pm(&self, x: GridPoint, s: Side) -> Result<C64> {
        Ok(eig_phi_pm(self.g, x, self.p, s)?.value)
    }
    fn big_phi(&self, x: GridPoint) -> Result<C64> {
        Ok(eig_phi(self.g, x, self.p)?.value)
    }

    /// D(ψ, φ⁺), D(ψ†, φ⁺), D(ψ†, ψ), D(φ⁺, φ⁻), D(ψ, Φ) at x.
    fn all(&self, x: GridPoint) -> Result<[C64; 5]> {
        let p = self.p;
        Ok([
            casorati(|y| self.psi(y, false), |y| self.phi_pm(y, Side::Plus), x, p)?,
            casorati(|y| self.psi(y, true), |y| self.phi_pm(y, Side::Plus), x, p)?,
            casorati(|y| self.psi(y, true), |y| self.psi(y, false), x, p)?,
            casorati(|y| self.phi_pm(y, Side::Plus), |y| self.phi_pm(y, Side::Minus), x, p)?,
            casorati(|y| self.psi(y, false), |y| self.big_phi(y), x, p)?,
        ])
    }

    fn closed(&self) -> Result<[C64; 5]> {
        let (p, g) = (self.p, self.g);
        let (q, cc, dd, zp) = (p.q, p.c, p.d, p.z_plus);
        let mq = 1.0 - q.value();
        let pg = poch_infinite(g * q.value(), q, DEFAULT_TOL)?.value;
        let th = |xs: &[C64]| Ok::<C64, QError>(theta_prod(xs, q, DEFAULT_TOL)?.value);
        Ok([
            -(mq / cc) * pg * th(&[dd * zp, cc * g * zp])?,
            -(mq / dd) * pg * th(&[cc * zp, dd * g * zp])?,
            -(mq / dd) * pg * th(&[dd / cc])?,
            casorati_d(g, p)?,
            -mq / cc,
        ])
    }
}

/// Constancy window per pair, in the order of `Pairs::all`. A pair that is
/// dominant at one end cancels there: as eps·q^{−k(k+1)} for large |x| and
/// as q^{−k} times the evaluation error near 0. (φ⁺, φ⁻) is resolved on the
/// full window.
const CASORATI_K: [(i32, i32); 5] = [(-1, 7), (-1, 7), (-2, 10), (-10, 10), (-10, 5)];

fn casorati_constancy(ctx: &Ctx, p: &QParams) -> Result<Outcome> {
    let mut rng = ctx.rng("identity.casorati_constancy");
    let mut worst = 0.0f64;
    for g in gammas_up_to(&mut rng, 10, 2.0, p) {
        let pairs = Pairs { g, p };
        let reference = pairs.all(GridPoint::plus(0))?;
        for k in -10..=10 {
            for br in Branch::BOTH {
                let v = pairs.all(GridPoint::new(br, k))?;
                for (i, &(lo, hi)) in CASORATI_K.iter().enumerate() {
                    if (lo..=hi).contains(&k) {
                        worst = worst.max(rel(v[i], reference[i]));
                    }
                }
            }
        }
        let hl = &ctx.cfg.halfline;
        let phi = |k: u32| Ok(halfline_family(g, k, hl)?.phi);
        let psi = |k: u32| Ok(halfline_psi(g, k, hl)?.value);
        let r0 = casorati_halfline(phi, psi, 1, hl)?;
        for k in 2..=10 {
            worst = worst.max(rel(casorati_halfline(phi, psi, k, hl)?, r0));
        }
    }
    let windows: Vec<String> = CASORATI_K.iter().map(|(a, b)| format!("[{a}, {b}]")).collect();
    measured(
        worst,
        format!(
            "10 gamma with |gamma| <= 2, k windows {} on both branches, half-line k in [1, 10]",
            windows.join(" ")
        ),
    )
}

fn casorati_closed_forms(ctx: &Ctx, p: &QParams) -> Result<Outcome> {
    let mut rng = ctx.rng("identity.casorati_closed_forms");
    let hl = &ctx.cfg.halfline;
    let mut worst = 0.0f64;
    for g in generic_gammas(&mut rng, 20, p) {
        let pairs = Pairs { g, p };
        let got = pairs.all(GridPoint::plus(1))?;
        let want = pairs.closed()?;
        for i in 0..5 {
            worst = worst.max(rel(got[i], want[i]));
        }
        let phi = |k: u32| Ok(halfline_family(g, k, hl)?.phi);
        let psi = |k: u32| Ok(halfline_psi(g, k, hl)?.value);
        worst = worst.max(rel(casorati_halfline(phi, psi, 1, hl)?, halfline_d_tilde(g, hl)?));
    }
    measured(worst, "20 gamma at x = z+ q")
}

fn degeneration(_: &Ctx, p: &QParams) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for n in 0..=3 {
        let g = c(p.q.pow(-n - 1));
        for x in grid15() {
            let a = p.d.powi(n) * eig_psi(g, x, p, false)?.value;
            let b = p.c.powi(n) * eig_psi(g, x, p, true)?.value;
            worst = worst.max((a - b).norm() / a.norm().max(1.0));
            for side in [Side::Plus, Side::Minus] {
                let e = phi_pm_expansion(g, x, p, side)?;
                worst = worst.max(e.value.norm() / e.scale.max(1.0));
            }
        }
    }
    measured(worst, "phi+- measured against the magnitude of the cancelling terms")
}

fn c_dagger_zero(ctx: &Ctx, _: &QParams) -> Result<Outcome> {
    let hl = &ctx.cfg.halfline;
    let mut worst = 0.0f64;
    for n in 0..=3 {
        worst = worst.max(halfline_c_dagger(c(hl.q.pow(n)), hl)?.norm());
    }
    measured(worst, "n = 0..3")
}

// ---- orthogonality ----

fn family(label: &str, f: char) -> bool {
    label.starts_with(f)
}

fn block(r: &GramReport, a: char, b: char) -> Outcome {
    Outcome::Measured {
        residual: r.block_max_rel(|l| family(l, a), |l| family(l, b)),
        details: format!("{}x{} Gram matrix", r.labels.len(), r.labels.len()),
    }
}

fn diag(r: &GramReport, f: char) -> Outcome {
    let mut worst = 0.0f64;
    for (i, l) in r.labels.iter().enumerate() {
        if family(l, f) {
            worst = worst.max(rel(r.matrix[i][i], r.closed_form_diagonal[i]));
        }
    }
    Outcome::Measured {
        residual: worst,
        details: format!("max relative diagonal error over {f}"),
    }
}

fn halfline_weight_integral(ctx: &Ctx, _: &QParams) -> Result<Outcome> {
    let hl: &HalfLineParams = &ctx.cfg.halfline;
    let j = jackson_integral_halfline(|k| Ok(c(qorth::specialfn::halfline_weight(k, hl)?)), hl, 1e-16)?;
    let q = hl.q;
    let want = (1.0 - q.value()) * poch_infinite(c(q.value()), q, DEFAULT_TOL)?.value / hl.c;
    measured(rel(j.value, want), format!("{} vs {}", j.value, want))
}

// ---- spectral ----

fn residues(_: &Ctx, p: &QParams) -> Result<Outcome> {
    let mut pts: Vec<SpectralPoint> = (0..=4).map(|n| SpectralPoint::poly(n, p)).collect();
    pts.extend((-3..=3).map(|n| SpectralPoint::aux(n, p)));
    let mut worst = 0.0f64;
    for sp in pts {
        let closed = residue_inv_d(sp, p)?;
        let num = residue_inv_d_numeric(sp, p, 1e-5, 1e-6)?;
        worst = worst.max(rel(num, closed));
    }
    measured(worst, "steps 1e-5, 1e-6 with one Richardson step")
}

fn delta(ctx: &Ctx) -> Result<GridFunction> {
    let mut f = GridFunction::zeros(ctx.cfg.parseval_window.clone());
    f.set(GridPoint::plus(3), c(1.0))?;
    Ok(f)
}

fn parseval_delta(ctx: &Ctx, p: &QParams) -> Result<Outcome> {
    let r = spectral_reconstruct(&delta(ctx)?, Truncation::new(12, 10), p, Side::Plus, 1e-12)?;
    measured(r.parseval_defect, format!("{} spectral points", r.points.len()))
}

fn non_density(ctx: &Ctx, p: &QParams) -> Result<Outcome> {
    let r = spectral_reconstruct(&delta(ctx)?, Truncation::poly_only(12), p, Side::Plus, 1e-12)?;
    measured(
        1.0 - r.parseval_defect,
        format!("P-only Parseval defect {:.4}", r.parseval_defect),
    )
}

fn basis_reconstruction(ctx: &Ctx, p: &QParams) -> Result<Outcome> {
    let w = &ctx.cfg.window;
    let mut fs = Vec::new();
    for n in 0..=3 {
        fs.push(GridFunction::from_fn(w.clone(), |x| {
            Ok(poly_p(n, c(point_value(x, p)?), p))
        })?);
    }
    for n in -1..=1 {
        fs.push(GridFunction::from_fn(w.clone(), |x| Ok(func_q(n, x, p)?.value))?);
    }
    let mut worst = 0.0f64;
    for f in &fs {
        let r = spectral_reconstruct(f, Truncation::new(4, 2), p, Side::Plus, 1e-12)?;
        worst = worst.max(weighted_sup_error(&r.reconstruction, f, p, 1e-12)?);
    }
    measured(worst, "max sqrt(mu)|rec - f| / ||f||, truncation (4, 2)")
}

fn resolvent(_: &Ctx, p: &QParams) -> Result<Outcome> {
    let mut f = GridFunction::zeros(qorth::qgrid::GridWindow::symmetric(-3, 5)?);
    f.set(GridPoint::plus(0), c(1.0))?;
    f.set(GridPoint::minus(2), C64::new(-0.5, 0.25))?;
    f.set(GridPoint::plus(4), C64::new(0.0, 2.0))?;
    let mut worst = 0.0f64;
    for g in [C64::new(0.37, 0.21), C64::new(1.7, -0.4), C64::new(-0.9, 0.6)] {
        worst = worst.max(resolvent_residual(&f, g, p)?);
    }
    measured(worst, "3-point source on k in [-3, 5]")
}

fn spectral_eigenfunctions(ctx: &Ctx, p: &QParams) -> Result<Outcome> {
    let r = spectrum_report(&ctx.cfg.window, p, false)?;
    let worst = r.eigen_residuals.iter().copied().fold(0.0, f64::max);
    measured(
        worst,
        format!("{} spectral points over the window interior", r.tested_points.len()),
    )
}

// ---- asymptotics ----

fn weight_asymptotic(p: &QParams, k: i32) -> Result<Outcome> {
    let q = p.q;
    let mut worst = 0.0f64;
    for br in Branch::BOTH {
        let z = p.z(br);
        let w = weight_w(GridPoint::new(br, k), p)?.value;
        let th = theta_prod(&[p.c * z, p.d * z], q, DEFAULT_TOL)?.value;
        let lead = (p.c * p.d * z * z).powi(k) * q.pow(k * (k - 1));
        worst = worst.max((w * th / lead - 1.0).norm());
    }
    measured(worst, format!("k = {k}"))
}

fn phi_asymptotic(p: &QParams, k: i32) -> Result<Outcome> {
    let q = p.q;
    let z = p.z_plus;
    let mut worst = 0.0f64;
    for g in [C64::new(0.37, 0.21), C64::new(1.7, -0.4)] {
        let phi = eig_phi(g, GridPoint::plus(k), p)?.value;
        let norm = theta(p.c * g * z, q, DEFAULT_TOL)?.value / (theta(p.c * z, q, DEFAULT_TOL)?.value * g.powi(k));
        worst = worst.max((phi * norm - 1.0).norm());
    }
    measured(worst, format!("k = {k}, gamma in {{0.37+0.21i, 1.7-0.4i}}"))
}
