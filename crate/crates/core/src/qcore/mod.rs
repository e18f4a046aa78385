//! q-shifted factorials, theta functions and the basic hypergeometric series
//! used throughout the crate.
//!
//! Conventions: (a;q)_n = ∏_{k<n}(1 − aq^k), θ(x;q) = (x;q)_∞(q/x;q)_∞, and the
//! generic ᵣφₛ normalisation, so that ₂φ₀ carries (−1)^k q^{−k(k−1)/2} and ₁φ₁
//! carries (−1)^k q^{k(k−1)/2}.

mod base;
mod poch;
mod series;
mod transform;

pub use base::{inv_scaled, LogValue, QBase, SeriesValue};
pub use poch::{ln_poch_infinite, poch_finite, poch_infinite, theta, theta_prod};
pub use series::{phi11, phi11_regularized, phi20_terminating, phi21};
pub use transform::{
    three_term_swap_defect, verify_limit_transform, verify_terminating_transform, verify_three_term_transform,
    LimitTransform,
};

/// Default truncation tolerance; below binary64 resolution so tails never
/// dominate rounding.
pub const DEFAULT_TOL: f64 = 1e-17;

/// Hard cap on the number of factors or terms any single evaluation may use.
pub const MAX_TERMS: usize = 20_000;

pub(crate) fn check_tol(tol: f64) -> crate::Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(crate::QError::InvalidTolerance(tol))
    }
}
