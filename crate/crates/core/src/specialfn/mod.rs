//! Named functions of the bilateral and half-line problems: weights, the
//! Al-Salam–Carlitz II polynomials, the complementary functions Q_n,
//! eigenfunctions of L, c-functions, Casorati closed forms and residues.

mod eigen;
mod halfline;
mod poly;
mod spoint;
mod weight;

pub use eigen::better_of;
pub use eigen::{
    c_functions, eig_phi, eig_phi_2phi1, eig_phi_pm, eig_psi, phi_pm_expansion, phi_pm_recessive, CFunctionSet, Side,
};
pub use halfline::{
    halfline_c, halfline_c_dagger, halfline_d_tilde, halfline_family, halfline_phi, halfline_phi_recessive,
    halfline_psi, halfline_psi_1phi1, halfline_psi_dagger, halfline_weight, HalfLineRecord,
};
pub use poly::{func_q, func_q_display, func_q_expansion, poly_p, poly_v};
pub use spoint::{
    casorati_d, norm_factor, residue_inv_d, residue_inv_d_numeric, spectral_d_factor, spectral_eigenfunction, Family,
    SpectralPoint,
};
pub use weight::{beta_constant, big_b, weight_w};

use crate::qgrid::{point_value, GridPoint, QParams};
use crate::Result;

/// Anything that names a real abscissa: a lattice point or a raw coordinate.
pub trait Abscissa: Copy {
    fn coord(self, params: &QParams) -> Result<f64>;
}

impl Abscissa for GridPoint {
    fn coord(self, params: &QParams) -> Result<f64> {
        point_value(self, params)
    }
}

impl Abscissa for f64 {
    fn coord(self, _: &QParams) -> Result<f64> {
        Ok(self)
    }
}

/// Fails fast when a denominator factor is within rounding of zero.
pub(crate) fn guard_nonzero(v: &crate::qcore::SeriesValue, factor: &str) -> Result<()> {
    if v.value.norm() <= 1e-12 * v.scale.max(f64::MIN_POSITIVE) || v.value.norm() == 0.0 {
        return Err(crate::QError::PoleProximity {
            factor: factor.to_string(),
            magnitude: v.value.norm(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests;
