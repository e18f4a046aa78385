//! The lattices ℝ_q = z₋q^ℤ ∪ z₊q^ℤ and I_q = (1/c)q^{−ℕ}, Jackson
//! integration, the q-difference operator L and Casorati determinants.

mod lattice;
mod operator;
mod params;

pub use lattice::{
    inner_product, inner_product_halfline, jackson_integral, jackson_integral_halfline, ln_weight, ln_weight_halfline,
    point_value, Branch, GridFunction, GridPoint, GridWindow, HalfLineFunction, HalfLinePoint,
};
pub use operator::{
    apply_l, apply_l_halfline, casorati, casorati_halfline, coeff_a, coeff_b, detailed_balance_defect, q_derivative,
    symmetry_defect, truncated_l_pairing, v_factor, v_factor_halfline,
};
pub use params::{HalfLineParams, QParams, Regime, DEFAULT_K_CAP, DEFAULT_WINDOW};

#[cfg(test)]
mod tests;
