//! Green kernel and resolvent, Gram matrices against closed-form norms,
//! truncated spectral expansions and the truncated-matrix experiment.

mod expansion;
mod gram;
mod green;
mod matrix;

pub use expansion::{spectral_points, spectral_reconstruct, weighted_sup_error, Reconstruction, Truncation};
pub use gram::{gram_halfline, gram_pq, norm_p_closed, norm_q_closed, norm_v_closed, GramReport};
pub use green::{green_kernel, pole_distance, resolvent_apply, resolvent_residual, GreenTable};
pub use matrix::{matrix_spectrum_experiment, scaled_eigen_residual, spectrum_report, SpectrumReport};
