//! States, signed Kraus sets and the concrete damping channels.

pub mod ad2;
pub mod gad;
mod kraus;
mod state;

pub use ad2::{
    ad2_apply, ad2_apply_matrix, ad2_coefficients, ad2_phases, Ad2Phases, TwoQubitAdCoeffs,
    TwoQubitAdParams,
};
pub use gad::{gad_choi_matrix, gad_kraus, gad_kraus_swapped_jumps, gad_split, gad_split_discrepancy, gad_split_kraus, GadParams, GadSplitDiscrepancy};
pub use kraus::{apply_signed_kraus, check_completeness, CompletenessCheck, SignedKrausSet};
pub use state::{DensityMatrix, HERMITIAN_TOL, PSD_SLACK, TRACE_TOL};
