//! Population and dephasing sub-channels of two-qubit damping, and
//! entanglement diagnostics for channels and two-qubit states.

mod breaking;
mod entanglement;
mod subchannels;

pub use breaking::{
    eb_report, holevo_point_form, qc_form_test, ChannelReport, HolevoForm, QcTest,
};
pub use entanglement::{
    concurrence, concurrence_matrix, is_ppt, min_partial_transpose_eigenvalue,
    pdc_concurrence_at, pdc_entanglement_trace, EntanglementPoint,
};
pub use subchannels::{dephasing_reference, mdc_kraus, pdc_kraus, MDC_LABELS};
