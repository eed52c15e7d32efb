use crate::channels::{ad2_apply_matrix, SignedKrausSet, TwoQubitAdCoeffs};
use crate::choi::{extract_labeled, partition_2ad, Ad2Layout, Sign, AD2_DIAG};
use crate::error::Result;
use crate::linalg::{re, ComplexMatrix};

/// Labels of the population operators, in `mdc_kraus` order.
pub const MDC_LABELS: [&str; 9] = ["H", "G", "F", "E", "D", "C", "A", "1", "B"];

/// The nine rank-1 operators `sqrt(x) |out><in|` carrying populations.
///
/// Output is diagonal for every input and the set is trace preserving.
/// Operators with a zero coefficient are kept so the list is fixed-length.
pub fn mdc_kraus(c: &TwoQubitAdCoeffs) -> SignedKrausSet {
    let values = [c.h, c.g, c.f, c.e, c.d, c.c, c.a, 1.0, c.b];
    let ops = AD2_DIAG
        .iter()
        .zip(values)
        .map(|((pos, _), v)| {
            // Choi diagonal position j*4 + a carries |a><j|
            let mut k = ComplexMatrix::zeros(4);
            k[(pos % 4, pos / 4)] = re(v.max(0.0).sqrt());
            k
        })
        .collect();
    SignedKrausSet::from_positive(4, ops).expect("4x4 operators")
}

/// Signed coherence operators followed by the four basis projectors.
///
/// The `k`-th positive and `k`-th negative operators come from the same
/// coherence element, so under [`SignedKrausSet::apply`] their identical
/// diagonal contributions cancel exactly before the projectors add the input
/// populations back.
pub fn pdc_kraus(c: &TwoQubitAdCoeffs) -> Result<SignedKrausSet> {
    let ex = extract_labeled(&partition_2ad(c, Ad2Layout::Symbols))?;
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for op in ex.operators.iter().filter(|o| o.label.ends_with(['+', '-'])) {
        match op.sign {
            Sign::Positive => positive.push(op.op.clone()),
            Sign::Negative => negative.push(op.op.clone()),
        }
    }
    debug_assert_eq!(positive.len(), negative.len());
    positive.extend((0..4).map(|i| ComplexMatrix::unit(4, i, i)));
    SignedKrausSet::new(4, positive, negative)
}

/// Entrywise dephasing map: the input diagonal, with off-diagonal entries as
/// under the full damping action.
pub fn dephasing_reference(x: &ComplexMatrix, c: &TwoQubitAdCoeffs) -> Result<ComplexMatrix> {
    let mut out = ad2_apply_matrix(x, c)?;
    for i in 0..4 {
        out[(i, i)] = x[(i, i)];
    }
    Ok(out)
}
