//! Single-qubit generalized amplitude damping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pauli_z, re, unfold, ComplexMatrix};

use super::SignedKrausSet;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GadParams {
    /// Mixing probability.
    pub p: f64,
    /// Damping strength.
    pub lam: f64,
}

impl GadParams {
    pub fn new(p: f64, lam: f64) -> Result<Self> {
        let params = Self { p, lam };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("lam", self.lam)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// The four standard trace-preserving operators; the negative list is empty.
///
/// The `p` branch damps `|1> -> |0>` and the `1 - p` branch pumps `|0> -> |1>`.
pub fn gad_kraus(params: &GadParams) -> SignedKrausSet {
    gad_family(params, false)
}

/// The same four operators with the two jump operators exchanged between the
/// `p` and `1 - p` branches. Trace preserving only at `p = 1/2`; its Choi
/// matrix is the one the fixed split of [`gad_split`] decomposes.
pub fn gad_kraus_swapped_jumps(params: &GadParams) -> SignedKrausSet {
    gad_family(params, true)
}

fn gad_family(params: &GadParams, swapped: bool) -> SignedKrausSet {
    let GadParams { p, lam } = *params;
    let sp = p.sqrt();
    let sq = (1.0 - p).sqrt();
    let s = (1.0 - lam).sqrt();
    let (down, up) = if swapped { ((1, 0), (0, 1)) } else { ((0, 1), (1, 0)) };
    let k1 = ComplexMatrix::from_real_diag(&[sp, sp * s]);
    let mut k2 = ComplexMatrix::zeros(2);
    k2[down] = re(sp * lam.sqrt());
    let k3 = ComplexMatrix::from_real_diag(&[sq * s, sq]);
    let mut k4 = ComplexMatrix::zeros(2);
    k4[up] = re(sq * lam.sqrt());
    SignedKrausSet::from_positive(2, vec![k1, k2, k3, k4]).expect("2x2 operators")
}

/// Closed-form Choi matrix of [`gad_kraus`].
pub fn gad_choi_matrix(params: &GadParams) -> ComplexMatrix {
    let GadParams { p, lam } = *params;
    let s = (1.0 - lam).sqrt();
    let mut b = ComplexMatrix::from_real_diag(&[1.0 - lam + p * lam, (1.0 - p) * lam, p * lam, 1.0 - p * lam]);
    b[(0, 3)] = re(s);
    b[(3, 0)] = re(s);
    b
}

/// Fixed split `(B+, B-)` with `B-` the corner block `[[s/2, -s/4], [-s/4, s/2]]`,
/// `s = sqrt(1 - lam)`, and `B+` the diagonal
/// `(1 - lam + p lam + s/2, p lam, (1 - p) lam, 1 - p lam + s/2)` with corners `3s/4`.
/// `B+ - B-` is the Choi matrix of [`gad_kraus_swapped_jumps`].
pub fn gad_split(params: &GadParams) -> (ComplexMatrix, ComplexMatrix) {
    let GadParams { p, lam } = *params;
    let s = (1.0 - lam).sqrt();
    let mut minus = ComplexMatrix::zeros(4);
    minus[(0, 0)] = re(s / 2.0);
    minus[(3, 3)] = re(s / 2.0);
    minus[(0, 3)] = re(-s / 4.0);
    minus[(3, 0)] = re(-s / 4.0);
    let mut plus = ComplexMatrix::from_real_diag(&[
        1.0 - lam + p * lam + s / 2.0,
        p * lam,
        (1.0 - p) * lam,
        1.0 - p * lam + s / 2.0,
    ]);
    plus[(0, 3)] = re(3.0 * s / 4.0);
    plus[(3, 0)] = re(3.0 * s / 4.0);
    (plus, minus)
}

/// Closed-form signed operators for the split of [`gad_split`]: four
/// positive, two negative. Kept verbatim as a regression reference; see the
/// tests for how they compare with the split they are meant to fold.
///
/// The positive pair divides by `sqrt(1 - lam)`, so `lam = 1` is rejected.
pub fn gad_split_kraus(params: &GadParams) -> Result<SignedKrausSet> {
    params.validate()?;
    let GadParams { p, lam } = *params;
    if lam >= 1.0 {
        return Err(Error::InvalidParameter(
            "split operators are undefined at lam = 1".into(),
        ));
    }
    let s = (1.0 - lam).sqrt();
    let a = 9.0 * (1.0 - lam) + 4.0 * lam * lam * (1.0 - 2.0 * p).powi(2);
    let sa = a.sqrt();
    let diag_op = |sign: f64| {
        let pref = (4.0 + 2.0 * s - 2.0 * lam + sign * sa).sqrt() / 2.0;
        let top = -(2.0 * lam * (1.0 - 2.0 * p) - sign * sa) / (3.0 * s);
        ComplexMatrix::from_real_diag(&[pref * top, pref])
    };
    let mut k3 = ComplexMatrix::zeros(2);
    k3[(0, 1)] = re(((1.0 - p) * lam).sqrt());
    let mut k4 = ComplexMatrix::zeros(2);
    k4[(1, 0)] = re((p * lam).sqrt());
    let q = (1.0 - lam).powf(0.25);
    let m1 = ComplexMatrix::identity(2).scale_real(q / 2.0);
    let m2 = pauli_z().scale_real(3f64.sqrt() * q / 2.0);
    SignedKrausSet::new(2, vec![diag_op(-1.0), diag_op(1.0), k3, k4], vec![m1, m2])
}

/// Numeric comparison of [`gad_split_kraus`] with the split it should fold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GadSplitDiscrepancy {
    /// Least-squares `k` in `sum |K-><K-| ~ k B-`.
    pub negative_scale: f64,
    pub negative_residual: f64,
    /// `|| sum |K-><K-| - 2 B- ||_max`.
    pub negative_residual_doubled: f64,
    pub positive_residual: f64,
    /// Same, after rescaling the two diagonal operators to unit eigenvectors.
    pub positive_residual_normalized: f64,
    /// Completeness residual of the closed-form signed set.
    pub completeness_residual: f64,
}

fn outer_sum(ops: &[ComplexMatrix]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(4);
    for k in ops {
        acc += &unfold(k).projector();
    }
    acc
}

pub fn gad_split_discrepancy(params: &GadParams) -> Result<GadSplitDiscrepancy> {
    let ks = gad_split_kraus(params)?;
    let (plus, minus) = gad_split(params);
    let neg = outer_sum(ks.negative());
    let dot = |x: &ComplexMatrix, y: &ComplexMatrix| -> f64 {
        x.data().iter().zip(y.data()).map(|(a, b)| (a.conj() * b).re).sum()
    };
    let negative_scale = dot(&minus, &neg) / dot(&minus, &minus);
    let pos = ks.positive();
    let eigen_of = |k: &ComplexMatrix| {
        // pref^2 with the operator pref * diag(v0, 1)
        let pref = k[(1, 1)].re;
        k.scale_real(pref / k.frobenius_norm())
    };
    let mut normalized = pos.to_vec();
    normalized[0] = eigen_of(&pos[0]);
    normalized[1] = eigen_of(&pos[1]);
    Ok(GadSplitDiscrepancy {
        negative_scale,
        negative_residual: neg.max_abs_diff(&minus),
        negative_residual_doubled: neg.max_abs_diff(&minus.scale_real(2.0)),
        positive_residual: outer_sum(pos).max_abs_diff(&plus),
        positive_residual_normalized: outer_sum(&normalized).max_abs_diff(&plus),
        completeness_residual: ks.completeness_residual(),
    })
}
