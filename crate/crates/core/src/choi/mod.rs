//! Choi matrices, Hermitian partitions and signed Kraus extraction.

mod extract;
mod partition;
mod spectra;

pub use extract::{
    extract_labeled, extract_signed_kraus, Extraction, LabeledOperator, Sign, EIGEN_CUTOFF,
};
pub use partition::{
    partition, partition_2ad, partition_diag_pairs, partition_split_real_imag, Ad2Layout,
    HermitianPartition, PartitionStrategy, AD2_DIAG, AD2_PAIRS,
};
pub use spectra::{charpoly_checks, SpectraReport, SpectrumCheck};

use crate::channels::{SignedKrausSet, TwoQubitAdCoeffs};
use crate::error::{Error, Result};
use crate::linalg::{c64, eig_hermitian, fold, re, unfold, ComplexMatrix, ComplexVector, C64, JACOBI_TOL};
use crate::random::{random_matrix, rng_from_seed};

/// Hermiticity tolerance, relative to `max(1, max |B_ij|)`.
pub const CHOI_HERMITIAN_TOL: f64 = 1e-12;

/// `B = sum_jk |j><k| (x) E(|j><k|)`, a `d^2 x d^2` Hermitian matrix.
///
/// Row index `j*d + a` pairs input index `j` with output index `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    mat: ComplexMatrix,
    sys_dim: usize,
}

impl ChoiMatrix {
    pub fn new(mat: ComplexMatrix, sys_dim: usize) -> Result<Self> {
        if mat.dim() != sys_dim * sys_dim {
            return Err(Error::DimensionMismatch {
                expected: sys_dim * sys_dim,
                got: mat.dim(),
            });
        }
        let dev = mat.hermitian_deviation();
        if dev > CHOI_HERMITIAN_TOL * mat.max_abs().max(1.0) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { mat, sys_dim })
    }

    #[inline]
    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    #[inline]
    pub fn sys_dim(&self) -> usize {
        self.sys_dim
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// The output block `E(|j><k|)`.
    pub fn block(&self, j: usize, k: usize) -> ComplexMatrix {
        let d = self.sys_dim;
        ComplexMatrix::from_fn(d, |a, b| self.mat[(j * d + a, k * d + b)])
    }

    /// `E(X) = sum_jk X_jk E(|j><k|)`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.sys_dim;
        if x.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: x.dim(),
            });
        }
        let mut out = ComplexMatrix::zeros(d);
        for j in 0..d {
            for k in 0..d {
                let xjk = x[(j, k)];
                if xjk == C64::new(0.0, 0.0) {
                    continue;
                }
                for a in 0..d {
                    for b in 0..d {
                        out[(a, b)] += xjk * self.mat[(j * d + a, k * d + b)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Trace over the output factor; the identity for trace-preserving maps.
    pub fn output_trace(&self) -> ComplexMatrix {
        let d = self.sys_dim;
        ComplexMatrix::from_fn(d, |j, k| (0..d).map(|a| self.mat[(j * d + a, k * d + a)]).sum())
    }

    /// `|| Tr_out B - I ||_max`, the Choi-side completeness residual.
    pub fn trace_preservation_residual(&self) -> f64 {
        self.output_trace()
            .max_abs_diff(&ComplexMatrix::identity(self.sys_dim))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eig_hermitian(&self.mat, JACOBI_TOL)?.min_value())
    }

    /// Choi matrix of the identity channel.
    pub fn identity(d: usize) -> Self {
        let phi = unfold(&ComplexMatrix::identity(d));
        Self {
            mat: phi.projector(),
            sys_dim: d,
        }
    }
}

/// Builds the Choi matrix of a linear map from its action on matrix units.
///
/// Linearity is probed once on a fixed pair of random operators.
pub fn choi_from_channel<F>(action: F, d: usize) -> Result<ChoiMatrix>
where
    F: Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
{
    let n = d * d;
    let mut mat = ComplexMatrix::zeros(n);
    for j in 0..d {
        for k in 0..d {
            let out = action(&ComplexMatrix::unit(d, j, k))?;
            if out.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: out.dim(),
                });
            }
            for a in 0..d {
                for b in 0..d {
                    mat[(j * d + a, k * d + b)] = out[(a, b)];
                }
            }
        }
    }

    let mut rng = rng_from_seed(0x5eed_c401);
    let x = random_matrix(&mut rng, d);
    let y = random_matrix(&mut rng, d);
    let (alpha, beta) = (c64(0.6, -0.3), c64(-1.1, 0.8));
    let lhs = action(&(&x.scale(alpha) + &y.scale(beta)))?;
    let rhs = &action(&x)?.scale(alpha) + &action(&y)?.scale(beta);
    let dev = lhs.max_abs_diff(&rhs);
    if dev > 1e-10 * rhs.max_abs().max(1.0) {
        return Err(Error::NonLinear(dev));
    }
    ChoiMatrix::new(mat, d)
}

/// Places the two-qubit damping coefficients into the 16x16 Choi matrix.
pub fn choi_2ad(c: &TwoQubitAdCoeffs) -> ChoiMatrix {
    let mut m = ComplexMatrix::zeros(16);
    for (pos, value) in ad2_diag_values(c) {
        m[(pos, pos)] = re(value);
    }
    for ((r, col), z) in ad2_pair_values(c) {
        m[(r, col)] = z;
        m[(col, r)] = z.conj();
    }
    ChoiMatrix { mat: m, sys_dim: 4 }
}

/// Diagonal Choi entries in `AD2_DIAG` order.
pub(crate) fn ad2_diag_values(c: &TwoQubitAdCoeffs) -> [(usize, f64); 9] {
    let v = [c.h, c.g, c.f, c.e, c.d, c.c, c.a, 1.0, c.b];
    let mut out = [(0, 0.0); 9];
    for (i, (pos, _)) in AD2_DIAG.iter().enumerate() {
        out[i] = (*pos, v[i]);
    }
    out
}

/// Upper-triangle coherence entries in `AD2_PAIRS` order.
pub(crate) fn ad2_pair_values(c: &TwoQubitAdCoeffs) -> [((usize, usize), C64); 8] {
    let v = [c.j, c.m, c.l, c.sg_feed(), c.ag_feed(), c.p, c.t, c.q];
    let mut out = [((0, 0), C64::new(0.0, 0.0)); 8];
    for (i, (pos, _)) in AD2_PAIRS.iter().enumerate() {
        out[i] = (*pos, v[i]);
    }
    out
}

/// `sum |A+><A+| - sum |A-><A-|` over unfolded operators.
pub fn reconstruct_choi(ks: &SignedKrausSet) -> ChoiMatrix {
    let d = ks.dim();
    let mut mat = ComplexMatrix::zeros(d * d);
    for k in ks.positive() {
        mat += &unfold(k).projector();
    }
    for k in ks.negative() {
        mat -= &unfold(k).projector();
    }
    ChoiMatrix { mat, sys_dim: d }
}

/// Conventional extraction: one Jacobi decomposition of the whole matrix.
pub fn standard_kraus_from_choi(b: &ChoiMatrix) -> Result<SignedKrausSet> {
    let eig = eig_hermitian(b.mat(), JACOBI_TOL)?;
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for (lam, v) in eig.values.iter().zip(&eig.vectors) {
        if *lam > EIGEN_CUTOFF {
            positive.push(fold_scaled(v, lam.sqrt())?);
        } else if *lam < -EIGEN_CUTOFF {
            negative.push(fold_scaled(v, (-lam).sqrt())?);
        }
    }
    SignedKrausSet::new(b.sys_dim(), positive, negative)
}

/// Rebuilds the Choi matrix of `ks` and re-extracts it spectrally. This
/// collapses redundant signed pairs, e.g. to a single `I` for the identity.
pub fn spectral_cleanup(ks: &SignedKrausSet) -> Result<SignedKrausSet> {
    standard_kraus_from_choi(&reconstruct_choi(ks))
}

pub(crate) fn fold_scaled(v: &ComplexVector, s: f64) -> Result<ComplexMatrix> {
    fold(&v.scale(re(s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{ad2_apply_matrix, ad2_coefficients, gad_kraus, GadParams, TwoQubitAdParams};
    use crate::channels::gad::gad_choi_matrix;
    use crate::random::{random_density, random_hermitian};

    #[test]
    fn identity_choi_has_corner_ones() {
        let b = choi_from_channel(|x| Ok(x.clone()), 2).unwrap();
        let mut want = ComplexMatrix::zeros(4);
        for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            want[(r, c)] = re(1.0);
        }
        assert_eq!(*b.mat(), want);
        assert_eq!(b, ChoiMatrix::identity(2));
    }

    #[test]
    fn gad_choi_closed_form() {
        let params = GadParams::new(0.3, 0.45).unwrap();
        let ks = gad_kraus(&params);
        let b = choi_from_channel(|x| ks.apply(x), 2).unwrap();
        assert!(b.mat().max_abs_diff(&gad_choi_matrix(&params)) < 1e-15);
        assert!(b.trace_preservation_residual() < 1e-15);
    }

    #[test]
    fn nonlinear_map_rejected() {
        let r = choi_from_channel(|x| Ok(x.matmul(x)), 2);
        assert!(matches!(r, Err(Error::NonLinear(_))));
    }

    #[test]
    fn choi_2ad_layout() {
        let c = ad2_coefficients(&TwoQubitAdParams::new(1.0, 0.3, 2.0, 10.0, 0.7).unwrap()).unwrap();
        let b = choi_2ad(&c);
        assert_eq!(b.mat()[(0, 5)], c.j);
        assert_eq!(b.mat()[(1, 7)], c.u + C64::i() * c.v);
        assert_eq!(b.mat()[(11, 2)], -C64::i() * c.s.conj() - c.r.conj());
        assert!((b.trace() - 4.0).abs() < 1e-14);
        let direct = choi_from_channel(|x| ad2_apply_matrix(x, &c), 4).unwrap();
        assert!(direct.mat().max_abs_diff(b.mat()) < 1e-15);
    }

    #[test]
    fn apply_matches_kraus_action() {
        let params = GadParams::new(0.7, 0.2).unwrap();
        let ks = gad_kraus(&params);
        let b = reconstruct_choi(&ks);
        let rho = random_density(&mut rng_from_seed(3), 2);
        assert!(b.apply(rho.mat()).unwrap().max_abs_diff(&ks.apply(rho.mat()).unwrap()) < 1e-15);
    }

    #[test]
    fn standard_kraus_of_identity() {
        let ks = standard_kraus_from_choi(&ChoiMatrix::identity(3)).unwrap();
        assert_eq!(ks.positive().len(), 1);
        assert!(ks.negative().is_empty());
        let op = &ks.positive()[0];
        // unit eigenvector phase is fixed, so the operator is I itself
        assert!(op.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn hermiticity_enforced() {
        let mut rng = rng_from_seed(8);
        assert!(ChoiMatrix::new(random_hermitian(&mut rng, 4), 2).is_ok());
        assert!(ChoiMatrix::new(random_matrix(&mut rng, 4), 2).is_err());
        assert!(ChoiMatrix::new(random_hermitian(&mut rng, 5), 2).is_err());
    }
}
