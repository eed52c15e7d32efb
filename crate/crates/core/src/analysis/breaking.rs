use crate::channels::DensityMatrix;
use crate::channels::SignedKrausSet;
use crate::choi::ChoiMatrix;
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, re, ComplexMatrix, JACOBI_TOL};

use super::min_partial_transpose_eigenvalue;

/// Positivity, trace preservation and entanglement-breaking indicators
/// read off a Choi matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelReport {
    pub is_cp: bool,
    pub min_choi_eigenvalue: f64,
    pub is_trace_preserving: bool,
    /// `|| Tr_out B - I ||_max`.
    pub completeness_residual: f64,
    /// Necessary for entanglement breaking.
    pub ppt_of_choi: bool,
    pub min_partial_transpose_eigenvalue: f64,
    /// Separable Choi matrix established exactly: positive and either
    /// diagonal or of product form `I (x) sigma`.
    pub separable_certified: bool,
    /// Common output state when every input maps to one state.
    pub point_channel: Option<DensityMatrix>,
}

pub fn eb_report(b: &ChoiMatrix, tol: f64) -> Result<ChannelReport> {
    let d = b.sys_dim();
    let min_choi = b.min_eigenvalue()?;
    let is_cp = min_choi >= -tol;
    let completeness_residual = b.trace_preservation_residual();
    let min_pt = min_partial_transpose_eigenvalue(b.mat(), d, d)?;

    let sigma = b.block(0, 0);
    let mut is_point = true;
    'outer: for j in 0..d {
        for k in 0..d {
            let want = if j == k { sigma.clone() } else { ComplexMatrix::zeros(d) };
            if b.block(j, k).max_abs_diff(&want) > tol {
                is_point = false;
                break 'outer;
            }
        }
    }
    let point_channel = if is_point {
        DensityMatrix::with_tolerance(sigma, tol, tol).ok()
    } else {
        None
    };
    let separable_certified = is_cp && (b.mat().is_diagonal(tol) || point_channel.is_some());

    Ok(ChannelReport {
        is_cp,
        min_choi_eigenvalue: min_choi,
        is_trace_preserving: completeness_residual <= tol,
        completeness_residual,
        ppt_of_choi: min_pt >= -tol,
        min_partial_transpose_eigenvalue: min_pt,
        separable_certified,
        point_channel,
    })
}

/// Measure-and-prepare channel `X -> sum_i R_i Tr(F_i X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HolevoForm {
    pub states: Vec<DensityMatrix>,
    pub povm: Vec<ComplexMatrix>,
}

impl HolevoForm {
    /// Checks that the effects are positive and sum to the identity within `1e-10`.
    pub fn new(states: Vec<DensityMatrix>, povm: Vec<ComplexMatrix>) -> Result<Self> {
        if states.len() != povm.len() || povm.is_empty() {
            return Err(Error::Contract(format!(
                "{} states for {} effects",
                states.len(),
                povm.len()
            )));
        }
        let d = povm[0].dim();
        for f in &povm {
            if f.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: f.dim() });
            }
            let min = eig_hermitian(f, JACOBI_TOL)?.min_value();
            if min < -1e-10 {
                return Err(Error::NotPositive(min));
            }
        }
        let form = Self { states, povm };
        let r = form.povm_residual();
        if r > 1e-10 {
            return Err(Error::Contract(format!("effects miss the identity by {r:e}")));
        }
        Ok(form)
    }

    /// `|| sum F_i - I ||_max`.
    pub fn povm_residual(&self) -> f64 {
        let d = self.povm[0].dim();
        let mut sum = ComplexMatrix::zeros(d);
        for f in &self.povm {
            sum += f;
        }
        sum.max_abs_diff(&ComplexMatrix::identity(d))
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.states[0].dim();
        let mut out = ComplexMatrix::zeros(d);
        for (r, f) in self.states.iter().zip(&self.povm) {
            if x.dim() != f.dim() {
                return Err(Error::DimensionMismatch { expected: f.dim(), got: x.dim() });
            }
            let w = f.matmul(x).trace();
            out += &r.mat().scale(w);
        }
        Ok(out)
    }

    /// Kraus operators `sqrt(r_a f_b) |r_a><f_b|` from the spectral
    /// decompositions of each `R_i` and `F_i`.
    pub fn induced_kraus(&self) -> Result<SignedKrausSet> {
        let mut ops = Vec::new();
        let d_in = self.povm[0].dim();
        let d_out = self.states[0].dim();
        if d_in != d_out {
            return Err(Error::DimensionMismatch { expected: d_in, got: d_out });
        }
        for (r, f) in self.states.iter().zip(&self.povm) {
            let er = eig_hermitian(r.mat(), JACOBI_TOL)?;
            let ef = eig_hermitian(f, JACOBI_TOL)?;
            for (ra, va) in er.values.iter().zip(&er.vectors) {
                for (fb, vb) in ef.values.iter().zip(&ef.vectors) {
                    let w = ra * fb;
                    if *ra > 1e-12 && *fb > 1e-12 {
                        ops.push(va.outer(vb).scale(re(w.sqrt())));
                    }
                }
            }
        }
        SignedKrausSet::from_positive(d_in, ops)
    }
}

/// Every input is measured in the computational basis and replaced by the
/// ground state `|g><g|` (index 3).
pub fn holevo_point_form() -> HolevoForm {
    let g = DensityMatrix::basis(4, 3);
    HolevoForm {
        states: vec![g; 4],
        povm: (0..4).map(|i| ComplexMatrix::unit(4, i, i)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QcTest {
    pub is_qc: bool,
    /// Diagonal blocks `G_mm`.
    pub blocks: Vec<ComplexMatrix>,
    pub max_offdiag_block: f64,
    pub min_block_eigenvalue: f64,
}

/// Fixed-basis test of `B = sum_{m,m'} G_{m,m'} (x) |m><m'|` over the output
/// factor: passes when every `G_{m,m'}` with `m != m'` vanishes and every
/// `G_{m,m}` is positive, both within `tol`.
pub fn qc_form_test(b: &ChoiMatrix, tol: f64) -> Result<QcTest> {
    let d = b.sys_dim();
    let m = b.mat();
    let block = |mm: usize, mp: usize| ComplexMatrix::from_fn(d, |j, k| m[(j * d + mm, k * d + mp)]);
    let mut max_off: f64 = 0.0;
    for mm in 0..d {
        for mp in 0..d {
            if mm != mp {
                max_off = max_off.max(block(mm, mp).max_abs());
            }
        }
    }
    let blocks: Vec<ComplexMatrix> = (0..d).map(|mm| block(mm, mm)).collect();
    let mut min_eig = f64::INFINITY;
    for g in &blocks {
        min_eig = min_eig.min(eig_hermitian(g, JACOBI_TOL)?.min_value());
    }
    Ok(QcTest {
        is_qc: max_off <= tol && min_eig >= -tol,
        blocks,
        max_offdiag_block: max_off,
        min_block_eigenvalue: min_eig,
    })
}
