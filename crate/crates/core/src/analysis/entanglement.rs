use rayon::prelude::*;

use crate::channels::{ad2_coefficients, DensityMatrix, SignedKrausSet, TwoQubitAdParams};
use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, eigvals_hermitian, kron, partial_transpose, re, ComplexMatrix, ComplexVector,
    C64, JACOBI_TOL,
};

use super::pdc_kraus;

/// Smallest eigenvalue of the partial transpose on the second factor.
pub fn min_partial_transpose_eigenvalue(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<f64> {
    let pt = partial_transpose(m, dim_a, dim_b)?;
    Ok(eig_hermitian(&pt, JACOBI_TOL)?.min_value())
}

/// Peres test: partial transpose has no eigenvalue below `-tol`.
pub fn is_ppt(m: &ComplexMatrix, dim_a: usize, dim_b: usize, tol: f64) -> Result<bool> {
    Ok(min_partial_transpose_eigenvalue(m, dim_a, dim_b)? >= -tol)
}

/// Eigenvalues of `rho` at or below this are treated as zero.
const RANK_CUTOFF: f64 = 1e-14;

pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    concurrence_matrix(rho.mat())
}

/// Wootters concurrence of a two-qubit operator.
///
/// With `rho = W W^dag`, the square roots of the eigenvalues of
/// `rho (sy x sy) rho* (sy x sy)` are the singular values of
/// `tau = W^T (sy x sy) W`. Those come from the Hermitian dilation of `tau`,
/// which avoids the matrix square root.
pub fn concurrence_matrix(rho: &ComplexMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let eig = eig_hermitian(rho, JACOBI_TOL)?;
    let w: Vec<ComplexVector> = eig
        .values
        .iter()
        .zip(&eig.vectors)
        .filter(|(p, _)| **p > RANK_CUTOFF)
        .map(|(p, v)| v.scale(re(p.sqrt())))
        .collect();
    let k = w.len();
    if k == 0 {
        return Ok(0.0);
    }
    // sy x sy flips |ab> to |(1-a)(1-b)> with sign -1 on |00>,|11> and +1 on |01>,|10>
    let yflip = |v: &ComplexVector| -> ComplexVector {
        ComplexVector::new(vec![-v[3], v[2], v[1], -v[0]])
    };
    let mut dil = ComplexMatrix::zeros(2 * k);
    for i in 0..k {
        for j in 0..k {
            let yw = yflip(&w[j]);
            let tau: C64 = (0..4).map(|a| w[i][a] * yw[a]).sum();
            dil[(i, k + j)] = tau;
            dil[(k + j, i)] = tau.conj();
        }
    }
    let mut sv: Vec<f64> = eigvals_hermitian(&dil, JACOBI_TOL)?
        .into_iter()
        .take(k)
        .map(|s| s.max(0.0))
        .collect();
    sv.resize(4, 0.0);
    Ok((sv[0] - sv[1] - sv[2] - sv[3]).max(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntanglementPoint {
    pub t: f64,
    pub concurrence: f64,
    /// The `(e, g)` coherence factor surviving in the reduced state.
    pub coherence: C64,
}

/// Sends the first half of `(|e,e> + |g,g>)/sqrt 2` through the dephasing
/// sub-channel at `params.t` and returns the concurrence of the output
/// restricted to `span{|e,e>, |g,g>}`, read as a two-qubit state on
/// `{|00>, |11>}`.
pub fn pdc_concurrence_at(params: &TwoQubitAdParams) -> Result<EntanglementPoint> {
    let c = ad2_coefficients(params)?;
    let ks = pdc_kraus(&c)?;
    let id = ComplexMatrix::identity(4);
    let ext = SignedKrausSet::new(
        16,
        ks.positive().iter().map(|k| kron(k, &id)).collect(),
        ks.negative().iter().map(|k| kron(k, &id)).collect(),
    )?;
    let mut psi = ComplexVector::zeros(16);
    psi[0] = re(std::f64::consts::FRAC_1_SQRT_2);
    psi[15] = re(std::f64::consts::FRAC_1_SQRT_2);
    let out = ext.apply(&psi.projector())?;
    let mut reduced = ComplexMatrix::zeros(4);
    reduced[(0, 0)] = out[(0, 0)];
    reduced[(0, 3)] = out[(0, 15)];
    reduced[(3, 0)] = out[(15, 0)];
    reduced[(3, 3)] = out[(15, 15)];
    Ok(EntanglementPoint {
        t: params.t,
        concurrence: concurrence_matrix(&reduced)?,
        coherence: out[(0, 15)] * 2.0,
    })
}

/// [`pdc_concurrence_at`] on `t = tmax * i / (steps - 1)`, computed in
/// parallel and returned in ascending `t`.
pub fn pdc_entanglement_trace(
    params: &TwoQubitAdParams,
    tmax: f64,
    steps: usize,
) -> Result<Vec<EntanglementPoint>> {
    if steps < 2 {
        return Err(Error::InvalidParameter(format!("steps = {steps} must be at least 2")));
    }
    if tmax.is_nan() || tmax <= 0.0 {
        return Err(Error::InvalidParameter(format!("tmax = {tmax} must be positive")));
    }
    (0..steps)
        .into_par_iter()
        .map(|i| pdc_concurrence_at(&params.at_time(tmax * i as f64 / (steps - 1) as f64)?))
        .collect()
}
