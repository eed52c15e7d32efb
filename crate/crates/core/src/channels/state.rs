use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, ComplexVector, JACOBI_TOL};

/// Hermiticity tolerance for states.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue still accepted as positive semidefinite.
pub const PSD_SLACK: f64 = 1e-10;

/// A validated density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(mat, HERMITIAN_TOL, TRACE_TOL)
    }

    /// Validates with the given Hermiticity and trace tolerances; the PSD slack
    /// is the larger of `PSD_SLACK` and `trace_tol`.
    pub fn with_tolerance(mat: ComplexMatrix, herm_tol: f64, trace_tol: f64) -> Result<Self> {
        let dev = mat.hermitian_deviation();
        if dev > herm_tol {
            return Err(Error::NotHermitian(dev));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > trace_tol || tr.im.abs() > trace_tol {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = eig_hermitian(&mat, JACOBI_TOL.max(herm_tol))?.min_value();
        if min < -PSD_SLACK.max(trace_tol) {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { mat })
    }

    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    /// `|psi><psi|` for a normalized `psi`.
    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        Self::new(psi.projector())
    }

    /// Computational basis projector `|i><i|`.
    pub fn basis(dim: usize, i: usize) -> Self {
        Self {
            mat: ComplexMatrix::unit(dim, i, i),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    #[inline]
    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.mat
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.mat
    }
}
