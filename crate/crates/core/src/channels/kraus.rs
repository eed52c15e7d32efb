use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

use super::DensityMatrix;

/// Two operator lists acting as `rho -> sum A+ rho A+^dag - sum A- rho A-^dag`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedKrausSet {
    dim: usize,
    positive: Vec<ComplexMatrix>,
    negative: Vec<ComplexMatrix>,
}

impl SignedKrausSet {
    pub fn new(
        dim: usize,
        positive: Vec<ComplexMatrix>,
        negative: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        for op in positive.iter().chain(&negative) {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: op.dim(),
                });
            }
        }
        Ok(Self {
            dim,
            positive,
            negative,
        })
    }

    /// A conventional Kraus set with no negative terms.
    pub fn from_positive(dim: usize, ops: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(dim, ops, Vec::new())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn positive(&self) -> &[ComplexMatrix] {
        &self.positive
    }

    pub fn negative(&self) -> &[ComplexMatrix] {
        &self.negative
    }

    /// Total operator count `mu + nu`.
    pub fn len(&self) -> usize {
        self.positive.len() + self.negative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Applies the signed action to an arbitrary operator.
    ///
    /// Positive and negative terms are accumulated alternately (`+A+_i`, then
    /// `-A-_i`), so a pair whose contributions cancel leaves the accumulator
    /// bit-for-bit unchanged.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        let mut acc = ComplexMatrix::zeros(self.dim);
        let n = self.positive.len().max(self.negative.len());
        for i in 0..n {
            if let Some(k) = self.positive.get(i) {
                acc += &k.sandwich(x);
            }
            if let Some(k) = self.negative.get(i) {
                acc -= &k.sandwich(x);
            }
        }
        Ok(acc)
    }

    /// `sum A+^dag A+ - sum A-^dag A-`.
    pub fn completeness_operator(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim);
        for k in &self.positive {
            acc += &k.dagger().matmul(k);
        }
        for k in &self.negative {
            acc -= &k.dagger().matmul(k);
        }
        acc
    }

    /// `|| sum A+^dag A+ - sum A-^dag A- - I ||_max`.
    pub fn completeness_residual(&self) -> f64 {
        self.completeness_operator()
            .max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    /// Drops operators whose largest entry is at most `tol`.
    pub fn prune(&self, tol: f64) -> Self {
        let keep = |v: &[ComplexMatrix]| v.iter().filter(|k| k.max_abs() > tol).cloned().collect();
        Self {
            dim: self.dim,
            positive: keep(&self.positive),
            negative: keep(&self.negative),
        }
    }
}

/// Signed action on a state. The result is not revalidated as a density
/// matrix since signed sets need not describe positive maps.
pub fn apply_signed_kraus(rho: &DensityMatrix, ks: &SignedKrausSet) -> Result<ComplexMatrix> {
    ks.apply(rho.mat())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompletenessCheck {
    pub residual: f64,
    pub passed: bool,
}

pub fn check_completeness(ks: &SignedKrausSet, tol: f64) -> CompletenessCheck {
    let residual = ks.completeness_residual();
    CompletenessCheck {
        residual,
        passed: residual <= tol,
    }
}
