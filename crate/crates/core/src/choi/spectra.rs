use crate::channels::TwoQubitAdCoeffs;
use crate::error::Result;
use crate::linalg::{eigvals_hermitian, ComplexMatrix, JACOBI_TOL};

use super::partition::ad2_symbol_entries;
use super::choi_2ad;

/// Jacobi spectrum of one partition element against its closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumCheck {
    pub label: String,
    /// Closed-form eigenvalues, descending.
    pub expected: Vec<f64>,
    /// Jacobi eigenvalues, descending.
    pub computed: Vec<f64>,
    pub max_error: f64,
}

impl SpectrumCheck {
    fn new(label: &str, mut expected: Vec<f64>, computed: Vec<f64>) -> Self {
        expected.sort_by(|a, b| b.total_cmp(a));
        let max_error = expected
            .iter()
            .zip(&computed)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        Self {
            label: label.to_string(),
            expected,
            computed,
            max_error,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectraReport {
    pub diag: SpectrumCheck,
    pub pairs: Vec<SpectrumCheck>,
}

impl SpectraReport {
    pub fn max_pair_error(&self) -> f64 {
        self.pairs.iter().map(|p| p.max_error).fold(0.0, f64::max)
    }

    pub fn passed(&self, diag_tol: f64, pair_tol: f64) -> bool {
        self.diag.max_error <= diag_tol && self.max_pair_error() <= pair_tol
    }
}

/// Compares Jacobi spectra of the diagonal block and of every symbolic
/// coherence element with their closed forms: the nine populations plus
/// seven zeros, and `+-|z|` plus fourteen zeros.
pub fn charpoly_checks(c: &TwoQubitAdCoeffs) -> Result<SpectraReport> {
    let b = choi_2ad(c);
    let diag_block = b.mat().diagonal_part();
    let mut expected = vec![c.a, c.c, c.e, c.h, c.b, c.f, c.d, c.g, 1.0];
    expected.extend([0.0; 7]);
    let diag = SpectrumCheck::new("diag", expected, eigvals_hermitian(&diag_block, JACOBI_TOL)?);

    let mut pairs = Vec::new();
    for (name, (r, col), z) in ad2_symbol_entries(c) {
        let mut m = ComplexMatrix::zeros(16);
        m[(r, col)] = z;
        m[(col, r)] = z.conj();
        let mut expected = vec![z.norm(), -z.norm()];
        expected.extend([0.0; 14]);
        pairs.push(SpectrumCheck::new(name, expected, eigvals_hermitian(&m, JACOBI_TOL)?));
    }
    Ok(SpectraReport { diag, pairs })
}
