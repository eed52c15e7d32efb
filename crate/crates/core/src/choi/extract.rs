use rayon::prelude::*;

use crate::channels::SignedKrausSet;
use crate::error::Result;
use crate::linalg::{eig_hermitian, eig_rank2_pair, re, ComplexMatrix, ComplexVector, JACOBI_TOL};

use super::partition::pair_entry;
use super::{fold_scaled, HermitianPartition};

/// Eigenvalues with magnitude at or below this are dropped.
pub const EIGEN_CUTOFF: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledOperator {
    pub label: String,
    pub sign: Sign,
    /// `|lambda|` of the eigenvalue the operator was folded from.
    pub weight: f64,
    pub op: ComplexMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    pub sys_dim: usize,
    pub operators: Vec<LabeledOperator>,
}

impl Extraction {
    /// Positive and negative operators, each list in extraction order.
    pub fn kraus_set(&self) -> SignedKrausSet {
        let pick = |s: Sign| {
            self.operators
                .iter()
                .filter(|o| o.sign == s)
                .map(|o| o.op.clone())
                .collect()
        };
        SignedKrausSet::new(self.sys_dim, pick(Sign::Positive), pick(Sign::Negative))
            .expect("operators share the partition dimension")
    }

    pub fn find(&self, label: &str) -> Option<&LabeledOperator> {
        self.operators.iter().find(|o| o.label == label)
    }
}

pub fn extract_signed_kraus(p: &HermitianPartition) -> Result<SignedKrausSet> {
    Ok(extract_labeled(p)?.kraus_set())
}

/// Diagonal and single-pair elements use closed forms; anything else goes
/// through the Jacobi solver. Elements are processed in parallel and the
/// output keeps partition order.
pub fn extract_labeled(p: &HermitianPartition) -> Result<Extraction> {
    let per_element: Vec<Result<Vec<LabeledOperator>>> = p
        .elements()
        .par_iter()
        .zip(p.labels().par_iter())
        .map(|(el, label)| extract_element(el, label, p))
        .collect();
    let mut operators = Vec::new();
    for ops in per_element {
        operators.extend(ops?);
    }
    Ok(Extraction {
        sys_dim: p.sys_dim(),
        operators,
    })
}

fn signed(lam: f64) -> Option<Sign> {
    if lam > EIGEN_CUTOFF {
        Some(Sign::Positive)
    } else if lam < -EIGEN_CUTOFF {
        Some(Sign::Negative)
    } else {
        None
    }
}

fn suffix(s: Sign) -> &'static str {
    match s {
        Sign::Positive => "+",
        Sign::Negative => "-",
    }
}

fn extract_element(el: &ComplexMatrix, label: &str, p: &HermitianPartition) -> Result<Vec<LabeledOperator>> {
    let d = p.sys_dim();
    let n = el.dim();
    if el.is_diagonal(0.0) {
        let mut order: Vec<(usize, String)> = p.diag_layout().to_vec();
        for i in 0..n {
            if !order.iter().any(|(pos, _)| *pos == i) {
                order.push((i, format!("{label}[{i}]")));
            }
        }
        let mut out = Vec::new();
        for (pos, name) in order {
            let lam = el[(pos, pos)].re;
            if let Some(sign) = signed(lam) {
                // fold(sqrt|lam| e_pos) is a single matrix unit
                let mut op = ComplexMatrix::zeros(d);
                op[(pos % d, pos / d)] = re(lam.abs().sqrt());
                out.push(LabeledOperator {
                    label: name,
                    sign,
                    weight: lam.abs(),
                    op,
                });
            }
        }
        return Ok(out);
    }

    if let Some((r, c, z)) = pair_entry(el) {
        let eig = eig_rank2_pair(z, r, c, n)?;
        return fold_all(&eig.values, &eig.vectors, label, true);
    }

    let eig = eig_hermitian(el, JACOBI_TOL)?;
    fold_all(&eig.values, &eig.vectors, label, false)
}

fn fold_all(
    values: &[f64],
    vectors: &[ComplexVector],
    label: &str,
    pair: bool,
) -> Result<Vec<LabeledOperator>> {
    let mut out = Vec::new();
    for (k, (lam, v)) in values.iter().zip(vectors).enumerate() {
        if let Some(sign) = signed(*lam) {
            let name = if pair {
                format!("{label}{}", suffix(sign))
            } else {
                format!("{label}#{k}{}", suffix(sign))
            };
            out.push(LabeledOperator {
                label: name,
                sign,
                weight: lam.abs(),
                op: fold_scaled(v, lam.abs().sqrt())?,
            });
        }
    }
    Ok(out)
}
