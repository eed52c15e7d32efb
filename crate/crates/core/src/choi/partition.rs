use serde::{Deserialize, Serialize};

use crate::channels::TwoQubitAdCoeffs;
use crate::error::{Error, Result};
use crate::linalg::{C64, ComplexMatrix};

use super::{ad2_diag_values, ad2_pair_values, ChoiMatrix};

/// Two-qubit damping diagonal: Choi position and coefficient symbol, in the
/// order used for exports and the population sub-channel.
pub const AD2_DIAG: [(usize, &str); 9] = [
    (3, "H"),
    (11, "G"),
    (7, "F"),
    (2, "E"),
    (10, "D"),
    (1, "C"),
    (0, "A"),
    (15, "1"),
    (5, "B"),
];

/// Two-qubit damping coherences: upper-triangle position and symbol.
pub const AD2_PAIRS: [((usize, usize), &str); 8] = [
    ((0, 5), "J"),
    ((0, 10), "M"),
    ((0, 15), "L"),
    ((1, 7), "U+iV"),
    ((2, 11), "iS-R"),
    ((5, 10), "P"),
    ((5, 15), "T"),
    ((10, 15), "Q"),
];

/// Entries below this fraction of the largest magnitude are not paired.
pub const PAIR_THRESHOLD: f64 = 1e-14;

/// Tolerance for element Hermiticity and for the element sum.
pub const PARTITION_TOL: f64 = 1e-12;

/// Hermitian summands of a Choi matrix, each diagonalized separately.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianPartition {
    sys_dim: usize,
    elements: Vec<ComplexMatrix>,
    labels: Vec<String>,
    diag_layout: Vec<(usize, String)>,
}

impl HermitianPartition {
    /// Validates that every element is Hermitian and that they sum to `source`.
    pub fn from_elements(
        source: &ChoiMatrix,
        elements: Vec<ComplexMatrix>,
        labels: Vec<String>,
    ) -> Result<Self> {
        if elements.len() != labels.len() {
            return Err(Error::Contract(format!(
                "{} elements but {} labels",
                elements.len(),
                labels.len()
            )));
        }
        let n = source.mat().dim();
        let mut sum = ComplexMatrix::zeros(n);
        for el in &elements {
            if el.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: el.dim(),
                });
            }
            let dev = el.hermitian_deviation();
            if dev > PARTITION_TOL {
                return Err(Error::NotHermitian(dev));
            }
            sum += el;
        }
        let gap = sum.max_abs_diff(source.mat());
        if gap > PARTITION_TOL {
            return Err(Error::Contract(format!(
                "partition elements miss the source matrix by {gap:e}"
            )));
        }
        Ok(Self {
            sys_dim: source.sys_dim(),
            elements,
            labels,
            diag_layout: Vec::new(),
        })
    }

    /// Names and ordering for operators extracted from diagonal elements.
    /// Positions not listed follow in ascending order.
    pub fn with_diag_layout(mut self, layout: Vec<(usize, String)>) -> Self {
        self.diag_layout = layout;
        self
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn diag_layout(&self) -> &[(usize, String)] {
        &self.diag_layout
    }

    #[inline]
    pub fn sys_dim(&self) -> usize {
        self.sys_dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sum(&self) -> ComplexMatrix {
        let n = self.sys_dim * self.sys_dim;
        self.elements.iter().fold(ComplexMatrix::zeros(n), |mut acc, e| {
            acc += e;
            acc
        })
    }

    /// Number of elements holding a single off-diagonal conjugate pair.
    pub fn pair_count(&self) -> usize {
        self.elements.iter().filter(|e| pair_entry(e).is_some()).count()
    }
}

/// `(r, c, z)` if the only nonzero entries are `z` at `(r, c)` and `z*` at `(c, r)`, `r < c`.
pub(crate) fn pair_entry(m: &ComplexMatrix) -> Option<(usize, usize, C64)> {
    let n = m.dim();
    let mut found = None;
    for r in 0..n {
        for c in 0..n {
            let z = m[(r, c)];
            if z == C64::new(0.0, 0.0) {
                continue;
            }
            if r == c {
                return None;
            }
            if r < c {
                if found.is_some() {
                    return None;
                }
                found = Some((r, c, z));
            }
        }
    }
    found
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PartitionStrategy {
    /// Diagonal part plus one element per nonzero conjugate pair.
    DiagPlusPairs,
    /// Like `DiagPlusPairs` but each pair split into its real and imaginary parts.
    SplitRealImag,
    /// The whole matrix as a single element.
    FullSpectral,
    /// Explicit index masks; each must be closed under transposition, and
    /// together they must cover every nonzero entry exactly once.
    Custom(Vec<Vec<(usize, usize)>>),
}

pub fn partition(b: &ChoiMatrix, strategy: &PartitionStrategy) -> Result<HermitianPartition> {
    match strategy {
        PartitionStrategy::DiagPlusPairs => Ok(partition_diag_pairs(b)),
        PartitionStrategy::SplitRealImag => Ok(partition_split_real_imag(b)),
        PartitionStrategy::FullSpectral => {
            HermitianPartition::from_elements(b, vec![b.mat().clone()], vec!["full".into()])
        }
        PartitionStrategy::Custom(masks) => partition_custom(b, masks),
    }
}

fn significant_pairs(b: &ChoiMatrix) -> Vec<(usize, usize, C64)> {
    let m = b.mat();
    let cut = PAIR_THRESHOLD * m.max_abs();
    let n = m.dim();
    let mut out = Vec::new();
    for r in 0..n {
        for c in (r + 1)..n {
            let z = m[(r, c)];
            if z.norm() > cut {
                out.push((r, c, z));
            }
        }
    }
    out
}

fn pair_matrix(n: usize, r: usize, c: usize, z: C64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    m[(r, c)] = z;
    m[(c, r)] = z.conj();
    m
}

fn assemble(b: &ChoiMatrix, elements: Vec<ComplexMatrix>, labels: Vec<String>) -> HermitianPartition {
    HermitianPartition {
        sys_dim: b.sys_dim(),
        elements,
        labels,
        diag_layout: Vec::new(),
    }
}

/// Diagonal part first, then pairs in ascending `(r, c)`.
pub fn partition_diag_pairs(b: &ChoiMatrix) -> HermitianPartition {
    let n = b.mat().dim();
    let mut elements = vec![b.mat().diagonal_part()];
    let mut labels = vec!["diag".to_string()];
    for (r, c, z) in significant_pairs(b) {
        elements.push(pair_matrix(n, r, c, z));
        labels.push(format!("({r},{c})"));
    }
    assemble(b, elements, labels)
}

pub fn partition_split_real_imag(b: &ChoiMatrix) -> HermitianPartition {
    let n = b.mat().dim();
    let mut elements = vec![b.mat().diagonal_part()];
    let mut labels = vec!["diag".to_string()];
    for (r, c, z) in significant_pairs(b) {
        if z.re != 0.0 {
            elements.push(pair_matrix(n, r, c, C64::new(z.re, 0.0)));
            labels.push(format!("re({r},{c})"));
        }
        if z.im != 0.0 {
            elements.push(pair_matrix(n, r, c, C64::new(0.0, z.im)));
            labels.push(format!("im({r},{c})"));
        }
    }
    assemble(b, elements, labels)
}

fn partition_custom(b: &ChoiMatrix, masks: &[Vec<(usize, usize)>]) -> Result<HermitianPartition> {
    let m = b.mat();
    let n = m.dim();
    let mut owner = vec![None::<usize>; n * n];
    for (i, mask) in masks.iter().enumerate() {
        for &(r, c) in mask {
            if r >= n || c >= n {
                return Err(Error::Contract(format!("mask {i} index ({r},{c}) out of range")));
            }
            match owner[r * n + c] {
                Some(j) if j != i => {
                    return Err(Error::Contract(format!(
                        "entry ({r},{c}) claimed by masks {j} and {i}"
                    )))
                }
                _ => owner[r * n + c] = Some(i),
            }
        }
    }
    for r in 0..n {
        for c in 0..n {
            if owner[r * n + c] != owner[c * n + r] {
                return Err(Error::Contract(format!(
                    "entries ({r},{c}) and ({c},{r}) belong to different masks"
                )));
            }
            if owner[r * n + c].is_none() && m[(r, c)] != C64::new(0.0, 0.0) {
                return Err(Error::Contract(format!("nonzero entry ({r},{c}) not covered")));
            }
        }
    }
    let mut elements = vec![ComplexMatrix::zeros(n); masks.len()];
    for r in 0..n {
        for c in 0..n {
            if let Some(i) = owner[r * n + c] {
                elements[i][(r, c)] = m[(r, c)];
            }
        }
    }
    let labels = (0..masks.len()).map(|i| format!("mask{i}")).collect();
    HermitianPartition::from_elements(b, elements, labels)
}

/// Symbolic partitions of the two-qubit damping Choi matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ad2Layout {
    /// One element per matrix position; `U+iV` and `iS-R` stay together.
    Positions,
    /// `U+iV` split into `U` and `iV`, `iS-R` into `-R` and `iS`.
    Symbols,
}

/// The ten coherence summands `(label, (r, c), entry)` of the symbolic split.
pub(crate) fn ad2_symbol_entries(c: &TwoQubitAdCoeffs) -> Vec<(&'static str, (usize, usize), C64)> {
    let i = C64::i();
    let mut out = Vec::with_capacity(10);
    for ((pos, z), (_, name)) in ad2_pair_values(c).into_iter().zip(AD2_PAIRS) {
        match name {
            "U+iV" => {
                out.push(("U", pos, c.u));
                out.push(("V", pos, i * c.v));
            }
            "iS-R" => {
                out.push(("R", pos, -c.r));
                out.push(("S", pos, i * c.s));
            }
            _ => out.push((name, pos, z)),
        }
    }
    out
}

/// Partition labeled by coefficient symbol. Vanishing entries are skipped;
/// diagonal operators are named by symbol and ordered as in `AD2_DIAG`.
pub fn partition_2ad(c: &TwoQubitAdCoeffs, layout: Ad2Layout) -> HermitianPartition {
    let b = super::choi_2ad(c);
    let n = 16;
    let mut elements = vec![b.mat().diagonal_part()];
    let mut labels = vec!["diag".to_string()];
    let cut = PAIR_THRESHOLD * b.mat().max_abs();
    let entries: Vec<(&str, (usize, usize), C64)> = match layout {
        Ad2Layout::Positions => ad2_pair_values(c)
            .into_iter()
            .zip(AD2_PAIRS)
            .map(|((pos, z), (_, name))| (name, pos, z))
            .collect(),
        Ad2Layout::Symbols => ad2_symbol_entries(c),
    };
    for (name, (r, col), z) in entries {
        if z.norm() > cut {
            elements.push(pair_matrix(n, r, col, z));
            labels.push(name.to_string());
        }
    }
    let layout = ad2_diag_values(c)
        .iter()
        .zip(AD2_DIAG)
        .map(|((pos, _), (_, name))| (*pos, name.to_string()))
        .collect();
    assemble(&b, elements, labels).with_diag_layout(layout)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{ad2_coefficients, TwoQubitAdParams};
    use crate::choi::choi_2ad;
    use crate::linalg::{c64, re};
    use crate::random::{random_hermitian, rng_from_seed};

    fn generic() -> TwoQubitAdCoeffs {
        ad2_coefficients(&TwoQubitAdParams::new(1.0, 0.3, 2.0, 10.0, 0.7).unwrap()).unwrap()
    }

    #[test]
    fn diagonal_input_gives_single_element() {
        let b = ChoiMatrix::new(ComplexMatrix::from_real_diag(&[0.5, 0.5, 0.5, 0.5]), 2).unwrap();
        let p = partition_diag_pairs(&b);
        assert_eq!(p.len(), 1);
        assert_eq!(p.labels(), ["diag"]);
    }

    #[test]
    fn random_hermitian_partition_is_exact() {
        let mut rng = rng_from_seed(5);
        for n in [2, 4] {
            let b = ChoiMatrix::new(random_hermitian(&mut rng, n * n), n).unwrap();
            let p = partition_diag_pairs(&b);
            assert_eq!(p.len(), 1 + n * n * (n * n - 1) / 2);
            assert_eq!(p.sum(), *b.mat());
            let s = partition_split_real_imag(&b);
            assert!(s.sum().max_abs_diff(b.mat()) == 0.0);
        }
    }

    #[test]
    fn ad2_partition_counts() {
        let c = generic();
        let b = choi_2ad(&c);
        let p = partition_diag_pairs(&b);
        assert_eq!(p.len(), 9);
        assert_eq!(p.sum(), *b.mat());
        let pos = partition_2ad(&c, Ad2Layout::Positions);
        assert_eq!(pos.elements(), p.elements());
        assert_eq!(pos.labels()[1..], ["J", "M", "L", "U+iV", "iS-R", "P", "T", "Q"]);
        let sym = partition_2ad(&c, Ad2Layout::Symbols);
        assert_eq!(sym.len(), 11);
        assert!(sym.sum().max_abs_diff(b.mat()) < 1e-16);
    }

    #[test]
    fn custom_masks_validated() {
        let mut m = ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0, 1.0]);
        m[(0, 3)] = c64(0.5, 0.2);
        m[(3, 0)] = c64(0.5, -0.2);
        let b = ChoiMatrix::new(m, 2).unwrap();
        let ok = PartitionStrategy::Custom(vec![vec![(0, 0), (3, 3)], vec![(0, 3), (3, 0)]]);
        let p = partition(&b, &ok).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.elements()[1][(0, 3)], c64(0.5, 0.2));
        let missing = PartitionStrategy::Custom(vec![vec![(0, 0), (3, 3)]]);
        assert!(partition(&b, &missing).is_err());
        let asym = PartitionStrategy::Custom(vec![vec![(0, 0), (3, 3), (0, 3)], vec![(3, 0)]]);
        assert!(partition(&b, &asym).is_err());
        let overlap = PartitionStrategy::Custom(vec![vec![(0, 0), (3, 3), (0, 3), (3, 0)], vec![(0, 3), (3, 0)]]);
        assert!(partition(&b, &overlap).is_err());
    }

    #[test]
    fn from_elements_checks_sum() {
        let b = ChoiMatrix::identity(2);
        let half = b.mat().scale(re(0.5));
        assert!(HermitianPartition::from_elements(&b, vec![half.clone(), half.clone()], vec!["a".into(), "b".into()]).is_ok());
        assert!(HermitianPartition::from_elements(&b, vec![half], vec!["a".into()]).is_err());
    }
}
