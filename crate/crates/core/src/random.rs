//! Seeded random matrices and states for tests, verification and sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c64, ComplexMatrix, ComplexVector, C64};
use crate::channels::DensityMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with independent standard complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| complex_gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = random_matrix(rng, dim);
    (&g + &g.dagger()).scale_real(0.5)
}

/// Full-rank density matrix `G G^dag / Tr(G G^dag)`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = random_matrix(rng, dim);
    let mut gg = g.matmul(&g.dagger());
    // exact Hermitian symmetry before normalizing
    for r in 0..dim {
        gg[(r, r)] = c64(gg[(r, r)].re, 0.0);
        for c in (r + 1)..dim {
            gg[(c, r)] = gg[(r, c)].conj();
        }
    }
    let tr = gg.trace().re;
    DensityMatrix::new_unchecked(gg.scale_real(1.0 / tr))
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexVector {
    let v = ComplexVector::new((0..dim).map(|_| complex_gaussian(rng)).collect());
    let n = v.norm();
    v.scale(c64(1.0 / n, 0.0))
}

/// Haar-ish unitary from Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = random_matrix(rng, dim);
    let mut cols: Vec<ComplexVector> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = ComplexVector::new((0..dim).map(|r| g[(r, j)]).collect());
        for q in &cols {
            let ip = q.inner(&v);
            v = ComplexVector::new(
                v.data()
                    .iter()
                    .zip(q.data())
                    .map(|(a, b)| a - b * ip)
                    .collect(),
            );
        }
        let n = v.norm();
        cols.push(v.scale(c64(1.0 / n, 0.0)));
    }
    ComplexMatrix::from_fn(dim, |r, c| cols[c][r])
}
