//! Dense complex linear algebra.
//!
//! A small row-major matrix type plus the handful of operations the channel
//! machinery needs: Kronecker products, the fold/unfold vectorization, partial
//! transpose and trace, and two Hermitian eigensolvers (a cyclic Jacobi
//! iteration for arbitrary input and a closed form for rank-2 conjugate pairs).
//!
//! Vectorization convention: `unfold(A)[j * d + k] = <k|A|j>`. With this choice
//! `|A>><<A| = sum_jk |j><k| (x) A|j><k|A^dag` holds exactly, which is what ties
//! Kraus operators to Choi matrices.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default convergence threshold for the Jacobi sweeps.
pub const JACOBI_TOL: f64 = 1e-13;

/// Maximum number of cyclic Jacobi sweeps before giving up.
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::BadShape {
                len: data.len(),
                dim,
            });
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = re(1.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| re(x)).collect())
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = re(x);
        }
        m
    }

    /// Matrix unit `|r><c|`.
    pub fn unit(dim: usize, r: usize, c: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(r, c)] = re(1.0);
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Option<C64> {
        if r < self.dim && c < self.dim {
            Some(self.data[r * self.dim + c])
        } else {
            None
        }
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    /// Keeps only the diagonal.
    pub fn diagonal_part(&self) -> Self {
        Self::from_diag(&self.diagonal())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-entry norm of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                if r != c {
                    acc += self[(r, c)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || self[(r, c)].norm() <= tol))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        let n = self.dim;
        ComplexVector::new(
            (0..n)
                .map(|r| (0..n).map(|c| self.data[r * n + c] * v[c]).sum())
                .collect(),
        )
    }

    /// `self * x * self^dag`.
    pub fn sandwich(&self, x: &Self) -> Self {
        self.matmul(x).matmul(&self.dagger())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        assert!(r < self.dim && c < self.dim, "index ({r}, {c}) out of bounds");
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        assert!(r < self.dim && c < self.dim, "index ({r}, {c}) out of bounds");
        &mut self.data[r * self.dim + c]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self[(r, c)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

/// Column vector of complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    data: Vec<C64>,
}

impl ComplexVector {
    pub fn new(data: Vec<C64>) -> Self {
        Self { data }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![C64::new(0.0, 0.0); len])
    }

    /// Computational basis vector `|i>`.
    pub fn basis(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.data[i] = re(1.0);
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.len(), other.len(), "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.data.iter().map(|&z| z * s).collect())
    }

    /// `|self><other|`.
    pub fn outer(&self, other: &Self) -> ComplexMatrix {
        assert_eq!(self.len(), other.len(), "dimension mismatch");
        ComplexMatrix::from_fn(self.len(), |r, c| self.data[r] * other.data[c].conj())
    }

    pub fn projector(&self) -> ComplexMatrix {
        self.outer(self)
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.data[i]
    }
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(da * db, |r, c| a[(r / db, c / db)] * b[(r % db, c % db)])
}

/// Vectorizes `a` with component `(j, k)` at index `j * d + k` equal to `<k|a|j>`.
pub fn unfold(a: &ComplexMatrix) -> ComplexVector {
    let d = a.dim();
    let mut v = ComplexVector::zeros(d * d);
    for j in 0..d {
        for k in 0..d {
            v[j * d + k] = a[(k, j)];
        }
    }
    v
}

/// Inverse of [`unfold`].
pub fn fold(v: &ComplexVector) -> Result<ComplexMatrix> {
    let n = v.len();
    let d = (n as f64).sqrt().round() as usize;
    if d == 0 || d * d != n {
        return Err(Error::NotPerfectSquare(n));
    }
    let mut a = ComplexMatrix::zeros(d);
    for j in 0..d {
        for k in 0..d {
            a[(k, j)] = v[j * d + k];
        }
    }
    Ok(a)
}

/// Spectral data of a Hermitian matrix, eigenvalues sorted descending.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Vec<ComplexVector>,
}

impl EigenSystem {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `sum_i lambda_i |v_i><v_i|` in dimension `dim`.
    pub fn reconstruct(&self, dim: usize) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(dim);
        for (&lam, v) in self.values.iter().zip(&self.vectors) {
            out += &v.projector().scale_real(lam);
        }
        out
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Rotates `v` so that its largest-magnitude component is real and nonnegative.
/// The first component wins ties.
fn fix_phase(v: &mut ComplexVector) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.data.iter().enumerate() {
        let m = z.norm();
        if m > best_mag {
            best_mag = m;
            best = i;
        }
    }
    if best_mag > 0.0 {
        let z = v.data[best];
        let phase = z.conj() / best_mag;
        for x in v.data.iter_mut() {
            *x *= phase;
        }
        v.data[best] = re(best_mag);
    }
}

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Sweeps stop once the off-diagonal Frobenius norm drops below
/// `tol * max(1, ||h||_F)`; running out of sweeps is an error.
pub fn eig_hermitian(h: &ComplexMatrix, tol: f64) -> Result<EigenSystem> {
    let dev = h.hermitian_deviation();
    if dev > tol {
        return Err(Error::NotHermitian(dev));
    }
    let n = h.dim();
    let mut a = ComplexMatrix::from_fn(n, |r, c| (h[(r, c)] + h[(c, r)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let threshold = tol * a.frobenius_norm().max(1.0);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if a.off_diagonal_norm() < threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        let off_norm = a.off_diagonal_norm();
        if off_norm >= threshold {
            return Err(Error::NoConvergence {
                sweeps: JACOBI_MAX_SWEEPS,
                off_norm,
            });
        }
    }

    let mut pairs: Vec<(f64, ComplexVector)> = (0..n)
        .map(|i| {
            let mut col = ComplexVector::new((0..n).map(|r| v[(r, i)]).collect());
            fix_phase(&mut col);
            (a[(i, i)].re, col)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let (values, vectors) = pairs.into_iter().unzip();
    Ok(EigenSystem { values, vectors })
}

/// One unitary rotation `a <- G^dag a G` zeroing `a[p][q]`; `v <- v G`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let n = a.dim();
    // phase that makes the pivot real: apq = mag * e^{i theta}
    let ph = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = [[c, s], [-s e^{-i theta}, c e^{-i theta}]] in the (p, q) plane.
    let gpp = re(c);
    let gpq = re(s);
    let gqp = -ph.conj() * s;
    let gqq = ph.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = re(0.0);
    a[(q, p)] = re(0.0);
    a[(p, p)] = re(app - t * mag);
    a[(q, q)] = re(aqq + t * mag);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn eigvals_hermitian(h: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
    Ok(eig_hermitian(h, tol)?.values)
}

/// Closed-form eigensystem of `z|r><c| + z*|c><r|` in dimension `dim`.
///
/// With `z = |z| e^{i phi}` the nonzero eigenvalues are `+-|z|` with unit
/// eigenvectors `(|r> +- e^{-i phi}|c>)/sqrt(2)`; the null space is omitted.
pub fn eig_rank2_pair(z: C64, r: usize, c: usize, dim: usize) -> Result<EigenSystem> {
    if r == c {
        return Err(Error::Contract(format!(
            "rank-2 pair needs distinct indices, got ({r}, {c})"
        )));
    }
    if r >= dim || c >= dim {
        return Err(Error::Contract(format!(
            "pair ({r}, {c}) out of range for dimension {dim}"
        )));
    }
    let mag = z.norm();
    if mag == 0.0 {
        return Err(Error::Contract("rank-2 pair with zero coupling".into()));
    }
    let w = z.conj() / mag;
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    let mut plus = ComplexVector::zeros(dim);
    let mut minus = ComplexVector::zeros(dim);
    plus[r] = re(amp);
    minus[r] = re(amp);
    plus[c] = w * amp;
    minus[c] = -(w * amp);
    Ok(EigenSystem {
        values: vec![mag, -mag],
        vectors: vec![plus, minus],
    })
}

/// Which factor of a bipartite space to act on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

fn check_bipartite(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<()> {
    if dim_a == 0 || dim_b == 0 || m.dim() != dim_a * dim_b {
        return Err(Error::DimensionMismatch {
            expected: dim_a * dim_b,
            got: m.dim(),
        });
    }
    Ok(())
}

/// Transpose on the second tensor factor.
pub fn partial_transpose(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    check_bipartite(m, dim_a, dim_b)?;
    Ok(ComplexMatrix::from_fn(m.dim(), |r, c| {
        let (i, a) = (r / dim_b, r % dim_b);
        let (j, b) = (c / dim_b, c % dim_b);
        m[(i * dim_b + b, j * dim_b + a)]
    }))
}

/// Traces out the named factor of `m` on `C^dim_a (x) C^dim_b`.
pub fn partial_trace(
    m: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    which: Subsystem,
) -> Result<ComplexMatrix> {
    check_bipartite(m, dim_a, dim_b)?;
    Ok(match which {
        Subsystem::Second => ComplexMatrix::from_fn(dim_a, |i, j| {
            (0..dim_b).map(|a| m[(i * dim_b + a, j * dim_b + a)]).sum()
        }),
        Subsystem::First => ComplexMatrix::from_fn(dim_b, |a, b| {
            (0..dim_a).map(|i| m[(i * dim_b + a, i * dim_b + b)]).sum()
        }),
    })
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::new(2, vec![re(0.0), re(1.0), re(1.0), re(0.0)]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::new(2, vec![re(0.0), c64(0.0, -1.0), c64(0.0, 1.0), re(0.0)]).unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&[1.0, -1.0])
}
