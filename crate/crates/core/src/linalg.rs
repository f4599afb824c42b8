//! Dense complex/real matrices and the handful of kernels the circuit
//! simulators need: products, adjoints, Gram-Schmidt, a pivoted real solve,
//! and seeded Haar-random unitaries.
//!
//! Matrices are row-major `Vec`-backed and sized for desk-scale experiments
//! (dimensions up to ~1024); nothing here is tuned beyond that.

use alloc::vec;
use alloc::vec::Vec;

use crate::fmath;
use crate::rng::SplitMix64;
use crate::{Error, Result};

pub type C64 = num_complex::Complex<f64>;

pub const C_ZERO: C64 = C64::new(0.0, 0.0);
pub const C_ONE: C64 = C64::new(1.0, 0.0);

/// e^{i theta}.
#[inline]
pub fn expi(theta: f64) -> C64 {
    C64::new(fmath::cos(theta), fmath::sin(theta))
}

/// |z|, via hypot to avoid spurious overflow.
#[inline]
pub fn cabs(z: C64) -> f64 {
    fmath::hypot(z.re, z.im)
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    fmath::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// Hermitian inner product `<a|b>` (conjugate-linear in `a`).
pub fn vec_dot(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C_ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C_ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Diagonal matrix from entries.
    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[C64]) {
        debug_assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C_ZERO {
                    continue;
                }
                let lhs_row = i * rhs.cols;
                let rhs_row = k * rhs.cols;
                for j in 0..rhs.cols {
                    out.data[lhs_row + j] += a * rhs.data[rhs_row + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        let mut out = vec![C_ZERO; self.rows];
        for i in 0..self.rows {
            let mut acc = C_ZERO;
            let row = self.row(i);
            for (a, x) in row.iter().zip(v) {
                acc += a * x;
            }
            out[i] = acc;
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, z: C64) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= z;
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| cabs(*z)).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from another matrix.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| cabs(a - b))
            .fold(0.0, f64::max)
    }

    /// Max-norm of `U U^dag - I`; zero for exactly unitary matrices.
    pub fn unitarity_defect(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                // (U U^dag)_{ij} = sum_k U_{ik} conj(U_{jk})
                let mut acc = C_ZERO;
                for k in 0..n {
                    acc += self[(i, k)] * self[(j, k)].conj();
                }
                if i == j {
                    acc -= C_ONE;
                }
                worst = worst.max(cabs(acc));
            }
        }
        worst
    }

    /// Max-norm of `A - A^dag`.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max(cabs(self[(i, j)] - self[(j, i)].conj()));
            }
        }
        worst
    }
}

impl core::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Row-major dense real matrix (Laplacians, transition matrices).
#[derive(Debug, Clone, PartialEq)]
pub struct RMat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| fmath::abs(a - b))
            .fold(0.0, f64::max)
    }

    pub fn to_complex(&self) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| C64::new(self[(i, j)], 0.0))
    }
}

impl core::ops::Index<(usize, usize)> for RMat {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for RMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solve `A x = b` for real square `A` by Gaussian elimination with partial
/// pivoting. `A` and `b` are consumed as working storage.
pub fn solve_real(mut a: RMat, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = a.rows();
    assert!(a.is_square_check(n) && b.len() == n, "solve_real shape");
    for col in 0..n {
        let mut piv = col;
        let mut best = fmath::abs(a[(col, col)]);
        for r in col + 1..n {
            let v = fmath::abs(a[(r, col)]);
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < 1e-300 {
            return Err(Error::SingularSystem { col, pivot: best });
        }
        if piv != col {
            for j in 0..n {
                let tmp = a[(col, j)];
                a[(col, j)] = a[(piv, j)];
                a[(piv, j)] = tmp;
            }
            b.swap(col, piv);
        }
        let inv = 1.0 / a[(col, col)];
        for r in col + 1..n {
            let factor = a[(r, col)] * inv;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                let v = a[(col, j)];
                a[(r, j)] -= factor * v;
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for j in col + 1..n {
            acc -= a[(col, j)] * x[j];
        }
        x[col] = acc / a[(col, col)];
    }
    Ok(x)
}

impl RMat {
    fn is_square_check(&self, n: usize) -> bool {
        self.rows == n && self.cols == n
    }
}

/// Orthonormalize the columns of `frame` in place by modified Gram-Schmidt,
/// dropping columns whose residual falls below `tol`. Returns the kept
/// columns.
pub fn gram_schmidt(frame: &[Vec<C64>], tol: f64) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for v in frame {
        let mut w = v.clone();
        for b in &basis {
            let c = vec_dot(b, &w);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
        // Second pass tightens orthogonality for ill-conditioned frames.
        for b in &basis {
            let c = vec_dot(b, &w);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
        let norm = vec_norm(&w);
        if norm > tol {
            let inv = C64::new(1.0 / norm, 0.0);
            for wi in w.iter_mut() {
                *wi *= inv;
            }
            basis.push(w);
        }
    }
    basis
}

/// Haar-random unitary from QR of a complex Gaussian matrix with the
/// `R` diagonal phase fixed; deterministic given the generator state.
pub fn random_unitary(dim: usize, rng: &mut SplitMix64) -> CMat {
    let cols: Vec<Vec<C64>> = (0..dim)
        .map(|_| (0..dim).map(|_| rng.next_complex_normal()).collect())
        .collect();
    let basis = gram_schmidt(&cols, 1e-12);
    assert_eq!(basis.len(), dim, "Gaussian frame was rank deficient");
    let mut q = CMat::zeros(dim, dim);
    for (j, col) in basis.iter().enumerate() {
        // Fix the phase so the decomposition is Haar rather than QR-biased.
        let d = vec_dot(&cols[j], col);
        let phase = if cabs(d) > 0.0 {
            d.conj() / C64::new(cabs(d), 0.0)
        } else {
            C_ONE
        };
        for i in 0..dim {
            q[(i, j)] = col[i] * phase;
        }
    }
    q
}

/// Random unit vector.
pub fn random_unit_vector(dim: usize, rng: &mut SplitMix64) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| rng.next_complex_normal()).collect();
        let norm = vec_norm(&v);
        if norm > 1e-6 {
            let inv = C64::new(1.0 / norm, 0.0);
            return v.iter().map(|z| z * inv).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_against_hand_example() {
        let a = CMat::from_fn(2, 2, |i, j| C64::new((i * 2 + j) as f64, 0.0));
        let b = CMat::identity(2);
        assert_eq!(a.mul(&b), a);
    }

    #[test]
    fn adjoint_conjugates() {
        let a = CMat::from_fn(2, 3, |i, j| C64::new(i as f64, j as f64));
        let ad = a.adjoint();
        assert_eq!(ad.rows(), 3);
        assert_eq!(ad[(2, 1)], C64::new(1.0, -2.0));
    }

    #[test]
    fn solve_real_small_system() {
        let mut a = RMat::zeros(2, 2);
        a[(0, 0)] = 2.0;
        a[(0, 1)] = 1.0;
        a[(1, 0)] = 1.0;
        a[(1, 1)] = 3.0;
        let x = solve_real(a, vec![5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn solve_real_rejects_singular() {
        let a = RMat::zeros(2, 2);
        assert!(matches!(
            solve_real(a, vec![1.0, 1.0]),
            Err(Error::SingularSystem { .. })
        ));
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = SplitMix64::new(5);
        for dim in [1, 2, 5, 16] {
            let u = random_unitary(dim, &mut rng);
            assert!(u.unitarity_defect() < 1e-12, "dim {dim}");
        }
    }

    #[test]
    fn gram_schmidt_drops_dependent_columns() {
        let v = vec![C_ONE, C_ZERO];
        let w = vec![C64::new(2.0, 0.0), C_ZERO];
        let basis = gram_schmidt(&[v, w], 1e-10);
        assert_eq!(basis.len(), 1);
    }

    #[test]
    fn unitarity_defect_flags_nonunitary() {
        let mut m = CMat::identity(3);
        m[(0, 0)] = C64::new(2.0, 0.0);
        assert!(m.unitarity_defect() > 1.0);
        assert!(CMat::identity(3).unitarity_defect() < 1e-15);
    }
}
