//! Dense complex matrices and the spectral routines the rest of the crate
//! is built on.
//!
//! Dimensions stay small (2^N with N ≤ 8), so everything is O(d³) dense
//! arithmetic: a cyclic complex Jacobi eigensolver for Hermitian matrices
//! and a one-sided Jacobi SVD for singular values. Both are self-contained
//! and deterministic, which keeps seeded studies bit-reproducible.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    /// Build from row-major data. Dimensions must be positive, the data
    /// length must match, and every entry must be finite.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidConfig("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn from_real_diag(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
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

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn trace(&self) -> Complex<T> {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: T) -> Self {
        self.scale(Complex::new(factor, T::zero()))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let lhs = k * other.cols;
                let dst = i * other.cols;
                for j in 0..other.cols {
                    out.data[dst + j] = out.data[dst + j] + a * other.data[lhs + j];
                }
            }
        }
        out
    }

    /// Kronecker product, dimensions multiply.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |acc, x| acc + x)
            .sqrt()
    }

    /// Max-abs residual of `A - A†`.
    pub fn hermitian_residual(&self) -> T {
        assert!(self.is_square(), "hermiticity is defined for square matrices");
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..=i {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        // the diagonal check above compares z with conj(z), i.e. 2*|im|
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && self.hermitian_residual() <= tol
    }

    /// `(A + A†)/2`.
    pub fn hermitized(&self) -> Self {
        assert!(self.is_square());
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()).scale(half)
        })
    }

    /// Max-abs residual of `A†A - I`.
    pub fn unitarity_residual(&self) -> T {
        assert!(self.is_square());
        let p = self.adjoint().matmul(self);
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expect = if i == j { Complex::one() } else { Complex::zero() };
                let d = (p[(i, j)] - expect).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.is_square() && self.unitarity_residual() <= tol
    }

    /// Re Tr(A·B); the full product is never formed.
    pub fn product_trace_re(&self, other: &Self) -> T {
        assert_eq!(self.cols, other.rows, "product trace dimension mismatch");
        assert_eq!(self.rows, other.cols, "product trace dimension mismatch");
        let mut acc = T::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                let b = other[(k, i)];
                acc += a.re * b.re - a.im * b.im;
            }
        }
        acc
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Scalar> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Scalar> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Scalar> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product of two matrices.
pub fn kron<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.kron(b)
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues
/// and the unitary matrix whose columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigenSystem<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Scalar> HermitianEigenSystem<T> {
    /// `V · diag(f(λ)) · V†`.
    pub fn rebuild_with(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == T::zero() {
                continue;
            }
            for i in 0..n {
                let vi = v[(i, k)].scale(w);
                for j in 0..n {
                    let add = vi * v[(j, k)].conj();
                    out[(i, j)] = out[(i, j)] + add;
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Fails with `NotHermitian` when the symmetry residual of the
/// input exceeds the scalar's check tolerance.
pub fn eig_hermitian<T: Scalar>(h: &ComplexMatrix<T>) -> Result<HermitianEigenSystem<T>> {
    let tol = T::check_tol();
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let residual = h.hermitian_residual();
    if residual > tol {
        return Err(Error::NotHermitian {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    let n = h.rows();
    let mut a = h.hermitized();
    let mut v = ComplexMatrix::identity(n);

    // cyclic sweeps; quadratic convergence once off-diagonal mass is small
    let stop = T::epsilon() * T::lit(0.5) * T::from_usize(n * n).unwrap();
    let scale = a.frobenius_norm().max(T::one());
    for _sweep in 0..60 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= stop * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(T, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite eigenvalues"));
    let eigenvalues: Vec<T> = pairs.iter().map(|&(l, _)| l).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, pairs[c].1)]);
    Ok(HermitianEigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// One complex Jacobi rotation zeroing `a[(p,q)]`, accumulated into `v`.
fn jacobi_rotate<T: Scalar>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let n = a.rows();
    let apq = a[(p, q)];
    let norm = apq.norm();
    if norm <= T::epsilon() * (a[(p, p)].re.abs() + a[(q, q)].re.abs() + T::epsilon()) {
        a[(p, q)] = Complex::zero();
        a[(q, p)] = Complex::zero();
        return;
    }
    // phase e^{iφ} of the pivot and the real rotation angle
    let phase = apq.unscale(norm);
    let tau = (a[(q, q)].re - a[(p, p)].re) / (T::lit(2.0) * norm);
    let t = {
        let root = (T::one() + tau * tau).sqrt();
        if tau >= T::zero() {
            T::one() / (tau + root)
        } else {
            T::one() / (tau - root)
        }
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    let s_pos = phase.scale(s); // enters column q
    let s_neg = phase.conj().scale(s);

    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = akp.scale(c) - akq * s_neg;
        let new_kq = akp * s_pos + akq.scale(c);
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp.conj();
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq.conj();
    }
    let shift = T::lit(2.0) * c * s * norm;
    a[(p, p)] = Complex::new(app * c * c + aqq * s * s - shift, T::zero());
    a[(q, q)] = Complex::new(app * s * s + aqq * c * c + shift, T::zero());
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp.scale(c) - vkq * s_neg;
        v[(k, q)] = vkp * s_pos + vkq.scale(c);
    }
}

/// PSD square root via the eigendecomposition. Eigenvalues below the PSD
/// floor fail with `NotPsd`; those in `[floor, 0)` clamp to zero.
pub fn sqrt_psd<T: Scalar>(h: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let eig = eig_hermitian(h)?;
    let floor = T::psd_tol();
    if let Some(&lo) = eig.eigenvalues.first() {
        if lo < floor {
            return Err(Error::NotPsd(lo.to_f64().unwrap_or(f64::NAN)));
        }
    }
    Ok(eig.rebuild_with(|l| if l > T::zero() { l.sqrt() } else { T::zero() }))
}

/// Singular values in descending order, by one-sided Jacobi on the columns.
///
/// This route never forms M†M, keeping it independent of the Hermitian
/// eigensolver above; the two are cross-checked in tests.
pub fn singular_values<T: Scalar>(m: &ComplexMatrix<T>) -> Vec<T> {
    // column count drives the cost; work on the transpose when wider than tall
    if m.cols() > m.rows() {
        return singular_values(&m.adjoint());
    }
    let rows = m.rows();
    let cols = m.cols();
    let mut col: Vec<Vec<Complex<T>>> = (0..cols)
        .map(|j| (0..rows).map(|i| m[(i, j)]).collect())
        .collect();

    let eps = T::epsilon() * T::lit(8.0);
    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = Complex::<T>::zero();
                for k in 0..rows {
                    alpha += col[i][k].norm_sqr();
                    beta += col[j][k].norm_sqr();
                    gamma = gamma + col[i][k].conj() * col[j][k];
                }
                let g = gamma.norm();
                if g * g <= eps * eps * alpha * beta || g == T::zero() {
                    continue;
                }
                rotated = true;
                let phase = gamma.unscale(g);
                let zeta = (beta - alpha) / (T::lit(2.0) * g);
                let t = {
                    let root = (T::one() + zeta * zeta).sqrt();
                    if zeta >= T::zero() {
                        T::one() / (zeta + root)
                    } else {
                        T::one() / (zeta - root)
                    }
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                let s_i = phase.scale(s);
                let s_j = phase.conj().scale(s);
                for k in 0..rows {
                    let ui = col[i][k];
                    let uj = col[j][k];
                    col[i][k] = ui.scale(c) - uj * s_j;
                    col[j][k] = ui * s_i + uj.scale(c);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<T> = col
        .iter()
        .map(|cv| {
            cv.iter()
                .map(|z| z.norm_sqr())
                .fold(T::zero(), |a, x| a + x)
                .sqrt()
        })
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    sv
}

/// Number of singular values above `tol` times the largest one.
pub fn rank_tol<T: Scalar>(m: &ComplexMatrix<T>, tol: T) -> usize {
    assert!(tol > T::zero(), "rank tolerance must be positive");
    let sv = singular_values(m);
    match sv.first() {
        None => 0,
        Some(&top) if top == T::zero() => 0,
        Some(&top) => sv.iter().take_while(|&&s| s > tol * top).count(),
    }
}

/// Rank at the scalar's default relative tolerance.
pub fn rank<T: Scalar>(m: &ComplexMatrix<T>) -> usize {
    rank_tol(m, T::rank_tol())
}

/// Singular values of a real row-major matrix, descending. Same one-sided
/// Jacobi as [`singular_values`] but in real arithmetic; used on the hot
/// path for coefficient matrices, whose entries are real.
pub(crate) fn singular_values_real<T: Scalar>(rows: usize, cols: usize, data: &[T]) -> Vec<T> {
    debug_assert_eq!(data.len(), rows * cols);
    // orthogonalize whichever side is shorter
    let (m, n, fetch): (usize, usize, Box<dyn Fn(usize, usize) -> T + '_>) = if cols > rows {
        (cols, rows, Box::new(move |i, j| data[j * cols + i]))
    } else {
        (rows, cols, Box::new(move |i, j| data[i * cols + j]))
    };
    let mut col: Vec<Vec<T>> = (0..n).map(|j| (0..m).map(|i| fetch(i, j)).collect()).collect();

    let eps = T::epsilon() * T::lit(8.0);
    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = T::zero();
                for k in 0..m {
                    alpha += col[i][k] * col[i][k];
                    beta += col[j][k] * col[j][k];
                    gamma += col[i][k] * col[j][k];
                }
                if gamma * gamma <= eps * eps * alpha * beta || gamma == T::zero() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = {
                    let root = (T::one() + zeta * zeta).sqrt();
                    if zeta >= T::zero() {
                        T::one() / (zeta + root)
                    } else {
                        T::one() / (zeta - root)
                    }
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..m {
                    let ui = col[i][k];
                    let uj = col[j][k];
                    col[i][k] = c * ui - s * uj;
                    col[j][k] = s * ui + c * uj;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<T> = col
        .iter()
        .map(|cv| cv.iter().map(|&x| x * x).fold(T::zero(), |a, x| a + x).sqrt())
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    sv
}

/// Eigenvalues of a real symmetric matrix (row-major, ascending), by cyclic
/// real Jacobi. Hot path for Gram matrices inside the optimizer loop.
pub(crate) fn sym_eigvals_real<T: Scalar>(n: usize, data: &[T]) -> Vec<T> {
    debug_assert_eq!(data.len(), n * n);
    let mut a = data.to_vec();
    let idx = |r: usize, c: usize| r * n + c;
    let stop = T::epsilon() * T::lit(0.5) * T::from_usize(n * n).unwrap();
    let scale = a
        .iter()
        .map(|&x| x * x)
        .fold(T::zero(), |acc, x| acc + x)
        .sqrt()
        .max(T::one());
    for _sweep in 0..60 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[idx(p, q)] * a[idx(p, q)];
            }
        }
        if off.sqrt() <= stop * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[idx(p, q)];
                if apq.abs() <= T::epsilon() * (a[idx(p, p)].abs() + a[idx(q, q)].abs() + T::epsilon()) {
                    a[idx(p, q)] = T::zero();
                    a[idx(q, p)] = T::zero();
                    continue;
                }
                let tau = (a[idx(q, q)] - a[idx(p, p)]) / (T::lit(2.0) * apq);
                let t = {
                    let root = (T::one() + tau * tau).sqrt();
                    if tau >= T::zero() {
                        T::one() / (tau + root)
                    } else {
                        T::one() / (tau - root)
                    }
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = c * akp - s * akq;
                    a[idx(p, k)] = a[idx(k, p)];
                    a[idx(k, q)] = s * akp + c * akq;
                    a[idx(q, k)] = a[idx(k, q)];
                }
                let app = a[idx(p, p)];
                let aqq = a[idx(q, q)];
                let shift = T::lit(2.0) * c * s * apq;
                a[idx(p, p)] = c * c * app + s * s * aqq - shift;
                a[idx(q, q)] = s * s * app + c * c * aqq + shift;
                a[idx(p, q)] = T::zero();
                a[idx(q, p)] = T::zero();
            }
        }
    }
    let mut ev: Vec<T> = (0..n).map(|i| a[idx(i, i)]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    ev
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    pub(crate) fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_x() -> ComplexMatrix<f64> {
        ComplexMatrix::new(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
    }

    fn sigma_z() -> ComplexMatrix<f64> {
        ComplexMatrix::new(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]).unwrap()
    }

    fn random_hermitian(n: usize, rng: &mut StdRng) -> ComplexMatrix<f64> {
        let raw = ComplexMatrix::from_fn(n, n, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        raw.hermitized()
    }

    /// Unitary from modified Gram-Schmidt on a random complex matrix.
    pub(crate) fn random_unitary(n: usize, rng: &mut StdRng) -> ComplexMatrix<f64> {
        let mut cols: Vec<Vec<Complex64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                    .collect()
            })
            .collect();
        for i in 0..n {
            for j in 0..i {
                let proj: Complex64 = (0..n).map(|k| cols[j][k].conj() * cols[i][k]).sum();
                for k in 0..n {
                    let d = proj * cols[j][k];
                    cols[i][k] -= d;
                }
            }
            let norm: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for k in 0..n {
                cols[i][k] /= norm;
            }
        }
        ComplexMatrix::from_fn(n, n, |r, cc| cols[cc][r])
    }

    #[test]
    fn kron_identity_cases() {
        let i2 = ComplexMatrix::<f64>::identity(2);
        let i4 = ComplexMatrix::<f64>::identity(4);
        assert_eq!(kron(&i2, &i2), i4);

        let zz = kron(&sigma_z(), &sigma_z());
        for (i, want) in [1.0, -1.0, -1.0, 1.0].iter().enumerate() {
            assert_abs_diff_eq!(zz[(i, i)].re, want, epsilon = 0.0);
        }

        let p0 = ComplexMatrix::new(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        let emb = kron(&p0, &i2);
        for (i, want) in [1.0, 1.0, 0.0, 0.0].iter().enumerate() {
            assert_abs_diff_eq!(emb[(i, i)].re, want, epsilon = 0.0);
        }
    }

    #[test]
    fn kron_is_associative() {
        let mut rng = StdRng::seed_from_u64(0);
        for _ in 0..10 {
            let a = random_hermitian(2, &mut rng);
            let b = random_hermitian(3, &mut rng);
            let d = random_hermitian(2, &mut rng);
            let lhs = kron(&kron(&a, &b), &d);
            let rhs = kron(&a, &kron(&b, &d));
            assert!((&lhs - &rhs).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn eig_pauli_z() {
        let eig = eig_hermitian(&sigma_z()).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.eigenvalues[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn eig_identity() {
        let eig = eig_hermitian(&ComplexMatrix::<f64>::identity(4)).unwrap();
        for l in eig.eigenvalues {
            assert_abs_diff_eq!(l, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn eig_pauli_x_vectors() {
        let eig = eig_hermitian(&sigma_x()).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.eigenvalues[1], 1.0, epsilon = 1e-12);
        // |−⟩ then |+⟩, up to phase: entries of each column have equal
        // magnitude 1/√2 and the right relative sign
        let v = &eig.eigenvectors;
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for col in 0..2 {
            for row in 0..2 {
                assert_abs_diff_eq!(v[(row, col)].norm(), inv_sqrt2, epsilon = 1e-10);
            }
        }
        let ratio_minus = v[(1, 0)] / v[(0, 0)];
        let ratio_plus = v[(1, 1)] / v[(0, 1)];
        assert_abs_diff_eq!(ratio_minus.re, -1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(ratio_plus.re, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn eig_reconstruction_and_orthonormality() {
        let mut rng = StdRng::seed_from_u64(1);
        for n in [2usize, 5, 8, 16] {
            let h = random_hermitian(n, &mut rng);
            let eig = eig_hermitian(&h).unwrap();
            let rebuilt = eig.rebuild_with(|l| l);
            let rel = (&rebuilt - &h).frobenius_norm() / h.frobenius_norm();
            assert!(rel < 1e-10, "reconstruction residual {rel} at n={n}");

            let sum: f64 = eig.eigenvalues.iter().sum();
            assert_abs_diff_eq!(sum, h.trace().re, epsilon = 1e-10);
            assert!(eig.eigenvectors.unitarity_residual() < 1e-10);
            let sorted = eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]);
            assert!(sorted);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::new(2, 2, vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_psd_examples() {
        let i4 = ComplexMatrix::<f64>::identity(4);
        let s = sqrt_psd(&i4).unwrap();
        assert!((&s - &i4).frobenius_norm() < 1e-12);

        let d = ComplexMatrix::from_real_diag(&[4.0, 9.0]);
        let s = sqrt_psd(&d).unwrap();
        assert_abs_diff_eq!(s[(0, 0)].re, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s[(1, 1)].re, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn sqrt_psd_round_trip_random() {
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..5 {
            let a = random_hermitian(6, &mut rng);
            let psd = a.matmul(&a); // A² is PSD for Hermitian A
            let s = sqrt_psd(&psd).unwrap();
            let back = s.matmul(&s);
            assert!((&back - &psd).frobenius_norm() < 1e-8);
        }
    }

    #[test]
    fn sqrt_psd_rejects_negative() {
        let d = ComplexMatrix::from_real_diag(&[1.0, -0.5]);
        assert!(matches!(sqrt_psd(&d), Err(Error::NotPsd(_))));
    }

    #[test]
    fn singular_values_basics() {
        let sv = singular_values(&ComplexMatrix::<f64>::identity(16));
        assert_eq!(sv.len(), 16);
        for s in sv {
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-12);
        }
        let sv = singular_values(&ComplexMatrix::<f64>::zeros(4, 4));
        assert!(sv.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn singular_values_match_gram_eigenvalues() {
        // independent cross-check: σ² of M against eigenvalues of M†M
        let mut rng = StdRng::seed_from_u64(3);
        let m = ComplexMatrix::from_fn(7, 5, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let sv = singular_values(&m);
        let gram = m.adjoint().matmul(&m);
        let ev = eig_hermitian(&gram).unwrap().eigenvalues;
        for (s, l) in sv.iter().zip(ev.iter().rev()) {
            assert_abs_diff_eq!(s * s, l, epsilon = 1e-10);
        }
    }

    #[test]
    fn real_svd_matches_complex_route() {
        let mut rng = StdRng::seed_from_u64(4);
        for (r, cn) in [(6usize, 4usize), (4, 6), (5, 5)] {
            let data: Vec<f64> = (0..r * cn).map(|_| rng.random::<f64>() - 0.5).collect();
            let m = ComplexMatrix::from_fn(r, cn, |i, j| c(data[i * cn + j], 0.0));
            let a = singular_values_real(r, cn, &data);
            let b = singular_values(&m);
            for (x, y) in a.iter().zip(&b) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&ComplexMatrix::<f64>::identity(16)), 16);

        // outer product of one vector
        let v: Vec<Complex64> = (0..5).map(|i| c(1.0 + i as f64, 0.3 * i as f64)).collect();
        let outer = ComplexMatrix::from_fn(5, 5, |i, j| v[i] * v[j].conj());
        assert_eq!(rank(&outer), 1);
    }

    #[test]
    fn rank_invariant_under_permutation_and_unitary() {
        let mut rng = StdRng::seed_from_u64(5);
        let m = {
            // rank-3 matrix in dimension 6
            let a = ComplexMatrix::from_fn(6, 3, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
            let b = ComplexMatrix::from_fn(3, 6, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
            a.matmul(&b)
        };
        assert_eq!(rank(&m), 3);

        // row permutation
        let perm = [3usize, 0, 4, 1, 5, 2];
        let permuted = ComplexMatrix::from_fn(6, 6, |i, j| m[(perm[i], j)]);
        assert_eq!(rank(&permuted), 3);

        for _ in 0..3 {
            let u = random_unitary(6, &mut rng);
            assert_eq!(rank(&u.matmul(&m)), 3);
            assert_eq!(rank(&m.matmul(&u)), 3);
        }
    }

    #[test]
    fn sym_eigvals_real_matches_complex() {
        let mut rng = StdRng::seed_from_u64(6);
        let n = 9;
        let mut data = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..=i {
                let x = rng.random::<f64>() - 0.5;
                data[i * n + j] = x;
                data[j * n + i] = x;
            }
        }
        let ev = sym_eigvals_real(n, &data);
        let m = ComplexMatrix::from_fn(n, n, |i, j| c(data[i * n + j], 0.0));
        let expect = eig_hermitian(&m).unwrap().eigenvalues;
        for (a, b) in ev.iter().zip(&expect) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn generic_over_f32() {
        let m = ComplexMatrix::<f32>::identity(4);
        let eig = eig_hermitian(&m).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-6);
        assert_eq!(rank(&m), 4);
    }

    #[test]
    fn rejects_nonfinite_entries() {
        let bad = vec![c(f64::NAN, 0.0); 4];
        assert!(ComplexMatrix::new(2, 2, bad).is_err());
    }
}
