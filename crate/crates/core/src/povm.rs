//! CG measurement operator, POVM sets built by circuit conjugation, and
//! the coefficient/Gram-matrix machinery the entropy objective runs on.
//!
//! The coarse-grained operator M_CG senses the mean |0⟩-population of the
//! register; conjugating it with circuit unitaries G^k yields binary POVMs
//! {Ω^k, I−Ω^k} whose Pauli coefficients stack into the coefficient matrix
//! X. Full rank of X makes the set informationally complete; the spectrum
//! of the Gram matrix Π = X·Xᵀ measures how evenly the set covers operator
//! space, summarized by its von Neumann entropy.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::circuit::{circuit_unitary, CircuitLayout};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::pauli::OperatorBasis;
use crate::scalar::Scalar;

/// The coarse-grained measurement operator: diagonal, with entry
/// (number of 0-bits in b)/N for bitstring b.
#[derive(Debug, Clone)]
pub struct CgMeasurement<T> {
    n_qubits: usize,
    matrix: ComplexMatrix<T>,
}

/// Build M_CG = (1/N) Σ_i I ⊗ … |0⟩⟨0|_i … ⊗ I for 1 ≤ N ≤ 8.
pub fn m_cg<T: Scalar>(n_qubits: usize) -> Result<CgMeasurement<T>> {
    if !(1..=8).contains(&n_qubits) {
        return Err(Error::InvalidConfig(format!(
            "CG measurement supports 1..=8 qubits, got {n_qubits}"
        )));
    }
    let dim = 1usize << n_qubits;
    let inv_n = T::one() / T::from_usize(n_qubits).unwrap();
    let diag: Vec<T> = (0..dim)
        .map(|b| {
            let zeros = n_qubits as u32 - (b as u32).count_ones();
            T::from_u32(zeros).unwrap() * inv_n
        })
        .collect();
    Ok(CgMeasurement {
        n_qubits,
        matrix: ComplexMatrix::from_real_diag(&diag),
    })
}

impl<T: Scalar> CgMeasurement<T> {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    /// Eigenvalues of M_CG in ascending order: k/N with multiplicity
    /// C(N, k).
    pub fn spectrum(&self) -> Vec<T> {
        let dim = 1usize << self.n_qubits;
        let mut s: Vec<T> = (0..dim).map(|b| self.matrix[(b, b)].re).collect();
        s.sort_by(|a, b| a.partial_cmp(b).expect("finite spectrum"));
        s
    }
}

/// Conjugate the CG operator by a unitary: Ω = G†·M·G. The result keeps
/// the spectrum of M, so {Ω, I−Ω} stays a valid binary POVM.
pub fn conjugate<T: Scalar>(m: &CgMeasurement<T>, g: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let dim = 1usize << m.n_qubits;
    if g.rows() != dim || g.cols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "unitary is {}x{}, CG operator dimension is {dim}",
            g.rows(),
            g.cols()
        )));
    }
    let tol = T::check_tol();
    let residual = g.unitarity_residual();
    if residual > tol {
        return Err(Error::NotUnitary {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(g.adjoint().matmul(m.matrix()).matmul(g).hermitized())
}

/// Circuit provenance of a POVM element.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Generator<T> {
    pub layout: CircuitLayout,
    pub params: Vec<T>,
}

/// One POVM element: the operator Ω and, when it came from a circuit, the
/// generating layout and angles.
#[derive(Debug, Clone)]
pub struct PovmElement<T> {
    matrix: ComplexMatrix<T>,
    generator: Option<Generator<T>>,
}

impl<T: Scalar> PovmElement<T> {
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn generator(&self) -> Option<&Generator<T>> {
        self.generator.as_ref()
    }
}

/// A set of POVM elements on a common register.
#[derive(Debug, Clone)]
pub struct PovmSet<T> {
    n_qubits: usize,
    elements: Vec<PovmElement<T>>,
}

impl<T: Scalar> PovmSet<T> {
    /// Build CG-POVM elements Ω^k = G^k†·M_CG·G^k from circuit generators.
    pub fn from_generators(n_qubits: usize, generators: Vec<Generator<T>>) -> Result<Self> {
        let m = m_cg::<T>(n_qubits)?;
        let mut elements = Vec::with_capacity(generators.len());
        for gen in generators {
            if gen.layout.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch(format!(
                    "generator layout has {} qubits, set has {n_qubits}",
                    gen.layout.n_qubits()
                )));
            }
            let g = circuit_unitary(&gen.layout, &gen.params)?;
            let matrix = conjugate(&m, &g)?;
            elements.push(PovmElement {
                matrix,
                generator: Some(gen),
            });
        }
        Ok(Self { n_qubits, elements })
    }

    /// Wrap explicit operators (e.g. projector sets). Each must be
    /// Hermitian with eigenvalues in [0, 1] up to the check tolerance.
    pub fn from_matrices(n_qubits: usize, matrices: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        let tol = T::check_tol();
        let mut elements = Vec::with_capacity(matrices.len());
        for m in matrices {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "element is {}x{}, register dimension is {dim}",
                    m.rows(),
                    m.cols()
                )));
            }
            let eig = linalg::eig_hermitian(&m)?;
            let lo = *eig.eigenvalues.first().expect("nonempty spectrum");
            let hi = *eig.eigenvalues.last().expect("nonempty spectrum");
            if lo < -tol || hi > T::one() + tol {
                return Err(Error::InvalidConfig(format!(
                    "element spectrum [{lo}, {hi}] leaves the POVM interval [0, 1]"
                )));
            }
            elements.push(PovmElement {
                matrix: m,
                generator: None,
            });
        }
        Ok(Self { n_qubits, elements })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[PovmElement<T>] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &PovmElement<T> {
        &self.elements[k]
    }

    /// Row-stack the Pauli coefficients of every element: X[k][i] = Tr(Ω^k Γ_i).
    pub fn coefficient_matrix(&self, basis: &OperatorBasis<T>) -> Result<CoefficientMatrix<T>> {
        if basis.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch(format!(
                "basis is for {} qubits, set for {}",
                basis.n_qubits(),
                self.n_qubits
            )));
        }
        let cols = basis.len();
        let mut data = Vec::with_capacity(self.elements.len() * cols);
        for el in &self.elements {
            data.extend(basis.decompose_unchecked(&el.matrix));
        }
        Ok(CoefficientMatrix {
            n_rows: self.elements.len(),
            n_cols: cols,
            data,
        })
    }

    /// Gram matrix Π_ij = Tr(Ω^i·Ω^j).
    pub fn gram(&self) -> GramMatrix<T> {
        let n = self.elements.len();
        assert!(n > 0, "Gram matrix needs a nonempty set");
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let v = self.elements[i].matrix.product_trace_re(&self.elements[j].matrix);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        GramMatrix { n, data }
    }

    /// Per-component flag: true where some element carries weight above
    /// `tol` on that Pauli basis operator. All-true is necessary for
    /// informational completeness.
    pub fn pauli_coverage(&self, basis: &OperatorBasis<T>, tol: T) -> Result<Vec<bool>> {
        assert!(tol > T::zero(), "coverage tolerance must be positive");
        if basis.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch(format!(
                "basis is for {} qubits, set for {}",
                basis.n_qubits(),
                self.n_qubits
            )));
        }
        let mut covered = vec![false; basis.len()];
        for el in &self.elements {
            let omega = basis.decompose_unchecked(&el.matrix);
            for (flag, w) in covered.iter_mut().zip(&omega) {
                if w.abs() > tol {
                    *flag = true;
                }
            }
        }
        Ok(covered)
    }

    /// Largest deviation of any element's spectrum from the CG spectrum;
    /// conjugation-built sets sit at rounding level.
    pub fn spectrum_deviation(&self) -> Result<T> {
        let reference = m_cg::<T>(self.n_qubits)?.spectrum();
        let mut worst = T::zero();
        for el in &self.elements {
            let eig = linalg::eig_hermitian(&el.matrix)?;
            for (got, want) in eig.eigenvalues.iter().zip(&reference) {
                let d = (*got - *want).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        Ok(worst)
    }
}

/// Real n × 4^N matrix of Pauli coefficients, row per POVM element.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix<T> {
    n_rows: usize,
    n_cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> CoefficientMatrix<T> {
    pub fn from_rows(n_cols: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            if r.len() != n_cols {
                return Err(Error::DimensionMismatch(format!(
                    "row has {} entries, expected {n_cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Self { n_rows, n_cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        Self {
            n_rows: n,
            n_cols: n,
            data,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.n_cols + c]
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.n_cols..(r + 1) * self.n_cols]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    /// Xᵀ·X, the cols × cols normal matrix (row-major).
    pub(crate) fn normal_matrix(&self) -> Vec<T> {
        let (n, m) = (self.n_rows, self.n_cols);
        let mut out = vec![T::zero(); m * m];
        for r in 0..n {
            let row = &self.data[r * m..(r + 1) * m];
            for i in 0..m {
                let ri = row[i];
                if ri == T::zero() {
                    continue;
                }
                for j in i..m {
                    out[i * m + j] += ri * row[j];
                }
            }
        }
        for i in 0..m {
            for j in 0..i {
                out[i * m + j] = out[j * m + i];
            }
        }
        out
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> Vec<T> {
        linalg::singular_values_real(self.n_rows, self.n_cols, &self.data)
    }

    /// Rank at relative tolerance `tol` (counted against the largest
    /// singular value).
    pub fn rank_tol(&self, tol: T) -> usize {
        assert!(tol > T::zero(), "rank tolerance must be positive");
        let sv = self.singular_values();
        match sv.first() {
            None => 0,
            Some(&top) if top == T::zero() => 0,
            Some(&top) => sv.iter().take_while(|&&s| s > tol * top).count(),
        }
    }

    /// Rank at the scalar's default relative tolerance.
    pub fn rank(&self) -> usize {
        self.rank_tol(T::rank_tol())
    }

    /// Σ σ_i⁻² over the singular values: the reconstruction error magnitude
    /// under homogeneous unit shot error. Requires full column rank.
    pub fn error_magnitude(&self) -> Result<T> {
        let sv = self.singular_values();
        let top = sv.first().copied().unwrap_or(T::zero());
        let kept: Vec<T> = sv
            .iter()
            .copied()
            .take_while(|&s| s > T::rank_tol() * top)
            .collect();
        if kept.len() < self.n_cols {
            return Err(Error::RankDeficient {
                rank: kept.len(),
                need: self.n_cols,
            });
        }
        Ok(kept.iter().map(|&s| T::one() / (s * s)).sum())
    }

    /// Dense complex copy, for code that wants generic matrix routines.
    pub fn to_complex(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(self.n_rows, self.n_cols, |r, c| {
            Complex::new(self.get(r, c), T::zero())
        })
    }
}

/// Symmetric PSD matrix of pairwise Hilbert-Schmidt inner products.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> GramMatrix<T> {
    pub fn from_raw(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "Gram matrix of size {n} needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn trace(&self) -> T {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<T> {
        linalg::sym_eigvals_real(self.n, &self.data)
    }

    /// Spectrum of Π' = Π/TrΠ, ascending; sums to one.
    pub fn normalized_spectrum(&self) -> Vec<T> {
        let tr = self.trace();
        assert!(tr > T::zero(), "Gram trace must be positive");
        self.eigenvalues().into_iter().map(|e| e / tr).collect()
    }

    /// Von Neumann entropy S = −Σ e' ln e' of the normalized spectrum,
    /// with 0·ln0 = 0. Lies in [0, ln n].
    pub fn entropy(&self) -> T {
        entropy_of_spectrum(&self.normalized_spectrum())
    }

    /// Sample variance of the off-diagonal entries; a uniformity
    /// diagnostic that shrinks as the set approaches a symmetric IC POVM.
    pub fn offdiag_variance(&self) -> T {
        if self.n < 2 {
            return T::zero();
        }
        let count = T::from_usize(self.n * (self.n - 1)).unwrap();
        let mut mean = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    mean += self.get(i, j);
                }
            }
        }
        mean /= count;
        let mut var = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    let d = self.get(i, j) - mean;
                    var += d * d;
                }
            }
        }
        var / count
    }
}

/// Entropy −Σ e ln e of a (sub)normalized spectrum; nonpositive entries
/// contribute zero.
pub(crate) fn entropy_of_spectrum<T: Scalar>(spectrum: &[T]) -> T {
    let mut s = T::zero();
    for &e in spectrum {
        if e > T::zero() {
            s -= e * e.ln();
        }
    }
    s
}
