//! Orthonormal Hermitian operator basis for N qubits.
//!
//! The basis elements are tensor products of {I, σx, σy, σz} with each
//! single-qubit factor scaled by 1/√2, which makes Tr(Γi·Γj) = δij exactly.
//! That orthonormality is what ties the Gram matrix to the coefficient
//! matrix (Π = X·Xᵀ), so it is enforced rather than left to convention.
//!
//! Elements are stored structurally (bit masks per Pauli string), not as
//! dense matrices: a Pauli string has one nonzero per column, so traces
//! against arbitrary operators cost O(2^N) per component instead of O(4^N).
//! [`OperatorBasis::element`] materializes the dense matrix on demand.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Scalar;

/// Real coefficients of a Hermitian operator in the basis, length 4^N.
pub type CoefficientVector<T> = Vec<T>;

const LABEL_CHARS: [char; 4] = ['I', 'X', 'Y', 'Z'];

/// Structural form of one basis element: which qubits carry an X-like flip,
/// which carry a Z-like sign, and how many σy factors contribute an i.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct PauliMasks {
    /// bit set where the factor is σx or σy (column index flips)
    xmask: usize,
    /// bit set where the factor is σy or σz (sign depends on the column bit)
    zlike: usize,
    /// number of σy factors, determining the global i^k phase
    y_count: u32,
}

/// Orthonormal Pauli operator basis {Γ_i} for `n_qubits`, ordered
/// lexicographically in the labels with I < X < Y < Z; element 0 is the
/// normalized identity.
#[derive(Debug, Clone)]
pub struct OperatorBasis<T> {
    n_qubits: usize,
    dim: usize,
    labels: Vec<String>,
    masks: Vec<PauliMasks>,
    /// 2^{-N/2}, the product of the per-qubit 1/√2 factors
    norm: T,
}

impl<T: Scalar> OperatorBasis<T> {
    /// Build the basis for 1 ≤ `n_qubits` ≤ 8.
    pub fn build(n_qubits: usize) -> Result<Self> {
        if !(1..=8).contains(&n_qubits) {
            return Err(Error::InvalidConfig(format!(
                "operator basis supports 1..=8 qubits, got {n_qubits}"
            )));
        }
        let count = 4usize.pow(n_qubits as u32);
        let mut labels = Vec::with_capacity(count);
        let mut masks = Vec::with_capacity(count);
        for code in 0..count {
            let mut label = String::with_capacity(n_qubits);
            let mut xmask = 0usize;
            let mut zlike = 0usize;
            let mut y_count = 0u32;
            for qubit in 0..n_qubits {
                // base-4 digit for this qubit, qubit 0 most significant
                let digit = (code >> (2 * (n_qubits - 1 - qubit))) & 0b11;
                label.push(LABEL_CHARS[digit]);
                let bit = 1usize << (n_qubits - 1 - qubit);
                match digit {
                    1 => xmask |= bit,
                    2 => {
                        xmask |= bit;
                        zlike |= bit;
                        y_count += 1;
                    }
                    3 => zlike |= bit,
                    _ => {}
                }
            }
            labels.push(label);
            masks.push(PauliMasks { xmask, zlike, y_count });
        }
        let norm = T::lit(2.0).powi(-(n_qubits as i32)).sqrt();
        Ok(Self {
            n_qubits,
            dim: 1 << n_qubits,
            labels,
            masks,
            norm,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Hilbert-space dimension 2^N.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis elements, 4^N.
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Pauli-string labels ("II", "IX", ...), in element order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Phase carried by column `col` of element `idx`, times i^{y_count}.
    fn column_phase(&self, idx: usize, col: usize) -> Complex<T> {
        let m = &self.masks[idx];
        let mut sign = if (col & m.zlike).count_ones() % 2 == 1 {
            -T::one()
        } else {
            T::one()
        };
        // i^{y_count}: cycle 1, i, -1, -i
        match m.y_count % 4 {
            0 => Complex::new(sign, T::zero()),
            1 => Complex::new(T::zero(), sign),
            2 => {
                sign = -sign;
                Complex::new(sign, T::zero())
            }
            _ => Complex::new(T::zero(), -sign),
        }
    }

    /// Materialize Γ_idx as a dense matrix.
    pub fn element(&self, idx: usize) -> ComplexMatrix<T> {
        assert!(idx < self.len(), "basis element index out of range");
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        let xmask = self.masks[idx].xmask;
        for col in 0..self.dim {
            let phase = self.column_phase(idx, col).scale(self.norm);
            m[(col ^ xmask, col)] = phase;
        }
        m
    }

    /// Coefficients ω_i = Tr(op·Γ_i) of a Hermitian operator.
    pub fn decompose(&self, op: &ComplexMatrix<T>) -> Result<CoefficientVector<T>> {
        if op.rows() != self.dim || op.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, basis dimension is {}",
                op.rows(),
                op.cols(),
                self.dim
            )));
        }
        let tol = T::check_tol();
        let residual = op.hermitian_residual();
        if residual > tol {
            return Err(Error::NotHermitian {
                residual: residual.to_f64().unwrap_or(f64::NAN),
                tol: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(self.decompose_unchecked(op))
    }

    /// Same as [`decompose`](Self::decompose) without the hermiticity check;
    /// callers on hot paths conjugate Hermitian operators by construction.
    /// The imaginary residual (rounding-level for Hermitian input) is
    /// discarded.
    pub fn decompose_unchecked(&self, op: &ComplexMatrix<T>) -> CoefficientVector<T> {
        let mut out = Vec::with_capacity(self.len());
        for idx in 0..self.len() {
            let xmask = self.masks[idx].xmask;
            let mut acc = Complex::<T>::zero();
            for r in 0..self.dim {
                // Tr(op·Γ) touches entry (r, r ^ xmask) with the phase of
                // column r
                acc = acc + op[(r, r ^ xmask)] * self.column_phase(idx, r);
            }
            out.push(acc.re * self.norm);
        }
        out
    }

    /// Σ v_i Γ_i.
    pub fn reconstruct(&self, coeffs: &[T]) -> Result<ComplexMatrix<T>> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "coefficient vector has length {}, basis has {} elements",
                coeffs.len(),
                self.len()
            )));
        }
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for (idx, &v) in coeffs.iter().enumerate() {
            if v == T::zero() {
                continue;
            }
            let xmask = self.masks[idx].xmask;
            let w = v * self.norm;
            for col in 0..self.dim {
                let add = self.column_phase(idx, col).scale(w);
                let entry = &mut m[(col ^ xmask, col)];
                *entry = *entry + add;
            }
        }
        Ok(m)
    }
}
