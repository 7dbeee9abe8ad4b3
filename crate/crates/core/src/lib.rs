//! Coarse-grained POVM construction, entropy optimization, and quantum
//! state tomography for multi-qubit systems read out by a single binary
//! detector.
//!
//! A coarse-grained (CG) measurement senses only the aggregate
//! |0⟩-population of all qubits. Tomography under this constraint works by
//! conjugating the CG operator with parameterized circuit unitaries,
//! producing a set of binary POVMs whose expectation values determine the
//! density matrix once the associated coefficient matrix reaches full rank.
//! This crate provides:
//!
//! - dense complex linear algebra sized for up to eight qubits ([`linalg`])
//! - the orthonormal Pauli operator basis and coefficient decompositions
//!   ([`pauli`])
//! - the brick-wall circuit ansatz with single-qubit and Ising-coupling
//!   gate blocks ([`circuit`])
//! - CG-POVM sets, their coefficient and Gram matrices, and the
//!   von Neumann entropy objective ([`povm`])
//! - a restarted Nelder-Mead entropy maximizer ([`optimizer`])
//! - forward simulation with Poisson shot noise, linear inversion, and
//!   physical projection ([`tomography`])
//! - resource scaling studies: layer contraction, rank versus two-qubit
//!   gate budget, and depth minimization ([`scaling`])
//!
//! All numeric code is generic over the scalar type through [`Scalar`];
//! the `*64` aliases below fix `f64`, which is what the CLI and the
//! shipped studies use.

pub mod circuit;
pub mod error;
pub mod linalg;
pub mod optimizer;
pub mod pauli;
pub mod povm;
pub mod rng;
pub mod scalar;
pub mod scaling;
pub mod tomography;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `f64` complex matrix, the working precision of the shipped binaries.
pub type ComplexMatrix64 = linalg::ComplexMatrix<f64>;
/// `f64` Hermitian eigensystem.
pub type HermitianEigenSystem64 = linalg::HermitianEigenSystem<f64>;
/// `f64` Pauli operator basis.
pub type OperatorBasis64 = pauli::OperatorBasis<f64>;
/// `f64` POVM set.
pub type PovmSet64 = povm::PovmSet<f64>;
/// `f64` coefficient matrix.
pub type CoefficientMatrix64 = povm::CoefficientMatrix<f64>;
/// `f64` Gram matrix.
pub type GramMatrix64 = povm::GramMatrix<f64>;
