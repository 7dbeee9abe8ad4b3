//! Floating-point scalar abstraction.
//!
//! Everything numeric in this crate is generic over [`Scalar`], implemented
//! for `f32` and `f64`. The default check tolerances are tied to the scalar
//! so that `f32` instantiations remain usable in tests; the documented
//! defaults throughout the crate refer to the `f64` values.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum<Self> + Debug + Display + Send + Sync + 'static
{
    /// Convert an `f64` literal; panics only if the value is not
    /// representable, which cannot happen for the in-range constants used
    /// in this crate.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal out of range for scalar type")
    }

    /// Residual tolerance for structural checks (hermiticity, unitarity,
    /// orthonormality): `1e-10` for `f64`.
    fn check_tol() -> Self;

    /// Relative singular-value threshold for rank decisions: `1e-8` for
    /// `f64`.
    fn rank_tol() -> Self;

    /// Eigenvalue floor below which a nominally PSD matrix is rejected:
    /// `-1e-8` for `f64`; values in `[floor, 0)` are clamped to zero.
    fn psd_tol() -> Self;

    /// Threshold above which a Pauli coefficient counts as structurally
    /// nonzero: `1e-6` for `f64`. Structural zeros sit at rounding level
    /// while generic nonzero coefficients are O(0.1).
    fn coverage_tol() -> Self;
}

impl Scalar for f64 {
    fn check_tol() -> Self {
        1e-10
    }
    fn rank_tol() -> Self {
        1e-8
    }
    fn psd_tol() -> Self {
        -1e-8
    }
    fn coverage_tol() -> Self {
        1e-6
    }
}

impl Scalar for f32 {
    fn check_tol() -> Self {
        1e-4
    }
    fn rank_tol() -> Self {
        1e-4
    }
    fn psd_tol() -> Self {
        -1e-4
    }
    fn coverage_tol() -> Self {
        1e-3
    }
}
