//! Scalar abstraction shared by every module.

use nalgebra::{DMatrix, DVector, RealField};
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Real scalar the library is generic over (`f32` or `f64`).
///
/// The tolerance constants are the thresholds used by the algebraic checks.
/// The `f64` values are the reference ones; `f32` gets looser bounds matching
/// its precision.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Algebraic identity tolerance (bracket relations, Clifford relations,
    /// pseudo-symmetry and Fermi checks).
    const ALG_TOL: f64;
    /// Orthonormalization residual tolerance.
    const ORTHO_TOL: f64;
    /// Rank-deficiency threshold on singular values.
    const RANK_TOL: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const ALG_TOL: f64 = 1e-10;
    const ORTHO_TOL: f64 = 1e-12;
    const RANK_TOL: f64 = 1e-10;
}

impl Real for f32 {
    const ALG_TOL: f64 = 2e-4;
    const ORTHO_TOL: f64 = 2e-5;
    const RANK_TOL: f64 = 1e-5;
}

pub type C<T> = Complex<T>;
pub type CMat<T> = DMatrix<Complex<T>>;
pub type CVec<T> = DVector<Complex<T>>;

pub(crate) fn c<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::lit(re), T::lit(im))
}

