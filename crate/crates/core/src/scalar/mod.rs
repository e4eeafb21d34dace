//! Exact coefficient rings: rationals, their Gaussian extension, and sparse
//! polynomials over those in a fixed set of deformation parameters.

mod gaussian;
mod parse;
mod poly;

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::Result;

pub use gaussian::{GaussianRational, RealRational};
pub use parse::parse_poly;
pub use poly::{Monomial, Poly, Var, VARS};

/// An exact commutative coefficient ring containing the Gaussian integers.
///
/// Every coefficient type used by the graded algebra implements this:
/// differentiating a Fourier mode needs the imaginary unit, and the closed-form
/// deformation coefficients need exact division by factorials.
pub trait Coeff:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(n: i64) -> Self;

    /// Multiplication by the imaginary unit.
    fn mul_i(&self) -> Self;

    /// Exact division by a nonzero integer.
    fn div_int(&self, n: i64) -> Result<Self>;

    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn scale_int(&self, n: i64) -> Self {
        self.mul_ref(&Self::from_i64(n))
    }
}

/// A coefficient ring that is also a field.
pub trait Field: Coeff {
    fn inv(&self) -> Option<Self>;
}

/// `n!` as a coefficient.
pub fn factorial<C: Coeff>(n: u32) -> C {
    (1..=n as i64).fold(C::one(), |acc, k| acc.scale_int(k))
}

/// Exact division by `n!`.
pub fn div_factorial<C: Coeff>(c: &C, n: u32) -> C {
    (1..=n as i64).fold(c.clone(), |acc, k| {
        acc.div_int(k).expect("factorial divisor is nonzero")
    })
}

pub fn pow<C: Coeff>(base: &C, exp: u32) -> C {
    let mut acc = C::one();
    for _ in 0..exp {
        acc = acc.mul_ref(base);
    }
    acc
}
