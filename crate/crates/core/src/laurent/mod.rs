//! The graded Poisson algebra of Laurent symbols on the punctured cotangent
//! bundle of the circle (or of the line).

mod circle;
mod operator;
mod truncated;

pub use circle::{density_action, Basis, CircleFunction, DensityWeight, VectorField};
pub use operator::{DiffOp, OpLaurent};
pub use truncated::{GradeBounds, TruncatedLaurent};
