//! Exact verification engine for deformations of the embedding
//! `f d/dx ↦ f ξ` of circle vector fields into Poisson algebras of Laurent
//! symbols.
//!
//! The algebraic layers ([`scalar`], [`laurent`], [`linalg`]) are generic
//! over the coefficient ring; the aliases below fix the ring used by the
//! deformation-theoretic modules: sparse polynomials in the deformation
//! parameters over the Gaussian rationals.

pub mod central;
pub mod cohomology;
pub mod deformations;
pub mod error;
pub mod laurent;
pub mod linalg;
pub mod recursion;
pub mod report;
pub mod scalar;
pub mod sl2;

pub use error::{Error, Result};
pub use laurent::{Basis, DensityWeight, GradeBounds};
pub use scalar::{Coeff, Field, GaussianRational, Monomial, Poly, Var};

/// Arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;
/// `ℚ(i)`.
pub type GaussQ = GaussianRational<Rational>;
/// Polynomial in `λ, μ, t, c0, c1, c2` over `ℚ(i)`.
pub type ParamScalar = Poly<GaussQ>;
pub type CircleFn = laurent::CircleFunction<ParamScalar>;
pub type Vect = laurent::VectorField<ParamScalar>;
pub type Laurent = laurent::TruncatedLaurent<ParamScalar>;
pub type OpTable = laurent::OpLaurent<ParamScalar>;
