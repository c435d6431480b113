//! Exact algebraic differential operators over the polynomial model ring
//! `A = ℚ[x_1..x_n]`.
//!
//! * [`ring`]: polynomials, free-module sections, polynomial matrices.
//! * [`diffop`]: operators in normal form `Σ C_α ∂^α`, the commutator
//!   calculus `δ_a`, order, first-order decomposition and currying.
//! * [`jet`]: jet coordinates, prolongation, the factorization of an
//!   operator through its jet homomorphism, `d¹` and connections.
//! * [`testspace`]: compactly supported model sections over a box, exact
//!   integration and sup seminorms.
//! * [`dist`]: distributions (point functionals plus densities), transposes
//!   of operators, Lie derivatives, restriction and coefficient recovery.
//!
//! Everything is generic over a [`Scalar`] coefficient field; the aliases
//! below fix the exact rationals.

pub mod diffop;
pub mod dist;
mod error;
pub mod jet;
mod linalg;
pub mod parse;
pub mod random;
pub mod ring;
mod scalar;
pub mod serial;
pub mod testspace;
pub mod verify;

pub use error::{Error, Result};
pub use parse::{infer_nvars, parse_operator, parse_poly, parse_poly_matrix, parse_rational, parse_section};
pub use scalar::Scalar;

/// Exact rational scalars.
pub type Rational = num_rational::BigRational;
pub type Poly = ring::Polynomial<Rational>;
pub type Sect = ring::Section<Rational>;
pub type Matrix = ring::PolyMatrix<Rational>;
pub type Operator = diffop::NormalOperator<Rational>;
pub type OpExpr = diffop::OperatorExpr<Rational>;
pub type Jet = jet::JetVector<Rational>;
pub type JetMap = jet::JetHom<Rational>;
pub type Conn = jet::Connection<Rational>;
pub type RBox = testspace::TestBox<Rational>;
pub type TestFn = testspace::TestSection<Rational>;
pub type JetFunction = testspace::FiberJetFunction<Rational>;
pub type Dist = dist::Distribution<Rational>;
pub type DistOp = dist::DistOperator<Rational>;
