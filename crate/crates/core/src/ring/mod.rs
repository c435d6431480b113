//! The model ring `A = K[x_1..x_n]`, its free modules and bundle morphisms.

mod matrix;
mod multi_index;
mod poly;
mod section;

pub use matrix::PolyMatrix;
pub use multi_index::MultiIndex;
pub(crate) use poly::write_monomial;
pub use poly::{poly_arith, variable_name, PolyOp, Polynomial};
pub use section::Section;
