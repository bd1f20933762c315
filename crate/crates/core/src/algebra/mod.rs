//! Coordinate rings of scrolls, Veronese varieties and plane cubics in fixed
//! monomial bases.

mod cubic;
mod forms;
mod monomial;
mod ring;
mod spec;

pub use cubic::{is_squarefree, Cubic, NormalForms, CUBIC_MONOMIALS};
pub use forms::{LinearForm, LinearTuple, QuadraticForm};
pub use monomial::{monomials_of_degree, Monomial};
pub use ring::CoordinateRing;
pub use spec::{binomial, VarietySpec, MAX_DIM1, MAX_DIM2, MAX_PLANE_CUBIC_DEGREE};

pub(crate) use forms::{dot, norm};
