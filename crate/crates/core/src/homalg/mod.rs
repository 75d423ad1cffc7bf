//! Cochain, double and triple complexes with exact cohomology.

mod coefficients;
mod complex;
mod double;
mod triple;

pub use coefficients::CoefficientComplex;
pub use complex::CochainComplex;
pub use double::{Block, DoubleComplex};
pub use triple::{Collapse, TripleComplex};
