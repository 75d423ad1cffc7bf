//! Finite semi-simplicial and bisemi-simplicial sets, nerves of finite
//! categories, and their cochain complexes.

mod bisimplicial;
mod category;
mod coefficients;
mod nerve;
mod semi;

pub use bisimplicial::{BiLevel, BiSemiSimplicialSet};
pub use category::{FiniteCategory, FiniteGroupoid};
pub use coefficients::Coefficients;
pub use nerve::{nerve, nerve_strings, string_face};
pub use semi::{Level, SemiSimplicialSet};
