//! Group cohomology of finite groups through inhomogeneous bar cochains.

mod bar;
mod module;

pub use bar::{action_on_cohomology, bar_complex, group_cohomology};
pub use module::GModule;
