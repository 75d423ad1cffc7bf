//! Finite group actions on finite atlases and the Borel construction.

mod action;
mod borel;
mod group;

pub use action::GroupoidAction;
pub use borel::{
    borel_bisimplicial, borel_object, check_transformation_nerve, default_trunc, equivariant_cohomology,
    equivariant_cohomology_checked, equivariant_cohomology_via_tot, transformation_groupoid, BorelObject,
};
pub use group::FiniteGroup;
