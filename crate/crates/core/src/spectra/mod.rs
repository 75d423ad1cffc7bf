//! Spectral sequences of bounded double complexes, and the ones attached to
//! a group acting on an atlas.

mod pages;
#[cfg(test)]
mod reference;
mod theorems;

pub use pages::{convergence_check, pages, ConvergenceReport, Filtration, Page, PageEntry, SpectralSequence};
pub use theorems::{atlas_ss, discrete_borel_ss, hyper_ss, HyperMode, IdentifiedSequence, Mismatch};
