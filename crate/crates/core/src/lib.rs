//! Exact equivariant cohomology of finite groupoid atlases with finite group
//! actions: Borel, Cartan and discrete Getzler models, and the spectral
//! sequences relating them.

pub mod error;
pub mod exactalg;
pub mod getzler;
pub mod groupcoh;
pub mod homalg;
pub mod simplicial;
pub mod spectra;
pub mod cartan;
pub mod stackact;

pub use error::{Error, Result};
