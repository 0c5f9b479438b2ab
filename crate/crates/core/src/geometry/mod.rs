//! Rotationally symmetric manifolds and zonal functions on them.

mod field;
mod manifold;
mod profile;

pub use field::ScalarField;
pub use manifold::SpectralManifold;
pub use profile::{Parity, ProfileDerivatives, WarpedProfile, MIN_GRID};

pub(crate) use profile::{d1, d2, to_faces};
