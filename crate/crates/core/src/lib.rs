//! Numerical laboratory for logarithmic Sobolev inequalities, heat-semigroup
//! bounds and volume noncollapsing along rotationally symmetric Ricci flow.
//!
//! Manifolds are warped products `ds² + φ(s)² g_{S^{n−1}}` and all functions
//! are zonal, which turns every operator into a weighted three-point stencil.
//! Each estimate is evaluated with explicit constants and reported as an
//! [`functionals::InequalityReport`].

pub mod cli;
pub mod error;
pub mod euclidean;
pub mod flow;
pub mod functionals;
pub mod geometry;
pub mod linalg;
pub mod noncollapse;
pub mod quadrature;
pub mod semigroup;
pub mod special;

pub use error::{Error, Result};
pub use geometry::{ScalarField, SpectralManifold, WarpedProfile};
