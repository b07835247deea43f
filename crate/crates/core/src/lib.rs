//! Exact and numerical tools for isoparametric hypersurfaces in spheres.

pub mod catalog;
pub mod clifford;
pub mod cm_verifier;
pub mod division_algebras;
pub mod error;
pub mod families;
pub mod nurowski;
pub mod polyalg;
pub mod spectral;

pub use error::{Error, Result};
pub use polyalg::{CompiledPoly, Monomial, Poly, ScalarQ3};
