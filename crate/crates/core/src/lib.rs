//! Exact construction and certification of biharmonic and conformal-biharmonic
//! maps into Euclidean spheres.

pub mod dd;
pub mod exec;
pub mod poly;
pub mod radial;
pub mod rational;
pub mod trig;
pub mod catalog;
pub mod domain;
pub mod field;
pub mod map;
pub mod eval;
pub mod functionals;
pub mod deformer;
pub mod quadrature;
pub mod verifier;

/// Crate version, recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
