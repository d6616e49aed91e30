//! Dirichlet-Laplacian eigenvalue counting for balls in ℝ^d (d ≥ 3).
//!
//! The spectrum of the unit ball is `{ j_{n+d/2-1,k}^2 }` where each zero
//! carries the spherical-harmonic multiplicity `m_n^d`. This crate counts it
//! two ways: exactly from certified Bessel zeros ([`spectral`]) and through a
//! weighted lattice-point count in a dilated planar domain ([`lattice`]). The
//! remaining modules supply the special functions, the planar profile
//! geometry, zero finding and the report/scan machinery used to compare the
//! two counts against the two-term Weyl law.

pub mod error;
pub mod exact_sum;
pub mod geometry;
pub mod lattice;
pub mod quadrature;
pub mod report;
pub mod scan;
pub mod specfun;
pub mod spectral;
pub mod stats;
pub mod verify;
pub mod zeros;

pub use error::{Error, Result};
pub use specfun::BesselOrder;
