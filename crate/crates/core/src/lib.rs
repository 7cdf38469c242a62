//! Exact symbolic toolkit for the classification of threefolds with one
//! apparent double point: pencils of quadrics and their Segre symbols,
//! linear systems of surfaces in P^3 with assigned base loci, rational maps
//! and tangential projections, finite-field degree oracles, and a catalog of
//! named cases with machine-checkable invariants.

pub mod exactalg;
pub mod catalog;
pub mod linsys;
pub mod pencils;
pub mod ratmaps;

pub use exactalg::{AlgError, BinaryForm, MultiPoly, Rat, RatMatrix, Ring};
