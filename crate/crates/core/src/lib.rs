//! Exact computational models for rational toral G-spectra over small
//! compact Lie groups: subgroup lattices, diagrams of graded rings and
//! modules, injective resolutions, Ext, and Adams E₂ pages.

pub mod adams;
pub mod cells;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod diagram;
pub mod gralg;
pub mod homalg;
pub mod lattice;
pub mod linalg;
pub mod par;
pub mod selftest;

pub use error::{Error, Result};
