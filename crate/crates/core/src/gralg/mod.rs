//! Exact graded algebra over ℚ: polynomial rings, finite-group actions and
//! invariants, Euler classes, twisted group rings, rank-1 graded modules in
//! normal form and windowed form, normality, and stable Koszul complexes.

pub mod euler;
pub mod invariants;
pub mod koszul;
pub mod normal_form;
pub mod normality;
pub mod poly;
pub mod ring;
pub mod solomon;
pub mod twisted;
pub mod wmod;

pub use normal_form::{GradedModule, NormalForm, Summand, SummandKind};
pub use poly::Poly;
pub use ring::{polynomial_ring, GradedRing, RingAction};
pub use wmod::{GMap, RingKind, WMod};
