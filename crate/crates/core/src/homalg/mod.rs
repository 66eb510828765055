//! Injectives, injective resolutions and Ext in the rank-1 diagram
//! categories.

pub mod ext;
pub mod injective;
pub mod resolution;

pub use ext::{ext, ExtEntry, ExtTable};
pub use injective::{f_sub, f_top, hom_closed, hom_closed_dim, InjKind, Injective};
pub use resolution::{embed_in_injectives, injective_resolution, Resolution};
