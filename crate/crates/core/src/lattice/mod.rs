//! Subgroup posets of the maximal torus, flags, the Weyl action, transport
//! categories and component structures.

pub mod component;
pub mod group;
pub mod poset;
pub mod subgroup;
pub mod transport;

pub use component::{ComponentStructure, StructureKind};
pub use group::{FiniteGroup, Group};
pub use poset::{build_poset, Flag, SubgroupPoset, Truncation};
pub use subgroup::Subgroup;
pub use transport::{TransportMorphism, WPoset};
