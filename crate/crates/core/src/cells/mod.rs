//! Algebraic images of the standard cells, fixed points of induced spaces,
//! adjoint suspension and change of groups.

pub mod change;
pub mod fixed;
pub mod recipes;
pub mod spec;
pub mod suspend;

pub use change::{change_groups, coinduction_square, restriction_square, support, Inclusion, SquareReport, Which};
pub use fixed::{fixed_point_decomposition, FixedPointDecomposition};
pub use recipes::{catalog, pi_a};
pub use spec::{CellKind, CellSpec, FromLevel, ToralSub};
pub use suspend::{suspend_adjoint, SuspendReport};
