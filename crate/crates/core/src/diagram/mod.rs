//! Flag-indexed diagrams of rings and modules, the qce and F-continuity
//! checks, and the descent functors `θ_*` and `Ψ`.

pub mod descent;
pub mod module;
pub mod qce;
pub mod rings;

pub use rings::{build_all, build_ra, build_rinv, build_rtw, Flavor, RingDiagram, RingValue};
pub use module::{DiagramMap, DiagramModule, Level, Shape};
pub use qce::{check_qce, Condition, QceFailure, QceReport};
pub use descent::{counit_check, psi, theta_star, unit_check, DescentCheck};
