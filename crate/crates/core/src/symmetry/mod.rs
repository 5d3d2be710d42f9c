//! Finite symmetry groups acting on loops of configurations: closure from
//! generators, time-action classification, projectors and coercivity.

mod element;
mod group;
mod projector;
mod time;

pub use element::{GroupElement, Permutation, ORTHOGONALITY_TOL};
pub use group::{close_group, classify, ActionType, BoundaryData, Classification, SymmetryGroup, DEDUP_TOL};
pub use projector::{
    act_on_config, boundary_involution, centering_projector, fixed_centered_dimension, group_projector,
    is_coercive, kernel_projector, BoundaryInvolution, RANK_TOL,
};
pub use time::TimeAction;
