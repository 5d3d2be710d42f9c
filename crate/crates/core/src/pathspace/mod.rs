//! Finite-dimensional symmetric loop spaces built from Fourier sine
//! polynomials on the fundamental domain, with the discrete action and its
//! gradient.

mod path;
mod quadrature;
mod reconstruct;
mod symmetrize;

pub use path::FourierPath;
pub use quadrature::{
    action_gradient, action_value, discrete_action, discrete_potential, evaluate, ActionReport, PotentialValue,
    Quadrature, QuadratureParams,
};
pub use reconstruct::{
    extend_to_full_period, full_position, full_state, locate, sample_full_period, FullState, SampledTrajectory,
    JUNCTION_TOL,
};
pub use symmetrize::{symmetrize, symmetry_defect};
