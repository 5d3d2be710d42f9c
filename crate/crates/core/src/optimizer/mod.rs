//! Local minimization of the discrete action over the symmetric coefficient
//! space, and verification of candidates against Newton's equations.

mod config;
mod init;
mod minimize;
mod verify;

pub use config::{Method, MinimizeConfig, NonCoercivePolicy};
pub use init::{continue_with, random_init, Changes, MAX_INIT_DRAWS};
pub use minimize::{minimize, IterationRecord, MinimizeOutcome, Minimizer, Status};
pub use verify::{verify, VerificationReport, VerifyTolerances, GRID_FACTOR};
