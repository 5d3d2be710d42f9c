use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nbody::DEFAULT_COLLISION_FLOOR;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    SteepestDescent,
    /// Limited-memory secant (L-BFGS) directions.
    QuasiNewton,
}

/// What to do when the group fails the coercivity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonCoercivePolicy {
    Warn,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MinimizeConfig {
    pub max_iters: usize,
    pub grad_tol: f64,
    /// First trial step; the quasi-Newton method scales it by `1 / |g|` on the
    /// first iteration only.
    pub initial_step: f64,
    pub shrink: f64,
    pub armijo: f64,
    pub max_backtracks: usize,
    pub method: Method,
    pub memory: usize,
    pub collision_floor: f64,
    pub seed: u64,
    pub amplitude: f64,
    /// Iterates whose coefficient norm exceeds this multiple of
    /// `max(1, initial norm)` are reported as diverged.
    pub divergence_ratio: f64,
    pub non_coercive: NonCoercivePolicy,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        Self {
            max_iters: 5000,
            grad_tol: 1e-8,
            initial_step: 1.0,
            shrink: 0.5,
            armijo: 1e-4,
            max_backtracks: 60,
            method: Method::QuasiNewton,
            memory: 10,
            collision_floor: DEFAULT_COLLISION_FLOOR,
            seed: 0,
            amplitude: 1.0,
            divergence_ratio: 1e3,
            non_coercive: NonCoercivePolicy::Warn,
        }
    }
}

impl MinimizeConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if !(self.grad_tol > 0.0) {
            return bad("grad_tol must be positive");
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return bad("shrink factor must lie in (0, 1)");
        }
        if !(self.armijo > 0.0 && self.armijo < 1.0) {
            return bad("armijo constant must lie in (0, 1)");
        }
        if !(self.initial_step > 0.0) {
            return bad("initial step must be positive");
        }
        if !(self.collision_floor > 0.0) {
            return bad("collision floor must be positive");
        }
        if !(self.amplitude >= 0.0) {
            return bad("amplitude must be non-negative");
        }
        if self.method == Method::QuasiNewton && self.memory == 0 {
            return bad("quasi-Newton memory must be at least 1");
        }
        Ok(())
    }
}
