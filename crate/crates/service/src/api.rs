//! Request and response bodies.

use eqorbit_core::io::GroupFile;
use eqorbit_core::optimizer::{IterationRecord, MinimizeConfig, Status};
use eqorbit_core::pathspace::ActionReport;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunState {
    Idle,
    Running,
    Converged,
    Failed,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    pub group: GroupFile,
    pub s: Option<usize>,
    pub nu: Option<usize>,
    #[serde(default)]
    pub config: Option<MinimizeConfig>,
    pub snapshot_every: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CreateResponse {
    pub id: String,
    pub coercive: bool,
    pub warnings: Vec<String>,
    pub state: RunState,
    pub report: Option<ActionReport>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepRequest {
    #[serde(default)]
    pub iterations: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbRequest {
    pub amplitude: f64,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReshapeRequest {
    pub s: Option<usize>,
    pub nu: Option<usize>,
    #[serde(default)]
    pub truncate: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct StateQuery {
    pub resolution: Option<usize>,
}

/// Full-period samples: `configs[i]` holds `n * d` coordinates at `times[i]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub configs: Vec<Vec<f64>>,
}

/// Server-push event on `/sessions/{id}/events`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Event {
    Progress { iter: usize, action: f64, grad_norm: f64, min_distance: f64 },
    Snapshot { iter: usize, symmetry_defect: f64, trajectory: Trajectory },
    Status { iter: usize, state: RunState, status: Option<Status>, message: Option<String> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepResponse {
    pub iterations: usize,
    pub iter: usize,
    pub state: RunState,
    pub status: Option<Status>,
    pub report: Option<ActionReport>,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionState {
    pub id: String,
    pub name: String,
    pub state: RunState,
    pub status: Option<Status>,
    pub iter: usize,
    pub n: usize,
    pub d: usize,
    pub l: usize,
    pub s: usize,
    pub nu: usize,
    pub coercive: bool,
    pub report: Option<ActionReport>,
    /// `s + 2` blocks of `n * d` values, `a_0` first.
    pub coeffs: Vec<Vec<f64>>,
    pub symmetry_defect: f64,
    pub last_error: Option<String>,
    pub history: Vec<IterationRecord>,
    pub trajectory: Trajectory,
}
