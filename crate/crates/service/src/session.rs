use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use eqorbit_core::io::{GroupFile, OrbitRecord};
use eqorbit_core::optimizer::{
    continue_with, random_init, Changes, IterationRecord, MinimizeConfig, Minimizer, NonCoercivePolicy, Status,
};
use eqorbit_core::pathspace::{sample_full_period, symmetry_defect, Quadrature, QuadratureParams};
use eqorbit_core::symmetry::{fixed_centered_dimension, SymmetryGroup};
use tokio::sync::broadcast;

use crate::api::*;
use crate::error::ApiError;

/// Ring buffer length for per-session history.
pub const HISTORY_CAP: usize = 10_000;
/// Default iterations between trajectory snapshots.
pub const SNAPSHOT_EVERY: usize = 25;
/// Samples per fundamental domain in `get_state` trajectories.
pub const STATE_RESOLUTION_PER_DOMAIN: usize = 256;
/// Samples per fundamental domain in streamed snapshots.
pub const SNAPSHOT_RESOLUTION_PER_DOMAIN: usize = 64;
/// Symmetry check applied to every snapshot before it is emitted.
pub const SNAPSHOT_SYMMETRY_TOL: f64 = 1e-8;

/// Defaults applied to `POST /sessions` fields the client leaves out.
#[derive(Debug, Clone)]
pub struct Defaults {
    pub s: usize,
    pub nu: Option<usize>,
    pub config: MinimizeConfig,
}

impl Default for Defaults {
    fn default() -> Self {
        Self { s: 12, nu: None, config: MinimizeConfig::default() }
    }
}

pub struct Session {
    id: String,
    group_file: GroupFile,
    group: Arc<SymmetryGroup>,
    minimizer: Minimizer,
    state: RunState,
    coercive: bool,
    history: VecDeque<IterationRecord>,
    snapshot_every: usize,
    perturbations: u64,
    events: broadcast::Sender<Event>,
}

fn state_for(status: Option<Status>) -> RunState {
    match status {
        None => RunState::Idle,
        Some(Status::Converged) => RunState::Converged,
        Some(_) => RunState::Failed,
    }
}

impl Session {
    pub fn create(
        id: String,
        req: CreateRequest,
        defaults: &Defaults,
        events: broadcast::Sender<Event>,
    ) -> Result<(Self, CreateResponse), ApiError> {
        let cfg = req.config.unwrap_or_else(|| defaults.config.clone());
        cfg.validate()?;
        let group = Arc::new(req.group.build()?);
        let s = req.s.unwrap_or(defaults.s);
        let nu = req.nu.or(defaults.nu).unwrap_or(QuadratureParams::default_for(s).nu);
        let quad = Quadrature::new(QuadratureParams::new(nu)?, s)?;

        let fixed = fixed_centered_dimension(&group);
        let coercive = fixed == 0;
        let mut warnings = Vec::new();
        if !coercive {
            let msg = format!("not coercive: the fixed centred subspace has dimension {fixed}");
            if cfg.non_coercive == NonCoercivePolicy::Fail {
                return Err(ApiError::new(axum::http::StatusCode::BAD_REQUEST, "not-coercive", msg));
            }
            warnings.push(msg);
        }

        let path = random_init(group.clone(), s, cfg.seed, cfg.amplitude, cfg.collision_floor)?;
        let minimizer = Minimizer::new(path, quad, cfg);
        let snapshot_every = req.snapshot_every.unwrap_or(SNAPSHOT_EVERY).max(1);
        let mut session = Session {
            id,
            group_file: req.group,
            group,
            state: RunState::Idle,
            coercive,
            history: VecDeque::new(),
            snapshot_every,
            perturbations: 0,
            events,
            minimizer,
        };
        session.state = state_for(session.minimizer.status());
        session.push_history_from(0);
        let resp = CreateResponse {
            id: session.id.clone(),
            coercive,
            warnings,
            state: session.state,
            report: session.minimizer.report().copied(),
        };
        Ok((session, resp))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn run_state(&self) -> RunState {
        self.state
    }

    fn push_history_from(&mut self, start: usize) {
        for rec in &self.minimizer.history()[start..] {
            if self.history.len() == HISTORY_CAP {
                self.history.pop_front();
            }
            self.history.push_back(*rec);
        }
    }

    fn emit(&self, event: &Event, log: &mut Vec<Event>) {
        // no subscribers is not an error
        let _ = self.events.send(event.clone());
        log.push(event.clone());
    }

    fn trajectory(&self, resolution: usize) -> Result<(Trajectory, f64), ApiError> {
        let traj = sample_full_period(self.minimizer.path(), resolution)?;
        let out = Trajectory { times: traj.times, configs: traj.configs.into_iter().map(|c| c.0).collect() };
        Ok((out, traj.junction_mismatch))
    }

    fn snapshot(&self) -> Event {
        let iter = self.minimizer.iterations();
        let defect = symmetry_defect(self.minimizer.path());
        let res = SNAPSHOT_RESOLUTION_PER_DOMAIN * self.group.l();
        match self.trajectory(res) {
            Ok((trajectory, junction)) if defect < SNAPSHOT_SYMMETRY_TOL && junction < SNAPSHOT_SYMMETRY_TOL => {
                Event::Snapshot { iter, symmetry_defect: defect, trajectory }
            }
            Ok((_, junction)) => self.status_event(Some(format!(
                "snapshot withheld: symmetry defect {defect:e}, junction mismatch {junction:e}"
            ))),
            Err(e) => self.status_event(Some(format!("snapshot withheld: {}", e.body.message))),
        }
    }

    fn status_event(&self, message: Option<String>) -> Event {
        Event::Status {
            iter: self.minimizer.iterations(),
            state: self.state,
            status: self.minimizer.status(),
            message,
        }
    }

    /// Runs up to `iterations` descent steps, checking `cancel` between them.
    pub fn step(&mut self, iterations: usize, cancel: &AtomicBool) -> Result<StepResponse, ApiError> {
        if self.state == RunState::Failed {
            return Err(ApiError::conflict(
                "session-failed",
                format!("session is in failed state ({}); perturb or reshape to continue", self.status_text()),
            ));
        }
        let mut log = Vec::new();
        if iterations == 0 {
            let snap = self.snapshot();
            self.emit(&snap, &mut log);
            return Ok(self.step_response(0, log));
        }
        self.state = RunState::Running;
        let mut done = 0;
        while done < iterations && !self.minimizer.is_finished() && !cancel.load(Ordering::Relaxed) {
            let before = self.minimizer.history().len();
            self.minimizer.step();
            done += 1;
            self.push_history_from(before);
            if let Some(rec) = self.minimizer.history()[before..].last() {
                let ev = Event::Progress {
                    iter: rec.iter,
                    action: rec.action,
                    grad_norm: rec.grad_norm,
                    min_distance: rec.min_distance,
                };
                self.emit(&ev, &mut log);
            }
            if self.minimizer.iterations() % self.snapshot_every == 0 {
                let snap = self.snapshot();
                self.emit(&snap, &mut log);
            }
        }
        self.state = state_for(self.minimizer.status());
        let message = self.minimizer.last_error().filter(|_| self.state == RunState::Failed).map(|e| e.to_string());
        let status = self.status_event(message);
        self.emit(&status, &mut log);
        Ok(self.step_response(done, log))
    }

    fn status_text(&self) -> String {
        self.minimizer.status().map_or_else(|| "running".into(), |s| s.to_string())
    }

    fn step_response(&self, done: usize, events: Vec<Event>) -> StepResponse {
        StepResponse {
            iterations: done,
            iter: self.minimizer.iterations(),
            state: self.state,
            status: self.minimizer.status(),
            report: self.minimizer.report().copied(),
            events,
        }
    }

    fn restart(&mut self, changes: &Changes) -> Result<(), ApiError> {
        let (path, quad) = continue_with(self.minimizer.path(), self.minimizer.quadrature(), changes)?;
        let before = self.minimizer.history().len();
        self.minimizer.restart_from(path, quad);
        self.push_history_from(before);
        self.state = state_for(self.minimizer.status());
        let mut log = Vec::new();
        let status = self.status_event(None);
        self.emit(&status, &mut log);
        Ok(())
    }

    pub fn perturb(&mut self, req: &PerturbRequest) -> Result<SessionState, ApiError> {
        if !(req.amplitude >= 0.0 && req.amplitude.is_finite()) {
            return Err(eqorbit_core::Error::InvalidParameter("amplitude must be finite and non-negative".into()).into());
        }
        if req.amplitude > 0.0 {
            self.perturbations += 1;
            let seed = req.seed.unwrap_or_else(|| self.minimizer.config().seed.wrapping_add(self.perturbations));
            self.restart(&Changes { perturb_amplitude: Some(req.amplitude), seed, ..Changes::default() })?;
        }
        self.state(None)
    }

    pub fn reshape(&mut self, req: &ReshapeRequest) -> Result<SessionState, ApiError> {
        if req.s.is_some() || req.nu.is_some() {
            self.restart(&Changes { s: req.s, nu: req.nu, truncate: req.truncate, ..Changes::default() })?;
        }
        self.state(None)
    }

    pub fn state(&self, resolution: Option<usize>) -> Result<SessionState, ApiError> {
        let path = self.minimizer.path();
        let res = resolution.unwrap_or(STATE_RESOLUTION_PER_DOMAIN * self.group.l());
        let (trajectory, _) = self.trajectory(res)?;
        let sys = self.group.system();
        Ok(SessionState {
            id: self.id.clone(),
            name: self.group_file.name.clone(),
            state: self.state,
            status: self.minimizer.status(),
            iter: self.minimizer.iterations(),
            n: sys.n(),
            d: sys.d(),
            l: self.group.l(),
            s: path.s(),
            nu: self.minimizer.quadrature().nu(),
            coercive: self.coercive,
            report: self.minimizer.report().copied(),
            coeffs: path.coeffs().chunks_exact(path.block_len()).map(<[f64]>::to_vec).collect(),
            symmetry_defect: symmetry_defect(path),
            last_error: self.minimizer.last_error().map(|e| e.to_string()),
            history: self.history.iter().copied().collect(),
            trajectory,
        })
    }

    /// The orbit record for the current iterate, as written by the CLI.
    pub fn export(&self) -> Result<String, ApiError> {
        let report = self
            .minimizer
            .report()
            .ok_or_else(|| ApiError::conflict("no-report", "the current path could not be evaluated"))?;
        let rec = OrbitRecord::new(self.group_file.clone(), self.minimizer.path(), self.minimizer.quadrature(), report);
        Ok(rec.to_json() + "\n")
    }
}
