use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::pathspace::{evaluate, symmetrize, ActionReport, FourierPath, Quadrature};

use super::config::{Method, MinimizeConfig};
use super::verify::{verify, VerifyTolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Converged,
    CollisionStalled,
    IterationCap,
    Diverged,
    /// The line search made no progress without hitting a collision; usually
    /// the action has stopped resolving in floating point.
    Stalled,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Converged => "converged",
            Status::CollisionStalled => "collision-stalled",
            Status::IterationCap => "iteration-cap",
            Status::Diverged => "diverged",
            Status::Stalled => "stalled",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub action: f64,
    pub grad_norm: f64,
    pub min_distance: f64,
}

#[derive(Debug, Clone)]
pub struct MinimizeOutcome {
    pub status: Status,
    pub path: FourierPath,
    /// Final report; `None` only when the starting path could not be evaluated.
    pub report: Option<ActionReport>,
    pub history: Vec<IterationRecord>,
    pub iterations: usize,
    /// Largest Newton residual over the verification grid, for converged runs.
    pub newton_residual_max: Option<f64>,
}

struct SecantPair {
    s: Vec<f64>,
    y: Vec<f64>,
    rho: f64,
}

/// Resumable projected descent on the discrete action. Running `k` steps
/// then `m` steps reaches exactly the same state as running `k + m`.
pub struct Minimizer {
    path: FourierPath,
    quad: Quadrature,
    cfg: MinimizeConfig,
    report: Option<ActionReport>,
    grad: Vec<f64>,
    memory: VecDeque<SecantPair>,
    iter: usize,
    /// Iteration count at the last restart; the cap applies per segment.
    iter_base: usize,
    status: Option<Status>,
    history: Vec<IterationRecord>,
    scale_ref: f64,
    last_alpha: f64,
    last_error: Option<Error>,
}

impl Minimizer {
    pub fn new(path: FourierPath, quad: Quadrature, cfg: MinimizeConfig) -> Self {
        let path = symmetrize(&path);
        let norm0 = path.coeff_dot(path.coeffs(), path.coeffs()).sqrt();
        let mut m = Minimizer {
            path,
            quad,
            cfg,
            report: None,
            grad: Vec::new(),
            memory: VecDeque::new(),
            iter: 0,
            iter_base: 0,
            status: None,
            history: Vec::new(),
            scale_ref: norm0.max(1.0),
            last_alpha: 0.0,
            last_error: None,
        };
        match evaluate(&m.path, &m.quad) {
            Ok((r, g)) if r.min_mutual_distance > m.cfg.collision_floor && r.action.is_finite() => {
                m.record(&r);
                m.report = Some(r);
                m.grad = g;
            }
            Ok(_) => m.status = Some(Status::CollisionStalled),
            Err(e) => {
                m.status = Some(if matches!(e, Error::Collision { .. }) {
                    Status::CollisionStalled
                } else {
                    Status::Diverged
                });
                m.last_error = Some(e);
            }
        }
        m.check_converged();
        m
    }

    pub fn path(&self) -> &FourierPath {
        &self.path
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quad
    }

    pub fn config(&self) -> &MinimizeConfig {
        &self.cfg
    }

    pub fn report(&self) -> Option<&ActionReport> {
        self.report.as_ref()
    }

    pub fn iterations(&self) -> usize {
        self.iter
    }

    pub fn status(&self) -> Option<Status> {
        self.status
    }

    pub fn history(&self) -> &[IterationRecord] {
        &self.history
    }

    pub fn last_error(&self) -> Option<&Error> {
        self.last_error.as_ref()
    }

    pub fn is_finished(&self) -> bool {
        self.status.is_some()
    }

    fn record(&mut self, r: &ActionReport) {
        self.history.push(IterationRecord {
            iter: self.iter,
            action: r.action,
            grad_norm: r.grad_norm,
            min_distance: r.min_mutual_distance,
        });
    }

    fn check_converged(&mut self) {
        if self.status.is_some() {
            return;
        }
        if let Some(r) = &self.report {
            if r.grad_norm < self.cfg.grad_tol && r.min_mutual_distance > self.cfg.collision_floor {
                self.status = Some(Status::Converged);
            } else if self.iter - self.iter_base >= self.cfg.max_iters {
                self.status = Some(Status::IterationCap);
            }
        }
    }

    /// Runs up to `count` further iterations; returns the number performed.
    pub fn run(&mut self, count: usize) -> usize {
        let mut done = 0;
        while done < count && !self.is_finished() {
            self.step();
            done += 1;
        }
        done
    }

    /// Runs until a terminal status.
    pub fn run_to_end(&mut self) {
        while !self.is_finished() {
            self.step();
        }
    }

    fn dot(&self, x: &[f64], y: &[f64]) -> f64 {
        self.path.coeff_dot(x, y)
    }

    fn direction(&self) -> Vec<f64> {
        let g = &self.grad;
        if self.cfg.method == Method::SteepestDescent || self.memory.is_empty() {
            return g.iter().map(|x| -x).collect();
        }
        // two-loop recursion
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(self.memory.len());
        for p in self.memory.iter().rev() {
            let a = p.rho * self.dot(&p.s, &q);
            q.iter_mut().zip(&p.y).for_each(|(qi, yi)| *qi -= a * yi);
            alphas.push(a);
        }
        let last = self.memory.back().expect("memory is non-empty");
        let gamma = 1.0 / (last.rho * self.dot(&last.y, &last.y));
        q.iter_mut().for_each(|x| *x *= gamma);
        for (p, a) in self.memory.iter().zip(alphas.into_iter().rev()) {
            let b = p.rho * self.dot(&p.y, &q);
            q.iter_mut().zip(&p.s).for_each(|(qi, si)| *qi += (a - b) * si);
        }
        q.iter_mut().for_each(|x| *x = -*x);
        q
    }

    fn first_step(&self, steepest: bool) -> f64 {
        let gnorm = self.report.as_ref().map_or(1.0, |r| r.grad_norm).max(f64::MIN_POSITIVE);
        if !steepest && !self.memory.is_empty() {
            1.0
        } else if self.last_alpha > 0.0 {
            2.0 * self.last_alpha
        } else {
            self.cfg.initial_step / gnorm
        }
    }

    /// One descent iteration: direction, backtracking line search, update.
    pub fn step(&mut self) {
        if self.is_finished() {
            return;
        }
        let f0 = self.report.as_ref().expect("running minimizer has a report").action;
        let mut dir = self.direction();
        let mut gd = self.dot(&self.grad, &dir);
        let mut steepest = self.cfg.method == Method::SteepestDescent || self.memory.is_empty();
        if !(gd < 0.0) {
            self.memory.clear();
            dir = self.grad.iter().map(|x| -x).collect();
            gd = self.dot(&self.grad, &dir);
            steepest = true;
        }

        let mut collided = false;
        let accepted = loop {
            match self.line_search(f0, &dir, gd, self.first_step(steepest), &mut collided) {
                Some(found) => break Some(found),
                None if !steepest => {
                    // retry once along the gradient with a fresh memory
                    self.memory.clear();
                    dir = self.grad.iter().map(|x| -x).collect();
                    gd = self.dot(&self.grad, &dir);
                    steepest = true;
                }
                None => break None,
            }
        };

        let Some((alpha, path, report, grad)) = accepted else {
            self.status = Some(if collided { Status::CollisionStalled } else { Status::Stalled });
            return;
        };

        let s: Vec<f64> = path.coeffs().iter().zip(self.path.coeffs()).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = grad.iter().zip(&self.grad).map(|(a, b)| a - b).collect();
        let sy = self.dot(&s, &y);
        if self.cfg.method == Method::QuasiNewton && sy > 1e-14 * self.dot(&y, &y).sqrt() * self.dot(&s, &s).sqrt() {
            if self.memory.len() == self.cfg.memory {
                self.memory.pop_front();
            }
            self.memory.push_back(SecantPair { s, y, rho: 1.0 / sy });
        }
        self.last_alpha = alpha;
        self.path = path;
        self.grad = grad;
        self.iter += 1;
        self.record(&report);
        self.report = Some(report);

        let norm = self.dot(self.path.coeffs(), self.path.coeffs()).sqrt();
        if !norm.is_finite() || norm > self.cfg.divergence_ratio * self.scale_ref {
            self.status = Some(Status::Diverged);
            return;
        }
        self.check_converged();
    }

    #[allow(clippy::type_complexity)]
    fn line_search(
        &mut self,
        f0: f64,
        dir: &[f64],
        gd: f64,
        alpha0: f64,
        collided: &mut bool,
    ) -> Option<(f64, FourierPath, ActionReport, Vec<f64>)> {
        let mut alpha = alpha0;
        for _ in 0..self.cfg.max_backtracks {
            let trial: Vec<f64> = self.path.coeffs().iter().zip(dir).map(|(x, d)| x + alpha * d).collect();
            if trial.iter().all(|x| x.is_finite()) {
                let raw = self.path.with_coeffs(trial).expect("same shape");
                let cand = symmetrize(&raw);
                if cand.coeffs() == self.path.coeffs() {
                    // step no longer moves the iterate
                    return None;
                }
                match evaluate(&cand, &self.quad) {
                    Ok((r, _)) if r.min_mutual_distance <= self.cfg.collision_floor => *collided = true,
                    Ok((r, g)) => {
                        if r.action.is_finite() && r.action <= f0 + self.cfg.armijo * alpha * gd {
                            return Some((alpha, cand, r, g));
                        }
                    }
                    Err(e) => {
                        if matches!(e, Error::Collision { .. }) {
                            *collided = true;
                        }
                        self.last_error = Some(e);
                    }
                }
            }
            alpha *= self.cfg.shrink;
        }
        None
    }

    pub fn finish(self) -> MinimizeOutcome {
        let newton_residual_max = if self.status == Some(Status::Converged) {
            let tol = VerifyTolerances { collision_floor: self.cfg.collision_floor, ..VerifyTolerances::default() };
            verify(&self.path, &self.quad, &tol).ok().map(|v| v.max_newton_residual)
        } else {
            None
        };
        MinimizeOutcome {
            status: self.status.unwrap_or(Status::IterationCap),
            path: self.path,
            report: self.report,
            history: self.history,
            iterations: self.iter,
            newton_residual_max,
        }
    }

    /// Outcome snapshot without consuming the minimizer.
    pub fn outcome(&self) -> MinimizeOutcome {
        MinimizeOutcome {
            status: self.status.unwrap_or(Status::IterationCap),
            path: self.path.clone(),
            report: self.report,
            history: self.history.clone(),
            iterations: self.iter,
            newton_residual_max: None,
        }
    }

    /// Replaces the iterate (after a perturbation or reshape), clearing the
    /// secant memory and any terminal status. Iteration count and history carry
    /// over; `max_iters` counts from here.
    pub fn restart_from(&mut self, path: FourierPath, quad: Quadrature) {
        let mut fresh = Minimizer::new(path, quad, self.cfg.clone());
        let mut history = std::mem::take(&mut self.history);
        if let Some(mut rec) = fresh.history.pop() {
            rec.iter = self.iter;
            history.push(rec);
        }
        fresh.history = history;
        fresh.iter = self.iter;
        fresh.iter_base = self.iter;
        fresh.status = fresh.status.filter(|s| *s != Status::IterationCap);
        *self = fresh;
    }
}

/// Minimizes from `path` until a terminal status, then verifies converged
/// candidates against Newton's equations.
pub fn minimize(path: &FourierPath, quad: &Quadrature, cfg: &MinimizeConfig) -> MinimizeOutcome {
    let mut m = Minimizer::new(path.clone(), quad.clone(), cfg.clone());
    m.run_to_end();
    m.finish()
}
