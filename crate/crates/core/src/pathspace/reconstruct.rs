use crate::error::{Error, Result};
use crate::nbody::Configuration;
use crate::symmetry::GroupElement;

use super::path::FourierPath;
use super::quadrature::Quadrature;

/// Junction tolerance for reassembling a full period.
pub const JUNCTION_TOL: f64 = 1e-10;

/// A loop sampled over one full period `[0, l]`.
#[derive(Debug, Clone)]
pub struct SampledTrajectory {
    pub times: Vec<f64>,
    pub configs: Vec<Configuration>,
    /// Largest disagreement between segments at shared nodes.
    pub junction_mismatch: f64,
}

/// State of the full-period loop at one instant.
#[derive(Debug, Clone)]
pub struct FullState {
    pub position: Configuration,
    pub velocity: Configuration,
    pub acceleration: Configuration,
}

/// Finds a coset representative `g` and `t0` in `[0, 1]` with `tau(g) t0 = t`.
pub fn locate(path: &FourierPath, t: f64) -> (&GroupElement, f64) {
    let l = path.group().l() as f64;
    let t = t.rem_euclid(l);
    let mut best: Option<(&GroupElement, f64, f64)> = None;
    for g in path.group().coset_representatives() {
        // tau(g) t0 = sign t0 + shift  =>  t0 = sign (t - shift)
        let t0 = (g.time.sign() * (t - g.time.shift as f64)).rem_euclid(l);
        // distance outside [0, 1], accounting for wrap-around at l
        let out = if t0 <= 1.0 { 0.0 } else { (t0 - 1.0).min(l - t0) };
        if best.map_or(true, |(_, _, o)| out < o) {
            let t0c = if t0 <= 1.0 { t0 } else if l - t0 < t0 - 1.0 { 0.0 } else { 1.0 };
            best = Some((g, t0c, out));
        }
        if out == 0.0 {
            break;
        }
    }
    let (g, t0, _) = best.expect("group has at least one element");
    (g, t0)
}

/// Position, velocity and acceleration at any time of the full period.
pub fn full_state(path: &FourierPath, t: f64) -> FullState {
    let (g, t0) = locate(path, t);
    let q = path.sample(t0).expect("located time lies in [0, 1]");
    let v = path.velocity(t0);
    let a = path.acceleration(t0);
    let sign = g.time.sign();
    FullState {
        position: Configuration(g.act(&q.0)),
        velocity: Configuration(g.act(&v.0).into_iter().map(|x| sign * x).collect()),
        acceleration: Configuration(g.act(&a.0)),
    }
}

pub fn full_position(path: &FourierPath, t: f64) -> Configuration {
    let (g, t0) = locate(path, t);
    Configuration(g.act(&path.sample(t0).expect("located time lies in [0, 1]").0))
}

/// Reassembles `nu * l + 1` samples over `[0, l]` by applying one
/// representative per kernel coset to the fundamental-domain samples.
pub fn extend_to_full_period(path: &FourierPath, quad: &Quadrature) -> Result<SampledTrajectory> {
    let nu = quad.nu();
    let l = path.group().l();
    let total = nu * l;
    let samples = quad.samples(path)?;
    let mut slots: Vec<Option<Vec<f64>>> = vec![None; total];
    let mut mismatch: f64 = 0.0;
    let mut worst_node = 0usize;
    for g in path.group().coset_representatives() {
        let base = g.time.shift as usize * nu;
        for (j, q) in samples.iter().enumerate() {
            let node = if g.time.reflect { (base + total - j) % total } else { (base + j) % total };
            let image = g.act(q);
            match &slots[node] {
                Some(prev) => {
                    let e = prev.iter().zip(&image).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                    if e > mismatch {
                        mismatch = e;
                        worst_node = node;
                    }
                }
                None => slots[node] = Some(image),
            }
        }
    }
    if mismatch > JUNCTION_TOL {
        return Err(Error::SymmetryViolation {
            mismatch,
            location: format!("t = {}", worst_node as f64 / nu as f64),
        });
    }
    let mut configs = Vec::with_capacity(total + 1);
    for (i, s) in slots.into_iter().enumerate() {
        let q = s.ok_or_else(|| Error::SymmetryViolation {
            mismatch: f64::INFINITY,
            location: format!("node {i} not covered"),
        })?;
        configs.push(Configuration(q));
    }
    configs.push(configs[0].clone());
    let times = (0..=total).map(|i| i as f64 / nu as f64).collect();
    Ok(SampledTrajectory { times, configs, junction_mismatch: mismatch })
}

/// Left limit of the loop at `t = l`, taken from the segment that ends there
/// rather than by wrapping to `t = 0`.
fn end_of_period(path: &FourierPath) -> Configuration {
    let l = path.group().l() as f64;
    let (g, t0) = locate(path, l - 0.5);
    let t_end = (t0 + 0.5 * g.time.sign()).clamp(0.0, 1.0);
    Configuration(g.act(&path.sample(t_end).expect("clamped into [0, 1]").0))
}

/// Full-period trajectory at `resolution` equal subintervals of `[0, l]`.
pub fn sample_full_period(path: &FourierPath, resolution: usize) -> Result<SampledTrajectory> {
    if resolution == 0 {
        return Err(Error::InvalidParameter("resolution must be positive".into()));
    }
    let l = path.group().l() as f64;
    let times: Vec<f64> = (0..=resolution).map(|i| l * i as f64 / resolution as f64).collect();
    let mut configs: Vec<Configuration> = times[..resolution].iter().map(|&t| full_position(path, t)).collect();
    configs.push(end_of_period(path));
    let junction_mismatch = configs[0]
        .0
        .iter()
        .zip(&configs[resolution].0)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(SampledTrajectory { times, configs, junction_mismatch })
}
