use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nbody::{grad_potential_raw, mass_dot, min_mutual_distance, DEFAULT_COLLISION_FLOOR};
use crate::pathspace::{full_position, full_state, FourierPath, Quadrature};

/// Verification grid density per unit of time (per fundamental domain), as a
/// multiple of the quadrature `nu`.
pub const GRID_FACTOR: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyTolerances {
    /// Residual bound relative to the largest `|grad_M U|_M` on the grid.
    pub residual_rel: f64,
    pub symmetry: f64,
    /// Minimum distance must exceed this multiple of the collision floor.
    pub distance_factor: f64,
    pub collision_floor: f64,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        Self { residual_rel: 1e-2, symmetry: 1e-8, distance_factor: 10.0, collision_floor: DEFAULT_COLLISION_FLOOR }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// `max |q'' - grad_M U(q)|_M` over the grid, with `q''` from the sine modes.
    pub max_newton_residual: f64,
    /// Global time of the worst residual.
    pub worst_residual_time: f64,
    /// `max |grad_M U(q)|_M` over the grid.
    pub residual_scale: f64,
    /// `max |q(tau(g) t) - g q(t)|` over the grid and all of `G`.
    pub max_symmetry_violation: f64,
    pub min_distance: f64,
    pub grid_points: usize,
    pub residual_ok: bool,
    pub symmetry_ok: bool,
    pub distance_ok: bool,
    pub passed: bool,
}

/// Checks a candidate against Newton's equations and its own symmetry on a
/// grid of `4 nu` points per unit time over the full period.
pub fn verify(path: &FourierPath, quad: &Quadrature, tol: &VerifyTolerances) -> Result<VerificationReport> {
    let sys = path.system();
    let (m, d) = (sys.masses(), sys.d());
    let l = path.group().l();
    let per_unit = GRID_FACTOR * quad.nu();
    let points = per_unit * l;

    let mut max_res: f64 = 0.0;
    let mut worst_t = 0.0;
    let mut scale: f64 = 0.0;
    let mut rmin = f64::INFINITY;
    let mut grad = vec![0.0; sys.dim()];
    for i in 0..points {
        let t = i as f64 / per_unit as f64;
        let st = full_state(path, t);
        let (_, r) = grad_potential_raw(&st.position.0, sys, &mut grad).map_err(|e| match e {
            Error::Collision { distance, .. } => Error::Collision { distance, sample: Some(i) },
            other => other,
        })?;
        rmin = rmin.min(r);
        scale = scale.max(mass_dot(&grad, &grad, m, d).sqrt());
        let diff: Vec<f64> = st.acceleration.0.iter().zip(&grad).map(|(a, g)| a - g).collect();
        let res = mass_dot(&diff, &diff, m, d).sqrt();
        if res > max_res {
            max_res = res;
            worst_t = t;
        }
    }

    let mut sym: f64 = 0.0;
    for j in 0..=per_unit {
        let t = j as f64 / per_unit as f64;
        let q = path.sample(t)?;
        rmin = rmin.min(min_mutual_distance(&q.0, d));
        for g in path.group().elements() {
            let expected = g.act(&q.0);
            let got = full_position(path, g.time.apply(t));
            let e = expected.iter().zip(&got.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            sym = sym.max(e);
        }
    }

    let residual_ok = max_res < tol.residual_rel * scale;
    let symmetry_ok = sym < tol.symmetry;
    let distance_ok = rmin > tol.distance_factor * tol.collision_floor;
    Ok(VerificationReport {
        max_newton_residual: max_res,
        worst_residual_time: worst_t,
        residual_scale: scale,
        max_symmetry_violation: sym,
        min_distance: rmin,
        grid_points: points,
        residual_ok,
        symmetry_ok,
        distance_ok,
        passed: residual_ok && symmetry_ok && distance_ok,
    })
}
