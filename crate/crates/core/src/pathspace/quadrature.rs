use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nbody::{grad_potential_raw, potential_raw};
use crate::par::{compensated_sum, map_indexed};

use super::path::{sin_pi, FourierPath};
use super::symmetrize::symmetrize_coeffs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureParams {
    /// Number of trapezoid subintervals of `[0, 1]`.
    pub nu: usize,
}

impl QuadratureParams {
    pub fn new(nu: usize) -> Result<Self> {
        if nu == 0 {
            return Err(Error::InvalidParameter("nu must be at least 1".into()));
        }
        Ok(Self { nu })
    }

    /// `max(64, 8 s)` subintervals.
    pub fn default_for(s: usize) -> Self {
        Self { nu: 64.max(8 * s) }
    }
}

/// Composite trapezoid rule on `[0, 1]` with the `sin(k pi t_j)` table for a
/// fixed mode count.
#[derive(Debug, Clone)]
pub struct Quadrature {
    nu: usize,
    s: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// Row `j` holds `sin(k pi t_j)` for `k = 1..=s`.
    sines: Vec<f64>,
}

impl Quadrature {
    pub fn new(params: QuadratureParams, s: usize) -> Result<Self> {
        let QuadratureParams { nu } = QuadratureParams::new(params.nu)?;
        let nodes: Vec<f64> = (0..=nu).map(|j| j as f64 / nu as f64).collect();
        let mut weights = vec![1.0 / nu as f64; nu + 1];
        weights[0] *= 0.5;
        weights[nu] *= 0.5;
        let mut sines = Vec::with_capacity((nu + 1) * s);
        for j in 0..=nu {
            for k in 1..=s {
                // sin(j k pi / nu), reduced mod 2 nu to keep the argument small
                let m = (j * k) % (2 * nu);
                sines.push(sin_pi(m as f64 / nu as f64));
            }
        }
        Ok(Self { nu, s, nodes, weights, sines })
    }

    pub fn for_path(params: QuadratureParams, path: &FourierPath) -> Result<Self> {
        Self::new(params, path.s())
    }

    pub fn params(&self) -> QuadratureParams {
        QuadratureParams { nu: self.nu }
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sines(&self, j: usize) -> &[f64] {
        &self.sines[j * self.s..(j + 1) * self.s]
    }

    fn check(&self, path: &FourierPath) -> Result<()> {
        if path.s() != self.s {
            return Err(Error::InvalidParameter(format!(
                "quadrature table built for s = {}, path has s = {}",
                self.s,
                path.s()
            )));
        }
        Ok(())
    }

    /// Configurations at every node.
    pub fn samples(&self, path: &FourierPath) -> Result<Vec<Vec<f64>>> {
        self.check(path)?;
        Ok((0..=self.nu)
            .map(|j| {
                let mut q = vec![0.0; path.block_len()];
                path.sample_with(self.nodes[j], self.sines(j), &mut q);
                q
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialValue {
    /// Trapezoid approximation of `int_0^1 U(q(t)) dt`.
    pub value: f64,
    pub min_mutual_distance: f64,
}

/// Diagnostics of one action evaluation on the fundamental domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionReport {
    /// `l * (kinetic / 2 + potential)`
    pub action: f64,
    /// `int_0^1 |q'|_M^2 dt`
    pub kinetic: f64,
    pub potential: f64,
    /// Mass-metric norm of the symmetrized coefficient gradient.
    pub grad_norm: f64,
    pub min_mutual_distance: f64,
    pub multiplier: usize,
}

pub fn discrete_potential(path: &FourierPath, quad: &Quadrature) -> Result<PotentialValue> {
    quad.check(path)?;
    let sys = path.system();
    let m = path.block_len();
    let per_node = map_indexed(quad.nu + 1, |j| {
        let mut q = vec![0.0; m];
        path.sample_with(quad.nodes[j], quad.sines(j), &mut q);
        potential_raw(&q, sys).map_err(|e| tag_sample(e, j))
    });
    let mut vals = Vec::with_capacity(per_node.len());
    let mut rmin = f64::INFINITY;
    for (j, r) in per_node.into_iter().enumerate() {
        let (u, d) = r?;
        vals.push(quad.weights[j] * u);
        rmin = rmin.min(d);
    }
    Ok(PotentialValue { value: compensated_sum(vals), min_mutual_distance: rmin })
}

fn tag_sample(e: Error, j: usize) -> Error {
    match e {
        Error::Collision { distance, .. } => Error::Collision { distance, sample: Some(j) },
        other => other,
    }
}

/// Action value without the gradient; `grad_norm` is reported as NaN.
pub fn action_value(path: &FourierPath, quad: &Quadrature) -> Result<ActionReport> {
    let pot = discrete_potential(path, quad)?;
    let kinetic = path.kinetic_quadratic();
    let l = path.group().l();
    Ok(ActionReport {
        action: l as f64 * (0.5 * kinetic + pot.value),
        kinetic,
        potential: pot.value,
        grad_norm: f64::NAN,
        min_mutual_distance: pot.min_mutual_distance,
        multiplier: l,
    })
}

/// Full report including the norm of the symmetrized gradient.
pub fn discrete_action(path: &FourierPath, quad: &Quadrature) -> Result<ActionReport> {
    evaluate(path, quad).map(|(r, _)| r)
}

/// Gradient of the discrete action with respect to every coefficient block,
/// as the mass-metric Riesz representative: `dA[delta] = sum_b <g_b, delta_b>_M`.
pub fn action_gradient(path: &FourierPath, quad: &Quadrature) -> Result<Vec<f64>> {
    evaluate_raw(path, quad).map(|(_, _, g)| g)
}

/// Report plus the symmetrized gradient.
pub fn evaluate(path: &FourierPath, quad: &Quadrature) -> Result<(ActionReport, Vec<f64>)> {
    let (mut report, _, raw) = evaluate_raw(path, quad)?;
    let g = symmetrize_coeffs(path.group(), path.s(), &raw);
    report.grad_norm = path.coeff_dot(&g, &g).sqrt();
    Ok((report, g))
}

fn evaluate_raw(path: &FourierPath, quad: &Quadrature) -> Result<(ActionReport, f64, Vec<f64>)> {
    quad.check(path)?;
    let sys = path.system();
    let (m, s, l) = (path.block_len(), path.s(), path.group().l() as f64);
    let per_node = map_indexed(quad.nu + 1, |j| {
        let mut q = vec![0.0; m];
        path.sample_with(quad.nodes[j], quad.sines(j), &mut q);
        let mut g = vec![0.0; m];
        grad_potential_raw(&q, sys, &mut g).map(|(u, d)| (u, d, g)).map_err(|e| tag_sample(e, j))
    });

    let mut grad = vec![0.0; (s + 2) * m];
    let mut vals = Vec::with_capacity(quad.nu + 1);
    let mut rmin = f64::INFINITY;
    for (j, r) in per_node.into_iter().enumerate() {
        let (u, d, gu) = r?;
        let w = quad.weights[j];
        let t = quad.nodes[j];
        vals.push(w * u);
        rmin = rmin.min(d);
        let basis = std::iter::once(1.0 - t).chain(quad.sines(j).iter().copied()).chain(std::iter::once(t));
        for (b, phi) in basis.enumerate() {
            let c = l * w * phi;
            if c == 0.0 {
                continue;
            }
            for (gb, x) in grad[b * m..(b + 1) * m].iter_mut().zip(&gu) {
                *gb += c * x;
            }
        }
    }
    let potential = compensated_sum(vals);
    let kinetic = path.kinetic_quadratic();

    // l/2 * d(kinetic): boundary blocks see 2 (a_{s+1} - a_0), mode k sees (k pi)^2 a_k.
    for i in 0..m {
        let diff = path.block(s + 1)[i] - path.block(0)[i];
        grad[i] -= l * diff;
        grad[(s + 1) * m + i] += l * diff;
    }
    for k in 1..=s {
        let w = k as f64 * PI;
        let c = 0.5 * l * w * w;
        for (gb, a) in grad[k * m..(k + 1) * m].iter_mut().zip(path.block(k)) {
            *gb += c * a;
        }
    }
    let report = ActionReport {
        action: l * (0.5 * kinetic + potential),
        kinetic,
        potential,
        grad_norm: f64::NAN,
        min_mutual_distance: rmin,
        multiplier: path.group().l(),
    };
    Ok((report, potential, grad))
}
