//! Masses, configurations and the homogeneous pair potential.
//!
//! Configurations are flat `n * d` vectors, body-major: body `j` occupies
//! `coords[j * d..(j + 1) * d]`. Gradients are expressed in the mass metric
//! `<v, w>_M = sum_j m_j v_j . w_j`, so `(grad_M U)_j = (1/m_j) dU/dq_j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_COLLISION_FLOOR: f64 = 1e-9;

/// The physical problem: body count, dimension, homogeneity exponent, masses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassSystem {
    n: usize,
    d: usize,
    alpha: f64,
    /// Normalized to unit total mass.
    masses: Vec<f64>,
    raw_masses: Vec<f64>,
    collision_floor: f64,
}

impl MassSystem {
    pub fn new(d: usize, alpha: f64, masses: Vec<f64>) -> Result<Self> {
        let n = masses.len();
        if n < 2 {
            return Err(Error::InvalidSystem(format!("need at least 2 bodies, got {n}")));
        }
        if d < 1 {
            return Err(Error::InvalidSystem("dimension must be at least 1".into()));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidSystem(format!("alpha must be positive, got {alpha}")));
        }
        if let Some(m) = masses.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
            return Err(Error::InvalidSystem(format!("masses must be positive, got {m}")));
        }
        let total: f64 = masses.iter().sum();
        Ok(Self {
            n,
            d,
            alpha,
            masses: masses.iter().map(|m| m / total).collect(),
            raw_masses: masses,
            collision_floor: DEFAULT_COLLISION_FLOOR,
        })
    }

    /// `n` equal masses in dimension `d` with exponent `alpha`.
    pub fn equal(n: usize, d: usize, alpha: f64) -> Result<Self> {
        Self::new(d, alpha, vec![1.0; n])
    }

    pub fn with_collision_floor(mut self, floor: f64) -> Self {
        self.collision_floor = floor;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Length of a flat configuration vector.
    pub fn dim(&self) -> usize {
        self.n * self.d
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn raw_masses(&self) -> &[f64] {
        &self.raw_masses
    }

    pub fn collision_floor(&self) -> f64 {
        self.collision_floor
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::ShapeMismatch { expected: self.dim(), got: len });
        }
        Ok(())
    }
}

/// Positions of `n` bodies in `R^d`, flattened body-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration(pub Vec<f64>);

/// Velocities, accelerations and gradients share the configuration layout.
pub type TangentVector = Configuration;

impl Configuration {
    pub fn zeros(sys: &MassSystem) -> Self {
        Configuration(vec![0.0; sys.dim()])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn body(&self, j: usize, d: usize) -> &[f64] {
        &self.0[j * d..(j + 1) * d]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl From<Vec<f64>> for Configuration {
    fn from(v: Vec<f64>) -> Self {
        Configuration(v)
    }
}

/// Mass-metric inner product on flat slices; the caller guarantees shapes.
pub(crate) fn mass_dot(v: &[f64], w: &[f64], masses: &[f64], d: usize) -> f64 {
    v.chunks_exact(d)
        .zip(w.chunks_exact(d))
        .zip(masses)
        .map(|((a, b), m)| m * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
        .sum()
}

pub fn mass_inner(v: &TangentVector, w: &TangentVector, sys: &MassSystem) -> Result<f64> {
    sys.check_len(v.0.len())?;
    sys.check_len(w.0.len())?;
    Ok(mass_dot(&v.0, &w.0, sys.masses(), sys.d()))
}

pub fn mass_norm(v: &TangentVector, sys: &MassSystem) -> Result<f64> {
    mass_inner(v, v, sys).map(f64::sqrt)
}

/// Smallest pairwise euclidean distance.
pub fn min_mutual_distance(q: &[f64], d: usize) -> f64 {
    let n = q.len() / d;
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            best = best.min(dist2(&q[i * d..(i + 1) * d], &q[j * d..(j + 1) * d]).sqrt());
        }
    }
    best
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Potential and minimal mutual distance on a raw slice.
pub(crate) fn potential_raw(q: &[f64], sys: &MassSystem) -> Result<(f64, f64)> {
    let (n, d, m) = (sys.n(), sys.d(), sys.masses());
    let half_alpha = 0.5 * sys.alpha();
    let mut u = 0.0;
    let mut rmin2 = f64::INFINITY;
    for i in 0..n {
        let qi = &q[i * d..(i + 1) * d];
        for j in i + 1..n {
            let r2 = dist2(qi, &q[j * d..(j + 1) * d]);
            rmin2 = rmin2.min(r2);
            u += m[i] * m[j] / r2.powf(half_alpha);
        }
    }
    let rmin = rmin2.sqrt();
    if !(rmin >= sys.collision_floor()) {
        return Err(Error::Collision { distance: rmin, sample: None });
    }
    Ok((u, rmin))
}

/// Writes the mass-metric gradient into `out` and returns the potential and
/// the minimal mutual distance.
pub(crate) fn grad_potential_raw(q: &[f64], sys: &MassSystem, out: &mut [f64]) -> Result<(f64, f64)> {
    let (n, d, m, alpha) = (sys.n(), sys.d(), sys.masses(), sys.alpha());
    out.iter_mut().for_each(|x| *x = 0.0);
    let mut u = 0.0;
    let mut rmin2 = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let r2 = dist2(&q[i * d..(i + 1) * d], &q[j * d..(j + 1) * d]);
            rmin2 = rmin2.min(r2);
            let inv_a = r2.powf(-0.5 * alpha);
            u += m[i] * m[j] * inv_a;
            // dU/dq_i = -alpha m_i m_j (q_i - q_j) / r^(alpha + 2)
            let c = -alpha * inv_a / r2;
            for k in 0..d {
                let diff = q[i * d + k] - q[j * d + k];
                out[i * d + k] += c * m[j] * diff;
                out[j * d + k] -= c * m[i] * diff;
            }
        }
    }
    let rmin = rmin2.sqrt();
    if !(rmin >= sys.collision_floor()) {
        return Err(Error::Collision { distance: rmin, sample: None });
    }
    Ok((u, rmin))
}

/// `sum_{i<j} m_i m_j / |q_i - q_j|^alpha`.
pub fn potential(q: &Configuration, sys: &MassSystem) -> Result<f64> {
    sys.check_len(q.0.len())?;
    potential_raw(&q.0, sys).map(|(u, _)| u)
}

/// Gradient of the potential with respect to the mass metric.
pub fn grad_potential_mass(q: &Configuration, sys: &MassSystem) -> Result<TangentVector> {
    sys.check_len(q.0.len())?;
    let mut out = vec![0.0; sys.dim()];
    grad_potential_raw(&q.0, sys, &mut out)?;
    Ok(Configuration(out))
}

/// `|| acc - grad_M U(pos) ||_M`; zero on solutions of Newton's equations.
pub fn newton_residual(pos: &Configuration, acc: &Configuration, sys: &MassSystem) -> Result<f64> {
    sys.check_len(acc.0.len())?;
    let g = grad_potential_mass(pos, sys)?;
    let diff: Vec<f64> = acc.0.iter().zip(&g.0).map(|(a, b)| a - b).collect();
    Ok(mass_dot(&diff, &diff, sys.masses(), sys.d()).sqrt())
}
