use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::nbody::min_mutual_distance;
use crate::pathspace::{symmetrize, FourierPath, Quadrature, QuadratureParams};
use crate::symmetry::SymmetryGroup;

pub const MAX_INIT_DRAWS: usize = 100;

fn uniform_coeffs(rng: &mut ChaCha8Rng, len: usize, amplitude: f64) -> Vec<f64> {
    (0..len)
        .map(|_| if amplitude > 0.0 { rng.gen_range(-amplitude..=amplitude) } else { 0.0 })
        .collect()
}

fn sampled_min_distance(path: &FourierPath, quad: &Quadrature) -> f64 {
    let d = path.system().d();
    quad.samples(path)
        .map(|qs| qs.iter().map(|q| min_mutual_distance(q, d)).fold(f64::INFINITY, f64::min))
        .unwrap_or(0.0)
}

/// Uniform random coefficients in `[-amplitude, amplitude]`, symmetrized;
/// redrawn while the sampled loop comes within `10 * collision_floor` of a
/// collision.
pub fn random_init(
    group: Arc<SymmetryGroup>,
    s: usize,
    seed: u64,
    amplitude: f64,
    collision_floor: f64,
) -> Result<FourierPath> {
    let quad = Quadrature::new(QuadratureParams::default_for(s), s)?;
    let len = (s + 2) * group.system().dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_INIT_DRAWS {
        let raw = FourierPath::new(group.clone(), s, uniform_coeffs(&mut rng, len, amplitude))?;
        let path = symmetrize(&raw);
        if sampled_min_distance(&path, &quad) >= 10.0 * collision_floor {
            return Ok(path);
        }
    }
    Err(Error::InitFailure { attempts: MAX_INIT_DRAWS })
}

/// Requested changes when continuing from a previous result.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Changes {
    pub s: Option<usize>,
    pub nu: Option<usize>,
    pub perturb_amplitude: Option<f64>,
    pub seed: u64,
    /// Allow dropping non-zero modes when shrinking `s`.
    pub truncate: bool,
}

/// Builds a new starting path: zero-pads or truncates the sine modes,
/// re-tabulates the quadrature and adds symmetrized uniform noise.
pub fn continue_with(path: &FourierPath, quad: &Quadrature, changes: &Changes) -> Result<(FourierPath, Quadrature)> {
    let s_old = path.s();
    let s_new = changes.s.unwrap_or(s_old);
    let m = path.block_len();
    if s_new < s_old && !changes.truncate {
        let occupied = (s_new + 1..=s_old).any(|k| path.block(k).iter().any(|x| *x != 0.0));
        if occupied {
            return Err(Error::Truncation { from: s_old, to: s_new });
        }
    }
    let mut coeffs = vec![0.0; (s_new + 2) * m];
    coeffs[..m].copy_from_slice(path.block(0));
    for k in 1..=s_new.min(s_old) {
        coeffs[k * m..(k + 1) * m].copy_from_slice(path.block(k));
    }
    coeffs[(s_new + 1) * m..].copy_from_slice(path.block(s_old + 1));

    let amp = changes.perturb_amplitude.unwrap_or(0.0);
    if amp > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(changes.seed);
        for (c, n) in coeffs.iter_mut().zip(uniform_coeffs(&mut rng, (s_new + 2) * m, amp)) {
            *c += n;
        }
    }
    let new_path = symmetrize(&FourierPath::new(path.group_arc().clone(), s_new, coeffs)?);
    let nu = changes.nu.unwrap_or(quad.nu());
    let new_quad = Quadrature::new(QuadratureParams::new(nu)?, s_new)?;
    Ok((new_path, new_quad))
}
