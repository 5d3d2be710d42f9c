use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::nbody::{mass_dot, Configuration, MassSystem, TangentVector};
use crate::symmetry::SymmetryGroup;

/// A loop on the fundamental domain `[0, 1]`:
///
/// `q(t) = a_0 + t (a_{s+1} - a_0) + sum_{k=1..s} a_k sin(k pi t)`
///
/// stored as `s + 2` blocks of `n * d` coefficients, `a_0` first.
#[derive(Debug, Clone)]
pub struct FourierPath {
    group: Arc<SymmetryGroup>,
    s: usize,
    coeffs: Vec<f64>,
}

/// `sin(pi x)`, exactly zero at integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let mut r = x.rem_euclid(2.0);
    let sign = if r >= 1.0 {
        r -= 1.0;
        -1.0
    } else {
        1.0
    };
    let y = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * y).sin()
}

/// `cos(pi x)`, exactly zero at half-integers.
pub(crate) fn cos_pi(x: f64) -> f64 {
    let mut r = x.rem_euclid(2.0);
    if r > 1.0 {
        r = 2.0 - r;
    }
    sin_pi(0.5 - r)
}

impl FourierPath {
    pub fn new(group: Arc<SymmetryGroup>, s: usize, coeffs: Vec<f64>) -> Result<Self> {
        let expected = (s + 2) * group.system().dim();
        if coeffs.len() != expected {
            return Err(Error::ShapeMismatch { expected, got: coeffs.len() });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        Ok(Self { group, s, coeffs })
    }

    pub fn zeros(group: Arc<SymmetryGroup>, s: usize) -> Self {
        let len = (s + 2) * group.system().dim();
        Self { group, s, coeffs: vec![0.0; len] }
    }

    /// Constant loop sitting at `c`; only admissible when `c` is symmetric.
    pub fn constant(group: Arc<SymmetryGroup>, s: usize, c: &Configuration) -> Result<Self> {
        group.system().check_len(c.0.len())?;
        let mut p = Self::zeros(group, s);
        p.block_mut(0).copy_from_slice(&c.0);
        p.block_mut(s + 1).copy_from_slice(&c.0);
        Ok(p)
    }

    pub fn group(&self) -> &SymmetryGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<SymmetryGroup> {
        &self.group
    }

    pub fn system(&self) -> &MassSystem {
        self.group.system()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn block_len(&self) -> usize {
        self.system().dim()
    }

    pub fn block_count(&self) -> usize {
        self.s + 2
    }

    pub fn block(&self, b: usize) -> &[f64] {
        let m = self.block_len();
        &self.coeffs[b * m..(b + 1) * m]
    }

    pub fn block_mut(&mut self, b: usize) -> &mut [f64] {
        let m = self.block_len();
        &mut self.coeffs[b * m..(b + 1) * m]
    }

    pub fn with_coeffs(&self, coeffs: Vec<f64>) -> Result<Self> {
        Self::new(self.group.clone(), self.s, coeffs)
    }

    /// Evaluates the loop at `t` given precomputed `sin(k pi t)` for `k = 1..=s`.
    pub(crate) fn sample_with(&self, t: f64, sines: &[f64], out: &mut [f64]) {
        let m = self.block_len();
        let (a0, a1) = (self.block(0), self.block(self.s + 1));
        for i in 0..m {
            out[i] = (1.0 - t) * a0[i] + t * a1[i];
        }
        for (k, sk) in sines.iter().enumerate() {
            let ak = self.block(k + 1);
            for i in 0..m {
                out[i] += ak[i] * sk;
            }
        }
    }

    pub fn sample(&self, t: f64) -> Result<Configuration> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::TimeOutOfRange(t));
        }
        let sines: Vec<f64> = (1..=self.s).map(|k| sin_pi(k as f64 * t)).collect();
        let mut out = vec![0.0; self.block_len()];
        self.sample_with(t, &sines, &mut out);
        Ok(Configuration(out))
    }

    pub fn velocity(&self, t: f64) -> TangentVector {
        let m = self.block_len();
        let (a0, a1) = (self.block(0), self.block(self.s + 1));
        let mut out: Vec<f64> = (0..m).map(|i| a1[i] - a0[i]).collect();
        for k in 1..=self.s {
            let c = k as f64 * PI * cos_pi(k as f64 * t);
            for (o, a) in out.iter_mut().zip(self.block(k)) {
                *o += c * a;
            }
        }
        Configuration(out)
    }

    pub fn acceleration(&self, t: f64) -> TangentVector {
        let mut out = vec![0.0; self.block_len()];
        for k in 1..=self.s {
            let w = k as f64 * PI;
            let c = -w * w * sin_pi(k as f64 * t);
            for (o, a) in out.iter_mut().zip(self.block(k)) {
                *o += c * a;
            }
        }
        Configuration(out)
    }

    /// `int_0^1 |q'|_M^2 dt = |a_{s+1} - a_0|_M^2 + sum_k (k pi)^2 / 2 |a_k|_M^2`
    pub fn kinetic_quadratic(&self) -> f64 {
        let (m, d) = (self.system().masses(), self.system().d());
        let diff: Vec<f64> = self.block(self.s + 1).iter().zip(self.block(0)).map(|(x, y)| x - y).collect();
        let mut total = mass_dot(&diff, &diff, m, d);
        for k in 1..=self.s {
            let w = k as f64 * PI;
            let a = self.block(k);
            total += 0.5 * w * w * mass_dot(a, a, m, d);
        }
        total
    }

    /// Mass-metric inner product over all coefficient blocks.
    pub fn coeff_dot(&self, x: &[f64], y: &[f64]) -> f64 {
        let (m, d) = (self.system().masses(), self.system().d());
        x.chunks_exact(self.block_len())
            .zip(y.chunks_exact(self.block_len()))
            .map(|(a, b)| mass_dot(a, b, m, d))
            .sum()
    }
}

#[cfg(test)]
mod tests {

    #[test]
    fn sin_pi_is_exact_at_integers() {
        for k in -4..=4 {
            assert_eq!(sin_pi(k as f64), 0.0);
            assert_eq!(cos_pi(k as f64 + 0.5), 0.0);
        }
        for x in [0.1, 0.37, 0.5, 1.3, 1.9, 7.25] {
            assert!((sin_pi(x) - (PI * x).sin()).abs() < 1e-14);
            assert!((cos_pi(x) - (PI * x).cos()).abs() < 1e-14);
        }
    }

    use super::*;
    use crate::symmetry::close_group;

    fn trivial(n: usize, d: usize) -> Arc<SymmetryGroup> {
        Arc::new(close_group(&MassSystem::equal(n, d, 1.0).unwrap(), &[], 1).unwrap())
    }

    #[test]
    fn endpoints_are_boundary_blocks() {
        let g = trivial(2, 1);
        let p = FourierPath::new(g, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]).unwrap();
        assert_eq!(p.sample(0.0).unwrap().0, vec![1.0, 2.0]);
        let end = p.sample(1.0).unwrap().0;
        assert!((end[0] - 7.0).abs() < 1e-14 && (end[1] - 8.0).abs() < 1e-14);
        assert!(matches!(p.sample(1.5), Err(Error::TimeOutOfRange(_))));
    }

    #[test]
    fn single_mode_at_half() {
        let g = trivial(2, 1);
        let p = FourierPath::new(g, 1, vec![0.0, 0.0, 3.0, -2.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.sample(0.5).unwrap().0, vec![3.0, -2.0]);
        let acc = p.acceleration(0.5).0;
        assert!((acc[0] + PI * PI * 3.0).abs() < 1e-12);
    }

    #[test]
    fn straight_segment_velocity() {
        let g = trivial(2, 1);
        let p = FourierPath::new(g, 2, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0, -1.0]).unwrap();
        for t in [0.0, 0.3, 1.0] {
            assert_eq!(p.velocity(t).0, vec![2.0, -1.0]);
            assert_eq!(p.acceleration(t).0, vec![0.0, 0.0]);
        }
    }

    #[test]
    fn kinetic_closed_form_examples() {
        let g = trivial(2, 1);
        // |a_1|_M = 1 with m = (1/2, 1/2)
        let p = FourierPath::new(g.clone(), 1, vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((p.kinetic_quadratic() - PI * PI / 2.0).abs() < 1e-14);
        let p = FourierPath::new(g, 1, vec![0.0, 0.0, 0.0, 0.0, 2.0, 0.0]).unwrap();
        assert!((p.kinetic_quadratic() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_wrong_block_count() {
        let g = trivial(2, 1);
        assert!(matches!(FourierPath::new(g, 2, vec![0.0; 6]), Err(Error::ShapeMismatch { .. })));
    }
}
