use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::nbody::MassSystem;

use super::time::TimeAction;

pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// A permutation of body indices, 0-based: `map[i] = sigma(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &i in &map {
            if i >= map.len() || seen[i] {
                return Err(Error::InvalidParameter(format!("{map:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation(map))
    }

    /// From 1-based images, the file-format convention.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidParameter("permutation entries are 1-based".into()));
        }
        Self::new(images.iter().map(|i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// A triple (time isometry, body permutation, orthogonal matrix).
///
/// It acts on a configuration by `(g q)_{sigma(i)} = rho q_i` and on a loop by
/// `(g q)(t) = rho q_{sigma^-1}(tau^-1 t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub time: TimeAction,
    pub perm: Permutation,
    pub mat: Matrix,
}

impl GroupElement {
    pub fn new(time: TimeAction, perm: Permutation, mat: Matrix) -> Self {
        Self { time, perm, mat }
    }

    pub fn identity(n: usize, d: usize, period: u32) -> Self {
        Self {
            time: TimeAction::identity(period),
            perm: Permutation::identity(n),
            mat: Matrix::identity(d),
        }
    }

    /// Purely spatial element with trivial time action.
    pub fn spatial(perm: Permutation, mat: Matrix, period: u32) -> Self {
        Self { time: TimeAction::identity(period), perm, mat }
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            time: self.time.compose(&other.time),
            perm: self.perm.compose(&other.perm),
            mat: self.mat.mul(&other.mat),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { time: self.time.inverse(), perm: self.perm.inverse(), mat: self.mat.transpose() }
    }

    pub fn d(&self) -> usize {
        self.mat.rows()
    }

    /// Exact on time and permutation, `tol` on the matrix.
    pub fn approx_eq(&self, other: &GroupElement, tol: f64) -> bool {
        self.time == other.time && self.perm == other.perm && self.mat.max_abs_diff(&other.mat) < tol
    }

    pub fn same_spatial(&self, other: &GroupElement, tol: f64) -> bool {
        self.perm == other.perm && self.mat.max_abs_diff(&other.mat) < tol
    }

    pub fn validate(&self, sys: &MassSystem, name: &str) -> Result<()> {
        let bad = |reason: String| Error::InvalidGenerator { name: name.to_string(), reason };
        if self.perm.len() != sys.n() {
            return Err(bad(format!("permutation has {} entries, system has {} bodies", self.perm.len(), sys.n())));
        }
        if self.mat.rows() != sys.d() || self.mat.cols() != sys.d() {
            return Err(bad(format!(
                "matrix is {}x{}, expected {}x{}",
                self.mat.rows(),
                self.mat.cols(),
                sys.d(),
                sys.d()
            )));
        }
        if self.mat.as_slice().iter().any(|x| !x.is_finite()) {
            return Err(bad("matrix has non-finite entries".into()));
        }
        let gram = self.mat.transpose().mul(&self.mat);
        let err = gram.max_abs_diff(&Matrix::identity(sys.d()));
        if err > ORTHOGONALITY_TOL {
            return Err(bad(format!("matrix is not orthogonal (|M^T M - I| = {err:e})")));
        }
        let m = sys.masses();
        for i in 0..sys.n() {
            let j = self.perm.apply(i);
            if (m[i] - m[j]).abs() > 1e-12 * m[i].max(m[j]) {
                return Err(bad(format!("permutation maps body {} to body {} with a different mass", i + 1, j + 1)));
            }
        }
        Ok(())
    }

    /// Applies the spatial part `(sigma, rho)` to a flat configuration.
    pub fn act_into(&self, q: &[f64], out: &mut [f64]) {
        let d = self.d();
        for (i, qi) in q.chunks_exact(d).enumerate() {
            let j = self.perm.apply(i);
            self.mat.apply_into(qi, &mut out[j * d..(j + 1) * d]);
        }
    }

    pub fn act(&self, q: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; q.len()];
        self.act_into(q, &mut out);
        out
    }

    /// The `nd x nd` matrix of the spatial action.
    pub fn dense(&self, n: usize) -> Matrix {
        let d = self.d();
        let mut out = Matrix::zeros(n * d, n * d);
        for i in 0..n {
            let j = self.perm.apply(i);
            for r in 0..d {
                for c in 0..d {
                    out.set(j * d + r, i * d + c, self.mat.get(r, c));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transposition_swaps_bodies() {
        let g = GroupElement::spatial(Permutation::new(vec![1, 0]).unwrap(), Matrix::identity(2), 1);
        assert_eq!(g.act(&[1.0, 0.0, 3.0, 4.0]), vec![3.0, 4.0, 1.0, 0.0]);
        let id = GroupElement::identity(2, 2, 1);
        assert_eq!(id.act(&[1.0, 0.0, 3.0, 4.0]), vec![1.0, 0.0, 3.0, 4.0]);
    }

    #[test]
    fn action_follows_sigma_inverse_convention() {
        // 3-cycle sigma = (1 2 3): (sigma q)_j = q_{sigma^-1 j}
        let g = GroupElement::spatial(Permutation::new(vec![1, 2, 0]).unwrap(), Matrix::identity(1), 1);
        assert_eq!(g.act(&[10.0, 20.0, 30.0]), vec![30.0, 10.0, 20.0]);
    }

    #[test]
    fn permutation_rejects_non_bijection() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
    }

    #[test]
    fn dense_matches_act() {
        let rot = Matrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let g = GroupElement::spatial(Permutation::new(vec![2, 0, 1]).unwrap(), rot, 1);
        let q = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        assert_eq!(g.dense(3).apply(&q), g.act(&q));
    }
}
