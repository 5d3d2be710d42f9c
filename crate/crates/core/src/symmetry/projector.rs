use crate::error::Result;
use crate::linalg::Matrix;
use crate::nbody::{Configuration, MassSystem};

use super::element::GroupElement;
use super::group::{BoundaryData, SymmetryGroup};

/// Trace tolerance when reading off the rank of an averaging projector.
pub const RANK_TOL: f64 = 1e-8;

/// `(sigma(g), rho(g)) . q`
pub fn act_on_config(g: &GroupElement, q: &Configuration, sys: &MassSystem) -> Result<Configuration> {
    sys.check_len(q.0.len())?;
    if g.perm.len() != sys.n() || g.d() != sys.d() {
        return Err(crate::Error::ShapeMismatch { expected: sys.dim(), got: g.perm.len() * g.d() });
    }
    Ok(Configuration(g.act(&q.0)))
}

/// Average of the spatial actions of a set of elements, as a dense map.
fn average<'a>(elements: impl Iterator<Item = &'a GroupElement>, n: usize, d: usize) -> Matrix {
    let mut acc = Matrix::zeros(n * d, n * d);
    let mut count = 0usize;
    for g in elements {
        acc.add_assign(&g.dense(n));
        count += 1;
    }
    acc.scale(1.0 / count as f64);
    acc
}

/// Mass-orthogonal projector onto `(E^n)^K`, `K` the kernel of the time action.
pub fn kernel_projector(group: &SymmetryGroup) -> Matrix {
    let sys = group.system();
    average(group.kernel(), sys.n(), sys.d())
}

/// Projector onto configurations fixed by the spatial parts of all of `G`.
pub fn group_projector(group: &SymmetryGroup) -> Matrix {
    let sys = group.system();
    average(group.elements().iter(), sys.n(), sys.d())
}

/// Mass-orthogonal projector onto configurations with centre of mass at 0.
pub fn centering_projector(sys: &MassSystem) -> Matrix {
    let (n, d) = (sys.n(), sys.d());
    let mut c = Matrix::identity(n * d);
    for j in 0..n {
        for i in 0..n {
            for k in 0..d {
                let v = c.get(j * d + k, i * d + k) - sys.masses()[i];
                c.set(j * d + k, i * d + k, v);
            }
        }
    }
    c
}

/// Dimension of the centred configurations fixed by the whole group.
pub fn fixed_centered_dimension(group: &SymmetryGroup) -> usize {
    let p = group_projector(group).mul(&centering_projector(group.system()));
    let tr = p.trace();
    let k = tr.round();
    debug_assert!((tr - k).abs() < RANK_TOL, "projector trace {tr} is not an integer");
    k.max(0.0) as usize
}

/// The restricted action is coercive iff no non-zero centred configuration
/// is fixed by the group.
pub fn is_coercive(group: &SymmetryGroup) -> bool {
    fixed_centered_dimension(group) == 0
}

/// The involution on boundary pairs `(a_0, a_{s+1})` whose fixed points are
/// the admissible endpoint configurations.
#[derive(Debug, Clone)]
pub enum BoundaryInvolution {
    /// `h(a0, a1) = (r^-1 a1, r a0)`
    Cyclic { r: Matrix, r_inv: Matrix },
    /// `h(a0, a1) = (h0 a0, h1 a1)`
    Reflections { h0: Matrix, h1: Matrix },
}

impl BoundaryInvolution {
    pub fn apply(&self, a0: &[f64], a1: &[f64]) -> (Vec<f64>, Vec<f64>) {
        match self {
            BoundaryInvolution::Cyclic { r, r_inv } => (r_inv.apply(a1), r.apply(a0)),
            BoundaryInvolution::Reflections { h0, h1 } => (h0.apply(a0), h1.apply(a1)),
        }
    }

    /// `(Id + h) / 2`, the averaging projector onto the fixed pairs.
    pub fn project(&self, a0: &[f64], a1: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let (b0, b1) = self.apply(a0, a1);
        (
            a0.iter().zip(&b0).map(|(x, y)| 0.5 * (x + y)).collect(),
            a1.iter().zip(&b1).map(|(x, y)| 0.5 * (x + y)).collect(),
        )
    }
}

pub fn boundary_involution(group: &SymmetryGroup) -> BoundaryInvolution {
    let n = group.system().n();
    match group.classification().boundary {
        BoundaryData::Cyclic { r } => {
            let g = group.element(r);
            BoundaryInvolution::Cyclic { r: g.dense(n), r_inv: g.inverse().dense(n) }
        }
        BoundaryData::Reflections { h0, h1 } => BoundaryInvolution::Reflections {
            h0: group.element(h0).dense(n),
            h1: group.element(h1).dense(n),
        },
    }
}
