use crate::symmetry::SymmetryGroup;

use super::path::FourierPath;

/// Projects raw coefficient blocks onto the symmetric subspace: every block
/// onto `(E^n)^K`, then the boundary pair onto the fixed set of the boundary
/// involution. Both projectors are mass-orthogonal and commute.
pub(crate) fn symmetrize_coeffs(group: &SymmetryGroup, s: usize, coeffs: &[f64]) -> Vec<f64> {
    let m = group.system().dim();
    let pk = group.kernel_projector();
    let mut out = vec![0.0; coeffs.len()];
    if group.kernel_order() == 1 {
        out.copy_from_slice(coeffs);
    } else {
        for (src, dst) in coeffs.chunks_exact(m).zip(out.chunks_exact_mut(m)) {
            pk.apply_into(src, dst);
        }
    }
    let (b0, b1) = group.boundary_involution().project(&out[..m], &out[(s + 1) * m..]);
    out[..m].copy_from_slice(&b0);
    out[(s + 1) * m..].copy_from_slice(&b1);
    out
}

pub fn symmetrize(path: &FourierPath) -> FourierPath {
    let coeffs = symmetrize_coeffs(path.group(), path.s(), path.coeffs());
    path.with_coeffs(coeffs).expect("projection preserves shape")
}

/// Largest deviation of `path` from its symmetrization, in max-abs norm.
pub fn symmetry_defect(path: &FourierPath) -> f64 {
    let sym = symmetrize_coeffs(path.group(), path.s(), path.coeffs());
    sym.iter().zip(path.coeffs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}
