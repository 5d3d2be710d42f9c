//! Reference computations that do not go through the solver's own code
//! paths, plus random problem generators, shared by the acceptance suite.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::sync::Arc;

use eqorbit_core::io::GroupFile;
use eqorbit_core::linalg::Matrix;
use eqorbit_core::nbody::{mass_inner, min_mutual_distance, MassSystem};
use eqorbit_core::pathspace::{action_gradient, discrete_action, symmetrize, FourierPath, Quadrature};
use eqorbit_core::symmetry::{close_group, GroupElement, Permutation, SymmetryGroup, TimeAction};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn groups_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../groups")
}

pub fn group_path(name: &str) -> PathBuf {
    groups_dir().join(format!("{name}.json"))
}

pub fn bundled(name: &str) -> Arc<SymmetryGroup> {
    Arc::new(GroupFile::read(&group_path(name)).unwrap().build().unwrap())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, len: usize, amp: f64) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-amp..amp)).collect()
}

/// Golden-section minimum of `f` on `[lo, hi]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if f(x1) < f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Action of the equal-mass circular two-body orbit of period 2, minimized
/// over the radius. Masses are normalized to 1/2 each, so with each body at
/// radius `r` one period costs `2 * (m (pi r)^2 + m^2 / (2 r))`.
pub fn kepler_circular_action() -> f64 {
    let m = 0.5;
    golden_section(|r| 2.0 * (m * (PI * r).powi(2) + m * m / (2.0 * r)), 1e-3, 10.0).1
}

/// Radius of that orbit, each body's distance from the centre of mass.
pub fn kepler_circular_radius() -> f64 {
    let m = 0.5;
    golden_section(|r| 2.0 * (m * (PI * r).powi(2) + m * m / (2.0 * r)), 1e-3, 10.0).0
}

/// Composite Simpson rule with `cells` (even) cells on `|q'|_M^2`.
pub fn kinetic_by_simpson(p: &FourierPath, cells: usize) -> f64 {
    let sys = p.system();
    let h = 1.0 / cells as f64;
    let f = |t: f64| {
        let v = p.velocity(t);
        mass_inner(&v, &v, sys).unwrap()
    };
    let mut acc = f(0.0) + f(1.0);
    for i in 1..cells {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    acc * h / 3.0
}

/// Largest relative disagreement between central differences of the action
/// and the mass-metric gradient (coordinate derivative = `m_j` times the
/// block entry). Components below `1e-3` of the largest use that floor as
/// denominator.
pub fn gradient_fd_error(p: &FourierPath, q: &Quadrature) -> f64 {
    let grad = action_gradient(p, q).unwrap();
    let (m, d) = (p.system().masses().to_vec(), p.system().d());
    let bl = p.block_len();
    let h = 1e-6;
    let coord: Vec<f64> = grad.iter().enumerate().map(|(i, g)| g * m[(i % bl) / d]).collect();
    let scale = coord.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut worst: f64 = 0.0;
    for i in 0..grad.len() {
        let mut c = p.coeffs().to_vec();
        c[i] += h;
        let up = discrete_action(&p.with_coeffs(c.clone()).unwrap(), q).unwrap().action;
        c[i] -= 2.0 * h;
        let down = discrete_action(&p.with_coeffs(c).unwrap(), q).unwrap().action;
        let fd = (up - down) / (2.0 * h);
        worst = worst.max((fd - coord[i]).abs() / coord[i].abs().max(1e-3 * scale));
    }
    worst
}

/// Dimension of the centred fixed subspace by SVD of the stacked
/// constraints `(D_g - I) x = 0` and `sum_j m_j x_j = 0`.
pub fn brute_force_fixed_dimension(group: &SymmetryGroup) -> usize {
    let sys = group.system();
    let (n, d) = (sys.n(), sys.d());
    let m = n * d;
    let mut a = DMatrix::<f64>::zeros(group.order() * m + d, m);
    for (gi, g) in group.elements().iter().enumerate() {
        for c in 0..m {
            let mut e = vec![0.0; m];
            e[c] = 1.0;
            let img = g.act(&e);
            for r in 0..m {
                a[(gi * m + r, c)] = img[r] - e[r];
            }
        }
    }
    for j in 0..n {
        for k in 0..d {
            a[(group.order() * m + k, j * d + k)] = sys.masses()[j];
        }
    }
    let rank = a.svd(false, false).singular_values.iter().filter(|&&x| x > 1e-9).count();
    m - rank
}

/// Small random modes around well separated endpoints: body `j` sits near
/// `(1.5 j, 0, ...)`, so the potential along the path is smooth.
pub fn random_smooth_path(group: Arc<SymmetryGroup>, s: usize, rng: &mut ChaCha8Rng) -> FourierPath {
    let (n, d) = (group.system().n(), group.system().d());
    let m = n * d;
    let mut c = random_vec(rng, (s + 2) * m, 0.05);
    for b in [0, s + 1] {
        for j in 0..n {
            c[b * m + j * d] += 1.5 * j as f64;
        }
    }
    FourierPath::new(group, s, c).unwrap()
}

/// Symmetric path kept away from collisions, redrawn until the minimum
/// sampled distance exceeds `0.05`.
pub fn random_symmetric_path(group: Arc<SymmetryGroup>, s: usize, rng: &mut ChaCha8Rng) -> FourierPath {
    let d = group.system().d();
    let len = (s + 2) * group.system().dim();
    for _ in 0..1000 {
        let raw = FourierPath::new(group.clone(), s, random_vec(rng, len, 1.0)).unwrap();
        let p = symmetrize(&raw);
        if (0..=200).all(|j| min_mutual_distance(&p.sample(j as f64 / 200.0).unwrap().0, d) > 0.05) {
            return p;
        }
    }
    panic!("no collision-free symmetric path found");
}

fn signed_permutation_matrix(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let mut cols: Vec<usize> = (0..d).collect();
    cols.shuffle(rng);
    let mut m = Matrix::zeros(d, d);
    for (i, &c) in cols.iter().enumerate() {
        m.set(i, c, if rng.gen_bool(0.5) { 1.0 } else { -1.0 });
    }
    m
}

fn mass_preserving_perm(rng: &mut ChaCha8Rng, masses: &[f64]) -> Permutation {
    let n = masses.len();
    let mut map: Vec<usize> = (0..n).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for j in 0..n {
        match classes.iter_mut().find(|c| masses[c[0]] == masses[j]) {
            Some(c) => c.push(j),
            None => classes.push(vec![j]),
        }
    }
    for c in classes {
        let mut img = c.clone();
        img.shuffle(rng);
        for (a, b) in c.iter().zip(img) {
            map[*a] = b;
        }
    }
    Permutation::new(map).unwrap()
}

/// A small random finite group: n <= 4, d <= 3, signed permutation matrices,
/// with a trivial, cyclic or dihedral time action.
pub fn random_group(rng: &mut ChaCha8Rng) -> SymmetryGroup {
    loop {
        let n = rng.gen_range(2..=4);
        let d = rng.gen_range(1..=3);
        let masses: Vec<f64> = (0..n).map(|_| [1.0, 1.0, 2.0][rng.gen_range(0..3)]).collect();
        let sys = MassSystem::new(d, 1.0, masses.clone()).unwrap();
        let l: u32 = [1, 2, 3, 4][rng.gen_range(0..4)];
        let mut gens = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            gens.push(GroupElement::new(
                TimeAction::identity(l),
                mass_preserving_perm(rng, &masses),
                signed_permutation_matrix(rng, d),
            ));
        }
        if l % 2 == 0 && rng.gen_bool(0.4) {
            for shift in [0, 2] {
                gens.push(GroupElement::new(
                    TimeAction::reflection(shift, l),
                    mass_preserving_perm(rng, &masses),
                    signed_permutation_matrix(rng, d),
                ));
            }
        } else if l > 1 {
            gens.push(GroupElement::new(
                TimeAction::rotation(1, l),
                mass_preserving_perm(rng, &masses),
                signed_permutation_matrix(rng, d),
            ));
        }
        if let Ok(g) = close_group(&sys, &gens, 5000) {
            return g;
        }
    }
}

/// Sine coefficients of the circular two-body orbit on the fundamental
/// domain of the order-2 choreography group, by Simpson quadrature of
/// `2 int (q - linear part) sin(k pi t)`.
pub fn projected_circular(s: usize) -> FourierPath {
    let rho = kepler_circular_radius();
    let circ = |t: f64| {
        let (c, s) = ((PI * t).cos(), (PI * t).sin());
        [rho * c, rho * s, -rho * c, -rho * s]
    };
    let (q0, q1) = (circ(0.0), circ(1.0));
    let mut coeffs = q0.to_vec();
    let cells = 20_000;
    for k in 1..=s {
        let mut acc = [0.0; 4];
        for i in 0..=cells {
            let t = i as f64 / cells as f64;
            let w = if i == 0 || i == cells { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            let q = circ(t);
            for c in 0..4 {
                acc[c] += w * (q[c] - (q0[c] + t * (q1[c] - q0[c]))) * (k as f64 * PI * t).sin();
            }
        }
        coeffs.extend(acc.iter().map(|a| 2.0 * a / (3.0 * cells as f64)));
    }
    coeffs.extend(q1);
    FourierPath::new(bundled("choreography-2"), s, coeffs).unwrap()
}

/// Mean pairwise distance over all samples of a trajectory.
pub fn mean_mutual_distance(configs: &[Vec<f64>], d: usize) -> f64 {
    let (mut sum, mut count) = (0.0, 0usize);
    for q in configs {
        let n = q.len() / d;
        for i in 0..n {
            for j in i + 1..n {
                let r2: f64 = (0..d).map(|k| (q[i * d + k] - q[j * d + k]).powi(2)).sum();
                sum += r2.sqrt();
                count += 1;
            }
        }
    }
    sum / count as f64
}
