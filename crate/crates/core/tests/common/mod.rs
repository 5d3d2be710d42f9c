#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use eqorbit_core::io::GroupFile;
use eqorbit_core::linalg::Matrix;
use eqorbit_core::nbody::MassSystem;
use eqorbit_core::pathspace::{symmetrize, FourierPath};
use eqorbit_core::symmetry::{close_group, GroupElement, Permutation, SymmetryGroup, TimeAction};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn groups_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../groups")
}

pub fn group_file(name: &str) -> GroupFile {
    GroupFile::read(&groups_dir().join(format!("{name}.json"))).unwrap()
}

pub fn bundled(name: &str) -> Arc<SymmetryGroup> {
    Arc::new(group_file(name).build().unwrap())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, len: usize, amp: f64) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-amp..amp)).collect()
}

/// Raw (unsymmetrized) coefficients with distinct bodies offset so that the
/// sampled loop stays away from collisions.
pub fn random_raw_path(group: Arc<SymmetryGroup>, s: usize, rng: &mut ChaCha8Rng) -> FourierPath {
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
    for _ in 0..1000 {
        let len = (s + 2) * group.system().dim();
        let raw = FourierPath::new(group.clone(), s, random_vec(rng, len, 1.0)).unwrap();
        let p = symmetrize(&raw);
        let ok = (0..=200).all(|j| {
            let q = p.sample(j as f64 / 200.0).unwrap();
            eqorbit_core::nbody::min_mutual_distance(&q.0, d) > 0.05
        });
        if ok {
            return p;
        }
    }
    panic!("no collision-free symmetric path found");
}

pub fn signed_permutation_matrix(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let mut cols: Vec<usize> = (0..d).collect();
    cols.shuffle(rng);
    let mut m = Matrix::zeros(d, d);
    for (i, &c) in cols.iter().enumerate() {
        m.set(i, c, if rng.gen_bool(0.5) { 1.0 } else { -1.0 });
    }
    m
}

/// Random orthogonal matrix from Gram-Schmidt on a Gaussian-ish draw.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let mut cols: Vec<Vec<f64>> = Vec::new();
    while cols.len() < d {
        let mut v = random_vec(rng, d, 1.0);
        for c in &cols {
            let p: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= p * y;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    let mut m = Matrix::zeros(d, d);
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            m.set(i, j, *x);
        }
    }
    m
}

/// Random permutation preserving the mass classes.
pub fn mass_preserving_perm(rng: &mut ChaCha8Rng, masses: &[f64]) -> Permutation {
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
/// optionally with a cyclic or dihedral time action.
pub fn random_group(rng: &mut ChaCha8Rng) -> SymmetryGroup {
    loop {
        let n = rng.gen_range(2..=4);
        let d = rng.gen_range(1..=3);
        let masses: Vec<f64> = (0..n).map(|_| [1.0, 1.0, 2.0][rng.gen_range(0..3)]).collect();
        let sys = MassSystem::new(d, 1.0, masses.clone()).unwrap();
        let l: u32 = [1, 2, 3, 4][rng.gen_range(0..4)];
        let mut gens = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let g = GroupElement::new(
                TimeAction::identity(l),
                mass_preserving_perm(rng, &masses),
                signed_permutation_matrix(rng, d),
            );
            gens.push(g);
        }
        let dihedral = l % 2 == 0 && rng.gen_bool(0.4);
        if dihedral {
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
