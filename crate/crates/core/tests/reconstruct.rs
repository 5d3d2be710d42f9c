mod common;

use std::sync::Arc;

use eqorbit_core::nbody::MassSystem;
use eqorbit_core::pathspace::*;
use eqorbit_core::symmetry::{close_group, BoundaryData, GroupElement, Permutation, TimeAction};
use eqorbit_core::Error;

use common::*;

fn quad(nu: usize, s: usize) -> Quadrature {
    Quadrature::new(QuadratureParams::new(nu).unwrap(), s).unwrap()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn kernel_only_group_returns_fundamental_samples() {
    let mut rng = rng(1);
    let g = bundled("trivial");
    let p = random_symmetric_path(g, 4, &mut rng);
    let q = quad(16, 4);
    let traj = extend_to_full_period(&p, &q).unwrap();
    let samples = q.samples(&p).unwrap();
    assert_eq!(traj.configs.len(), 17);
    for (c, s) in traj.configs.iter().zip(&samples) {
        assert_eq!(&c.0, s);
    }
}

#[test]
fn brake_second_half_is_reflected_first_half() {
    let mut rng = rng(2);
    let g = bundled("brake-3");
    let h0 = match g.classification().boundary {
        BoundaryData::Reflections { h0, .. } => g.element(h0).clone(),
        _ => panic!("brake group expected"),
    };
    let p = random_symmetric_path(g, 5, &mut rng);
    let nu = 20;
    let traj = extend_to_full_period(&p, &quad(nu, 5)).unwrap();
    assert_eq!(traj.configs.len(), 2 * nu + 1);
    for j in 0..=2 * nu {
        let mirrored = h0.act(&traj.configs[j].0);
        assert!(max_diff(&traj.configs[2 * nu - j].0, &mirrored) < 1e-12);
    }
}

#[test]
fn choreography_bodies_share_one_curve() {
    let mut rng = rng(3);
    let sys = MassSystem::equal(3, 2, 1.0).unwrap();
    let r = GroupElement::new(
        TimeAction::rotation(1, 3),
        Permutation::from_one_based(&[2, 3, 1]).unwrap(),
        eqorbit_core::linalg::Matrix::identity(2),
    );
    let g = Arc::new(close_group(&sys, &[r], 10).unwrap());
    let p = random_symmetric_path(g, 6, &mut rng);
    let nu = 30;
    let traj = extend_to_full_period(&p, &quad(nu, 6)).unwrap();
    let total = 3 * nu;
    let body = |i: usize, node: usize| &traj.configs[node % total].0[2 * i..2 * i + 2];
    // every body follows body 0 with a lag of a multiple of one fundamental domain
    for i in 1..3 {
        let lag = (0..3)
            .map(|k| k * nu)
            .find(|&lag| (0..total).all(|j| max_diff(body(i, j + lag), body(0, j)) < 1e-8))
            .unwrap_or_else(|| panic!("body {i} does not follow the curve of body 0"));
        assert_ne!(lag, 0);
    }
}

#[test]
fn junctions_agree_for_symmetric_paths() {
    let mut rng = rng(4);
    for name in ["figure-eight", "choreography-2", "brake-3", "antipodal-2"] {
        let g = bundled(name);
        let p = random_symmetric_path(g.clone(), 6, &mut rng);
        let q = quad(24, 6);
        let traj = extend_to_full_period(&p, &q).unwrap();
        assert!(traj.junction_mismatch < JUNCTION_TOL, "{name}: {}", traj.junction_mismatch);
        assert_eq!(traj.configs.len(), 24 * g.l() + 1);
        assert_eq!(traj.configs[0], *traj.configs.last().unwrap());
    }
}

#[test]
fn asymmetric_path_is_rejected() {
    let mut rng = rng(5);
    let g = bundled("figure-eight");
    let p = random_raw_path(g, 4, &mut rng);
    assert!(matches!(extend_to_full_period(&p, &quad(16, 4)), Err(Error::SymmetryViolation { .. })));
}

#[test]
fn resampling_at_node_resolution_reproduces_nodes() {
    let mut rng = rng(6);
    let g = bundled("figure-eight");
    let p = random_symmetric_path(g.clone(), 5, &mut rng);
    let nu = 16;
    let nodes = extend_to_full_period(&p, &quad(nu, 5)).unwrap();
    let resampled = sample_full_period(&p, nu * g.l()).unwrap();
    assert_eq!(nodes.times, resampled.times);
    for (a, b) in nodes.configs.iter().zip(&resampled.configs) {
        assert!(max_diff(&a.0, &b.0) < 1e-12);
    }
    assert!(resampled.junction_mismatch < 1e-12);
}

#[test]
fn full_state_velocity_matches_finite_differences() {
    let mut rng = rng(7);
    let g = bundled("figure-eight");
    let p = random_symmetric_path(g, 6, &mut rng);
    let h = 1e-6;
    for &t in &[0.4, 1.3, 2.7, 5.5, 11.6] {
        let v = full_state(&p, t).velocity;
        let (a, b) = (full_position(&p, t + h), full_position(&p, t - h));
        for c in 0..6 {
            let fd = (a.0[c] - b.0[c]) / (2.0 * h);
            assert!((fd - v.0[c]).abs() < 1e-5 * v.0[c].abs().max(1.0), "t = {t}");
        }
    }
}
