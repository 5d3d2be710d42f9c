mod common;

use std::f64::consts::PI;

use eqorbit_core::nbody::{grad_potential_mass, mass_norm, Configuration};
use eqorbit_core::optimizer::{verify, VerifyTolerances};
use eqorbit_core::pathspace::*;
use eqorbit_core::Error;

use common::*;

fn quad(nu: usize, s: usize) -> Quadrature {
    Quadrature::new(QuadratureParams::new(nu).unwrap(), s).unwrap()
}

/// Equal-mass circular orbit on `T = 2` at the radius minimizing the action.
fn circular(t: f64) -> [f64; 4] {
    let rho = (8.0 * PI * PI).powf(-1.0 / 3.0);
    let (c, s) = ((PI * t).cos(), (PI * t).sin());
    [rho * c, rho * s, -rho * c, -rho * s]
}

/// Sine coefficients of the circular orbit on the fundamental domain, by
/// Simpson quadrature of `2 int (q - linear part) sin(k pi t)`.
fn projected_circular(s: usize) -> FourierPath {
    let (q0, q1) = (circular(0.0), circular(1.0));
    let mut coeffs = q0.to_vec();
    let cells = 20_000;
    for k in 1..=s {
        let mut acc = [0.0; 4];
        for i in 0..=cells {
            let t = i as f64 / cells as f64;
            let w = if i == 0 || i == cells { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            let q = circular(t);
            for c in 0..4 {
                let lin = q0[c] + t * (q1[c] - q0[c]);
                acc[c] += w * (q[c] - lin) * (k as f64 * PI * t).sin();
            }
        }
        coeffs.extend(acc.iter().map(|a| 2.0 * a / (3.0 * cells as f64)));
    }
    coeffs.extend(q1);
    FourierPath::new(bundled("choreography-2"), s, coeffs).unwrap()
}

#[test]
fn constant_path_residual_is_the_force() {
    let g = bundled("trivial");
    let c = Configuration(vec![0.5, 0.0, -0.5, 0.0]);
    let p = FourierPath::constant(g.clone(), 2, &c).unwrap();
    let rep = verify(&p, &quad(16, 2), &VerifyTolerances::default()).unwrap();
    let force = mass_norm(&grad_potential_mass(&c, g.system()).unwrap(), g.system()).unwrap();
    assert!((rep.max_newton_residual - force).abs() < 1e-14);
    assert!(rep.max_newton_residual > 0.0);
    assert!(!rep.residual_ok && !rep.passed);
    assert!(rep.symmetry_ok && rep.distance_ok);
    assert_eq!(rep.grid_points, 4 * 16);
}

#[test]
fn colliding_candidate_is_an_error() {
    // both bodies pass through the origin at t = 1/2
    let coeffs = vec![-1.0, 0.0, 1.0, 0.0, 1.0, 0.0, -1.0, 0.0, -1.0, 0.0, 1.0, 0.0];
    let p = FourierPath::new(bundled("trivial"), 1, coeffs).unwrap();
    assert!(matches!(verify(&p, &quad(8, 1), &VerifyTolerances::default()), Err(Error::Collision { .. })));
}

#[test]
fn projected_circular_orbit_is_symmetric_and_far_from_collision() {
    let p = projected_circular(8);
    let rep = verify(&p, &quad(128, 8), &VerifyTolerances::default()).unwrap();
    assert!(rep.symmetry_ok && rep.distance_ok);
    assert_eq!(rep.grid_points, 4 * 128 * 2);
}
