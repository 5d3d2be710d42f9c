mod common;

use eqorbit_core::io::*;
use eqorbit_core::optimizer::{minimize, random_init, MinimizeConfig};
use eqorbit_core::pathspace::*;
use eqorbit_core::symmetry::ActionType;
use eqorbit_core::Error;

use common::*;

#[test]
fn bundled_groups_load() {
    for (name, order, kind, l) in [
        ("trivial", 1, ActionType::Cyclic, 1),
        ("choreography-2", 2, ActionType::Cyclic, 2),
        ("antipodal-2", 2, ActionType::Cyclic, 2),
        ("figure-eight", 12, ActionType::Dihedral, 12),
        ("brake-3", 4, ActionType::Brake, 2),
    ] {
        let g = bundled(name);
        assert_eq!((g.order(), g.kind(), g.l()), (order, kind, l), "{name}");
    }
}

#[test]
fn group_file_round_trips() {
    let f = group_file("figure-eight");
    assert_eq!(GroupFile::parse(&f.to_json()).unwrap(), f);
}

fn figure_eight_json() -> String {
    std::fs::read_to_string(groups_dir().join("figure-eight.json")).unwrap()
}

#[test]
fn malformed_json_names_the_field() {
    let text = figure_eight_json().replace("\"l\": 12", "\"l\": \"twelve\"");
    let err = GroupFile::parse(&text).unwrap_err().to_string();
    assert!(err.contains("line"), "{err}");
    let text = figure_eight_json().replace("\"masses\"", "\"mass\"");
    let err = GroupFile::parse(&text).unwrap_err().to_string();
    assert!(err.contains("mass"), "{err}");
}

#[test]
fn non_orthogonal_generator_is_named() {
    let text = figure_eight_json().replace("[[1.0, 0.0], [0.0, -1.0]]", "[[1.0, 0.5], [0.0, -1.0]]");
    let err = GroupFile::parse(&text).unwrap().build().unwrap_err();
    match err {
        Error::InvalidGenerator { name, .. } => assert_eq!(name, "h1"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn mass_violating_permutation_is_rejected() {
    let mut f = group_file("figure-eight");
    f.masses = vec![1.0, 2.0, 1.0];
    assert!(matches!(f.build(), Err(Error::InvalidGenerator { .. })));
}

#[test]
fn declared_l_and_type_are_checked() {
    let mut f = group_file("figure-eight");
    f.l = 5;
    assert!(f.build().is_err());
    let mut f = group_file("choreography-2");
    f.action_type = ActionType::Dihedral;
    assert!(f.build().is_err());
    let mut f = group_file("choreography-2");
    f.generators.r = None;
    assert!(matches!(f.build(), Err(Error::Parse(_))));
}

fn converged_record() -> (OrbitRecord, FourierPath) {
    let g = bundled("choreography-2");
    let q = Quadrature::new(QuadratureParams::new(128).unwrap(), 8).unwrap();
    let out = minimize(&random_init(g, 8, 1, 1.0, 1e-9).unwrap(), &q, &MinimizeConfig::default());
    let rec = OrbitRecord::new(group_file("choreography-2"), &out.path, &q, out.report.as_ref().unwrap());
    (rec, out.path)
}

#[test]
fn orbit_record_round_trips_bit_for_bit() {
    let (rec, path) = converged_record();
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("orbit.json");
    rec.write(&file).unwrap();
    let back = OrbitRecord::read(&file).unwrap();
    assert_eq!(back, rec);
    let (_, p, q) = back.load().unwrap();
    assert_eq!(p.coeffs(), path.coeffs());
    assert_eq!(q.nu(), 128);
    for (a, b) in p.coeffs().iter().zip(path.coeffs()) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn orbit_record_resolves_group_path() {
    let (mut rec, _) = converged_record();
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(groups_dir().join("choreography-2.json"), dir.path().join("g.json")).unwrap();
    rec.group = GroupRef::Path("g.json".into());
    let file = dir.path().join("orbit.json");
    rec.write(&file).unwrap();
    let back = OrbitRecord::read(&file).unwrap();
    assert_eq!(back.group_file().unwrap(), &group_file("choreography-2"));
}

#[test]
fn wrong_block_count_is_a_parse_error() {
    let (mut rec, _) = converged_record();
    rec.coeffs.pop();
    let back = OrbitRecord::parse(&rec.to_json()).unwrap();
    assert!(matches!(back.load(), Err(Error::Parse(_))));
    let (mut rec, _) = converged_record();
    rec.coeffs[2].push(0.0);
    assert!(matches!(rec.load(), Err(Error::Parse(_))));
}

#[test]
fn trajectory_csv_layout() {
    let (_, path) = converged_record();
    let q = Quadrature::new(QuadratureParams::new(16).unwrap(), 8).unwrap();
    let traj = extend_to_full_period(&path, &q).unwrap();
    let csv = trajectory_csv(&traj, 2, 2);
    assert_eq!(csv.lines().next().unwrap(), "t,q1x,q1y,q2x,q2y");
    let rows = parse_trajectory_csv(&csv).unwrap();
    assert_eq!(rows.len(), 33);
    assert_eq!(rows[0].1, rows[32].1);
    assert_eq!(rows[32].0, 2.0);
    assert_eq!(rows[5].1, traj.configs[5].0);
}

#[test]
fn history_csv_layout() {
    let g = bundled("choreography-2");
    let q = Quadrature::new(QuadratureParams::new(64).unwrap(), 4).unwrap();
    let out = minimize(&random_init(g, 4, 1, 1.0, 1e-9).unwrap(), &q, &MinimizeConfig { max_iters: 5, ..Default::default() });
    let csv = history_csv(&out.history);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "iter,action,grad_norm,min_distance");
    assert_eq!(lines.count(), out.history.len());
}
