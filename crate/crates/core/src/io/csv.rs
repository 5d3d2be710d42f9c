use std::fmt::Write as _;

use crate::optimizer::IterationRecord;
use crate::pathspace::SampledTrajectory;

/// `t, q1_x, q1_y, ...` rows over a sampled period.
pub fn trajectory_csv(traj: &SampledTrajectory, n: usize, d: usize) -> String {
    const AXES: [&str; 3] = ["x", "y", "z"];
    let mut out = String::from("t");
    for j in 1..=n {
        for k in 0..d {
            match AXES.get(k) {
                Some(a) => write!(out, ",q{j}{a}").unwrap(),
                None => write!(out, ",q{j}_{k}").unwrap(),
            }
        }
    }
    out.push('\n');
    for (t, q) in traj.times.iter().zip(&traj.configs) {
        write!(out, "{t}").unwrap();
        for x in &q.0 {
            write!(out, ",{x}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn history_csv(history: &[IterationRecord]) -> String {
    let mut out = String::from("iter,action,grad_norm,min_distance\n");
    for r in history {
        writeln!(out, "{},{},{},{}", r.iter, r.action, r.grad_norm, r.min_distance).unwrap();
    }
    out
}

/// Parses a trajectory CSV back into `(t, coordinates)` rows.
pub fn parse_trajectory_csv(text: &str) -> Result<Vec<(f64, Vec<f64>)>, String> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        let vals: Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
        let vals = vals.map_err(|e| format!("line {}: {e}", i + 1))?;
        let (t, rest) = vals.split_first().ok_or_else(|| format!("line {}: empty row", i + 1))?;
        rows.push((*t, rest.to_vec()));
    }
    Ok(rows)
}
