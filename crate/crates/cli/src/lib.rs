//! Commands behind the `eqorbit` binary. Each returns its stdout text or a
//! [`CliError`] carrying the process exit code.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use eqorbit_core::io::{history_csv, trajectory_csv, GroupFile, OrbitRecord};
use eqorbit_core::optimizer::{minimize, random_init, MinimizeConfig, MinimizeOutcome};
use eqorbit_core::par::map_tasks;
use eqorbit_core::pathspace::{extend_to_full_period, sample_full_period, Quadrature, QuadratureParams};
use eqorbit_core::symmetry::{fixed_centered_dimension, SymmetryGroup};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable or malformed input files. Exit code 1.
    Input(String),
    /// The inputs were valid but the computation failed. Exit code 2.
    Computation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_USAGE,
            CliError::Computation(_) => EXIT_COMPUTATION,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Computation(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<eqorbit_core::Error> for CliError {
    fn from(e: eqorbit_core::Error) -> Self {
        if e.is_input_error() || matches!(e, eqorbit_core::Error::Io(_)) {
            CliError::Input(e.to_string())
        } else {
            CliError::Computation(e.to_string())
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

fn load_group(path: &Path) -> Result<(GroupFile, SymmetryGroup)> {
    let file = GroupFile::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let group = file.build().map_err(|e| {
        let msg = format!("{}: {e}", path.display());
        if e.is_input_error() {
            CliError::Input(msg)
        } else {
            CliError::Computation(msg)
        }
    })?;
    Ok((file, group))
}

/// Structural facts about a group file, as printed by `check`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub order: usize,
    pub kernel_order: usize,
    pub action_type: String,
    pub l: usize,
    pub kernel_fixed_dim: usize,
    pub fixed_centered_dim: usize,
    pub coercive: bool,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group: {}", self.name)?;
        writeln!(f, "order: {}", self.order)?;
        writeln!(f, "kernel order: {}", self.kernel_order)?;
        writeln!(f, "type: {}", self.action_type)?;
        writeln!(f, "l: {}", self.l)?;
        writeln!(f, "dim (E^n)^K: {}", self.kernel_fixed_dim)?;
        writeln!(f, "dim centred fixed subspace: {}", self.fixed_centered_dim)?;
        writeln!(f, "verdict: {}", if self.coercive { "coercive" } else { "not coercive" })
    }
}

pub fn check_report(group_file: &Path) -> Result<CheckReport> {
    let (file, group) = load_group(group_file)?;
    let fixed = fixed_centered_dimension(&group);
    Ok(CheckReport {
        name: file.name.clone(),
        order: group.order(),
        kernel_order: group.kernel_order(),
        action_type: if group.is_kernel_only() { "kernel-only".into() } else { group.kind().to_string() },
        l: group.l(),
        kernel_fixed_dim: group.kernel_projector().trace().round() as usize,
        fixed_centered_dim: fixed,
        coercive: fixed == 0,
    })
}

pub fn cmd_check(group_file: &Path) -> Result<String> {
    check_report(group_file).map(|r| r.to_string())
}

/// Everything `minimize` needs; seeds run from `config.seed` to
/// `config.seed + restarts - 1`.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub group: PathBuf,
    pub s: usize,
    pub nu: Option<usize>,
    pub config: MinimizeConfig,
    pub out: PathBuf,
    pub restarts: usize,
}

/// One row of `summary.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub seed: u64,
    pub status: String,
    pub action: f64,
    pub grad_norm: f64,
    pub min_distance: f64,
    pub newton_residual: Option<f64>,
    /// Orbit record file, for converged runs.
    pub record: Option<PathBuf>,
}

pub fn orbit_file_name(seed: u64) -> String {
    format!("orbit-seed{seed}.json")
}

pub fn history_file_name(seed: u64) -> String {
    format!("history-seed{seed}.csv")
}

fn ensure_writable(dir: &Path) -> Result<()> {
    let fail = |e: std::io::Error| CliError::Input(format!("output directory {} is not writable: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(fail)?;
    let probe = dir.join(".eqorbit-write-probe");
    fs::write(&probe, b"").map_err(fail)?;
    fs::remove_file(&probe).map_err(fail)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::Computation(format!("writing {}: {e}", path.display())))
}

fn run_seed(group: &Arc<SymmetryGroup>, quad: &Quadrature, m: &Manifest, seed: u64) -> Result<MinimizeOutcome, String> {
    let cfg = MinimizeConfig { seed, ..m.config.clone() };
    let path = random_init(group.clone(), m.s, seed, cfg.amplitude, cfg.collision_floor).map_err(|e| e.kind().to_string())?;
    Ok(minimize(&path, quad, &cfg))
}

/// Runs every restart, writes the outputs and returns the summary rows.
/// Individual failures are recorded in the summary; the batch itself fails
/// only on bad input or when writing outputs fails.
pub fn run_batch(m: &Manifest) -> Result<Vec<RunSummary>> {
    if m.restarts == 0 {
        return Err(CliError::Input("restarts must be at least 1".into()));
    }
    m.config.validate()?;
    let (file, group) = load_group(&m.group)?;
    let group = Arc::new(group);
    let params = match m.nu {
        Some(nu) => QuadratureParams::new(nu)?,
        None => QuadratureParams::default_for(m.s),
    };
    let quad = Quadrature::new(params, m.s)?;
    ensure_writable(&m.out)?;

    let seeds: Vec<u64> = (0..m.restarts as u64).map(|i| m.config.seed.wrapping_add(i)).collect();
    let outcomes = map_tasks(seeds.len(), |i| run_seed(&group, &quad, m, seeds[i]));

    let mut rows = Vec::with_capacity(seeds.len());
    for (&seed, outcome) in seeds.iter().zip(outcomes) {
        let row = match outcome {
            Err(kind) => RunSummary {
                seed,
                status: kind,
                action: f64::NAN,
                grad_norm: f64::NAN,
                min_distance: f64::NAN,
                newton_residual: None,
                record: None,
            },
            Ok(out) => {
                write_file(&m.out.join(history_file_name(seed)), &history_csv(&out.history))?;
                let report = out.report;
                let mut record = None;
                if let (eqorbit_core::optimizer::Status::Converged, Some(rep)) = (out.status, report.as_ref()) {
                    let rec = OrbitRecord::new(file.clone(), &out.path, &quad, rep);
                    let target = m.out.join(orbit_file_name(seed));
                    rec.write(&target).map_err(|e| CliError::Computation(e.to_string()))?;
                    record = Some(target);
                }
                RunSummary {
                    seed,
                    status: out.status.to_string(),
                    action: report.map_or(f64::NAN, |r| r.action),
                    grad_norm: report.map_or(f64::NAN, |r| r.grad_norm),
                    min_distance: report.map_or(f64::NAN, |r| r.min_mutual_distance),
                    newton_residual: out.newton_residual_max,
                    record,
                }
            }
        };
        rows.push(row);
    }
    write_file(&m.out.join("summary.csv"), &summary_csv(&rows))?;
    Ok(rows)
}

pub fn summary_csv(rows: &[RunSummary]) -> String {
    let mut out = String::from("seed,status,action,grad_norm,min_distance\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{},{}\n", r.seed, r.status, r.action, r.grad_norm, r.min_distance));
    }
    out
}

/// `minimize`: succeeds if at least one restart converged.
pub fn cmd_minimize(m: &Manifest) -> Result<String> {
    let rows = run_batch(m)?;
    let mut text = summary_csv(&rows);
    let converged = rows.iter().filter(|r| r.record.is_some()).count();
    text.push_str(&format!("{converged} of {} runs converged; outputs in {}\n", rows.len(), m.out.display()));
    if converged == 0 {
        return Err(CliError::Computation(text));
    }
    Ok(text)
}

/// `sample`: full-period trajectory CSV for an orbit record. The record is
/// first reassembled at its own quadrature nodes, which fails if the segments
/// disagree at the junctions. `resolution` counts subintervals of the whole
/// period and defaults to `nu * l`, in which case the rows are exactly those
/// reassembled nodes.
pub fn cmd_sample(record: &Path, resolution: Option<usize>) -> Result<String> {
    let rec = OrbitRecord::read(record).map_err(|e| CliError::Input(format!("{}: {e}", record.display())))?;
    let (group, path, quad) = rec.load()?;
    let nodes = extend_to_full_period(&path, &quad)?;
    let sys = group.system();
    let traj = match resolution {
        None => nodes,
        Some(r) if r == quad.nu() * group.l() => nodes,
        Some(r) => sample_full_period(&path, r)?,
    };
    Ok(trajectory_csv(&traj, sys.n(), sys.d()))
}

/// `serve`: binds `127.0.0.1:port` and runs the session service until killed.
/// `announce` receives the bound address once listening.
pub fn cmd_serve(port: u16, defaults: eqorbit_service::Defaults, announce: impl FnOnce(std::net::SocketAddr)) -> Result<()> {
    let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Computation(e.to_string()))?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(("127.0.0.1", port))
            .await
            .map_err(|e| CliError::Computation(format!("cannot bind port {port}: {e}")))?;
        let addr = listener.local_addr().map_err(|e| CliError::Computation(e.to_string()))?;
        announce(addr);
        eqorbit_service::serve(listener, defaults).await.map_err(|e| CliError::Computation(e.to_string()))
    })
}
