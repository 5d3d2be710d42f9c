use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pathspace::{ActionReport, FourierPath, Quadrature, QuadratureParams};
use crate::symmetry::SymmetryGroup;

use super::group_file::GroupFile;

/// The group of a record, inline or as a path relative to the record file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Inline(GroupFile),
    Path(String),
}

/// A persisted candidate orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitRecord {
    pub group: GroupRef,
    pub s: usize,
    pub nu: usize,
    /// `s + 2` blocks of `n * d` coefficients, `a_0` first.
    pub coeffs: Vec<Vec<f64>>,
    pub action: f64,
    pub grad_norm: f64,
    pub min_distance: f64,
}

impl OrbitRecord {
    pub fn new(group: GroupFile, path: &FourierPath, quad: &Quadrature, report: &ActionReport) -> Self {
        Self {
            group: GroupRef::Inline(group),
            s: path.s(),
            nu: quad.nu(),
            coeffs: path.coeffs().chunks_exact(path.block_len()).map(<[f64]>::to_vec).collect(),
            action: report.action,
            grad_norm: report.grad_norm,
            min_distance: report.min_mutual_distance,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut rec = Self::parse(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        })?;
        if let GroupRef::Path(p) = &rec.group {
            let base = path.parent().unwrap_or_else(|| Path::new("."));
            rec.group = GroupRef::Inline(GroupFile::read(&base.join(p))?);
        }
        Ok(rec)
    }

    /// Serialized JSON; floats use the shortest representation that reads
    /// back to the same bits.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("orbit record serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn group_file(&self) -> Result<&GroupFile> {
        match &self.group {
            GroupRef::Inline(g) => Ok(g),
            GroupRef::Path(p) => Err(Error::Parse(format!("group path `{p}` was not resolved"))),
        }
    }

    /// Rebuilds the group, the path and its quadrature.
    pub fn load(&self) -> Result<(Arc<SymmetryGroup>, FourierPath, Quadrature)> {
        let group = Arc::new(self.group_file()?.build()?);
        let path = self.path_in(group.clone())?;
        let quad = Quadrature::new(QuadratureParams::new(self.nu)?, self.s)?;
        Ok((group, path, quad))
    }

    pub fn path_in(&self, group: Arc<SymmetryGroup>) -> Result<FourierPath> {
        let m = group.system().dim();
        if self.coeffs.len() != self.s + 2 {
            return Err(Error::Parse(format!(
                "field `coeffs`: expected {} blocks for s = {}, got {}",
                self.s + 2,
                self.s,
                self.coeffs.len()
            )));
        }
        if let Some((i, b)) = self.coeffs.iter().enumerate().find(|(_, b)| b.len() != m) {
            return Err(Error::Parse(format!("field `coeffs[{i}]`: expected {m} values, got {}", b.len())));
        }
        FourierPath::new(group, self.s, self.coeffs.concat())
    }
}
