use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::nbody::MassSystem;
use crate::symmetry::{close_group, ActionType, GroupElement, Permutation, SymmetryGroup, TimeAction};

/// Closure cap used when loading group files.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// A spatial generator: 1-based permutation images and a `d x d` matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpatialGenerator {
    pub perm: Vec<usize>,
    pub mat: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryGenerators {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<SpatialGenerator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<SpatialGenerator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1: Option<SpatialGenerator>,
}

/// The JSON group definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub name: String,
    pub n: usize,
    pub d: usize,
    pub alpha: f64,
    pub masses: Vec<f64>,
    pub action_type: ActionType,
    #[serde(default)]
    pub kernel_generators: Vec<SpatialGenerator>,
    #[serde(default)]
    pub generators: BoundaryGenerators,
    pub l: usize,
}

impl SpatialGenerator {
    pub fn identity(n: usize, d: usize) -> Self {
        Self { perm: (1..=n).collect(), mat: Matrix::identity(d).to_rows() }
    }

    fn to_element(&self, time: TimeAction, sys: &MassSystem, name: &str) -> Result<GroupElement> {
        let bad = |reason: String| Error::InvalidGenerator { name: name.to_string(), reason };
        let perm = Permutation::from_one_based(&self.perm).map_err(|e| bad(e.to_string()))?;
        let mat = Matrix::from_rows(&self.mat).ok_or_else(|| bad("matrix rows have different lengths".into()))?;
        let g = GroupElement::new(time, perm, mat);
        g.validate(sys, name)?;
        Ok(g)
    }
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("group file serializes")
    }

    pub fn system(&self) -> Result<MassSystem> {
        if self.masses.len() != self.n {
            return Err(Error::Parse(format!("field `masses`: expected {} entries, got {}", self.n, self.masses.len())));
        }
        MassSystem::new(self.d, self.alpha, self.masses.clone())
    }

    /// Attaches time actions to the generators (`r` rotates by one
    /// fundamental domain, `h0` reflects about 0, `h1` about 1), closes the
    /// group and checks the declared `l` and action type.
    pub fn build(&self) -> Result<SymmetryGroup> {
        self.build_with_cap(DEFAULT_CLOSURE_CAP)
    }

    pub fn build_with_cap(&self, cap: usize) -> Result<SymmetryGroup> {
        let sys = self.system()?;
        if self.l == 0 {
            return Err(Error::Parse("field `l`: must be at least 1".into()));
        }
        let period = self.l as u32;
        let mut gens = Vec::new();
        for (i, g) in self.kernel_generators.iter().enumerate() {
            gens.push(g.to_element(TimeAction::identity(period), &sys, &format!("kernel_generators[{i}]"))?);
        }
        let missing = |f: &str| Error::Parse(format!("field `generators.{f}` is required for {} type", self.action_type));
        match self.action_type {
            ActionType::Cyclic => match &self.generators.r {
                Some(r) => gens.push(r.to_element(TimeAction::rotation(1, period), &sys, "r")?),
                None if self.l == 1 => {}
                None => return Err(missing("r")),
            },
            ActionType::Brake => {
                if self.l != 2 {
                    return Err(Error::Parse(format!("field `l`: brake type has l = 2, got {}", self.l)));
                }
                let h0 = self.generators.h0.as_ref().ok_or_else(|| missing("h0"))?;
                gens.push(h0.to_element(TimeAction::reflection(0, period), &sys, "h0")?);
            }
            ActionType::Dihedral => {
                let h0 = self.generators.h0.as_ref().ok_or_else(|| missing("h0"))?;
                let h1 = self.generators.h1.as_ref().ok_or_else(|| missing("h1"))?;
                gens.push(h0.to_element(TimeAction::reflection(0, period), &sys, "h0")?);
                gens.push(h1.to_element(TimeAction::reflection(2, period), &sys, "h1")?);
            }
        }
        let group = close_group(&sys, &gens, cap)?;
        if group.l() != self.l {
            return Err(Error::Classification(format!("declared l = {}, generated time image has order {}", self.l, group.l())));
        }
        if group.kind() != self.action_type {
            return Err(Error::Classification(format!(
                "declared action type {}, generated group is {}",
                self.action_type,
                group.kind()
            )));
        }
        Ok(group)
    }
}
