use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::nbody::MassSystem;

use super::element::GroupElement;
use super::projector::{boundary_involution, kernel_projector, BoundaryInvolution};
use super::time::TimeAction;

/// Matrix tolerance for deduplicating group elements.
pub const DEDUP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionType {
    Cyclic,
    Brake,
    Dihedral,
}

impl fmt::Display for ActionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ActionType::Cyclic => "cyclic",
            ActionType::Brake => "brake",
            ActionType::Dihedral => "dihedral",
        })
    }
}

/// Elements that impose the boundary conditions on the fundamental domain
/// `[0, 1]`, as indices into the element list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryData {
    /// `tau(r)` is the rotation `t -> t + 1`.
    Cyclic { r: usize },
    /// `tau(h0)` fixes 0 and `tau(h1)` fixes 1; equal for brake type.
    Reflections { h0: usize, h1: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub kind: ActionType,
    /// Order of the image of the time homomorphism.
    pub l: usize,
    pub boundary: BoundaryData,
}

/// A finite group acting on loops of `n` bodies, with time normalized so the
/// period is `l` and the fundamental domain is `[0, 1]`.
#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    system: MassSystem,
    elements: Vec<GroupElement>,
    kernel: Vec<usize>,
    class: Classification,
    /// One element per time action, `time_reps[i]` for `time_image[i]`.
    time_reps: Vec<usize>,
    kernel_proj: OnceLock<Matrix>,
    involution: OnceLock<BoundaryInvolution>,
}

impl SymmetryGroup {
    pub fn system(&self) -> &MassSystem {
        &self.system
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn kernel(&self) -> impl Iterator<Item = &GroupElement> {
        self.kernel.iter().map(|&i| &self.elements[i])
    }

    pub fn kernel_order(&self) -> usize {
        self.kernel.len()
    }

    pub fn classification(&self) -> &Classification {
        &self.class
    }

    pub fn kind(&self) -> ActionType {
        self.class.kind
    }

    pub fn l(&self) -> usize {
        self.class.l
    }

    /// True when the time image is trivial.
    pub fn is_kernel_only(&self) -> bool {
        self.class.l == 1
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    /// One representative per coset of the kernel.
    pub fn coset_representatives(&self) -> impl Iterator<Item = &GroupElement> {
        self.time_reps.iter().map(|&i| &self.elements[i])
    }

    /// Cached [`kernel_projector`].
    pub fn kernel_projector(&self) -> &Matrix {
        self.kernel_proj.get_or_init(|| kernel_projector(self))
    }

    /// Cached [`boundary_involution`].
    pub fn boundary_involution(&self) -> &BoundaryInvolution {
        self.involution.get_or_init(|| boundary_involution(self))
    }

    pub fn find(&self, g: &GroupElement) -> Option<usize> {
        self.elements.iter().position(|e| e.approx_eq(g, DEDUP_TOL))
    }

    /// Largest closure defect: every product must be in the list.
    pub fn closure_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.elements {
            for b in &self.elements {
                let p = a.compose(b);
                let best = self
                    .elements
                    .iter()
                    .filter(|e| e.time == p.time && e.perm == p.perm)
                    .map(|e| e.mat.max_abs_diff(&p.mat))
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(best);
            }
        }
        worst
    }
}

/// Closes `generators` under composition and classifies the result.
///
/// All generators must share a time period (in ticks). The returned group is
/// re-expressed with period `l`.
pub fn close_group(system: &MassSystem, generators: &[GroupElement], cap: usize) -> Result<SymmetryGroup> {
    let period = generators.first().map_or(1, |g| g.time.period);
    for (i, g) in generators.iter().enumerate() {
        let name = format!("generator {}", i + 1);
        g.validate(system, &name)?;
        if g.time.period != period {
            return Err(Error::InvalidGenerator { name, reason: "time period differs from the other generators".into() });
        }
    }
    let mut elements = vec![GroupElement::identity(system.n(), system.d(), period)];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let p = g.compose(&elements[i]);
            if !elements.iter().any(|e| e.approx_eq(&p, DEDUP_TOL)) {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                elements.push(p);
                queue.push_back(elements.len() - 1);
            }
        }
    }
    let class = normalize_time(&mut elements)?;
    let kernel = (0..elements.len()).filter(|&i| elements[i].time.is_identity()).collect::<Vec<_>>();
    if kernel.len() * class.l != elements.len() {
        return Err(Error::Classification(format!(
            "|G| = {} is not |K| * l = {} * {}",
            elements.len(),
            kernel.len(),
            class.l
        )));
    }
    let mut time_reps: Vec<usize> = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        if !time_reps.iter().any(|&j| elements[j].time == e.time) {
            time_reps.push(i);
        }
    }
    Ok(SymmetryGroup {
        system: system.clone(),
        elements,
        kernel,
        class,
        time_reps,
        kernel_proj: OnceLock::new(),
        involution: OnceLock::new(),
    })
}

/// Recomputes the classification of a closed group from its elements.
pub fn classify(group: &SymmetryGroup) -> Result<Classification> {
    let mut elements = group.elements.clone();
    normalize_time(&mut elements)
}

/// Reduces the time image to the canonical form where the period equals `l`,
/// rotations generate `t -> t + 1` (cyclic) and reflections fix 0 and 1
/// (brake, dihedral). Conjugates by a time translation when no reflection
/// fixes 0.
fn normalize_time(elements: &mut [GroupElement]) -> Result<Classification> {
    let mut image: Vec<TimeAction> = Vec::new();
    for e in elements.iter() {
        if !image.contains(&e.time) {
            image.push(e.time);
        }
    }
    let l = image.len();
    if l == 1 {
        for e in elements.iter_mut() {
            e.time = TimeAction::identity(1);
        }
        return Ok(Classification { kind: ActionType::Cyclic, l: 1, boundary: BoundaryData::Cyclic { r: 0 } });
    }
    let reflections: Vec<&TimeAction> = image.iter().filter(|t| t.reflect).collect();
    let has_reflection = !reflections.is_empty();
    if has_reflection && reflections.len() * 2 != l {
        return Err(Error::Classification("time image is not a dihedral group".into()));
    }
    let c0 = reflections.iter().map(|t| t.shift).min().unwrap_or(0);

    let mut times: Vec<TimeAction> = elements.iter().map(|e| e.time).collect();
    if c0 % 2 == 1 {
        times.iter_mut().for_each(|t| *t = t.refine(2));
    }
    if has_reflection {
        let c = if c0 % 2 == 1 { 2 * c0 } else { c0 };
        for t in times.iter_mut().filter(|t| t.reflect) {
            t.shift = (t.shift + t.period - c) % t.period;
        }
    }
    let l32 = l as u32;
    // Refine until every shift is a whole multiple of period / l.
    loop {
        let p = times[0].period;
        if p % l32 == 0 && times.iter().all(|t| t.shift % (p / l32) == 0) {
            break;
        }
        if p > (1 << 24) {
            return Err(Error::Classification("time actions do not fit a finite circle".into()));
        }
        times.iter_mut().for_each(|t| *t = t.refine(2));
    }
    let unit = times[0].period / l32;
    for (e, t) in elements.iter_mut().zip(&times) {
        e.time = TimeAction { reflect: t.reflect, shift: t.shift / unit, period: l32 };
    }
    let first = |pred: &dyn Fn(&TimeAction) -> bool| elements.iter().position(|e| pred(&e.time));

    if !has_reflection {
        let r = first(&|t| !t.reflect && t.shift == 1)
            .ok_or_else(|| Error::Classification("no rotation by one fundamental domain".into()))?;
        return Ok(Classification { kind: ActionType::Cyclic, l, boundary: BoundaryData::Cyclic { r } });
    }
    let h0 = first(&|t| t.reflect && t.shift == 0)
        .ok_or_else(|| Error::Classification("no reflection fixing 0".into()))?;
    let h1 = first(&|t| t.reflect && t.shift == 2 % l32)
        .ok_or_else(|| Error::Classification("no reflection fixing 1".into()))?;
    let kind = if l == 2 { ActionType::Brake } else { ActionType::Dihedral };
    Ok(Classification { kind, l, boundary: BoundaryData::Reflections { h0, h1 } })
}
