use serde::{Deserialize, Serialize};

/// An isometry of the time circle of length `period` (in ticks):
/// `t -> t + shift` or `t -> -t + shift`, all arithmetic modulo `period`.
///
/// A reflection `t -> -t + c` fixes `c / 2` and `c / 2 + period / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TimeAction {
    pub reflect: bool,
    pub shift: u32,
    pub period: u32,
}

impl TimeAction {
    pub fn identity(period: u32) -> Self {
        Self { reflect: false, shift: 0, period }
    }

    pub fn rotation(shift: u32, period: u32) -> Self {
        Self { reflect: false, shift: shift % period, period }
    }

    pub fn reflection(shift: u32, period: u32) -> Self {
        Self { reflect: true, shift: shift % period, period }
    }

    pub fn is_identity(&self) -> bool {
        !self.reflect && self.shift == 0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &TimeAction) -> TimeAction {
        debug_assert_eq!(self.period, other.period);
        let p = self.period as u64;
        let inner = if self.reflect { (p - other.shift as u64) % p } else { other.shift as u64 };
        TimeAction {
            reflect: self.reflect ^ other.reflect,
            shift: ((inner + self.shift as u64) % p) as u32,
            period: self.period,
        }
    }

    pub fn inverse(&self) -> TimeAction {
        if self.reflect {
            *self
        } else {
            TimeAction::rotation(self.period - self.shift, self.period)
        }
    }

    /// Image of a time value, reduced into `[0, period)`.
    pub fn apply(&self, t: f64) -> f64 {
        let p = self.period as f64;
        let sign = if self.reflect { -1.0 } else { 1.0 };
        (sign * t + self.shift as f64).rem_euclid(p)
    }

    pub fn sign(&self) -> f64 {
        if self.reflect {
            -1.0
        } else {
            1.0
        }
    }

    pub fn order(&self) -> u32 {
        if self.reflect {
            return 2;
        }
        let mut k = 1;
        let mut cur = *self;
        while !cur.is_identity() {
            cur = cur.compose(self);
            k += 1;
        }
        k
    }

    /// Re-express in a circle with `factor` times as many ticks.
    pub(crate) fn refine(&self, factor: u32) -> TimeAction {
        TimeAction { reflect: self.reflect, shift: self.shift * factor, period: self.period * factor }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_composition_table() {
        let p = 6;
        let rot = TimeAction::rotation(2, p);
        let refl = TimeAction::reflection(0, p);
        // s r s = r^-1
        assert_eq!(refl.compose(&rot).compose(&refl), rot.inverse());
        assert_eq!(refl.compose(&refl), TimeAction::identity(p));
        assert_eq!(rot.order(), 3);
        // reflection t -> 2 - t is the rotation by 2 after t -> -t
        assert_eq!(rot.compose(&refl), TimeAction::reflection(2, p));
    }

    #[test]
    fn apply_matches_composition() {
        let p = 12;
        let a = TimeAction::reflection(5, p);
        let b = TimeAction::rotation(7, p);
        for t in [0.0, 0.25, 3.5, 11.9] {
            let lhs = a.compose(&b).apply(t);
            let rhs = a.apply(b.apply(t));
            assert!((lhs - rhs).abs() < 1e-12);
        }
        assert_eq!(TimeAction::reflection(2, 12).apply(1.0), 1.0);
    }
}
