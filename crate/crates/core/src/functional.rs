//! Names for the four passage functionals shared by the solver, the
//! simulator and the command line.

use std::fmt;
use std::str::FromStr;

use crate::chain::DriftModel;
use crate::error::{Error, Result};

/// Which discounted passage functional is requested.
///
/// `PiPlus(i, j)`: upcrossing of level 0 from `i` in E-, landing in `j` in E+.
/// `PsiPlus(l, i, j)`: upcrossing of level `l > 0` from `i` in E+ to `j` in E+.
/// The minus variants mirror these with the roles of E+ and E- exchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionalKind {
    PiPlus,
    PsiPlus,
    PiMinus,
    PsiMinus,
}

impl FunctionalKind {
    pub fn is_plus(self) -> bool {
        matches!(self, FunctionalKind::PiPlus | FunctionalKind::PsiPlus)
    }

    pub fn has_level(self) -> bool {
        matches!(self, FunctionalKind::PsiPlus | FunctionalKind::PsiMinus)
    }

    /// The same functional seen in the problem with the drift negated.
    pub fn reflected(self) -> Self {
        match self {
            FunctionalKind::PiPlus => FunctionalKind::PiMinus,
            FunctionalKind::PsiPlus => FunctionalKind::PsiMinus,
            FunctionalKind::PiMinus => FunctionalKind::PiPlus,
            FunctionalKind::PsiMinus => FunctionalKind::PsiPlus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FunctionalKind::PiPlus => "pi+",
            FunctionalKind::PsiPlus => "psi+",
            FunctionalKind::PiMinus => "pi-",
            FunctionalKind::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for FunctionalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FunctionalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pi+" | "pi_plus" | "pi-plus" => Ok(FunctionalKind::PiPlus),
            "psi+" | "psi_plus" | "psi-plus" => Ok(FunctionalKind::PsiPlus),
            "pi-" | "pi_minus" | "pi-minus" => Ok(FunctionalKind::PiMinus),
            "psi-" | "psi_minus" | "psi-minus" => Ok(FunctionalKind::PsiMinus),
            other => Err(Error::InvalidState(format!(
                "unknown functional kind `{other}` (expected pi+, psi+, pi- or psi-)"
            ))),
        }
    }
}

/// A fully specified functional: kind, start state, target state and, for
/// the Psi kinds, the level to cross.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalSpec {
    pub kind: FunctionalKind,
    pub from: usize,
    pub to: usize,
    pub level: Option<f64>,
}

impl FunctionalSpec {
    pub fn pi_plus(from: usize, to: usize) -> Self {
        FunctionalSpec { kind: FunctionalKind::PiPlus, from, to, level: None }
    }

    pub fn pi_minus(from: usize, to: usize) -> Self {
        FunctionalSpec { kind: FunctionalKind::PiMinus, from, to, level: None }
    }

    pub fn psi_plus(level: f64, from: usize, to: usize) -> Self {
        FunctionalSpec { kind: FunctionalKind::PsiPlus, from, to, level: Some(level) }
    }

    pub fn psi_minus(level: f64, from: usize, to: usize) -> Self {
        FunctionalSpec { kind: FunctionalKind::PsiMinus, from, to, level: Some(level) }
    }

    /// Crossing level: 0 for Pi, the given level for Psi.
    pub fn crossing_level(&self) -> f64 {
        self.level.unwrap_or(0.0)
    }

    /// Checks that the states sit on the sides of the partition the kind
    /// requires and that Psi kinds carry a positive level.
    pub fn validate(&self, drift: &DriftModel) -> Result<()> {
        let dim = drift.dim();
        for (role, s) in [("from", self.from), ("to", self.to)] {
            if s >= dim {
                return Err(Error::InvalidState(format!(
                    "{role} state index {s} out of range for {dim} states"
                )));
            }
        }
        let (from_plus, to_plus) = match self.kind {
            FunctionalKind::PiPlus => (false, true),
            FunctionalKind::PsiPlus => (true, true),
            FunctionalKind::PiMinus => (true, false),
            FunctionalKind::PsiMinus => (false, false),
        };
        let side = |plus: bool| if plus { "E+" } else { "E-" };
        if drift.is_plus(self.from) != from_plus {
            return Err(Error::InvalidState(format!(
                "{}: start state `{}` must lie in {}",
                self.kind,
                drift.label(self.from),
                side(from_plus)
            )));
        }
        if drift.is_plus(self.to) != to_plus {
            return Err(Error::InvalidState(format!(
                "{}: target state `{}` must lie in {}",
                self.kind,
                drift.label(self.to),
                side(to_plus)
            )));
        }
        match (self.kind.has_level(), self.level) {
            (true, Some(l)) if l > 0.0 && l.is_finite() => Ok(()),
            (true, Some(l)) => Err(Error::InvalidState(format!(
                "{}: level must be positive, got {l}",
                self.kind
            ))),
            (true, None) => Err(Error::InvalidState(format!("{}: level is required", self.kind))),
            (false, Some(_)) => Err(Error::InvalidState(format!(
                "{}: level is only meaningful for psi functionals",
                self.kind
            ))),
            (false, None) => Ok(()),
        }
    }
}
