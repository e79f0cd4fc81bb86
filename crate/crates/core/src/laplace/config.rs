use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Significant digits used for weights unless stated otherwise.
pub const DEFAULT_PRECISION: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InversionMethod {
    /// The plain Gaver functional: `M + 1` nodes, error `O(1/M)`.
    Gaver,
    /// Salzer-accelerated Gaver functionals (Stehfest weights): `2M` nodes.
    GaverStehfest,
    Talbot,
}

impl InversionMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            InversionMethod::Gaver => "gaver",
            InversionMethod::GaverStehfest => "gaver-stehfest",
            InversionMethod::Talbot => "talbot",
        }
    }

    /// Whether the method evaluates the transform off the real axis.
    pub fn needs_complex(self) -> bool {
        self == InversionMethod::Talbot
    }
}

impl fmt::Display for InversionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InversionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "gaver" => Ok(InversionMethod::Gaver),
            "gaver-stehfest" | "stehfest" | "gs" => Ok(InversionMethod::GaverStehfest),
            "talbot" => Ok(InversionMethod::Talbot),
            other => Err(Error::Inversion(format!(
                "unknown inversion method {other:?} (expected gaver, gaver-stehfest or talbot)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InversionConfig {
    pub method: InversionMethod,
    /// `M`, applied in every dimension.
    pub terms: usize,
    /// Significant decimal digits kept in the weights.
    pub precision: u32,
}

impl InversionConfig {
    pub fn new(method: InversionMethod, terms: usize) -> Self {
        InversionConfig { method, terms, precision: DEFAULT_PRECISION }
    }

    pub fn gaver(terms: usize) -> Self {
        Self::new(InversionMethod::Gaver, terms)
    }

    pub fn gaver_stehfest(terms: usize) -> Self {
        Self::new(InversionMethod::GaverStehfest, terms)
    }

    pub fn talbot(terms: usize) -> Self {
        Self::new(InversionMethod::Talbot, terms)
    }

    pub fn with_precision(mut self, digits: u32) -> Self {
        self.precision = digits;
        self
    }

    /// Defaults for transforms that come out of a floating-point linear
    /// solve. Weights grow fast with `M` and multiply across dimensions, so
    /// `M` drops as dimensions are added to stay under the noise floor of a
    /// double-precision evaluator.
    pub fn for_numerical_evaluator(method: InversionMethod, arity: usize) -> Self {
        let terms = match (method, arity) {
            (InversionMethod::Talbot, 0 | 1) => 32,
            (InversionMethod::Talbot, 2) => 18,
            (InversionMethod::Talbot, _) => 14,
            (InversionMethod::Gaver, _) => 7,
            (InversionMethod::GaverStehfest, 0 | 1) => 7,
            (InversionMethod::GaverStehfest, 2) => 5,
            (InversionMethod::GaverStehfest, _) => 4,
        };
        Self::new(method, terms)
    }

    /// Defaults for closed-form transforms.
    pub fn for_closed_form(method: InversionMethod) -> Self {
        match method {
            InversionMethod::Talbot => Self::talbot(32),
            _ => Self::new(method, 12),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms == 0 {
            return Err(Error::Inversion("terms must be at least 1".into()));
        }
        if self.method != InversionMethod::Talbot && self.precision < 16 {
            return Err(Error::Inversion(format!(
                "Gaver weights need at least 16 significant digits, got {}",
                self.precision
            )));
        }
        Ok(())
    }
}
