use crate::chain::{DriftModel, GeneratorMatrix};
use crate::error::{Error, Result};

/// Piecewise-constant generator: regime `k` (0-based) is active on
/// `[s_k, s_{k+1})` with `s_0 = 0`, and the last regime on `[s_n, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeSchedule {
    breakpoints: Vec<f64>,
    generators: Vec<GeneratorMatrix>,
}

impl RegimeSchedule {
    pub fn new(breakpoints: Vec<f64>, generators: Vec<GeneratorMatrix>) -> Result<Self> {
        if generators.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidSchedule(format!(
                "{} breakpoints need {} generators, found {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                generators.len()
            )));
        }
        let mut prev = 0.0;
        for (k, &s) in breakpoints.iter().enumerate() {
            if !s.is_finite() || s <= prev {
                return Err(Error::InvalidSchedule(format!(
                    "breakpoint {} = {s} must be finite and greater than {prev}",
                    k + 1
                )));
            }
            prev = s;
        }
        let dim = generators[0].dim();
        if let Some((k, g)) = generators.iter().enumerate().find(|(_, g)| g.dim() != dim) {
            return Err(Error::Dimension(format!(
                "generator {} is {}x{}, generator 1 is {dim}x{dim}",
                k + 1,
                g.dim(),
                g.dim()
            )));
        }
        Ok(RegimeSchedule { breakpoints, generators })
    }

    /// A single regime with no breakpoints.
    pub fn homogeneous(generator: GeneratorMatrix) -> Self {
        RegimeSchedule { breakpoints: Vec::new(), generators: vec![generator] }
    }

    /// The same generator repeated over every regime.
    pub fn repeated(generator: GeneratorMatrix, breakpoints: Vec<f64>) -> Result<Self> {
        let generators = vec![generator; breakpoints.len() + 1];
        Self::new(breakpoints, generators)
    }

    /// Number of breakpoints `n`.
    pub fn n_breakpoints(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn n_regimes(&self) -> usize {
        self.generators.len()
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn generators(&self) -> &[GeneratorMatrix] {
        &self.generators
    }

    pub fn generator(&self, regime: usize) -> &GeneratorMatrix {
        &self.generators[regime]
    }

    /// Start of regime `k` (`s_0 = 0`).
    pub fn regime_start(&self, regime: usize) -> f64 {
        if regime == 0 { 0.0 } else { self.breakpoints[regime - 1] }
    }

    /// End of regime `k`, infinite for the last one.
    pub fn regime_end(&self, regime: usize) -> f64 {
        self.breakpoints.get(regime).copied().unwrap_or(f64::INFINITY)
    }

    /// Regime active at time `t >= 0` (left-closed intervals).
    pub fn regime_at(&self, t: f64) -> usize {
        self.breakpoints.partition_point(|&s| s <= t)
    }

    /// `(s_1, s_2 - s_1, ..., s_n - s_{n-1})`: the point at which the
    /// transform in the clock rates is inverted.
    pub fn increments(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.breakpoints
            .iter()
            .map(|&s| {
                let d = s - prev;
                prev = s;
                d
            })
            .collect()
    }

    /// Same generators with new breakpoints.
    pub fn with_breakpoints(&self, breakpoints: Vec<f64>) -> Result<Self> {
        Self::new(breakpoints, self.generators.clone())
    }

    pub fn check_drift(&self, drift: &DriftModel) -> Result<()> {
        if drift.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "drift has {} states, generators are {}x{}",
                drift.dim(),
                self.dim(),
                self.dim()
            )));
        }
        Ok(())
    }
}

/// Reduces the minus functionals to plus functionals: the schedule is kept
/// and the drift negated, so E+ and E- trade places.
pub fn reflect_problem(schedule: &RegimeSchedule, drift: &DriftModel) -> (RegimeSchedule, DriftModel) {
    (schedule.clone(), drift.reflect())
}
