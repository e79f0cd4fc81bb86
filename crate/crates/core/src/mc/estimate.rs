use rayon::prelude::*;

use crate::chain::{DriftModel, RegimeSchedule};
use crate::error::{Error, Result};
use crate::functional::FunctionalSpec;
use crate::mc::passage::{first_passage, Sign};
use crate::mc::path::{PathWalker, SimConfig};

/// Paths per work unit; partial sums are combined in chunk order.
const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorResult {
    pub mean: f64,
    pub std_error: f64,
    pub paths: usize,
    /// Paths that did not cross before the horizon.
    pub censored: usize,
    /// `e^{-cT}`: the most a censored path could have contributed.
    pub truncation_bias_bound: f64,
    pub seed: u64,
}

impl EstimatorResult {
    /// `|mean - x|` measured in standard errors (infinite if the
    /// estimate has zero variance and differs from `x`).
    pub fn z_score(&self, x: f64) -> f64 {
        let d = (self.mean - x).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// Running mean and sum of squared deviations (Welford, with the pairwise
/// merge of Chan et al.). Identical samples give their value back exactly
/// and zero spread.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, other: &Moments) {
        if other.n == 0.0 {
            return;
        }
        if self.n == 0.0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        self.mean += d * (other.n / n);
        self.m2 += other.m2 + d * d * (self.n * other.n / n);
        self.n = n;
    }
}

fn path_value(
    schedule: &RegimeSchedule,
    drift: &DriftModel,
    c: f64,
    spec: &FunctionalSpec,
    cfg: &SimConfig,
    index: usize,
) -> Result<Option<f64>> {
    let sign = if spec.kind.is_plus() { Sign::Plus } else { Sign::Minus };
    let walker = PathWalker::new(schedule, spec.from, cfg, index as u64)?;
    Ok(first_passage(walker, drift, spec.crossing_level(), sign)
        .map(|(tau, state)| if state == spec.to { (-c * tau).exp() } else { 0.0 }))
}

/// Sample mean of `e^{-c tau} 1{X_tau = j}` over `cfg.paths` paths started
/// in `spec.from`. Censored paths contribute 0.
pub fn estimate_functional(
    schedule: &RegimeSchedule,
    drift: &DriftModel,
    c: f64,
    spec: &FunctionalSpec,
    cfg: &SimConfig,
) -> Result<EstimatorResult> {
    schedule.check_drift(drift)?;
    spec.validate(drift)?;
    cfg.validate()?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::NonPositiveKilling(c));
    }
    let chunks = cfg.paths.div_ceil(CHUNK);
    let partial: Vec<Result<(Moments, usize)>> = (0..chunks)
        .into_par_iter()
        .map(|ch| {
            let mut m = Moments::default();
            let mut cens = 0;
            for index in ch * CHUNK..((ch + 1) * CHUNK).min(cfg.paths) {
                match path_value(schedule, drift, c, spec, cfg, index)? {
                    Some(v) => m.push(v),
                    None => {
                        m.push(0.0);
                        cens += 1;
                    }
                }
            }
            Ok((m, cens))
        })
        .collect();
    let mut moments = Moments::default();
    let mut censored = 0;
    for p in partial {
        let (m, c) = p?;
        moments.merge(&m);
        censored += c;
    }
    let n = cfg.paths as f64;
    let var = if cfg.paths > 1 { moments.m2 / (n - 1.0) } else { 0.0 };
    let mean = moments.mean;
    Ok(EstimatorResult {
        mean,
        std_error: (var / n).sqrt(),
        paths: cfg.paths,
        censored,
        truncation_bias_bound: (-c * cfg.horizon).exp(),
        seed: cfg.seed,
    })
}

/// Empirical law of `X_t` for each `t` in `times`, from `cfg.paths` paths
/// started in `start`. Rows follow `times`.
pub fn occupation_distribution(
    schedule: &RegimeSchedule,
    start: usize,
    times: &[f64],
    cfg: &SimConfig,
) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    let t_max = times.iter().copied().fold(0.0, f64::max);
    if !(t_max < cfg.horizon) {
        return Err(Error::Simulation(format!("times must lie before the horizon {}", cfg.horizon)));
    }
    let dim = schedule.dim();
    let chunks = cfg.paths.div_ceil(CHUNK);
    let partial: Vec<Result<Vec<Vec<usize>>>> = (0..chunks)
        .into_par_iter()
        .map(|ch| {
            let mut counts = vec![vec![0usize; dim]; times.len()];
            for index in ch * CHUNK..((ch + 1) * CHUNK).min(cfg.paths) {
                let mut walker = PathWalker::new(schedule, start, cfg, index as u64)?;
                let mut current = walker.next();
                for (k, &t) in times.iter().enumerate() {
                    while let Some(s) = current {
                        if t < s.end {
                            break;
                        }
                        current = walker.next();
                    }
                    let s = current.ok_or_else(|| Error::Simulation("path ended early".into()))?;
                    counts[k][s.state] += 1;
                }
            }
            Ok(counts)
        })
        .collect();
    let mut total = vec![vec![0usize; dim]; times.len()];
    for p in partial {
        for (row, add) in total.iter_mut().zip(p?) {
            for (a, b) in row.iter_mut().zip(add) {
                *a += b;
            }
        }
    }
    Ok(total
        .into_iter()
        .map(|row| row.into_iter().map(|x| x as f64 / cfg.paths as f64).collect())
        .collect())
}
