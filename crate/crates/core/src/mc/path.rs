use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::chain::RegimeSchedule;
use crate::error::{Error, Result};

/// Horizon used when none is given: `T = 40 / c`, so paths censored at `T`
/// carry discount at most `e^{-40}`.
pub const DEFAULT_HORIZON_FACTOR: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub paths: usize,
    pub horizon: f64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(paths: usize, horizon: f64, seed: u64) -> Self {
        SimConfig { paths, horizon, seed }
    }

    /// Horizon `40 / c`.
    pub fn for_discount(paths: usize, c: f64, seed: u64) -> Self {
        SimConfig { paths, horizon: DEFAULT_HORIZON_FACTOR / c, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.paths == 0 {
            return Err(Error::Simulation("paths must be at least 1".into()));
        }
        if !(self.horizon > 0.0) {
            return Err(Error::Simulation(format!("horizon must be positive, got {}", self.horizon)));
        }
        Ok(())
    }
}

/// A maximal stay in one state, `[start, end)`. `censored` marks the last
/// sojourn of a path cut at the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sojourn {
    pub state: usize,
    pub start: f64,
    pub end: f64,
    pub censored: bool,
}

/// Lazily generated path: yields sojourns until the horizon.
///
/// Within regime `k` the holding time in `i` is exponential with rate
/// `-G_k(i, i)`. A holding time that would run past the next breakpoint is
/// cut there and drawn again under the next regime.
pub struct PathWalker<'a> {
    schedule: &'a RegimeSchedule,
    horizon: f64,
    rng: ChaCha8Rng,
    state: usize,
    time: f64,
    done: bool,
}

impl<'a> PathWalker<'a> {
    pub fn new(schedule: &'a RegimeSchedule, start: usize, cfg: &SimConfig, path_index: u64) -> Result<Self> {
        if start >= schedule.dim() {
            return Err(Error::InvalidState(format!(
                "start state {start} out of range for {} states",
                schedule.dim()
            )));
        }
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(path_index);
        Ok(PathWalker { schedule, horizon: cfg.horizon, rng, state: start, time: 0.0, done: false })
    }

    fn next_state(&mut self, regime: usize, rate: f64) -> usize {
        let g = self.schedule.generator(regime).matrix();
        let i = self.state;
        let u: f64 = self.rng.random::<f64>() * rate;
        let mut acc = 0.0;
        let mut last = i;
        for j in 0..g.ncols() {
            if j == i || g[(i, j)] <= 0.0 {
                continue;
            }
            acc += g[(i, j)];
            last = j;
            if u < acc {
                return j;
            }
        }
        last
    }
}

impl Iterator for PathWalker<'_> {
    type Item = Sojourn;

    fn next(&mut self) -> Option<Sojourn> {
        if self.done {
            return None;
        }
        let start = self.time;
        loop {
            let regime = self.schedule.regime_at(self.time);
            let end = self.schedule.regime_end(regime);
            let rate = -self.schedule.generator(regime).matrix()[(self.state, self.state)];
            let hold = if rate > 0.0 {
                Exp::new(rate).expect("positive rate").sample(&mut self.rng)
            } else {
                f64::INFINITY
            };
            let t = self.time + hold;
            if t >= self.horizon && end >= self.horizon {
                self.done = true;
                return Some(Sojourn { state: self.state, start, end: self.horizon, censored: true });
            }
            if t >= end {
                // memoryless: cut at the breakpoint and draw again
                self.time = end;
                continue;
            }
            let from = self.state;
            self.time = t;
            self.state = self.next_state(regime, rate);
            return Some(Sojourn { state: from, start, end: t, censored: false });
        }
    }
}

/// A path on `[0, horizon)`: `states[0]` from time 0, then `states[k + 1]`
/// from `jump_times[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub jump_times: Vec<f64>,
    pub states: Vec<usize>,
    pub horizon: f64,
}

impl PathSample {
    pub fn state_at(&self, t: f64) -> usize {
        let k = self.jump_times.partition_point(|&s| s <= t);
        self.states[k]
    }

    pub fn jump_count(&self) -> usize {
        self.jump_times.len()
    }

    /// Jumps at times in `[a, b)`.
    pub fn jumps_between(&self, a: f64, b: f64) -> usize {
        self.jump_times.iter().filter(|&&s| s >= a && s < b).count()
    }

    pub fn sojourns(&self) -> impl Iterator<Item = Sojourn> + '_ {
        let n = self.states.len();
        (0..n).map(move |k| Sojourn {
            state: self.states[k],
            start: if k == 0 { 0.0 } else { self.jump_times[k - 1] },
            end: if k + 1 < n { self.jump_times[k] } else { self.horizon },
            censored: k + 1 == n,
        })
    }
}

/// Simulate one full path; a deterministic function of `(cfg.seed, path_index)`.
pub fn simulate_path(schedule: &RegimeSchedule, start: usize, cfg: &SimConfig, path_index: u64) -> Result<PathSample> {
    let mut jump_times = Vec::new();
    let mut states = Vec::new();
    for s in PathWalker::new(schedule, start, cfg, path_index)? {
        states.push(s.state);
        if !s.censored {
            jump_times.push(s.end);
        }
    }
    Ok(PathSample { jump_times, states, horizon: cfg.horizon })
}
