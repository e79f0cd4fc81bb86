use crate::chain::DriftModel;
use crate::mc::path::{PathSample, Sojourn};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// First time `phi` exceeds `+level`.
    Plus,
    /// First time `phi` drops below `-level`.
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Passage {
    Crossed { time: f64, state: usize, discount: f64 },
    Censored,
}

impl Passage {
    /// `e^{-c tau} 1{X_tau = j}`, with censored paths counting 0.
    pub fn indicator(&self, j: usize) -> f64 {
        match *self {
            Passage::Crossed { state, discount, .. } if state == j => discount,
            _ => 0.0,
        }
    }
}

/// Scan sojourns for the first passage. `phi` is linear with slope
/// `v(state)` on each sojourn, so the crossing time is solved exactly.
pub(crate) fn first_passage(
    sojourns: impl Iterator<Item = Sojourn>,
    drift: &DriftModel,
    level: f64,
    sign: Sign,
) -> Option<(f64, usize)> {
    // work with psi = +-phi so both signs become an upcrossing of `level`
    let dir = match sign {
        Sign::Plus => 1.0,
        Sign::Minus => -1.0,
    };
    let mut psi = 0.0;
    for s in sojourns {
        let slope = dir * drift.rate(s.state);
        if slope > 0.0 {
            let at = s.start + ((level - psi) / slope).max(0.0);
            if at < s.end {
                return Some((at, s.state));
            }
        }
        psi += slope * (s.end - s.start);
    }
    None
}

/// Discounted passage across `+level` (or `-level`) along a stored path.
pub fn passage_functional(path: &PathSample, drift: &DriftModel, level: f64, sign: Sign, c: f64) -> Passage {
    match first_passage(path.sojourns(), drift, level, sign) {
        Some((time, state)) => Passage::Crossed { time, state, discount: (-c * time).exp() },
        None => Passage::Censored,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(state: usize, horizon: f64) -> PathSample {
        PathSample { jump_times: vec![], states: vec![state], horizon }
    }

    #[test]
    fn immediate_upcrossing() {
        let d = DriftModel::from_rates(&[2.0, -3.0]).unwrap();
        let p = passage_functional(&constant(0, 5.0), &d, 0.0, Sign::Plus, 0.7);
        assert_eq!(p, Passage::Crossed { time: 0.0, state: 0, discount: 1.0 });
    }

    #[test]
    fn linear_crossing() {
        let d = DriftModel::from_rates(&[2.0, -3.0]).unwrap();
        let p = passage_functional(&constant(0, 5.0), &d, 3.0, Sign::Plus, 0.7);
        assert_eq!(p, Passage::Crossed { time: 1.5, state: 0, discount: (-1.5f64 * 0.7).exp() });
    }

    #[test]
    fn censored_and_downward() {
        let d = DriftModel::from_rates(&[2.0, -3.0]).unwrap();
        assert_eq!(passage_functional(&constant(1, 5.0), &d, 0.0, Sign::Plus, 1.0), Passage::Censored);
        assert_eq!(passage_functional(&constant(0, 1.0), &d, 3.0, Sign::Plus, 1.0), Passage::Censored);
        let p = passage_functional(&constant(1, 5.0), &d, 6.0, Sign::Minus, 1.0);
        assert_eq!(p, Passage::Crossed { time: 2.0, state: 1, discount: (-2.0f64).exp() });
    }

    #[test]
    fn crossing_after_a_dip() {
        // phi: -3 on [0,1), then +2 per unit; reaches 0 at t = 2.5 in state 0
        let d = DriftModel::from_rates(&[2.0, -3.0]).unwrap();
        let path = PathSample { jump_times: vec![1.0], states: vec![1, 0], horizon: 10.0 };
        match passage_functional(&path, &d, 0.0, Sign::Plus, 1.0) {
            Passage::Crossed { time, state, .. } => {
                assert!((time - 2.5).abs() < 1e-15);
                assert_eq!(state, 0);
            }
            Passage::Censored => panic!("should cross"),
        }
    }
}
