use nalgebra::DMatrix;

use crate::chain::{matrix_exp, RegimeSchedule};
use crate::error::{Error, Result};

/// Row-sum tolerance for transition matrices.
pub const TRANSITION_TOL: f64 = 1e-9;

/// Stochastic matrix `P(s, t)` of the inhomogeneous chain.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix(DMatrix<f64>);

impl TransitionMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension("transition matrix must be square".into()));
        }
        for (i, row) in m.row_iter().enumerate() {
            if let Some(x) = row.iter().find(|x| !(-TRANSITION_TOL..=1.0 + TRANSITION_TOL).contains(*x)) {
                return Err(Error::InvalidGenerator(format!("row {i} has entry {x} outside [0, 1]")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > TRANSITION_TOL {
                return Err(Error::InvalidGenerator(format!("row {i} sums to {sum}")));
            }
        }
        Ok(TransitionMatrix(m))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }
}

/// `P(s, t)`: ordered product of `exp((b - a) G_k)` over the regime pieces
/// `[a, b)` covering `[s, t]`.
pub fn transition_matrix(schedule: &RegimeSchedule, s: f64, t: f64) -> Result<TransitionMatrix> {
    if s > t {
        return Err(Error::ReversedInterval { s, t });
    }
    if s < 0.0 {
        return Err(Error::InvalidSchedule(format!("start time {s} is negative")));
    }
    let dim = schedule.dim();
    let mut p = DMatrix::identity(dim, dim);
    let mut a = s;
    let mut k = schedule.regime_at(s);
    while a < t {
        let b = schedule.regime_end(k).min(t);
        p *= matrix_exp(schedule.generator(k).matrix(), b - a);
        a = b;
        k += 1;
    }
    // clean up rounding below zero
    p.iter_mut().for_each(|x| {
        if *x < 0.0 && *x > -TRANSITION_TOL {
            *x = 0.0
        }
    });
    TransitionMatrix::new(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::GeneratorMatrix;

    fn schedule() -> RegimeSchedule {
        let g = |a: f64, b: f64| GeneratorMatrix::from_rows(&[vec![-a, a], vec![b, -b]]).unwrap();
        RegimeSchedule::new(vec![2.0, 8.0], vec![g(2., 1.), g(3., 2.), g(5., 3.)]).unwrap()
    }

    #[test]
    fn same_time_is_identity() {
        let p = transition_matrix(&schedule(), 3.0, 3.0).unwrap();
        assert_eq!(p.matrix(), &DMatrix::identity(2, 2));
    }

    #[test]
    fn single_regime_is_one_exponential() {
        let s = schedule();
        let p = transition_matrix(&s, 2.5, 4.0).unwrap();
        let e = matrix_exp(s.generator(1).matrix(), 1.5);
        assert!((p.matrix() - e).abs().max() < 1e-15);
    }

    #[test]
    fn reversed_interval_is_an_error() {
        assert!(matches!(
            transition_matrix(&schedule(), 3.0, 1.0),
            Err(Error::ReversedInterval { .. })
        ));
    }
}
