use nalgebra::DMatrix;

use crate::chain::{DriftModel, GeneratorMatrix, RegimeSchedule};
use crate::error::{Error, Result};

/// The randomized chain `Z = (N, Y)` on `{0..n} x E`.
///
/// Level `k < n` evolves with `G_{k+1} - q_{k+1} I` and jumps to level `k+1`
/// at rate `q_{k+1}` without changing the `E` coordinate; level `n` evolves
/// with `G_{n+1}`. Indices are level-major: `(k, i) -> k * |E| + i`.
#[derive(Debug, Clone)]
pub struct AugmentedModel {
    schedule: RegimeSchedule,
    drift: DriftModel,
    rates: Vec<f64>,
    generator: GeneratorMatrix,
}

pub fn build_augmented_generator(
    schedule: &RegimeSchedule,
    drift: &DriftModel,
    q: &[f64],
) -> Result<AugmentedModel> {
    schedule.check_drift(drift)?;
    let n = schedule.n_breakpoints();
    if q.len() != n {
        return Err(Error::Dimension(format!("{n} breakpoints but {} randomization rates", q.len())));
    }
    check_rates(q)?;
    let e = schedule.dim();
    let total = (n + 1) * e;
    let mut m = DMatrix::zeros(total, total);
    for k in 0..=n {
        let g = schedule.generator(k).matrix();
        let qk = q.get(k).copied().unwrap_or(0.0);
        let base = k * e;
        for i in 0..e {
            for j in 0..e {
                m[(base + i, base + j)] = g[(i, j)];
            }
            m[(base + i, base + i)] -= qk;
            if k < n {
                m[(base + i, base + e + i)] = qk;
            }
        }
    }
    Ok(AugmentedModel {
        schedule: schedule.clone(),
        drift: drift.clone(),
        rates: q.to_vec(),
        generator: GeneratorMatrix::new(m)?,
    })
}

pub(crate) fn check_rates(q: &[f64]) -> Result<()> {
    for (k, &qk) in q.iter().enumerate() {
        if !(qk > 0.0 && qk.is_finite()) {
            return Err(Error::NonPositiveRate { index: k + 1, value: qk });
        }
    }
    Ok(())
}

/// Generator of the level counter `N` alone: `-q_{k+1}` on the diagonal
/// (0 on the last one), `q_{k+1}` on the superdiagonal.
pub fn marginal_counter_generator(q: &[f64]) -> Result<GeneratorMatrix> {
    check_rates(q)?;
    let n = q.len();
    let mut m = DMatrix::zeros(n + 1, n + 1);
    for (k, &qk) in q.iter().enumerate() {
        m[(k, k)] = -qk;
        m[(k, k + 1)] = qk;
    }
    GeneratorMatrix::new(m)
}

impl AugmentedModel {
    pub fn schedule(&self) -> &RegimeSchedule {
        &self.schedule
    }

    pub fn drift(&self) -> &DriftModel {
        &self.drift
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn generator(&self) -> &GeneratorMatrix {
        &self.generator
    }

    pub fn levels(&self) -> usize {
        self.rates.len() + 1
    }

    pub fn base_dim(&self) -> usize {
        self.drift.dim()
    }

    pub fn index(&self, level: usize, state: usize) -> usize {
        level * self.base_dim() + state
    }

    /// Lifted drift `v~(k, i) = v(i)` as a drift model on the augmented
    /// space, labelled `k:label`.
    pub fn lifted_drift(&self) -> DriftModel {
        let e = self.base_dim();
        let labels = (0..self.levels())
            .flat_map(|k| (0..e).map(move |i| (k, i)))
            .map(|(k, i)| format!("{k}:{}", self.drift.label(i)));
        let rates: Vec<f64> = (0..self.levels()).flat_map(|_| self.drift.rates().iter().copied()).collect();
        DriftModel::new(labels, &rates).expect("lifting preserves a valid drift")
    }

    /// Level-major indices listed in sign-major order:
    /// `(0,E+), (1,E+), ..., (n,E+), (0,E-), ..., (n,E-)`.
    pub fn sign_major_permutation(&self) -> Vec<usize> {
        let levels = self.levels();
        let plus = self.drift.plus_states();
        let minus = self.drift.minus_states();
        let mut perm = Vec::with_capacity(levels * self.base_dim());
        for side in [plus, minus] {
            for k in 0..levels {
                perm.extend(side.iter().map(|&i| self.index(k, i)));
            }
        }
        perm
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: f64, b: f64) -> GeneratorMatrix {
        GeneratorMatrix::from_rows(&[vec![-a, a], vec![b, -b]]).unwrap()
    }

    fn drift() -> DriftModel {
        DriftModel::new(["e+", "e-"], &[2.0, -3.0]).unwrap()
    }

    #[test]
    fn one_breakpoint_block_layout() {
        let s = RegimeSchedule::new(vec![1.0], vec![g(2., 1.), g(3., 2.)]).unwrap();
        let aug = build_augmented_generator(&s, &drift(), &[0.7]).unwrap();
        let m = aug.generator().matrix();
        let expected = DMatrix::from_row_slice(
            4,
            4,
            &[
                -2.7, 2.0, 0.7, 0.0, //
                1.0, -1.7, 0.0, 0.7, //
                0.0, 0.0, -3.0, 3.0, //
                0.0, 0.0, 2.0, -2.0,
            ],
        );
        assert!((m - expected).abs().max() < 1e-15);
    }

    #[test]
    fn no_breakpoints_is_the_base_generator() {
        let s = RegimeSchedule::homogeneous(g(2., 1.));
        let aug = build_augmented_generator(&s, &drift(), &[]).unwrap();
        assert_eq!(aug.generator().matrix(), s.generator(0).matrix());
    }

    #[test]
    fn rejects_bad_rates() {
        let s = RegimeSchedule::new(vec![1.0], vec![g(2., 1.), g(3., 2.)]).unwrap();
        assert!(matches!(
            build_augmented_generator(&s, &drift(), &[0.0]),
            Err(Error::NonPositiveRate { index: 1, .. })
        ));
        assert!(build_augmented_generator(&s, &drift(), &[1.0, 2.0]).is_err());
    }

    #[test]
    fn counter_generator_display() {
        let m = marginal_counter_generator(&[2.0, 3.0]).unwrap();
        let expected = DMatrix::from_row_slice(3, 3, &[-2., 2., 0., 0., -3., 3., 0., 0., 0.]);
        assert_eq!(m.matrix(), &expected);
        assert_eq!(marginal_counter_generator(&[]).unwrap().matrix(), &DMatrix::zeros(1, 1));
    }

    #[test]
    fn sign_major_permutation_lists_plus_levels_first() {
        let s = RegimeSchedule::new(vec![1.0, 2.0], vec![g(2., 1.); 3]).unwrap();
        let aug = build_augmented_generator(&s, &drift(), &[1.0, 1.0]).unwrap();
        assert_eq!(aug.sign_major_permutation(), vec![0, 2, 4, 1, 3, 5]);
        let lifted = aug.lifted_drift();
        assert_eq!(lifted.plus_states(), &[0, 2, 4]);
        assert_eq!(lifted.label(3), "1:e-");
    }
}
