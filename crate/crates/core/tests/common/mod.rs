#![allow(dead_code)]

use fluctuation::chain::{DriftModel, GeneratorMatrix, RegimeSchedule};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FLUID_VALUE: f64 = 0.6501;
pub const FLUID_MC_VALUE: f64 = 0.6462;

pub fn fluid() -> (RegimeSchedule, DriftModel) {
    let gens = vec![
        GeneratorMatrix::from_rows(&[vec![-2.0, 2.0], vec![1.0, -1.0]]).unwrap(),
        GeneratorMatrix::from_rows(&[vec![-3.0, 3.0], vec![2.0, -2.0]]).unwrap(),
        GeneratorMatrix::from_rows(&[vec![-5.0, 5.0], vec![3.0, -3.0]]).unwrap(),
    ];
    let schedule = RegimeSchedule::new(vec![2.0, 8.0], gens).unwrap();
    let drift = DriftModel::new(["e+", "e-"], &[2.0, -3.0]).unwrap();
    (schedule, drift)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Conservative generator with off-diagonal rates in `[0, 3)`; roughly one
/// entry in five is zero.
pub fn random_generator(rng: &mut ChaCha8Rng, dim: usize) -> GeneratorMatrix {
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let mut total = 0.0;
        for j in 0..dim {
            if i != j && rng.random::<f64>() > 0.2 {
                let r = 3.0 * rng.random::<f64>();
                m[(i, j)] = r;
                total += r;
            }
        }
        m[(i, i)] = -total;
    }
    GeneratorMatrix::new(m).unwrap()
}

/// Drift with at least one state of each sign and |v| in `[0.5, 3)`.
pub fn random_drift(rng: &mut ChaCha8Rng, dim: usize) -> DriftModel {
    assert!(dim >= 2);
    let n_plus = rng.random_range(1..dim);
    let mut rates: Vec<f64> = (0..dim)
        .map(|k| {
            let size = 0.5 + 2.5 * rng.random::<f64>();
            if k < n_plus {
                size
            } else {
                -size
            }
        })
        .collect();
    // Shuffle so that the sign-major ordering is actually exercised.
    for k in (1..dim).rev() {
        let j = rng.random_range(0..=k);
        rates.swap(k, j);
    }
    DriftModel::from_rates(&rates).unwrap()
}

pub fn random_schedule(rng: &mut ChaCha8Rng, dim: usize, n: usize) -> RegimeSchedule {
    let mut t = 0.0;
    let breakpoints: Vec<f64> = (0..n)
        .map(|_| {
            t += 0.5 + 2.0 * rng.random::<f64>();
            t
        })
        .collect();
    let gens = (0..=n).map(|_| random_generator(rng, dim)).collect();
    RegimeSchedule::new(breakpoints, gens).unwrap()
}

pub fn random_rates(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| 0.1 + 4.9 * rng.random::<f64>()).collect()
}

pub mod transforms {
    use fluctuation::laplace::ClosedForm;
    use num_bigint::BigInt;
    use num_complex::{Complex, Complex64};
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    type CRational = Complex<BigRational>;

    fn int(a: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(a))
    }

    fn cint(a: i64) -> CRational {
        CRational::new(int(a), BigRational::zero())
    }

    /// `1 / (q_1 ... q_d)`, whose original is the constant 1.
    pub fn constant(arity: usize) -> ClosedForm<'static> {
        ClosedForm::new(arity, |q| 1.0 / q.iter().product::<f64>())
            .with_exact(|q| q.iter().fold(BigRational::one(), |acc, x| acc / x))
            .with_complex(|q| Complex64::new(1.0, 0.0) / q.iter().product::<Complex64>())
            .with_complex_exact(|q| q.iter().fold(cint(1), |acc, x| acc / x))
    }

    /// `1 / prod (q_k + a_k)`, whose original is `exp(-sum a_k t_k)`.
    pub fn shifted(shifts: &'static [i64]) -> ClosedForm<'static> {
        ClosedForm::new(shifts.len(), move |q| 1.0 / q.iter().zip(shifts).map(|(x, &a)| x + a as f64).product::<f64>())
            .with_exact(move |q| q.iter().zip(shifts).fold(BigRational::one(), |acc, (x, &a)| acc / (x + int(a))))
            .with_complex(move |q| {
                Complex64::new(1.0, 0.0) / q.iter().zip(shifts).map(|(x, &a)| x + a as f64).product::<Complex64>()
            })
            .with_complex_exact(move |q| q.iter().zip(shifts).fold(cint(1), |acc, (x, &a)| acc / (x + cint(a))))
    }

    /// Same transform with only a double-precision evaluator.
    pub fn shifted_float(shifts: &'static [i64]) -> ClosedForm<'static> {
        ClosedForm::new(shifts.len(), move |q| 1.0 / q.iter().zip(shifts).map(|(x, &a)| x + a as f64).product::<f64>())
            .with_complex(move |q| {
                Complex64::new(1.0, 0.0) / q.iter().zip(shifts).map(|(x, &a)| x + a as f64).product::<Complex64>()
            })
    }

    pub fn original(shifts: &[i64], t: &[f64]) -> f64 {
        (-shifts.iter().zip(t).map(|(&a, x)| a as f64 * x).sum::<f64>()).exp()
    }
}
