//! Level-block factorization of the randomized chain.
//!
//! The augmented generator is block upper-triangular in the level, so the
//! plus factors are too. Diagonal blocks come from the classical
//! factorization of each regime at killing `q_{k+1} + c`; each further
//! superdiagonal is one Sylvester equation per block.

use nalgebra::DMatrix;

use crate::chain::{build_augmented_generator, check_rates, DriftModel, RegimeSchedule};
use crate::error::{Error, Result};
use crate::wh::classical::{classical_factorize, scaled_generator, WHQuadruple};

/// Pivot ratio below which a Steps 2-3 system is declared singular.
const PIVOT_RATIO: f64 = 1e-13;

/// Plus blocks `Lambda~_{k,l}` (`|E-| x |E+|`) and `G~_{k,l}` (`|E+| x |E+|`)
/// for levels `0..=n`, stored as a full grid; blocks below the diagonal are
/// zero unless the factorization came from the unstructured route.
#[derive(Debug, Clone)]
pub struct BlockFactorization {
    levels: usize,
    n_plus: usize,
    n_minus: usize,
    plus_states: Vec<usize>,
    minus_states: Vec<usize>,
    lambda: Vec<DMatrix<f64>>,
    g: Vec<DMatrix<f64>>,
    killing: f64,
    rates: Vec<f64>,
}

impl BlockFactorization {
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    /// Base-chain indices of the plus states, in block column order.
    pub fn plus_states(&self) -> &[usize] {
        &self.plus_states
    }

    /// Base-chain indices of the minus states, in block row order.
    pub fn minus_states(&self) -> &[usize] {
        &self.minus_states
    }

    pub fn killing(&self) -> f64 {
        self.killing
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// `c_k = q_k + c` for `k <= n`, and `c_{n+1} = c`.
    pub fn shifted_killings(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.rates.iter().map(|q| q + self.killing).collect();
        out.push(self.killing);
        out
    }

    pub fn lambda_block(&self, k: usize, l: usize) -> &DMatrix<f64> {
        &self.lambda[k * self.levels + l]
    }

    pub fn g_block(&self, k: usize, l: usize) -> &DMatrix<f64> {
        &self.g[k * self.levels + l]
    }

    /// `Sum_l Lambda~_{0,l}`: level-summed crossing matrix from level 0.
    pub fn level_sum_lambda(&self) -> DMatrix<f64> {
        (0..self.levels).fold(DMatrix::zeros(self.n_minus, self.n_plus), |acc, l| acc + self.lambda_block(0, l))
    }

    /// The full `Lambda~+` in sign-major level order.
    pub fn assemble_lambda_plus(&self) -> DMatrix<f64> {
        let (m, p, n) = (self.n_minus, self.n_plus, self.levels);
        let mut out = DMatrix::zeros(n * m, n * p);
        for k in 0..n {
            for l in 0..n {
                out.view_mut((k * m, l * p), (m, p)).copy_from(self.lambda_block(k, l));
            }
        }
        out
    }

    /// The full `G~+` in sign-major level order.
    pub fn assemble_g_plus(&self) -> DMatrix<f64> {
        let (p, n) = (self.n_plus, self.levels);
        let mut out = DMatrix::zeros(n * p, n * p);
        for k in 0..n {
            for l in 0..n {
                out.view_mut((k * p, l * p), (p, p)).copy_from(self.g_block(k, l));
            }
        }
        out
    }

    /// Largest entry of any block strictly below the level diagonal.
    pub fn max_lower_block(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..self.levels {
            for l in 0..k {
                worst = worst.max(self.lambda_block(k, l).abs().max());
                worst = worst.max(self.g_block(k, l).abs().max());
            }
        }
        worst
    }

    /// Largest entrywise difference to another factorization of the same shape.
    pub fn max_difference(&self, other: &BlockFactorization) -> f64 {
        if self.levels != other.levels || self.n_plus != other.n_plus || self.n_minus != other.n_minus {
            return f64::INFINITY;
        }
        let lam = self.lambda.iter().zip(&other.lambda).map(|(a, b)| (a - b).abs().max());
        let g = self.g.iter().zip(&other.g).map(|(a, b)| (a - b).abs().max());
        lam.chain(g).fold(0.0, f64::max)
    }

    /// Max-norm residual of the plus column of the augmented identity,
    /// `M [I; Lambda~+] = [I; Lambda~+] G~+` with `M = V~^{-1}(G~ - cI)`.
    /// Only the plus half exists here; the minus half is reached by reflection.
    pub fn augmented_residual(&self, schedule: &RegimeSchedule, drift: &DriftModel) -> Result<f64> {
        let aug = build_augmented_generator(schedule, drift, &self.rates)?;
        let lifted = aug.lifted_drift();
        let m = scaled_generator(aug.generator().matrix(), &lifted, self.killing);
        let (p, mm) = (self.levels * self.n_plus, self.levels * self.n_minus);
        let mut frame = DMatrix::zeros(p + mm, p);
        frame.view_mut((0, 0), (p, p)).fill_with_identity();
        frame.view_mut((p, 0), (mm, p)).copy_from(&self.assemble_lambda_plus());
        let lhs = &m * &frame;
        let rhs = &frame * self.assemble_g_plus();
        Ok((lhs - rhs).abs().max())
    }
}

fn check_inputs(schedule: &RegimeSchedule, drift: &DriftModel, c: f64, q: &[f64]) -> Result<()> {
    schedule.check_drift(drift)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::NonPositiveKilling(c));
    }
    if q.len() != schedule.n_breakpoints() {
        return Err(Error::Dimension(format!(
            "{} breakpoints but {} randomization rates",
            schedule.n_breakpoints(),
            q.len()
        )));
    }
    check_rates(q)
}

fn sub_block(g: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| g[(rows[i], cols[j])])
}

/// Solve `L X - X R = S` by vectorization, `(I (x) L - R^T (x) I) vec X = vec S`.
fn solve_sylvester(l: &DMatrix<f64>, r: &DMatrix<f64>, s: &DMatrix<f64>, at: (usize, usize)) -> Result<DMatrix<f64>> {
    let (m, p) = (l.nrows(), r.nrows());
    let dim = m * p;
    let mut k = DMatrix::zeros(dim, dim);
    for j in 0..p {
        for jj in 0..p {
            for i in 0..m {
                for ii in 0..m {
                    let mut v = 0.0;
                    if j == jj {
                        v += l[(i, ii)];
                    }
                    if i == ii {
                        v -= r[(jj, j)];
                    }
                    k[(j * m + i, jj * m + ii)] = v;
                }
            }
        }
    }
    let lu = k.lu();
    let u = lu.u();
    let pivots: Vec<f64> = (0..dim).map(|i| u[(i, i)].abs()).collect();
    let largest = pivots.iter().copied().fold(0.0, f64::max);
    let smallest = pivots.iter().copied().fold(f64::INFINITY, f64::min);
    if !(smallest > PIVOT_RATIO * largest) {
        return Err(Error::SingularBlock { row: at.0, col: at.1 });
    }
    let rhs = DMatrix::from_column_slice(dim, 1, s.as_slice());
    let x = lu.solve(&rhs).ok_or(Error::SingularBlock { row: at.0, col: at.1 })?;
    Ok(DMatrix::from_column_slice(m, p, x.as_slice()))
}

/// Block-recursive plus factorization of the randomized chain at rates `q`.
pub fn block_factorize(schedule: &RegimeSchedule, drift: &DriftModel, c: f64, q: &[f64]) -> Result<BlockFactorization> {
    check_inputs(schedule, drift, c, q)?;
    let n = q.len();
    let levels = n + 1;
    let (plus, minus) = (drift.plus_states(), drift.minus_states());
    let (np, nm) = (plus.len(), minus.len());
    let qk = |k: usize| q.get(k).copied().unwrap_or(0.0);
    let mut lambda = vec![DMatrix::zeros(nm, np); levels * levels];
    let mut g = vec![DMatrix::zeros(np, np); levels * levels];
    let idx = |k: usize, l: usize| k * levels + l;

    for k in 0..levels {
        let quad = classical_factorize(schedule.generator(k), drift, qk(k) + c)?;
        lambda[idx(k, k)] = quad.lambda_plus;
        g[idx(k, k)] = quad.g_plus;
    }

    let vp_inv = DMatrix::from_diagonal(&drift.v_plus().map(|v| 1.0 / v));
    let vm_inv = DMatrix::from_diagonal(&drift.v_minus().map(|v| 1.0 / v));
    let b: Vec<DMatrix<f64>> = (0..levels).map(|k| sub_block(schedule.generator(k).matrix(), plus, minus)).collect();
    let d: Vec<DMatrix<f64>> = (0..levels).map(|k| sub_block(schedule.generator(k).matrix(), minus, minus)).collect();
    let id_p = DMatrix::<f64>::identity(np, np);
    let id_m = DMatrix::<f64>::identity(nm, nm);

    for span in 1..levels {
        for k in 0..levels - span {
            let top = k + span;
            let ck = qk(k) + c;
            let dk = if span == 1 { qk(k) } else { 0.0 };
            let lam_kk = &lambda[idx(k, k)];
            let vb = &vp_inv * &b[k];
            let left = &vm_inv * (&d[k] - &id_m * ck) - lam_kk * &vb;
            let right = &g[idx(top, top)];
            let mut rhs = lam_kk * &vp_inv * dk - &vm_inv * &lambda[idx(k + 1, top)] * qk(k);
            for j in 1..span {
                rhs += &lambda[idx(k, k + j)] * &g[idx(k + j, top)];
            }
            let x = solve_sylvester(&left, right, &rhs, (k, top))?;
            g[idx(k, top)] = &vp_inv * dk * &id_p + &vb * &x;
            lambda[idx(k, top)] = x;
        }
    }

    Ok(BlockFactorization {
        levels,
        n_plus: np,
        n_minus: nm,
        plus_states: drift.plus_states().to_vec(),
        minus_states: drift.minus_states().to_vec(),
        lambda,
        g,
        killing: c,
        rates: q.to_vec(),
    })
}

/// Classical factorization of the whole augmented generator, for use as
/// the oracle behind [`block_factorize`].
pub fn direct_augmented_quadruple(
    schedule: &RegimeSchedule,
    drift: &DriftModel,
    c: f64,
    q: &[f64],
) -> Result<WHQuadruple> {
    check_inputs(schedule, drift, c, q)?;
    let aug = build_augmented_generator(schedule, drift, q)?;
    classical_factorize(aug.generator(), &aug.lifted_drift(), c)
}

/// [`direct_augmented_quadruple`] re-partitioned into level blocks.
pub fn direct_augmented_factorize(
    schedule: &RegimeSchedule,
    drift: &DriftModel,
    c: f64,
    q: &[f64],
) -> Result<BlockFactorization> {
    let quad = direct_augmented_quadruple(schedule, drift, c, q)?;
    let levels = q.len() + 1;
    let (np, nm) = (drift.plus_states().len(), drift.minus_states().len());
    let mut lambda = Vec::with_capacity(levels * levels);
    let mut g = Vec::with_capacity(levels * levels);
    for k in 0..levels {
        for l in 0..levels {
            lambda.push(quad.lambda_plus.view((k * nm, l * np), (nm, np)).into_owned());
            g.push(quad.g_plus.view((k * np, l * np), (np, np)).into_owned());
        }
    }
    Ok(BlockFactorization {
        levels,
        n_plus: np,
        n_minus: nm,
        plus_states: drift.plus_states().to_vec(),
        minus_states: drift.minus_states().to_vec(),
        lambda,
        g,
        killing: c,
        rates: q.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::GeneratorMatrix;

    fn fluid() -> (RegimeSchedule, DriftModel) {
        let gens = vec![
            GeneratorMatrix::from_rows(&[vec![-2.0, 2.0], vec![1.0, -1.0]]).unwrap(),
            GeneratorMatrix::from_rows(&[vec![-3.0, 3.0], vec![2.0, -2.0]]).unwrap(),
            GeneratorMatrix::from_rows(&[vec![-5.0, 5.0], vec![3.0, -3.0]]).unwrap(),
        ];
        let s = RegimeSchedule::new(vec![2.0, 8.0], gens).unwrap();
        let d = DriftModel::new(["e+", "e-"], &[2.0, -3.0]).unwrap();
        crate::chain::reflect_problem(&s, &d)
    }

    #[test]
    fn no_breakpoints_is_classical() {
        let (s, d) = fluid();
        let single = RegimeSchedule::homogeneous(s.generator(0).clone());
        let bf = block_factorize(&single, &d, 0.5, &[]).unwrap();
        let quad = classical_factorize(single.generator(0), &d, 0.5).unwrap();
        assert_eq!(bf.levels(), 1);
        assert!((bf.lambda_block(0, 0) - &quad.lambda_plus).abs().max() == 0.0);
        assert!((bf.g_block(0, 0) - &quad.g_plus).abs().max() == 0.0);
    }

    #[test]
    fn fluid_residual_and_oracle() {
        let (s, d) = fluid();
        let bf = block_factorize(&s, &d, 0.5, &[1.0, 1.0]).unwrap();
        assert!(bf.augmented_residual(&s, &d).unwrap() <= 1e-8);
        let direct = direct_augmented_factorize(&s, &d, 0.5, &[1.0, 1.0]).unwrap();
        assert!(bf.max_difference(&direct) <= 1e-8);
        assert!(direct.max_lower_block() <= 1e-10);
    }

    #[test]
    fn golden_transform_value() {
        // level sum / (q1 q2), filed from the direct augmented route
        let (s, d) = fluid();
        let bf = block_factorize(&s, &d, 0.5, &[0.5, 0.25]).unwrap();
        let v = bf.level_sum_lambda()[(0, 0)] / (0.5 * 0.25);
        assert!((v - 5.243_489_228_217_506_5).abs() < 1e-10, "{v}");
    }

    #[test]
    fn shifted_killings_end_with_c() {
        let (s, d) = fluid();
        let bf = block_factorize(&s, &d, 0.5, &[1.0, 2.0]).unwrap();
        assert_eq!(bf.shifted_killings(), vec![1.5, 2.5, 0.5]);
    }

    #[test]
    fn rejects_bad_rates() {
        let (s, d) = fluid();
        assert!(block_factorize(&s, &d, 0.5, &[1.0]).is_err());
        assert!(block_factorize(&s, &d, 0.5, &[1.0, 0.0]).is_err());
        assert!(block_factorize(&s, &d, 0.0, &[1.0, 1.0]).is_err());
    }
}
