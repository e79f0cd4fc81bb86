//! One plus state and one minus state: the factorization reduces to a
//! quadratic per level and the off-diagonal steps to scalar divisions.

use nalgebra::{Complex, DMatrix};

use crate::chain::{DriftModel, GeneratorMatrix, RegimeSchedule};
use crate::error::{Error, Result};
use crate::wh::classical::WHQuadruple;

type C = Complex<f64>;

const ROOT_TOL: f64 = 1e-12;

/// Entries of a 2x2 generator in sign-major order plus the two drifts.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScalarRegime {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    vp: f64,
    vm: f64,
}

impl ScalarRegime {
    pub(crate) fn new(g: &GeneratorMatrix, drift: &DriftModel) -> Result<Self> {
        if drift.plus_states().len() != 1 || drift.minus_states().len() != 1 || g.dim() != 2 {
            return Err(Error::Dimension(
                "scalar factorization needs exactly one plus state and one minus state".into(),
            ));
        }
        let p = drift.plus_states()[0];
        let m = drift.minus_states()[0];
        let gm = g.matrix();
        Ok(ScalarRegime {
            a: gm[(p, p)],
            b: gm[(p, m)],
            c: gm[(m, p)],
            d: gm[(m, m)],
            vp: drift.rate(p),
            vm: drift.rate(m),
        })
    }
}

/// Real roots of `a x^2 + b x + c` (or of `b x + c` when `a == 0`).
fn real_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { Vec::new() } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / a, c / q]
}

fn unit_root(a: f64, b: f64, c: f64, what: &str) -> Result<f64> {
    let inside: Vec<f64> = real_roots(a, b, c)
        .into_iter()
        .filter(|r| (-ROOT_TOL..=1.0 + ROOT_TOL).contains(r))
        .collect();
    match inside.as_slice() {
        [r] => Ok(*r),
        [] => Err(Error::NoRoot(format!("{what}: no root of the quadratic lies in [0, 1]"))),
        _ => Err(Error::NoRoot(format!(
            "{what}: both roots {:?} lie in [0, 1]; refusing to guess",
            inside
        ))),
    }
}

/// Closed-form factorization when `|E+| = |E-| = 1`: `Lambda+` and
/// `Lambda-` are the roots in `[0, 1]` of their quadratics.
pub fn scalar_factorize(g: &GeneratorMatrix, drift: &DriftModel, c: f64) -> Result<WHQuadruple> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::NonPositiveKilling(c));
    }
    let r = ScalarRegime::new(g, drift)?;
    let m11 = (r.a - c) / r.vp;
    let m12 = r.b / r.vp;
    let m21 = r.c / r.vm;
    let m22 = (r.d - c) / r.vm;
    let lp = unit_root(m12, m11 - m22, -m21, "Lambda+")?;
    let lm = unit_root(m21, m22 - m11, -m12, "Lambda-")?;
    let one = |x: f64| DMatrix::from_element(1, 1, x);
    Ok(WHQuadruple {
        lambda_plus: one(lp),
        lambda_minus: one(lm),
        g_plus: one(m11 + m12 * lp),
        g_minus: one(-(m21 * lm + m22)),
        killing: c,
    })
}

/// Plus factors `(Lambda+, G+)` continued analytically to complex killing.
///
/// The discriminant is `b1^2 (k - r1)(k - r2)` with real `r1, r2 <= 0`;
/// taking `b1 sqrt(k - r1) sqrt(k - r2)` puts the branch cut on the segment
/// between them, so the function is analytic wherever a Talbot contour runs.
/// On the positive real axis this is the root in `[0, 1]`.
pub(crate) fn plus_factors_complex(r: &ScalarRegime, kill: C) -> (C, C) {
    let m11 = (C::from(r.a) - kill) / r.vp;
    let m12 = r.b / r.vp;
    let m21 = r.c / r.vm;
    let b0 = r.a / r.vp - r.d / r.vm;
    let b1 = -1.0 / r.vp + 1.0 / r.vm;
    let b = C::from(b0) + kill * b1;
    let cc = -m21;
    let k_prime = -4.0 * m12 * m21;
    let r1 = (-b0 + k_prime.sqrt()) / b1;
    let r2 = (-b0 - k_prime.sqrt()) / b1;
    let sd = (kill - r1).sqrt() * (kill - r2).sqrt() * b1;
    let plus = -b + sd;
    let minus = -b - sd;
    let lambda = if m12 != 0.0 && plus.norm() >= minus.norm() {
        plus / (2.0 * m12)
    } else {
        C::from(2.0 * cc) / minus
    };
    (lambda, m11 + lambda * m12)
}

/// Scaled residual of the quadratic that `plus_factors_complex` solves.
fn quadratic_residual(r: &ScalarRegime, kill: C, lambda: C) -> f64 {
    let m12 = r.b / r.vp;
    let m21 = r.c / r.vm;
    let b = C::from(r.a / r.vp - r.d / r.vm) + kill * (-1.0 / r.vp + 1.0 / r.vm);
    let value = lambda * lambda * m12 + b * lambda - m21;
    let scale = 1.0 + m12.abs() * lambda.norm_sqr() + b.norm() * lambda.norm() + m21.abs();
    value.norm() / scale
}

/// Complex level blocks of the plus factorization of the randomized chain,
/// used where the transform is needed off the real axis.
pub(crate) struct ScalarBlocks {
    pub levels: usize,
    pub lambda: Vec<C>,
    pub g: Vec<C>,
    /// Worst scaled residual over the diagonal quadratics and the
    /// off-diagonal linear solves.
    pub residual: f64,
}

impl ScalarBlocks {
    pub fn at(&self, k: usize, l: usize) -> (C, C) {
        (self.lambda[k * self.levels + l], self.g[k * self.levels + l])
    }
}

pub(crate) fn scalar_blocks_complex(
    schedule: &RegimeSchedule,
    drift: &DriftModel,
    c: f64,
    q: &[C],
) -> Result<ScalarBlocks> {
    let n = schedule.n_breakpoints();
    if q.len() != n {
        return Err(Error::Dimension(format!("{n} breakpoints but {} transform variables", q.len())));
    }
    let regimes: Vec<ScalarRegime> = schedule
        .generators()
        .iter()
        .map(|g| ScalarRegime::new(g, drift))
        .collect::<Result<_>>()?;
    let levels = n + 1;
    let qk = |k: usize| if k < n { q[k] } else { C::from(0.0) };
    let mut lambda = vec![C::from(0.0); levels * levels];
    let mut g = vec![C::from(0.0); levels * levels];
    let idx = |k: usize, l: usize| k * levels + l;
    let mut residual: f64 = 0.0;
    for (k, r) in regimes.iter().enumerate() {
        let (lam, gp) = plus_factors_complex(r, qk(k) + c);
        residual = residual.max(quadratic_residual(r, qk(k) + c, lam));
        lambda[idx(k, k)] = lam;
        g[idx(k, k)] = gp;
    }
    for span in 1..levels {
        for k in 0..levels - span {
            let reg = &regimes[k];
            let ck = qk(k) + c;
            let d = if span == 1 { qk(k) } else { C::from(0.0) };
            let lam_kk = lambda[idx(k, k)];
            let left = (C::from(reg.d) - ck) / reg.vm - lam_kk * (reg.b / reg.vp);
            let right = g[idx(k + span, k + span)];
            let mut rhs = lam_kk * d / reg.vp - qk(k) * lambda[idx(k + 1, k + span)] / reg.vm;
            for j in 1..span {
                rhs += lambda[idx(k, k + j)] * g[idx(k + j, k + span)];
            }
            let denom = left - right;
            if denom.norm() == 0.0 || !denom.is_finite() {
                return Err(Error::SingularBlock { row: k, col: k + span });
            }
            let x = rhs / denom;
            let scale = 1.0 + left.norm() * x.norm() + x.norm() * right.norm() + rhs.norm();
            residual = residual.max((left * x - x * right - rhs).norm() / scale);
            lambda[idx(k, k + span)] = x;
            g[idx(k, k + span)] = (d + x * reg.b) / reg.vp;
        }
    }
    Ok(ScalarBlocks { levels, lambda, g, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wh::classical::classical_factorize;

    fn fluid_g0() -> (GeneratorMatrix, DriftModel) {
        (
            GeneratorMatrix::from_rows(&[vec![-2.0, 2.0], vec![1.0, -1.0]]).unwrap(),
            DriftModel::new(["e+", "e-"], &[2.0, -3.0]).unwrap(),
        )
    }

    #[test]
    fn matches_quadratic_oracle() {
        // roots computed independently at 30 digits
        let (g, d) = fluid_g0();
        let quad = scalar_factorize(&g, &d, 0.5).unwrap();
        assert!((quad.lambda_plus[(0, 0)] - 0.217_511_090_080_854_17).abs() < 1e-14);
        assert!((quad.lambda_minus[(0, 0)] - 0.652_533_270_242_562_5).abs() < 1e-14);
        assert!((quad.g_plus[(0, 0)] + 1.032_488_909_919_145_9).abs() < 1e-14);
        assert!((quad.g_minus[(0, 0)] + 0.282_488_909_919_145_8).abs() < 1e-14);
    }

    #[test]
    fn agrees_with_schur_route() {
        let (g, d) = fluid_g0();
        let a = scalar_factorize(&g, &d, 0.5).unwrap();
        let b = classical_factorize(&g, &d, 0.5).unwrap();
        for (x, y) in [
            (&a.lambda_plus, &b.lambda_plus),
            (&a.lambda_minus, &b.lambda_minus),
            (&a.g_plus, &b.g_plus),
            (&a.g_minus, &b.g_minus),
        ] {
            assert!((x - y).abs().max() < 1e-12);
        }
    }

    #[test]
    fn zero_generator_closed_form() {
        let d = DriftModel::new(["p", "m"], &[2.0, -3.0]).unwrap();
        let quad = scalar_factorize(&GeneratorMatrix::zeros(2), &d, 0.6).unwrap();
        assert_eq!(quad.lambda_plus[(0, 0)], 0.0);
        assert_eq!(quad.lambda_minus[(0, 0)], 0.0);
        assert!((quad.g_plus[(0, 0)] + 0.3).abs() < 1e-15);
        assert!((quad.g_minus[(0, 0)] + 0.2).abs() < 1e-15);
    }

    #[test]
    fn heavy_discounting_kills_crossings() {
        let (g, d) = fluid_g0();
        let quad = scalar_factorize(&g, &d, 1e3).unwrap();
        assert!(quad.lambda_plus[(0, 0)] <= 1e-2);
        assert!(quad.lambda_minus[(0, 0)] <= 1e-2);
    }

    #[test]
    fn complex_continuation_matches_real_axis() {
        let (g, d) = fluid_g0();
        let r = ScalarRegime::new(&g, &d).unwrap();
        for c in [0.1, 0.5, 3.0, 40.0] {
            let quad = scalar_factorize(&g, &d, c).unwrap();
            let (lam, gp) = plus_factors_complex(&r, C::from(c));
            assert!((lam - quad.lambda_plus[(0, 0)]).norm() < 1e-13, "c = {c}");
            assert!((gp - quad.g_plus[(0, 0)]).norm() < 1e-12);
        }
    }

    #[test]
    fn complex_roots_solve_their_quadratic() {
        let (g, d) = fluid_g0();
        let r = ScalarRegime::new(&g, &d).unwrap();
        for kill in [C::new(0.5, 3.0), C::new(-0.2, 40.0), C::new(12.0, -7.5), C::new(1e3, 1e3)] {
            let (lam, _) = plus_factors_complex(&r, kill);
            assert!(quadratic_residual(&r, kill, lam) < 1e-14, "k = {kill}");
        }
    }

    #[test]
    fn rejects_matrix_sized_input() {
        let d = DriftModel::from_rates(&[1.0, 1.0, -1.0]).unwrap();
        assert!(scalar_factorize(&GeneratorMatrix::zeros(3), &d, 1.0).is_err());
    }
}
