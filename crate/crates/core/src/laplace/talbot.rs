use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::config::DEFAULT_PRECISION;
use super::precise::{fixed_point, from_fixed_point, talbot_nodes_rational, CRational};
use super::transform::LaplaceTransform;
use crate::error::{Error, Result};

/// Contour points `delta_k` and weights `gamma_k`, `k = 0..M`.
///
/// `delta_0 = 2M/5`, `delta_k = (2k pi / 5)(cot(k pi / M) + i)`.
pub fn talbot_nodes(m: usize) -> Vec<(Complex64, Complex64)> {
    let mf = m as f64;
    let mut out = Vec::with_capacity(m);
    let d0 = Complex64::new(2.0 * mf / 5.0, 0.0);
    out.push((d0, 0.5 * d0.exp()));
    for k in 1..m {
        let theta = k as f64 * PI / mf;
        let cot = 1.0 / theta.tan();
        let delta = Complex64::new(2.0 * k as f64 * PI / 5.0 * cot, 2.0 * k as f64 * PI / 5.0);
        let gamma = Complex64::new(1.0, theta * (1.0 + cot * cot) - cot) * delta.exp();
        out.push((delta, gamma));
    }
    out
}

fn check(f: &dyn LaplaceTransform, t: &[f64], m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Inversion("terms must be at least 1".into()));
    }
    if !f.has_complex() && !f.has_complex_exact() {
        return Err(Error::Inversion("Talbot inversion needs a transform defined on complex arguments".into()));
    }
    if t.is_empty() || t.len() != f.arity() {
        return Err(Error::Dimension(format!("transform has arity {}, got {} times", f.arity(), t.len())));
    }
    if let Some(bad) = t.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(Error::Inversion(format!("inversion point must be positive, got {bad}")));
    }
    Ok(())
}

pub fn talbot_invert_1d(f: &dyn LaplaceTransform, t: f64, m: usize) -> Result<f64> {
    talbot_invert_nd(f, &[t], m)
}

pub fn talbot_invert_2d(f: &dyn LaplaceTransform, t1: f64, t2: f64, m: usize) -> Result<f64> {
    talbot_invert_nd(f, &[t1, t2], m)
}

/// Talbot inversion in `n` variables. The first variable takes the real
/// part trick; every further variable sums both the node and its conjugate:
///
/// `(2 / (5 t_1)) prod_{d>1} 1/(5 t_d) Re sum gamma_{k_1} prod_d gamma^(b)_{k_d} f^(delta_{k_1}/t_1, delta^(b)_{k_d}/t_d)`
///
/// which for `n = 2` is the usual double sum with a conjugate-node term.
///
/// The weights grow like `e^{2M/5}` per dimension, so in double precision
/// the attainable accuracy falls as `M` and the dimension grow. Transforms
/// with an exact complex evaluator are summed in rationals instead.
pub fn talbot_invert_nd(f: &dyn LaplaceTransform, t: &[f64], m: usize) -> Result<f64> {
    talbot_with_precision(f, t, m, DEFAULT_PRECISION)
}

pub(crate) fn talbot_with_precision(f: &dyn LaplaceTransform, t: &[f64], m: usize, digits: u32) -> Result<f64> {
    check(f, t, m)?;
    if f.has_complex_exact() {
        return talbot_exact(f, t, m, digits.max(m as u32 + 20));
    }
    let dims = t.len();
    let nodes = talbot_nodes(m);
    // per-dimension choices: dimension 1 has M, the rest 2M (node or conjugate)
    let per: Vec<usize> = (0..dims).map(|d| if d == 0 { m } else { 2 * m }).collect();
    let total: usize = per.iter().product();
    let point = |idx: &[usize]| -> (Vec<Complex64>, Complex64) {
        let mut q = Vec::with_capacity(dims);
        let mut w = Complex64::new(1.0, 0.0);
        for (d, &c) in idx.iter().enumerate() {
            let (k, conj) = (c % m, c >= m);
            let (delta, gamma) = nodes[k];
            let (delta, gamma) = if conj { (delta.conj(), gamma.conj()) } else { (delta, gamma) };
            q.push(delta / t[d]);
            w *= gamma;
        }
        (q, w)
    };
    let terms: Vec<Result<Complex64>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let (q, w) = point(&grid_choice(&per, flat));
            let v = f.eval_complex(&q).map_err(|e| Error::Node {
                node: q.iter().flat_map(|z| [z.re, z.im]).collect(),
                source: Box::new(e),
            })?;
            Ok(w * v)
        })
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for term in terms {
        acc += term?;
    }
    let scale = 2.0 / (5.0 * t[0]) * t[1..].iter().map(|td| 1.0 / (5.0 * td)).product::<f64>();
    let v = scale * acc.re;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Inversion("Talbot sum is not finite".into()))
    }
}

fn grid_choice(per: &[usize], mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0usize; per.len()];
    for d in (0..per.len()).rev() {
        idx[d] = flat % per[d];
        flat /= per[d];
    }
    idx
}

fn talbot_exact(f: &dyn LaplaceTransform, t: &[f64], m: usize, digits: u32) -> Result<f64> {
    let nodes = talbot_nodes_rational(m, digits)?;
    let dims = t.len();
    let t_rat: Vec<BigRational> = t
        .iter()
        .map(|&x| BigRational::from_float(x).ok_or_else(|| Error::Inversion(format!("bad time {x}"))))
        .collect::<Result<_>>()?;
    let per: Vec<usize> = (0..dims).map(|d| if d == 0 { m } else { 2 * m }).collect();
    let total: usize = per.iter().product();
    let scale = digits + 30;
    let terms: Vec<Result<BigInt>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let idx = grid_choice(&per, flat);
            let mut q: Vec<CRational> = Vec::with_capacity(dims);
            let mut w = CRational::new(BigRational::from_integer(1.into()), BigRational::zero());
            for (d, &c) in idx.iter().enumerate() {
                let (k, conj) = (c % m, c >= m);
                let (delta, gamma) = &nodes[k];
                let (delta, gamma) = if conj { (delta.conj(), gamma.conj()) } else { (delta.clone(), gamma.clone()) };
                q.push(CRational::new(&delta.re / &t_rat[d], &delta.im / &t_rat[d]));
                w *= gamma;
            }
            let v = f.eval_complex_exact(&q).map_err(|e| Error::Node {
                node: q.iter().flat_map(|z| [z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN)]).collect(),
                source: Box::new(e),
            })?;
            Ok(fixed_point(&(w * v).re, scale))
        })
        .collect();
    let mut acc = BigInt::zero();
    for term in terms {
        acc += term?;
    }
    let mut pre = BigRational::new(2.into(), 5.into()) / &t_rat[0];
    for td in &t_rat[1..] {
        pre /= BigRational::from_integer(5.into()) * td ;
    }
    (from_fixed_point(acc, scale) * pre)
        .to_f64()
        .ok_or_else(|| Error::Inversion("Talbot sum is not representable".into()))
}
