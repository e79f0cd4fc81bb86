use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::config::{InversionConfig, InversionMethod};
use super::precise::{fixed_point, from_fixed_point};
use super::transform::LaplaceTransform;
use super::weights::{gs_weights, ln2_rational, stehfest_weights};
use crate::error::{Error, Result};

/// Node multipliers `m` (node = `m ln2 / t`) and their weights.
fn rule(cfg: &InversionConfig) -> Result<(Vec<u64>, Vec<BigRational>)> {
    let m = cfg.terms as u64;
    match cfg.method {
        InversionMethod::Gaver => Ok(((m..=2 * m).collect(), gs_weights(cfg.terms, cfg.precision))),
        InversionMethod::GaverStehfest => Ok(((1..=2 * m).collect(), stehfest_weights(cfg.terms, cfg.precision))),
        InversionMethod::Talbot => Err(Error::Inversion("Talbot is not a real-node method".into())),
    }
}

fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Inversion(format!("non-finite value {x}")))
}

struct Axis {
    nodes: Vec<f64>,
    exact_nodes: Vec<BigRational>,
    weights: Vec<BigRational>,
}

fn axis(t: f64, mults: &[u64], weights: &[BigRational], ln2: &BigRational) -> Result<Axis> {
    let scale = ln2 / rational(t)?;
    let exact_nodes: Vec<BigRational> = mults.iter().map(|&m| &scale * BigRational::from_integer(m.into())).collect();
    let nodes = exact_nodes.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    let weights = weights.iter().map(|w| w * &scale).collect();
    Ok(Axis { nodes, exact_nodes, weights })
}

/// One-dimensional Gaver or Gaver-Stehfest inversion at `t`.
pub fn gs_invert_1d(f: &dyn LaplaceTransform, t: f64, cfg: &InversionConfig) -> Result<f64> {
    if f.arity() != 1 {
        return Err(Error::Dimension(format!("expected a transform of arity 1, got {}", f.arity())));
    }
    gs_invert_nd(f, &[t], cfg)
}

/// The one-dimensional rule applied in each variable, dimension 1
/// outermost. Nodes are evaluated in parallel; the weighted sum is
/// accumulated in fixed point far below the weight precision, in grid
/// order, so the result does not depend on scheduling.
pub fn gs_invert_nd(f: &dyn LaplaceTransform, t: &[f64], cfg: &InversionConfig) -> Result<f64> {
    cfg.validate()?;
    let dims = t.len();
    if dims == 0 || dims != f.arity() {
        return Err(Error::Dimension(format!("transform has arity {}, got {} times", f.arity(), dims)));
    }
    if let Some(bad) = t.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(Error::Inversion(format!("inversion point must be positive, got {bad}")));
    }
    let (mults, weights) = rule(cfg)?;
    let ln2 = ln2_rational(cfg.precision);
    let axes: Vec<Axis> = t.iter().map(|&ti| axis(ti, &mults, &weights, &ln2)).collect::<Result<_>>()?;
    let per = mults.len();
    let total = per.pow(dims as u32);
    let digits = |mut flat: usize| {
        let mut idx = vec![0usize; dims];
        for d in (0..dims).rev() {
            idx[d] = flat % per;
            flat /= per;
        }
        idx
    };
    let exact = f.has_exact();
    let values: Vec<Result<BigRational>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let idx = digits(flat);
            let node: Vec<f64> = idx.iter().enumerate().map(|(d, &k)| axes[d].nodes[k]).collect();
            let wrap = |e: Error| Error::Node { node: node.clone(), source: Box::new(e) };
            if exact {
                let q: Vec<BigRational> = idx.iter().enumerate().map(|(d, &k)| axes[d].exact_nodes[k].clone()).collect();
                f.eval_exact(&q).map_err(wrap)
            } else {
                let v = f.eval(&node).map_err(wrap)?;
                rational(v).map_err(wrap)
            }
        })
        .collect();
    // each term is rounded far below the weight precision, which keeps
    // denominators from piling up across the grid
    let scale = cfg.precision + 30;
    let mut acc = BigInt::zero();
    for (flat, v) in values.into_iter().enumerate() {
        let v = v?;
        if v.is_zero() {
            continue;
        }
        let w = digits(flat)
            .iter()
            .enumerate()
            .fold(v, |prod, (d, &k)| prod * &axes[d].weights[k]);
        acc += fixed_point(&w, scale);
    }
    from_fixed_point(acc, scale)
        .to_f64()
        .ok_or_else(|| Error::Inversion("inversion sum is not representable".into()))
}
