//! Passage functionals from the block factorization: the transforms in
//! the randomization rates, and their inversion at the regime lengths.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use nalgebra::{Complex, DMatrix};

use crate::chain::{matrix_exp, matrix_exp_generic, reflect_problem, DriftModel, RegimeSchedule};
use crate::error::{Error, Result};
use crate::functional::{FunctionalKind, FunctionalSpec};
use crate::laplace::{invert, InversionConfig, InversionMethod, LaplaceTransform};
use crate::wh::block::{block_factorize, BlockFactorization};
use crate::wh::scalar::scalar_blocks_complex;

type C = Complex<f64>;

/// Values further than this outside `[0, 1]` are flagged in the diagnostics.
pub const RANGE_TOL: f64 = 2e-3;

/// Gate on the augmented plus residual at every transform node.
pub const RESIDUAL_TOL: f64 = 1e-8;

fn position(states: &[usize], s: usize, side: &str) -> Result<usize> {
    states
        .iter()
        .position(|&x| x == s)
        .ok_or_else(|| Error::InvalidState(format!("state {s} is not in E{side}")))
}

/// `q_1^{-1} ... q_n^{-1} Sum_l Lambda~_{0,l}(i, j)`: the transform of
/// `Pi+(i, j)` in the regime lengths, at the rates stored in `block`.
pub fn hat_pi_plus(block: &BlockFactorization, i: usize, j: usize) -> Result<f64> {
    let r = position(block.minus_states(), i, "-")?;
    let c = position(block.plus_states(), j, "+")?;
    let prod: f64 = block.rates().iter().product();
    Ok(block.level_sum_lambda()[(r, c)] / prod)
}

/// `q_1^{-1} ... q_n^{-1} Sum_l exp(t G~+)((0, i), (l, j))`.
pub fn hat_psi_plus(block: &BlockFactorization, t: f64, i: usize, j: usize) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidState(format!("level must be positive, got {t}")));
    }
    let r = position(block.plus_states(), i, "+")?;
    let c = position(block.plus_states(), j, "+")?;
    let e = matrix_exp(&block.assemble_g_plus(), t);
    let p = block.n_plus();
    let sum: f64 = (0..block.levels()).map(|l| e[(r, l * p + c)]).sum();
    let prod: f64 = block.rates().iter().product();
    Ok(sum / prod)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Target {
    Pi,
    Psi(f64),
}

/// The plus transform as a function of `(q_1, ..., q_n)`.
///
/// Each real evaluation runs [`block_factorize`] and checks the augmented
/// residual; results are memoized per node. With one plus and one minus
/// state the transform also continues to complex rates.
pub struct PassageTransform<'a> {
    schedule: &'a RegimeSchedule,
    drift: &'a DriftModel,
    c: f64,
    target: Target,
    from: usize,
    to: usize,
    cache: Mutex<HashMap<Vec<u64>, f64>>,
    worst_residual: Mutex<f64>,
    complex_calls: AtomicUsize,
}

impl<'a> PassageTransform<'a> {
    pub fn pi_plus(schedule: &'a RegimeSchedule, drift: &'a DriftModel, c: f64, i: usize, j: usize) -> Result<Self> {
        FunctionalSpec::pi_plus(i, j).validate(drift)?;
        Self::build(schedule, drift, c, Target::Pi, i, j)
    }

    pub fn psi_plus(
        schedule: &'a RegimeSchedule,
        drift: &'a DriftModel,
        c: f64,
        t: f64,
        i: usize,
        j: usize,
    ) -> Result<Self> {
        FunctionalSpec::psi_plus(t, i, j).validate(drift)?;
        Self::build(schedule, drift, c, Target::Psi(t), i, j)
    }

    fn build(schedule: &'a RegimeSchedule, drift: &'a DriftModel, c: f64, target: Target, from: usize, to: usize) -> Result<Self> {
        schedule.check_drift(drift)?;
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::NonPositiveKilling(c));
        }
        Ok(PassageTransform {
            schedule,
            drift,
            c,
            target,
            from,
            to,
            cache: Mutex::new(HashMap::new()),
            worst_residual: Mutex::new(0.0),
            complex_calls: AtomicUsize::new(0),
        })
    }

    /// Largest augmented residual over all nodes evaluated so far.
    pub fn max_residual(&self) -> f64 {
        *self.worst_residual.lock().unwrap()
    }

    /// Number of nodes factorized so far: distinct real ones plus every
    /// complex call.
    pub fn evaluations(&self) -> usize {
        self.cache.lock().unwrap().len() + self.complex_calls.load(Ordering::Relaxed)
    }

    pub fn is_scalar(&self) -> bool {
        self.drift.plus_states().len() == 1 && self.drift.minus_states().len() == 1
    }

    fn compute(&self, q: &[f64]) -> Result<f64> {
        let block = block_factorize(self.schedule, self.drift, self.c, q)?;
        let residual = block.augmented_residual(self.schedule, self.drift)?;
        {
            let mut worst = self.worst_residual.lock().unwrap();
            *worst = worst.max(residual);
        }
        if !(residual <= RESIDUAL_TOL) {
            return Err(Error::Residual { value: residual, tol: RESIDUAL_TOL });
        }
        match self.target {
            Target::Pi => hat_pi_plus(&block, self.from, self.to),
            Target::Psi(t) => hat_psi_plus(&block, t, self.from, self.to),
        }
    }
}

impl LaplaceTransform for PassageTransform<'_> {
    fn arity(&self) -> usize {
        self.schedule.n_breakpoints()
    }

    fn eval(&self, q: &[f64]) -> Result<f64> {
        let key: Vec<u64> = q.iter().map(|x| x.to_bits()).collect();
        if let Some(v) = self.cache.lock().unwrap().get(&key) {
            return Ok(*v);
        }
        let v = self.compute(q)?;
        self.cache.lock().unwrap().insert(key, v);
        Ok(v)
    }

    fn has_complex(&self) -> bool {
        self.is_scalar()
    }

    fn eval_complex(&self, q: &[C]) -> Result<C> {
        if !self.is_scalar() {
            return Err(Error::Inversion(
                "complex rates are only supported with one plus and one minus state".into(),
            ));
        }
        self.complex_calls.fetch_add(1, Ordering::Relaxed);
        let blocks = scalar_blocks_complex(self.schedule, self.drift, self.c, q)?;
        {
            let mut worst = self.worst_residual.lock().unwrap();
            *worst = worst.max(blocks.residual);
        }
        if !(blocks.residual <= RESIDUAL_TOL) {
            return Err(Error::Residual { value: blocks.residual, tol: RESIDUAL_TOL });
        }
        let prod: C = q.iter().product();
        let levels = blocks.levels;
        let sum = match self.target {
            Target::Pi => (0..levels).map(|l| blocks.at(0, l).0).sum::<C>(),
            Target::Psi(t) => {
                let g = DMatrix::from_fn(levels, levels, |k, l| blocks.at(k, l).1 * t);
                let e = matrix_exp_generic(&g);
                (0..levels).map(|l| e[(0, l)]).sum::<C>()
            }
        };
        Ok(sum / prod)
    }
}

/// How a [`FunctionalValue`] was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub method: InversionMethod,
    pub terms: usize,
    pub precision: u32,
    /// False when there are no breakpoints and the value is read directly
    /// from the classical factorization.
    pub inverted: bool,
    /// Largest factorization residual over the nodes used.
    pub residual: f64,
    pub nodes: usize,
    /// Set when the value lies outside `[0, 1]` by more than [`RANGE_TOL`].
    pub out_of_range: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalValue {
    pub kind: FunctionalKind,
    pub from: usize,
    pub to: usize,
    pub level: Option<f64>,
    pub value: f64,
    pub diagnostics: Diagnostics,
}

fn run(
    transform: PassageTransform<'_>,
    schedule: &RegimeSchedule,
    spec: FunctionalSpec,
    inv: &InversionConfig,
) -> Result<FunctionalValue> {
    inv.validate()?;
    let n = schedule.n_breakpoints();
    let value = if n == 0 {
        transform.eval(&[])?
    } else {
        if inv.method.needs_complex() && !transform.has_complex() {
            return Err(Error::Inversion(
                "Talbot inversion needs one plus and one minus state; use a Gaver method".into(),
            ));
        }
        invert(&transform, &schedule.increments(), inv)?
    };
    Ok(FunctionalValue {
        kind: spec.kind,
        from: spec.from,
        to: spec.to,
        level: spec.level,
        value,
        diagnostics: Diagnostics {
            method: inv.method,
            terms: inv.terms,
            precision: inv.precision,
            inverted: n > 0,
            residual: transform.max_residual(),
            nodes: transform.evaluations(),
            out_of_range: !(-RANGE_TOL..=1.0 + RANGE_TOL).contains(&value),
        },
    })
}

/// `Pi+(i, j)`: discounted upcrossing of level 0 from `i` in E-, landing in
/// `j` in E+, for the chain started at time 0.
pub fn pi_plus(
    schedule: &RegimeSchedule,
    drift: &DriftModel,
    c: f64,
    i: usize,
    j: usize,
    inv: &InversionConfig,
) -> Result<FunctionalValue> {
    let t = PassageTransform::pi_plus(schedule, drift, c, i, j)?;
    run(t, schedule, FunctionalSpec::pi_plus(i, j), inv)
}

/// `Psi+(t, i, j)`: discounted first passage above level `t > 0` from `i`
/// in E+, landing in `j` in E+.
pub fn psi_plus(
    schedule: &RegimeSchedule,
    drift: &DriftModel,
    c: f64,
    t: f64,
    i: usize,
    j: usize,
    inv: &InversionConfig,
) -> Result<FunctionalValue> {
    let tr = PassageTransform::psi_plus(schedule, drift, c, t, i, j)?;
    run(tr, schedule, FunctionalSpec::psi_plus(t, i, j), inv)
}

/// `Pi-(i, j)` via the reflected problem.
pub fn pi_minus(
    schedule: &RegimeSchedule,
    drift: &DriftModel,
    c: f64,
    i: usize,
    j: usize,
    inv: &InversionConfig,
) -> Result<FunctionalValue> {
    FunctionalSpec::pi_minus(i, j).validate(drift)?;
    let (rs, rd) = reflect_problem(schedule, drift);
    let mut v = pi_plus(&rs, &rd, c, i, j, inv)?;
    v.kind = FunctionalKind::PiMinus;
    Ok(v)
}

/// `Psi-(t, i, j)` via the reflected problem.
pub fn psi_minus(
    schedule: &RegimeSchedule,
    drift: &DriftModel,
    c: f64,
    t: f64,
    i: usize,
    j: usize,
    inv: &InversionConfig,
) -> Result<FunctionalValue> {
    FunctionalSpec::psi_minus(t, i, j).validate(drift)?;
    let (rs, rd) = reflect_problem(schedule, drift);
    let mut v = psi_plus(&rs, &rd, c, t, i, j, inv)?;
    v.kind = FunctionalKind::PsiMinus;
    Ok(v)
}

/// Dispatch on a [`FunctionalSpec`].
pub fn evaluate(
    schedule: &RegimeSchedule,
    drift: &DriftModel,
    c: f64,
    spec: &FunctionalSpec,
    inv: &InversionConfig,
) -> Result<FunctionalValue> {
    spec.validate(drift)?;
    let level = spec.crossing_level();
    match spec.kind {
        FunctionalKind::PiPlus => pi_plus(schedule, drift, c, spec.from, spec.to, inv),
        FunctionalKind::PiMinus => pi_minus(schedule, drift, c, spec.from, spec.to, inv),
        FunctionalKind::PsiPlus => psi_plus(schedule, drift, c, level, spec.from, spec.to, inv),
        FunctionalKind::PsiMinus => psi_minus(schedule, drift, c, level, spec.from, spec.to, inv),
    }
}
