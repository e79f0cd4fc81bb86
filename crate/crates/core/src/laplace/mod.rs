//! Numerical inverse Laplace transforms in one or more variables.
//!
//! Three methods are available. [`InversionMethod::Gaver`] is the plain
//! Gaver functional, [`InversionMethod::GaverStehfest`] its Salzer-accelerated
//! form (the usual Stehfest weights), and [`InversionMethod::Talbot`] the
//! fixed Talbot contour. The first two only ever evaluate the transform at
//! positive real nodes; Talbot needs complex arguments.

mod config;
mod gaver;
mod precise;
mod talbot;
mod transform;
mod weights;

pub use config::{InversionConfig, InversionMethod, DEFAULT_PRECISION};
pub use gaver::{gs_invert_1d, gs_invert_nd};
pub use talbot::{talbot_invert_1d, talbot_invert_2d, talbot_invert_nd, talbot_nodes};
pub use transform::{ClosedForm, LaplaceTransform};
pub use weights::{gs_weights, ln2_rational, round_sig, stehfest_weights};

use crate::error::{Error, Result};

/// Invert `f` at `t` (one coordinate per transform variable).
pub fn invert(f: &dyn LaplaceTransform, t: &[f64], cfg: &InversionConfig) -> Result<f64> {
    cfg.validate()?;
    if t.len() != f.arity() {
        return Err(Error::Dimension(format!("transform has arity {}, got {} times", f.arity(), t.len())));
    }
    if let Some(bad) = t.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(Error::Inversion(format!("inversion point must be positive, got {bad}")));
    }
    match cfg.method {
        InversionMethod::Gaver | InversionMethod::GaverStehfest => gs_invert_nd(f, t, cfg),
        InversionMethod::Talbot => talbot::talbot_with_precision(f, t, cfg.terms, cfg.precision),
    }
}
