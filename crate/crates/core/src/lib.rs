//! Discounted first-passage functionals of finite-state Markov chains whose
//! generator is piecewise constant in time.
//!
//! The regime switch times are randomized with independent exponential
//! clocks, which turns the chain into a time-homogeneous chain on
//! `levels x states`. Its Wiener-Hopf factorization is computed block by
//! block, and the passage functionals are recovered by numerically inverting
//! the resulting multivariate Laplace transform in the clock rates.
//!
//! * [`chain`]: generators, drift, regime schedules, the augmented chain,
//!   matrix exponentials and transition kernels.
//! * [`wh`]: classical and block-recursive Wiener-Hopf factorization and the
//!   passage functionals built on them.
//! * [`laplace`]: Gaver-Stehfest and Talbot inversion.
//! * [`mc`]: Monte Carlo simulation used as an independent check.
//! * [`cli`]: config parsing and the batch command runner.

// NaN must fail validation, hence the negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod cli;
pub mod error;
pub mod functional;
pub mod laplace;
pub mod mc;
pub mod wh;

pub use error::{Error, Result};
pub use functional::{FunctionalKind, FunctionalSpec};
