//! Wiener-Hopf factorization: the classical quadruple of one generator,
//! the level-block factorization of the randomized chain, and the passage
//! functionals recovered from it.

mod block;
mod classical;
mod passage;
mod scalar;
mod schur;

pub use block::{block_factorize, direct_augmented_factorize, direct_augmented_quadruple, BlockFactorization};
pub use classical::{
    classical_factorize, factorization_residual, spectral_split, SpectralSplit, WHQuadruple, AXIS_GAP, CLASS_TOL,
};
pub use passage::{
    evaluate, hat_pi_plus, hat_psi_plus, pi_minus, pi_plus, psi_minus, psi_plus, Diagnostics, FunctionalValue,
    PassageTransform, RANGE_TOL, RESIDUAL_TOL,
};
pub use scalar::scalar_factorize;
