//! Model types for the time-inhomogeneous chain and its randomized,
//! time-homogeneous augmentation.

mod augmented;
mod drift;
mod expm;
mod generator;
mod schedule;
mod transition;

pub(crate) use augmented::check_rates;
pub use augmented::{build_augmented_generator, marginal_counter_generator, AugmentedModel};
pub use drift::DriftModel;
pub use expm::{matrix_exp, matrix_exp_generic};
pub use generator::{validate_generator, GeneratorMatrix, ValidationReport, Violation, GENERATOR_TOL};
pub use schedule::{reflect_problem, RegimeSchedule};
pub use transition::{transition_matrix, TransitionMatrix, TRANSITION_TOL};
