//! First passage above a positive level, and below its mirror image.

use fluctuation::chain::{DriftModel, GeneratorMatrix, RegimeSchedule};
use fluctuation::laplace::{InversionConfig, InversionMethod};
use fluctuation::mc::{estimate_functional, SimConfig};
use fluctuation::wh::{psi_minus, psi_plus};
use fluctuation::FunctionalSpec;

fn main() -> fluctuation::Result<()> {
    let schedule = RegimeSchedule::new(
        vec![1.5],
        vec![
            GeneratorMatrix::from_rows(&[vec![-1.0, 1.0], vec![2.0, -2.0]])?,
            GeneratorMatrix::from_rows(&[vec![-4.0, 4.0], vec![0.5, -0.5]])?,
        ],
    )?;
    let drift = DriftModel::new(["fill", "drain"], &[1.0, -1.5])?;
    let (c, level) = (0.3, 0.8);
    let inv = InversionConfig::for_numerical_evaluator(InversionMethod::Talbot, 1);

    let up = psi_plus(&schedule, &drift, c, level, 0, 0, &inv)?;
    let down = psi_minus(&schedule, &drift, c, level, 1, 1, &inv)?;
    let cfg = SimConfig::for_discount(100_000, c, 3);
    let mc_up = estimate_functional(&schedule, &drift, c, &FunctionalSpec::psi_plus(level, 0, 0), &cfg)?;
    let mc_down = estimate_functional(&schedule, &drift, c, &FunctionalSpec::psi_minus(level, 1, 1), &cfg)?;
    println!("Psi+({level}; fill -> fill)   = {:.6}   MC {:.5} +- {:.5}", up.value, mc_up.mean, mc_up.std_error);
    println!("Psi-({level}; drain -> drain) = {:.6}   MC {:.5} +- {:.5}", down.value, mc_down.mean, mc_down.std_error);
    Ok(())
}
