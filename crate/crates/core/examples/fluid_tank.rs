//! Discounted downcrossing probability for a two-state fluid tank whose
//! generator changes at t = 2 and t = 8, by factorization and by simulation.

use fluctuation::chain::{DriftModel, GeneratorMatrix, RegimeSchedule};
use fluctuation::laplace::{InversionConfig, InversionMethod};
use fluctuation::mc::{estimate_functional, SimConfig};
use fluctuation::wh::pi_minus;
use fluctuation::FunctionalSpec;

fn main() -> fluctuation::Result<()> {
    let schedule = RegimeSchedule::new(
        vec![2.0, 8.0],
        vec![
            GeneratorMatrix::from_rows(&[vec![-2.0, 2.0], vec![1.0, -1.0]])?,
            GeneratorMatrix::from_rows(&[vec![-3.0, 3.0], vec![2.0, -2.0]])?,
            GeneratorMatrix::from_rows(&[vec![-5.0, 5.0], vec![3.0, -3.0]])?,
        ],
    )?;
    let drift = DriftModel::new(["e+", "e-"], &[2.0, -3.0])?;
    let c = 0.5;

    for method in [InversionMethod::GaverStehfest, InversionMethod::Talbot] {
        let inv = InversionConfig::for_numerical_evaluator(method, schedule.n_breakpoints());
        let v = pi_minus(&schedule, &drift, c, 0, 1, &inv)?;
        println!(
            "{method} M={}: Pi-(e+, e-) = {:.8} ({} nodes, residual {:.1e})",
            inv.terms, v.value, v.diagnostics.nodes, v.diagnostics.residual
        );
    }

    let spec = FunctionalSpec::pi_minus(0, 1);
    let mc = estimate_functional(&schedule, &drift, c, &spec, &SimConfig::for_discount(100_000, c, 7))?;
    println!("Monte Carlo: {:.5} +- {:.5} (1 SE)", mc.mean, mc.std_error);
    Ok(())
}
