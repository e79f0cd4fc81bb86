//! Validate generators, build a piecewise-constant schedule and look at
//! transition kernels that straddle the switch times.

use fluctuation::chain::{transition_matrix, validate_generator, GeneratorMatrix, RegimeSchedule, GENERATOR_TOL};
use nalgebra::DMatrix;

fn main() -> fluctuation::Result<()> {
    // A row that does not sum to zero is reported, not silently fixed.
    let bad = DMatrix::from_row_slice(2, 2, &[-1.0, 0.5, 1.0, -1.0]);
    println!("bad generator: {}", validate_generator(&bad, GENERATOR_TOL));

    let schedule = RegimeSchedule::new(
        vec![2.0, 8.0],
        vec![
            GeneratorMatrix::from_rows(&[vec![-2.0, 2.0], vec![1.0, -1.0]])?,
            GeneratorMatrix::from_rows(&[vec![-3.0, 3.0], vec![2.0, -2.0]])?,
            GeneratorMatrix::from_rows(&[vec![-5.0, 5.0], vec![3.0, -3.0]])?,
        ],
    )?;
    for t in [1.0, 2.0, 5.0, 10.0] {
        println!("regime at t = {t}: {}", schedule.regime_at(t));
    }

    let p = transition_matrix(&schedule, 1.0, 9.0)?;
    println!("P(1, 9) = {:.6}", p.matrix());

    // Chapman-Kolmogorov across both breakpoints.
    let split = transition_matrix(&schedule, 1.0, 4.0)?.into_inner() * transition_matrix(&schedule, 4.0, 9.0)?.into_inner();
    println!("|P(1,4) P(4,9) - P(1,9)|max = {:.2e}", (split - p.matrix()).abs().max());
    Ok(())
}
