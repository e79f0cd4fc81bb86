//! Replace the switch times by exponential clocks and inspect the resulting
//! homogeneous chain on `levels x states`.

use fluctuation::chain::{build_augmented_generator, marginal_counter_generator, DriftModel, GeneratorMatrix, RegimeSchedule};

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
    let q = [0.5, 1.0 / 6.0];

    let aug = build_augmented_generator(&schedule, &drift, &q)?;
    println!("{} levels x {} states", aug.levels(), aug.base_dim());
    println!("augmented generator:{:.4}", aug.generator().matrix());
    println!("lifted drift: {:?}", aug.lifted_drift().rates());

    // Summing out the state leaves a pure-birth counter.
    println!("level counter:{:.4}", marginal_counter_generator(&q)?.matrix());
    Ok(())
}
