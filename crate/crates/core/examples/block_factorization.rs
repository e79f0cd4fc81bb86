//! Block-by-block factorization of the randomized chain compared with a
//! brute-force factorization of the full augmented generator.

use fluctuation::chain::{DriftModel, GeneratorMatrix, RegimeSchedule};
use fluctuation::wh::{block_factorize, direct_augmented_factorize, hat_pi_plus};

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
    let (c, q) = (0.5, [0.5, 0.25]);

    let block = block_factorize(&schedule, &drift, c, &q)?;
    let direct = direct_augmented_factorize(&schedule, &drift, c, &q)?;
    println!("shifted killings {:?}", block.shifted_killings());
    println!("augmented residual {:.2e}", block.augmented_residual(&schedule, &drift)?);
    println!("largest gap to the direct route {:.2e}", block.max_difference(&direct));
    println!("direct route below-diagonal mass {:.2e}", direct.max_lower_block());
    for l in 0..block.levels() {
        println!("Lambda~(0,{l}) = {:.10}", block.lambda_block(0, l)[(0, 0)]);
    }
    println!("transform of Pi+ at q = {q:?}: {:.12}", hat_pi_plus(&block, 1, 0)?);
    Ok(())
}
