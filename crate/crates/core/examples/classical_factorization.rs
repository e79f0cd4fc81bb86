//! Wiener-Hopf factorization of a single homogeneous chain, checked against
//! the closed form for one state on each side.

use fluctuation::chain::{DriftModel, GeneratorMatrix};
use fluctuation::wh::{classical_factorize, factorization_residual, scalar_factorize};

fn main() -> fluctuation::Result<()> {
    let g = GeneratorMatrix::from_rows(&[vec![-2.0, 2.0], vec![1.0, -1.0]])?;
    let drift = DriftModel::new(["up", "down"], &[2.0, -3.0])?;
    for c in [0.1, 0.5, 2.0] {
        let quad = classical_factorize(&g, &drift, c)?;
        let closed = scalar_factorize(&g, &drift, c)?;
        println!(
            "c = {c}: Lambda+ = {:.12}, Lambda- = {:.12}, residual {:.1e}, closed form differs by {:.1e}",
            quad.lambda_plus[(0, 0)],
            quad.lambda_minus[(0, 0)],
            factorization_residual(&g, &drift, c, &quad)?,
            (quad.lambda_plus[(0, 0)] - closed.lambda_plus[(0, 0)]).abs(),
        );
    }

    // Three states: two rising, one falling.
    let g3 = GeneratorMatrix::from_rows(&[
        vec![-3.0, 1.0, 2.0],
        vec![0.5, -1.5, 1.0],
        vec![2.0, 2.0, -4.0],
    ])?;
    let d3 = DriftModel::new(["a", "b", "c"], &[1.0, 0.5, -2.0])?;
    let quad = classical_factorize(&g3, &d3, 0.3)?;
    println!("Lambda+ (1x2):{:.8}", quad.lambda_plus);
    println!("G+ (2x2):{:.8}", quad.g_plus);
    println!("residual {:.1e}", factorization_residual(&g3, &d3, 0.3, &quad)?);
    Ok(())
}
