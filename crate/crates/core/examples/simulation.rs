//! Reproducible path simulation: one path in detail, then the empirical law
//! of the state against the transition kernel.

use fluctuation::chain::{transition_matrix, GeneratorMatrix, RegimeSchedule};
use fluctuation::mc::{occupation_distribution, simulate_path, SimConfig};

fn main() -> fluctuation::Result<()> {
    let schedule = RegimeSchedule::new(
        vec![2.0, 8.0],
        vec![
            GeneratorMatrix::from_rows(&[vec![-2.0, 2.0], vec![1.0, -1.0]])?,
            GeneratorMatrix::from_rows(&[vec![-3.0, 3.0], vec![2.0, -2.0]])?,
            GeneratorMatrix::from_rows(&[vec![-5.0, 5.0], vec![3.0, -3.0]])?,
        ],
    )?;
    let cfg = SimConfig::new(50_000, 12.0, 42);

    let path = simulate_path(&schedule, 0, &cfg, 0)?;
    println!("path 0: {} jumps, {} of them in [2, 8)", path.jump_count(), path.jumps_between(2.0, 8.0));
    for s in path.sojourns().take(4) {
        println!("  state {} on [{:.3}, {:.3})", s.state, s.start, s.end);
    }

    let times = [1.0, 4.0, 10.0];
    let law = occupation_distribution(&schedule, 0, &times, &cfg)?;
    for (t, row) in times.iter().zip(&law) {
        let p = transition_matrix(&schedule, 0.0, *t)?;
        println!("t = {t}: empirical {:.4?}, exact [{:.4}, {:.4}]", row, p.matrix()[(0, 0)], p.matrix()[(0, 1)]);
    }
    Ok(())
}
