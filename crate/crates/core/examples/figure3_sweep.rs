//! Distance sweep for n = 8 and n = 2 with the crossover distance.

use rrsp::windowing::{crossover_distance, figure3_sweep, Figure3Params, RateMethod};

fn main() -> rrsp::Result<()> {
    let params = Figure3Params {
        trajectories: 300,
        ..Figure3Params::default()
    };
    let distances: Vec<f64> = (0..=6).map(|i| i as f64 * 50.0).collect();
    let rows = figure3_sweep(&params, 8, &distances, &[1, 2, 4, 8], true, 1)?;
    println!("distance_km, curve, k, rate_hz");
    for row in rows.iter().filter(|r| r.result.method == RateMethod::MonteCarlo) {
        println!("{}, {}, {}, {:.4e}", row.distance_km, row.curve.label(), row.k, row.result.rate_hz);
    }
    let grid: Vec<f64> = (0..=60).map(|i| i as f64 * 5.0).collect();
    for n in [8, 2] {
        match crossover_distance(&params, n, &grid, 1)? {
            Some(l) => println!("n={n}: batching overtakes k=1 at {l:.1} km"),
            None => println!("n={n}: no crossover below 300 km"),
        }
    }
    Ok(())
}
