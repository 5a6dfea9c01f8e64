//! Prepares a random three-qubit product state and checks every herald port.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rrsp::efficiency::EfficiencyModel;
use rrsp::quantum::{apply_corrections, run_ideal_protocol, TargetState};

fn main() -> rrsp::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let target = TargetState::random(3, &mut rng)?;
    println!("thetas: {:?}", target.thetas());

    for model in [EfficiencyModel::lossless(3)?, EfficiencyModel::new(0.5, 0.9, 0.81, 0.9, 3)?] {
        let outcomes = run_ideal_protocol(&model, &target)?;
        let total: f64 = outcomes.iter().map(|o| o.probability).sum();
        println!(
            "eta_t={} eta_1={}: P = {total:.6} (closed form {:.6})",
            model.eta_t(),
            model.eta_1(),
            model.ideal_success_probability()?
        );
        for o in &outcomes {
            let f = apply_corrections(o).fidelity(&target.statevector());
            println!("  port {}: p = {:.5}, fidelity after correction = {f:.12}", o.port, o.probability);
        }
    }
    Ok(())
}
