//! Absorption-based receiver: sampled readouts, then sign correction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rrsp::quantum::{correct_absorption_signs, sample_absorption_run, TargetState};

fn main() -> rrsp::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let target = TargetState::new(vec![0.4, 2.2, 1.0])?;
    for shot in 0..4 {
        let run = sample_absorption_run(&target, &mut rng)?;
        let raw = run.register_state.fidelity(&target.statevector());
        let fixed = correct_absorption_signs(&run.register_state, &run.outcomes)?;
        let readouts: String = run.outcomes.iter().map(|&b| if b { '1' } else { '0' }).collect();
        println!(
            "shot {shot}: readouts {readouts}, fidelity {raw:.4} -> {:.12}",
            fixed.fidelity(&target.statevector())
        );
    }
    Ok(())
}
