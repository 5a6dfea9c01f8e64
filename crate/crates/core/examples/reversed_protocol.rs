//! Server-first variant: the client imprints the phases on the received photon.

use rrsp::efficiency::EfficiencyModel;
use rrsp::quantum::{apply_corrections, run_ideal_protocol, run_reversed_protocol, TargetState};

fn main() -> rrsp::Result<()> {
    let target = TargetState::new(vec![0.3, 1.7])?;
    let model = EfficiencyModel::new(0.8, 0.95, 0.9, 0.9, 2)?;
    let forward = run_ideal_protocol(&model, &target)?;
    let reversed = run_reversed_protocol(&model, &target)?;
    for (f, r) in forward.iter().zip(&reversed) {
        println!(
            "port {}: p = {:.6} / {:.6}, fidelity = {:.12} / {:.12}",
            f.port,
            f.probability,
            r.probability,
            apply_corrections(f).fidelity(&target.statevector()),
            apply_corrections(r).fidelity(&target.statevector()),
        );
    }
    Ok(())
}
