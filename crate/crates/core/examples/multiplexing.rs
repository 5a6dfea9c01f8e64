//! Rate advantage of batched over one-by-one preparation as transmission drops.

use rrsp::efficiency::{DistanceModel, EfficiencyModel};
use rrsp::windowing::{multiplexing_advantage, multiplexing_advantage_closed_form, WindowExperiment};

fn main() -> rrsp::Result<()> {
    let base = EfficiencyModel::new(1.0, 1.0, 1.0, 0.1, 1)?;
    for eta_t in [0.1, 0.01, 0.001] {
        let distance = DistanceModel::new(0.0, 22.0, eta_t)?;
        let batched = WindowExperiment::new(2, 2, 2000, 30e-9, distance, base)?;
        let single = WindowExperiment::new(2, 1, 2000, 30e-9, distance, base)?;
        println!(
            "eta_t={eta_t}: m = {:.4e} (closed form {:.4e})",
            multiplexing_advantage(&batched, &single)?,
            multiplexing_advantage_closed_form(&batched, &single)?
        );
    }
    Ok(())
}
