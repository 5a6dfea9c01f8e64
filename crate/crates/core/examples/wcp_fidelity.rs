//! Weak-coherent-pulse client: success probability against fidelity.

use rrsp::cavity::reflection_efficiency;
use rrsp::efficiency::EfficiencyModel;
use rrsp::imperfections::{
    fidelity_estimate, fidelity_lower_bound, herald_probability, threshold_detector_bound,
    wcp_amplitudes, WcpSource,
};

fn main() -> rrsp::Result<()> {
    let model = EfficiencyModel::new(1.0, 0.9, 0.9 * reflection_efficiency(38.0)?, 0.9, 1)?;
    println!("mu, P, F_lower, F_estimate, P_threshold, F_threshold");
    for i in 0..9 {
        let mu = 10f64.powf(-4.0 + i as f64 * 0.4);
        let pulse = wcp_amplitudes(&WcpSource::with_mean_photon_number(mu)?)?;
        let (p_thr, f_thr) = threshold_detector_bound(&pulse, &model)?;
        println!(
            "{mu:.3e}, {:.4e}, {:.6}, {:.6}, {p_thr:.4e}, {f_thr:.6}",
            herald_probability(&pulse, &model)?,
            fidelity_lower_bound(&pulse, &model)?,
            fidelity_estimate(&pulse, &model)?,
        );
    }
    Ok(())
}
