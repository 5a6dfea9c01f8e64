//! Windowed preparation of eight qubits at one distance, by batch size.

use rrsp::windowing::{
    asymptotic_rate, attempt_success_probability, simulate_window_rate, Figure3Params,
};

fn main() -> rrsp::Result<()> {
    let params = Figure3Params::default();
    let length = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100.0);
    println!("L = {length} km");
    for k in [1, 2, 4, 8] {
        let exp = params.experiment(8, k, length, 0)?;
        let mc = simulate_window_rate(&exp)?;
        println!(
            "k={k} q={} w={}: p = {:.3e}, MC {:.4e} ± {:.1e} Hz, asymptotic {:.4e} Hz",
            exp.q(),
            exp.window(),
            attempt_success_probability(&exp)?,
            mc.rate_hz,
            mc.stderr.unwrap_or(0.0),
            asymptotic_rate(&exp)?.rate_hz
        );
    }
    let dc = simulate_window_rate(&params.dc_experiment(8, length, 0)?)?;
    println!("double-click: {:.4e} Hz", dc.rate_hz);
    Ok(())
}
