//! Resonant reflection coefficients and efficiencies versus cooperativity.

use rrsp::cavity::{emission_efficiency, reflection_efficiency, CavityParams};

fn main() -> rrsp::Result<()> {
    println!("C, r_0(0), r_1(0), eta_1, eta_s");
    for c in [0.1, 1.0, 10.0, 38.0, 100.0, 1e4] {
        let cavity = CavityParams::tuned(c, 1.0, 0.1)?;
        println!(
            "{c}, {:.6}, {:.6}, {:.6}, {:.6}",
            cavity.transfer_function(false, 0.0).re,
            cavity.transfer_function(true, 0.0).re,
            reflection_efficiency(c)?,
            emission_efficiency(c)?
        );
    }

    // Detuned pulse: the coupled response narrows around resonance.
    let cavity = CavityParams::tuned(38.0, 1.0, 0.1)?;
    for omega in [0.0, 0.05, 0.2, 1.0] {
        let r0 = cavity.transfer_function(false, omega);
        let r1 = cavity.transfer_function(true, omega);
        println!("omega={omega}: |r_0|={:.4} |r_1|={:.4}", r0.norm(), r1.norm());
    }
    Ok(())
}
