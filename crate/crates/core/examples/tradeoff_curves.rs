//! Rate-fidelity merits of the reflection, single-click and double-click
//! schemes in both loss regimes.

use rrsp::tradeoff::{sweep_figure2, Protocol, Regime};

fn main() -> rrsp::Result<()> {
    for (regime, grid) in [
        (Regime::RoutingLimited, vec![0.1, 0.5, 0.9, 0.99]),
        (Regime::InterfaceLimited, vec![0.1, 1.0, 38.0, 1e3, 1e6]),
    ] {
        println!("regime {}", regime.label());
        for chunk in sweep_figure2(regime, &grid, 1e-3)?.chunks(3) {
            let merit = |p: Protocol| chunk.iter().find(|t| t.protocol == p).unwrap().merit;
            println!(
                "  {:>8}: R {}  SC {}  DC {}",
                chunk[0].sweep_parameter,
                merit(Protocol::R),
                merit(Protocol::SC),
                merit(Protocol::DC)
            );
        }
    }
    Ok(())
}
