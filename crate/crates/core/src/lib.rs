//! Remote state preparation by reflecting one photon, spread over `2^n`
//! time-bins, off `n` cavity-coupled qubits.
//!
//! - [`efficiency`]: per-mode efficiencies, balanced client amplitudes, `P₀`.
//! - [`cavity`]: resonant reflection coefficients and their efficiencies.
//! - [`quantum`]: statevector simulation of the protocol and its variants.
//! - [`imperfections`]: weak-coherent-pulse clients, branch bookkeeping, fidelity bounds.
//! - [`tradeoff`]: linear rate-fidelity merits against emission-based schemes.
//! - [`windowing`]: multi-qubit preparation within a finite coherence window.
//! - [`cli`]: the `rrsp` command-line tool.

pub mod cavity;
pub mod cli;
pub mod efficiency;
pub mod error;
pub mod imperfections;
pub mod quantum;
pub mod tradeoff;
pub mod windowing;

pub use error::{Error, Result};
