//! Revival-based non-Markovianity measures for single-qubit processes, the
//! quantum-vault figures of merit built on them, and two example processes:
//! a qubit dephased by a quantum kicked-Harper environment and the detuned
//! Jaynes-Cummings model.

pub mod capacities;
pub mod channels;
pub mod cli;
pub mod error;
pub mod harper;
pub mod io;
pub mod jcm;
pub mod measures;
pub mod optimize;
pub mod scan;
pub mod vault;

pub use error::{Error, Result};
pub use measures::{KSeries, MeasureKind, MeasureResult};
