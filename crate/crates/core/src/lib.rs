//! Simulation of a spin-3/2 nucleus driven as a pair of virtual qubits.
//!
//! The four Zeeman levels of the nucleus are addressed by selective pulses,
//! prepared in a pseudo-pure state by averaging three experiments and read
//! out from the free induction decay.
//!
//! ```
//! use quadspin::frontend::{parse_program, run, RunConfig};
//!
//! let program = parse_program("prepare pseudo_pure\nry_r pi\ngate cnot\nreadout").unwrap();
//! let record = run(&program, &RunConfig::default()).unwrap();
//! assert_eq!(record.readout.unwrap().decoded.to_string(), "11");
//! ```

pub mod ensemble;
pub mod error;
pub mod frontend;
pub mod matrix;
pub mod pulse;
pub mod readout;
pub mod spin;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
