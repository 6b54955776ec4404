//! Text front end: pulse programs, run configuration and the run driver.

mod compile;
mod config;
mod driver;
mod program;

use thiserror::Error;

pub use compile::compile;
pub use config::{RunConfig, Setting};
pub use driver::{run, RunRecord};
pub use program::{parse_program, render_angle, CircuitOp, Preparation, Program};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrontendError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Simulation(#[from] crate::error::Error),
}

impl FrontendError {
    /// Process exit status: 1 for a failed simulation, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            FrontendError::Simulation(_) => 1,
            _ => 2,
        }
    }
}
