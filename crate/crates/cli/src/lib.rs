//! Command-line front end for `semicert-core`: input parsing, JSON reports
//! and SVG rendering. The binary in `main.rs` is a thin wrapper over
//! [`commands::run`].

pub mod commands;
pub mod input;
pub mod render;
pub mod report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Criteria(#[from] semicert_core::CriteriaError),
    #[error(transparent)]
    Oracle(#[from] semicert_core::OracleError),
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Definitive,
    Inconclusive,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Definitive => 0,
            Status::Inconclusive => 2,
        }
    }
}

pub const ERROR_EXIT: i32 = 1;
