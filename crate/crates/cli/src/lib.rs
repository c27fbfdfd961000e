//! Command-line front end for `knomial-core`: input formats, random corpora
//! and the `isolate`, `refine`, `verify` and `bench` drivers.

pub mod corpus;
pub mod format;
mod run;

pub use run::{run, Command, Input, RunConfig, MAX_WIDTH_BITS};

use knomial_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Invariant(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Verify(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::ZeroDenominator | Error::ExponentTooLarge | Error::ZeroPolynomial => {
                CliError::Parse(e.to_string())
            }
            Error::Contract(_) | Error::DegreeExceedsCap { .. } | Error::BoundOverflow => CliError::Usage(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}
