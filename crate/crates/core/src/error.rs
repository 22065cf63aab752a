use thiserror::Error;

use crate::channel::ValidationReport;
use crate::discrete::PmfError;
use crate::fme::FmeError;
use crate::gaussian::GridError;
use crate::io::IoError;
use crate::oracle::MiError;
use crate::region::RegionError;
use crate::scenario::ConfigError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Channel(#[from] ValidationReport),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Pmf(#[from] PmfError),
    #[error(transparent)]
    Oracle(#[from] MiError),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Fme(#[from] FmeError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    /// Process exit status: 1 for invalid input, 2 for failed computation,
    /// 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Channel(_) | Error::Grid(_) | Error::Config(_) | Error::Pmf(_) => 1,
            Error::Oracle(_) | Error::Region(_) | Error::Fme(_) | Error::Verification(_) => 2,
            Error::Io(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
