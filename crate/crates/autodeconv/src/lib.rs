//! Experiment harness around `autodeconv-core`: synthetic problem generation,
//! parameter-choice rules, convergence-rate studies, file formats (CSV/JSON/
//! SVG) and the numerical-bound verification suites backing the CLI.

pub mod experiment;
pub mod io;
pub mod plot;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] autodeconv_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that stem from unusable arguments rather than a
    /// failed computation; the CLI maps these to the usage exit code.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Core(autodeconv_core::Error::Invalid(_)) | Error::Format(_)
        )
    }
}
