//! File formats, reports, parallel drivers and the command-line front end
//! for [`multistab_core`].

pub mod analysis;
pub mod cli;
pub mod output;
pub mod report;
pub mod spec;

use std::path::PathBuf;

use multistab_core::criteria::CriteriaError;
use multistab_core::dde::DdeError;
use multistab_core::patterns::PatternError;
use multistab_core::NetworkError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot parse spec: {0}")]
    SpecParse(String),
    #[error("unknown example {0}; built-in examples are 1-4")]
    UnknownExample(u32),
    #[error("invalid network: {0}")]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error("hypotheses not satisfied: {0}")]
    HypothesisFailed(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Dde(#[from] DdeError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
