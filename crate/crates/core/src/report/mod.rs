//! Command implementations behind the `semshift` binary.

mod analyze;
mod bundle;
pub mod config;
mod synth_cmd;
mod validate;

pub use analyze::{
    analyze, render_bundle, run_analysis, AnalyzeOutcome, ClassReport, ClassTests, FactorReport,
    FieldReport, LevelReport, PairDistance, PcaReport, Summary,
};
pub use config::RunConfig;
pub use synth_cmd::{synth, GeneratedText, SynthOutcome};
pub use validate::{check, Finding, InputDigest, Inputs, Severity, ValidationReport};

use crate::error::Error;

/// Exit status 0 on success, 1 for analysis failures, 2 for configuration
/// and validation failures.
#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error("{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Config(Error),
    #[error(transparent)]
    Analysis(Error),
}

impl CommandError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CommandError::Invalid(_) | CommandError::Config(_) => 2,
            CommandError::Analysis(_) => 1,
        }
    }
}
