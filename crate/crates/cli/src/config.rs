use localh::complex::ValidationMode;
use localh::field::Characteristic;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "text" => Ok(OutputFormat::Text),
            _ => Err(CliError::Usage(format!(
                "unknown format `{s}`; expected json or text"
            ))),
        }
    }
}

pub fn parse_mode(s: &str) -> Result<ValidationMode, CliError> {
    match s {
        "fast" => Ok(ValidationMode::Fast),
        "full" => Ok(ValidationMode::Full),
        _ => Err(CliError::Usage(format!(
            "unknown mode `{s}`; expected fast or full"
        ))),
    }
}

/// Settings shared by every command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    pub field: Characteristic,
    /// Highest degree computed; `None` means `d + 2`.
    pub max_degree: Option<usize>,
    pub format: OutputFormat,
    pub mode: ValidationMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            field: Characteristic::Zero,
            max_degree: None,
            format: OutputFormat::Json,
            mode: ValidationMode::Fast,
        }
    }
}

impl RunConfig {
    pub fn horizon(&self, d: usize) -> usize {
        self.max_degree.unwrap_or(d + 2)
    }

    pub fn parse_field(s: &str) -> Result<Characteristic, CliError> {
        Characteristic::parse(s).map_err(CliError::Usage)
    }
}
