use clap::ValueEnum;
use serde::Serialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// What a command produced, in every format, plus how it went.
pub struct Output {
    pub json: serde_json::Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub text: String,
    pub failed: bool,
    pub uncertified: bool,
}

impl Output {
    pub fn new(value: &impl Serialize, header: &[&str], rows: Vec<Vec<String>>, text: String) -> Result<Self, CliError> {
        let json = serde_json::to_value(value).map_err(|e| CliError::Invariant(e.to_string()))?;
        Ok(Output {
            json,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
            text,
            failed: false,
            uncertified: false,
        })
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).map_err(|e| CliError::Invariant(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Text => Ok(self.text.clone()),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let err = |e: csv::Error| CliError::Invariant(e.to_string());
                w.write_record(&self.header).map_err(err)?;
                for r in &self.rows {
                    w.write_record(r).map_err(err)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Invariant(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::Invariant(e.to_string()))
            }
        }
    }

    pub fn exit_code(&self, require_certified: bool) -> u8 {
        if self.failed {
            1
        } else if self.uncertified && require_certified {
            3
        } else {
            0
        }
    }
}

pub fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}
