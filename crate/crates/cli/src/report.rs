use std::fmt::Write as _;

use clap::ValueEnum;
use gid_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    JsonLines,
}

/// Ordered key/value pairs; rendered as `key<TAB>value` lines or as one
/// JSON object per report.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pairs: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.pairs.push((key.to_string(), value.to_string()));
        self
    }

    #[cfg(test)]
    pub fn get(&self, key: &str) -> Option<&str> {
        self.pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn json(&self) -> String {
        let body: Vec<String> = self
            .pairs
            .iter()
            .map(|(k, v)| {
                format!(
                    "{}:{}",
                    serde_json::Value::from(k.as_str()),
                    serde_json::Value::from(v.as_str())
                )
            })
            .collect();
        format!("{{{}}}", body.join(","))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => {
                let mut out = String::new();
                for (k, v) in &self.pairs {
                    let _ = writeln!(out, "{k}\t{v}");
                }
                out
            }
            Format::JsonLines => self.json() + "\n",
        }
    }
}

/// Rows sharing the same keys: a header line plus one TSV line per row, or
/// one JSON object per row.
pub fn render_table(rows: &[Report], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Tsv => {
            if let Some(first) = rows.first() {
                let header: Vec<&str> = first.pairs.iter().map(|(k, _)| k.as_str()).collect();
                let _ = writeln!(out, "{}", header.join("\t"));
            }
            for row in rows {
                let cells: Vec<&str> = row.pairs.iter().map(|(_, v)| v.as_str()).collect();
                let _ = writeln!(out, "{}", cells.join("\t"));
            }
        }
        Format::JsonLines => {
            for row in rows {
                out.push_str(&row.json());
                out.push('\n');
            }
        }
    }
    out
}

pub const EXIT_YES: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;
pub const EXIT_IMMUNE: u8 = 4;
pub const EXIT_TOO_LARGE: u8 = 5;
pub const EXIT_DISAGREEMENT: u8 = 6;

/// A command that could not produce a verdict.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }
}

pub fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. }
        | Error::InvalidProfile(_)
        | Error::IndexOutOfRange { .. }
        | Error::TooManyIndividuals { .. } => EXIT_CONFIG,
        Error::RuleNotApplicable { .. }
        | Error::QuotaConstraintViolated { .. }
        | Error::KindMismatch(_)
        | Error::WrongKind { .. }
        | Error::NoRExtension { .. }
        | Error::InvalidR { .. }
        | Error::PreconditionViolated(_) => EXIT_MISMATCH,
        Error::InstanceTooLarge { .. } => EXIT_TOO_LARGE,
        Error::WitnessOutOfDomain(_) => EXIT_DISAGREEMENT,
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure {
            code: exit_code_for(&err),
            message: err.to_string(),
        }
    }
}
