use thiserror::Error;

use crate::profile::ProfileKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rule {rule} is not applicable to a {kind} profile")]
    RuleNotApplicable { rule: String, kind: ProfileKind },

    #[error("consent quotas violate s + t <= n + 2 (s={s}, t={t}, n={n})")]
    QuotaConstraintViolated { s: usize, t: usize, n: usize },

    #[error("individual index {index} out of range for n={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("too many individuals: {n} (at most {max} supported)")]
    TooManyIndividuals { n: usize, max: usize },

    #[error("solution kind does not match problem family {0}")]
    KindMismatch(String),

    #[error("witness out of domain: {0}")]
    WitnessOutOfDomain(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("instance too large: {needed} candidates exceed the limit of {limit}")]
    InstanceTooLarge { needed: u128, limit: u128 },

    #[error("partial profile admits no {r}-extension: {reason}")]
    NoRExtension { r: usize, reason: String },

    #[error("expected a {expected} profile, got {got}")]
    WrongKind { expected: ProfileKind, got: ProfileKind },

    #[error("invalid r={r} for n={n}")]
    InvalidR { r: usize, n: usize },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
