//! Group identification: social rules over pairwise qualification
//! profiles, manipulative attacks on them, and queries on partial profiles.

pub mod error;
pub mod format;
pub mod generators;
pub mod instance;
pub mod oracle;
pub mod partial;
pub mod profile;
pub mod rule;
pub mod set;
pub mod solvers;

pub use error::{Error, Result};
pub use instance::{check_witness, diagnostics, Answer, AttackInstance, Family, Objective, Solution, Verdict};
pub use profile::{Cell, Profile, ProfileKind};
pub use rule::{eval, eval_traced, SocialRule};
pub use set::IndividualSet;
