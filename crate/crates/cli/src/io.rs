//! Reading profiles and instances from disk, naming sets and witnesses, and
//! content digests.

use std::fs;
use std::path::Path;

use gid_core::format::{parse_instance, parse_profile, write_instance, write_profile};
use gid_core::instance::{CellValue, Solution};
use gid_core::{AttackInstance, Error, IndividualSet, Profile};
use sha2::{Digest, Sha256};

use crate::report::Failure;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))
}

pub fn load_profile(path: &Path) -> Result<Profile, Failure> {
    Ok(parse_profile(&read(path)?)?)
}

/// Loads an instance; its `profile` line is resolved relative to the
/// instance file.
pub fn load_instance(path: &Path) -> Result<AttackInstance, Failure> {
    let text = read(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let inst = parse_instance(&text, |p| {
        let full = dir.join(p);
        let body = fs::read_to_string(&full).map_err(|e| Error::Parse {
            line: 0,
            msg: format!("cannot read profile {}: {e}", full.display()),
        })?;
        parse_profile(&body)
    })?;
    Ok(inst)
}

fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Hash of the canonical serialization, independent of file names.
pub fn instance_digest(inst: &AttackInstance) -> String {
    sha256_hex(&(write_instance(inst, "-") + &write_profile(&inst.profile)))
}

pub fn profile_digest(p: &Profile) -> String {
    sha256_hex(&write_profile(p))
}

/// Names separated by commas or whitespace; `None` means everyone.
pub fn parse_set(p: &Profile, spec: Option<&str>) -> Result<IndividualSet, Failure> {
    let Some(spec) = spec else {
        return Ok(p.everyone());
    };
    spec.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .map(|w| {
            p.index_of(w)
                .ok_or_else(|| Failure::config(format!("unknown individual '{w}'")))
        })
        .collect()
}

pub fn names(p: &Profile, set: IndividualSet) -> String {
    set.iter().map(|a| p.name(a)).collect::<Vec<_>>().join(" ")
}

pub fn braced(p: &Profile, set: IndividualSet) -> String {
    format!("{{{}}}", set.iter().map(|a| p.name(a)).collect::<Vec<_>>().join(","))
}

/// Bribery rewrites as `a->b,c`, microbribery changes as `a>b:+`.
pub fn changes(p: &Profile, w: &Solution) -> Option<String> {
    match w {
        Solution::Bribed(rows) => Some(
            rows.iter()
                .map(|r| {
                    let q: Vec<&str> = r.qualifies.iter().map(|b| p.name(b)).collect();
                    format!("{}->{}", p.name(r.individual), q.join(","))
                })
                .collect::<Vec<_>>()
                .join(" "),
        ),
        Solution::Flipped(pairs) => Some(
            pairs
                .iter()
                .map(|c| {
                    let sign = match c.value {
                        CellValue::Qualify => '+',
                        CellValue::Disqualify => '-',
                    };
                    format!("{}>{}:{sign}", p.name(c.evaluator), p.name(c.evaluated))
                })
                .collect::<Vec<_>>()
                .join(" "),
        ),
        _ => None,
    }
}
