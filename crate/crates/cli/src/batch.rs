//! Batch configurations: a grid of generated instances, written to disk by
//! `gen` or cross-checked against the exhaustive oracle by `xval`.

use std::fs;
use std::path::Path;
use std::time::Instant;

use gid_core::format::{parse_rule_spec, write_instance, write_profile};
use gid_core::generators::{
    augment_to_general, gen_random_profile, random_valid_instance, rng_for, rx3c_to_cgb, rx3c_to_cgb_clipped,
    rx3c_to_cgcai_r, rx3c_to_cgcdi, AugmentFlavor, InstanceSpec, RProfileVariant, Rx3cInstance,
};
use gid_core::oracle::{solve_brute, SearchBudget};
use gid_core::solvers::{solve_auto, solve_named};
use gid_core::{check_witness, Answer, AttackInstance, Family, Objective, ProfileKind, SocialRule, Verdict};
use rayon::prelude::*;
use serde::Deserialize;

use crate::io::instance_digest;
use crate::report::{exit_code_for, Failure, Report, EXIT_DISAGREEMENT};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub seed: u64,
    #[serde(rename = "batch")]
    pub batches: Vec<Batch>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Random,
    Profile,
    Rx3cCgb,
    Rx3cCgbClipped,
    Rx3cCgcdi,
    Rx3cCgcai,
    Rx3cCgcaiLsr,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Batch {
    pub name: String,
    #[serde(default = "default_source")]
    pub source: Source,
    pub problem: Option<String>,
    pub objective: Option<String>,
    #[serde(default)]
    pub rules: Vec<String>,
    #[serde(default)]
    pub n: Vec<usize>,
    /// RX3C sizes for the reduction sources.
    #[serde(default)]
    pub m: Vec<usize>,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_kind")]
    pub kind: String,
    #[serde(default)]
    pub star_density: f64,
    #[serde(default = "default_max_budget")]
    pub max_budget: u64,
    #[serde(default = "default_max_targets")]
    pub max_targets: usize,
    pub r: Option<usize>,
    #[serde(default = "default_max_price")]
    pub max_price: u64,
    #[serde(default = "default_attempts")]
    pub attempts: usize,
    /// RX3C sources: plant a cover, or draw an instance without one.
    #[serde(default = "default_true")]
    pub planted: bool,
    #[serde(default = "default_clip")]
    pub clip_s: usize,
    /// `t` of the consent variant of the r-profile reduction.
    #[serde(default = "default_clip")]
    pub t: usize,
    /// Rewrite the generated instance into the general objective.
    pub augment: Option<String>,
    #[serde(default = "default_solver")]
    pub solver: String,
}

fn default_source() -> Source {
    Source::Random
}
fn default_count() -> usize {
    10
}
fn default_kind() -> String {
    "binary".into()
}
fn default_max_budget() -> u64 {
    3
}
fn default_max_targets() -> usize {
    3
}
fn default_max_price() -> u64 {
    1
}
fn default_attempts() -> usize {
    500
}
fn default_true() -> bool {
    true
}
fn default_clip() -> usize {
    2
}
fn default_solver() -> String {
    "auto".into()
}

pub fn load_config(path: &Path) -> Result<Config, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
    let cfg: Config = toml::from_str(&text).map_err(|e| Failure::config(format!("bad config: {e}")))?;
    for b in &cfg.batches {
        b.check()?;
    }
    Ok(cfg)
}

/// One grid cell of a batch: a rule (when the source takes one) and a size.
#[derive(Debug, Clone)]
pub struct Cell {
    pub batch: usize,
    pub rule: Option<SocialRule>,
    pub size: usize,
}

/// One instance to build: the cell plus its position and seed.
#[derive(Debug, Clone)]
pub struct Job {
    pub index: usize,
    pub cell: usize,
    pub replica: usize,
    pub seed: u64,
}

pub enum Generated {
    Instance(Box<AttackInstance>),
    Profile(gid_core::Profile),
    /// No valid instance within the attempt budget.
    Skipped,
}

impl Batch {
    fn is_rx3c(&self) -> bool {
        !matches!(self.source, Source::Random | Source::Profile)
    }

    fn check(&self) -> Result<(), Failure> {
        let bad = |m: String| Failure::config(format!("batch '{}': {m}", self.name));
        if self.is_rx3c() {
            if self.m.is_empty() {
                return Err(bad("reduction sources need an 'm' grid".into()));
            }
        } else if self.n.is_empty() {
            return Err(bad("missing 'n' grid".into()));
        }
        if self.source == Source::Random {
            if self.rules.is_empty() {
                return Err(bad("missing 'rules'".into()));
            }
            self.family().map_err(bad)?;
            self.objective_kind().map_err(bad)?;
        }
        if self.source == Source::Random || self.source == Source::Profile {
            ProfileKind::parse(&self.kind).ok_or_else(|| bad(format!("unknown kind '{}'", self.kind)))?;
        }
        for r in &self.rules {
            parse_rule_spec(r).map_err(|e| bad(e.to_string()))?;
        }
        if let Some(a) = &self.augment {
            self.flavor(a).map_err(bad)?;
        }
        Ok(())
    }

    fn family(&self) -> Result<Family, String> {
        let p = self.problem.as_deref().ok_or("missing 'problem'")?;
        Family::parse(p).ok_or_else(|| format!("unknown problem '{p}'"))
    }

    fn objective_kind(&self) -> Result<Objective, String> {
        let o = self.objective.as_deref().ok_or("missing 'objective'")?;
        Objective::parse(o).ok_or_else(|| format!("unknown objective '{o}'"))
    }

    fn flavor(&self, a: &str) -> Result<AugmentFlavor, String> {
        match a {
            "gcai" => Ok(AugmentFlavor::Gcai),
            "gcdi" => Ok(AugmentFlavor::Gcdi),
            _ => Err(format!("unknown augmentation '{a}'")),
        }
    }

    fn generate(&self, cell: &Cell, seed: u64) -> gid_core::Result<Generated> {
        let kind = ProfileKind::parse(&self.kind).unwrap_or(ProfileKind::Binary);
        let inst = match self.source {
            Source::Profile => {
                return gen_random_profile(cell.size, kind, self.star_density, seed).map(Generated::Profile)
            }
            Source::Random => {
                let rule = cell.rule.expect("random batches carry a rule");
                let family = self.family().expect("checked");
                let objective = self.objective_kind().expect("checked");
                let mut spec = InstanceSpec::new(family, objective, rule, cell.size);
                spec.kind = kind;
                spec.star_density = self.star_density;
                spec.max_budget = self.max_budget;
                spec.max_targets = self.max_targets;
                spec.r = self.r;
                spec.max_price = self.max_price;
                match random_valid_instance(&mut rng_for(seed), &spec, self.attempts)? {
                    Some(inst) => inst,
                    None => return Ok(Generated::Skipped),
                }
            }
            _ => {
                let rx = if self.planted {
                    Rx3cInstance::planted(cell.size, seed)?
                } else {
                    Rx3cInstance::without_cover(cell.size, seed)?
                };
                match self.source {
                    Source::Rx3cCgb => rx3c_to_cgb(&rx)?,
                    Source::Rx3cCgbClipped => rx3c_to_cgb_clipped(&rx, self.clip_s)?,
                    Source::Rx3cCgcdi => rx3c_to_cgcdi(&rx)?,
                    Source::Rx3cCgcai => rx3c_to_cgcai_r(&rx, RProfileVariant::Consent { t: self.t })?,
                    _ => rx3c_to_cgcai_r(&rx, RProfileVariant::Lsr)?,
                }
            }
        };
        let inst = match &self.augment {
            Some(a) => augment_to_general(&inst, self.flavor(a).expect("checked"))?,
            None => inst,
        };
        Ok(Generated::Instance(Box::new(inst)))
    }
}

/// SplitMix64 finalizer, used to derive independent per-instance seeds.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn plan(cfg: &Config) -> Result<(Vec<Cell>, Vec<Job>), Failure> {
    let mut cells = Vec::new();
    let mut jobs = Vec::new();
    for (bi, b) in cfg.batches.iter().enumerate() {
        let rules: Vec<Option<SocialRule>> = if b.rules.is_empty() {
            vec![None]
        } else {
            b.rules
                .iter()
                .map(|r| parse_rule_spec(r).map(Some))
                .collect::<gid_core::Result<_>>()?
        };
        let sizes = if b.is_rx3c() { &b.m } else { &b.n };
        for rule in &rules {
            for &size in sizes {
                let ci = cells.len();
                cells.push(Cell {
                    batch: bi,
                    rule: *rule,
                    size,
                });
                for replica in 0..b.count {
                    let seed = mix(mix(mix(cfg.seed) ^ ci as u64) ^ replica as u64);
                    jobs.push(Job {
                        index: jobs.len(),
                        cell: ci,
                        replica,
                        seed,
                    });
                }
            }
        }
    }
    Ok((cells, jobs))
}

fn cell_rule(cfg: &Config, cell: &Cell) -> String {
    match cell.rule {
        Some(r) => r.to_string(),
        None => match cfg.batches[cell.batch].source {
            Source::Profile => "-".into(),
            _ => "reduction".into(),
        },
    }
}

/// `gen`: writes every generated profile and instance under `out` and
/// returns one summary row per job.
pub fn generate(cfg: &Config, out: &Path) -> Result<Vec<Report>, Failure> {
    let (cells, jobs) = plan(cfg)?;
    fs::create_dir_all(out).map_err(|e| Failure::config(format!("cannot create {}: {e}", out.display())))?;
    let built: Vec<gid_core::Result<Generated>> = jobs
        .par_iter()
        .map(|j| {
            let cell = &cells[j.cell];
            cfg.batches[cell.batch].generate(cell, j.seed)
        })
        .collect();

    let mut rows = Vec::with_capacity(jobs.len());
    for (job, g) in jobs.iter().zip(built) {
        let cell = &cells[job.cell];
        let batch = &cfg.batches[cell.batch];
        let stem = format!("{}-{:05}", batch.name, job.index);
        let write = |name: &str, body: String| {
            fs::write(out.join(name), body).map_err(|e| Failure::config(format!("cannot write {name}: {e}")))
        };
        let mut row = Report::new();
        row.push("index", job.index)
            .push("batch", &batch.name)
            .push("rule", cell_rule(cfg, cell))
            .push("size", cell.size)
            .push("replica", job.replica)
            .push("seed", job.seed);
        match g? {
            Generated::Profile(p) => {
                write(&format!("{stem}.gid"), write_profile(&p))?;
                row.push("digest", crate::io::profile_digest(&p))
                    .push("file", format!("{stem}.gid"));
            }
            Generated::Instance(inst) => {
                let profile_file = format!("{stem}.gid");
                write(&profile_file, write_profile(&inst.profile))?;
                write(&format!("{stem}.inst"), write_instance(&inst, &profile_file))?;
                row.push("digest", instance_digest(&inst))
                    .push("file", format!("{stem}.inst"));
            }
            Generated::Skipped => {
                row.push("digest", "-").push("file", "skipped");
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

pub struct Outcome {
    pub digest: String,
    pub solver: String,
    pub verdict: Result<Verdict, gid_core::Error>,
    pub oracle: Result<Verdict, gid_core::Error>,
    pub solver_ms: f64,
    pub oracle_ms: f64,
    pub witness_ok: bool,
}

impl Outcome {
    /// IMMUNE counts as NO; errors on either side are not agreement.
    pub fn agrees(&self) -> Option<bool> {
        let yes = |v: &Verdict| v.answer == Answer::Yes;
        match (&self.verdict, &self.oracle) {
            (Ok(a), Ok(b)) => Some(yes(a) == yes(b) && self.witness_ok),
            _ => None,
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed().as_secs_f64() * 1e3)
}

fn run_job(cfg: &Config, cells: &[Cell], job: &Job, sb: &SearchBudget) -> Result<Option<Outcome>, Failure> {
    let cell = &cells[job.cell];
    let batch = &cfg.batches[cell.batch];
    let inst = match batch.generate(cell, job.seed)? {
        Generated::Instance(inst) => inst,
        Generated::Skipped => return Ok(None),
        Generated::Profile(_) => return Err(Failure::config(format!("batch '{}' has no instances", batch.name))),
    };
    let ((solver, verdict), solver_ms) = timed(|| {
        if batch.solver == "auto" {
            let d = solve_auto(&inst, sb);
            (d.solver.to_string(), d.result)
        } else {
            (batch.solver.clone(), solve_named(&batch.solver, &inst, sb))
        }
    });
    let (oracle, oracle_ms) = timed(|| solve_brute(&inst, sb));
    let witness_ok = match &verdict {
        Ok(v) => match &v.witness {
            Some(w) => check_witness(&inst, w).unwrap_or(false),
            None => v.answer != Answer::Yes,
        },
        Err(_) => true,
    };
    Ok(Some(Outcome {
        digest: instance_digest(&inst),
        solver,
        verdict,
        oracle,
        solver_ms,
        oracle_ms,
        witness_ok,
    }))
}

pub struct XvalResult {
    pub details: Vec<Report>,
    pub matrix: Vec<Report>,
    pub exit: u8,
}

/// `xval`: per-instance outcomes in index order plus an agreement matrix
/// with one row per grid cell.
pub fn cross_validate(cfg: &Config, sb: &SearchBudget) -> Result<XvalResult, Failure> {
    let (cells, jobs) = plan(cfg)?;
    for b in &cfg.batches {
        if b.solver != "auto" && !gid_core::solvers::SOLVER_NAMES.contains(&b.solver.as_str()) {
            return Err(Failure::config(format!("unknown solver '{}'", b.solver)));
        }
    }
    let outcomes: Vec<Result<Option<Outcome>, Failure>> =
        jobs.par_iter().map(|j| run_job(cfg, &cells, j, sb)).collect();

    let mut details = Vec::new();
    let mut exit = 0u8;
    let mut first_error = None;
    #[derive(Default, Clone)]
    struct Tally {
        count: usize,
        skipped: usize,
        agree: usize,
        disagree: usize,
        yes: usize,
        no: usize,
        immune: usize,
        oracle_yes: usize,
        errors: usize,
        solver_ms: f64,
        oracle_ms: f64,
    }
    let mut tallies = vec![Tally::default(); cells.len()];
    for (job, o) in jobs.iter().zip(outcomes) {
        let t = &mut tallies[job.cell];
        t.count += 1;
        let Some(o) = o? else {
            t.skipped += 1;
            continue;
        };
        t.solver_ms += o.solver_ms;
        t.oracle_ms += o.oracle_ms;
        let mut row = Report::new();
        row.push("index", job.index)
            .push("batch", &cfg.batches[cells[job.cell].batch].name)
            .push("digest", &o.digest)
            .push("solver", &o.solver);
        match &o.verdict {
            Ok(v) => {
                match v.answer {
                    Answer::Yes => t.yes += 1,
                    Answer::No => t.no += 1,
                    Answer::Immune => t.immune += 1,
                }
                row.push("verdict", v.answer);
            }
            Err(e) => {
                t.errors += 1;
                first_error.get_or_insert(exit_code_for(e));
                row.push("verdict", format!("error: {e}"));
            }
        }
        match &o.oracle {
            Ok(v) => {
                if v.answer == Answer::Yes {
                    t.oracle_yes += 1;
                }
                row.push("oracle", v.answer);
            }
            Err(e) => {
                t.errors += 1;
                first_error.get_or_insert(exit_code_for(e));
                row.push("oracle", format!("error: {e}"));
            }
        }
        let agreement = match o.agrees() {
            Some(true) => {
                t.agree += 1;
                "true"
            }
            Some(false) => {
                t.disagree += 1;
                exit = EXIT_DISAGREEMENT;
                "false"
            }
            None => "-",
        };
        row.push("agreement", agreement);
        details.push(row);
    }

    let matrix = cells
        .iter()
        .zip(&tallies)
        .map(|(cell, t)| {
            let ran = (t.count - t.skipped).max(1) as f64;
            let mut row = Report::new();
            row.push("batch", &cfg.batches[cell.batch].name)
                .push("rule", cell_rule(cfg, cell))
                .push("size", cell.size)
                .push("count", t.count)
                .push("skipped", t.skipped)
                .push("agree", t.agree)
                .push("disagree", t.disagree)
                .push("yes", t.yes)
                .push("no", t.no)
                .push("immune", t.immune)
                .push("oracle_yes", t.oracle_yes)
                .push("errors", t.errors)
                .push("solver_ms", format!("{:.3}", t.solver_ms / ran))
                .push("oracle_ms", format!("{:.3}", t.oracle_ms / ran));
            row
        })
        .collect();

    if exit == 0 {
        exit = first_error.unwrap_or(0);
    }
    Ok(XvalResult { details, matrix, exit })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CGB: &str = r#"
seed = 3
[[batch]]
name = "cgb"
problem = "gb"
objective = "constructive"
rules = ["consent:2,1"]
n = [5]
count = 12
"#;

    #[test]
    fn plans_are_deterministic() {
        let cfg: Config = toml::from_str(CGB).unwrap();
        let (cells, a) = plan(&cfg).unwrap();
        let (_, b) = plan(&cfg).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(a.len(), 12);
        assert_eq!(
            a.iter().map(|j| j.seed).collect::<Vec<_>>(),
            b.iter().map(|j| j.seed).collect::<Vec<_>>()
        );
    }

    #[test]
    fn small_sweep_agrees() {
        let cfg: Config = toml::from_str(CGB).unwrap();
        let res = cross_validate(&cfg, &SearchBudget::default()).unwrap();
        assert_eq!(res.exit, 0);
        assert_eq!(res.matrix[0].get("disagree"), Some("0"));
        assert_eq!(
            res.details.len() + res.matrix[0].get("skipped").unwrap().parse::<usize>().unwrap(),
            12
        );
    }

    #[test]
    fn config_errors() {
        let bad = CGB.replace("problem = \"gb\"", "problem = \"xx\"");
        let cfg: Config = toml::from_str(&bad).unwrap();
        assert!(cfg.batches[0].check().is_err());
        assert!(toml::from_str::<Config>("[[batch]]\nname='x'\nbogus=1\n").is_err());
    }
}
