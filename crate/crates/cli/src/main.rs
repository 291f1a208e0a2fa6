//! `gid`: evaluate rules, solve attack instances, answer partial-profile
//! queries, and generate or cross-validate batches.

mod batch;
mod io;
mod report;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use gid_core::format::parse_rule_spec;
use gid_core::oracle::{pqi_nqi_brute, solve_brute, SearchBudget};
use gid_core::partial::{answer_query, PartialQuery, QueryMode};
use gid_core::solvers::{solve_auto, solve_named, SOLVER_NAMES};
use gid_core::{check_witness, diagnostics, eval_traced, Answer, AttackInstance, Verdict};

use crate::io::{braced, changes, instance_digest, load_instance, load_profile, names, parse_set, profile_digest};
use crate::report::{
    render_table, Failure, Format, Report, EXIT_CONFIG, EXIT_DISAGREEMENT, EXIT_IMMUNE, EXIT_NO, EXIT_YES,
};

#[derive(Parser)]
#[command(name = "gid", version, about = "Group identification workbench")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value = "tsv")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Pqi,
    Nqi,
}

#[derive(Subcommand)]
enum Command {
    /// Print the qualified individuals of a subset.
    Eval {
        profile: PathBuf,
        #[arg(long)]
        rule: String,
        /// Names separated by commas or spaces; everyone when omitted.
        #[arg(long)]
        subset: Option<String>,
        #[arg(long)]
        trace: bool,
    },
    /// Decide an attack instance.
    Solve {
        instance: PathBuf,
        /// `auto`, `brute`, or a solver name.
        #[arg(long, default_value = "auto")]
        solver: String,
        /// Also run the exhaustive oracle and compare.
        #[arg(long)]
        xval: bool,
        #[arg(long)]
        limit_nodes: Option<u128>,
    },
    /// Possible or necessary qualification of a set on a partial profile.
    Partial {
        profile: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        rule: String,
        /// The set S; names separated by commas or spaces.
        #[arg(long)]
        set: String,
        /// Only consider extensions in which every row has exactly r pluses.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        xval: bool,
        #[arg(long)]
        limit_nodes: Option<u128>,
    },
    /// Write the profiles and instances described by a batch config.
    Gen {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare solvers with the exhaustive oracle on a batch config.
    Xval {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        limit_nodes: Option<u128>,
        /// Also print one line per instance.
        #[arg(long)]
        details: bool,
    },
    /// Print s* and t* with per-target slack.
    Diag { instance: PathBuf },
}

fn budget(limit: Option<u128>) -> SearchBudget {
    limit.map_or_else(SearchBudget::default, SearchBudget::with_node_limit)
}

fn ms(start: Instant) -> String {
    format!("{:.3}", start.elapsed().as_secs_f64() * 1e3)
}

fn exit_for(answer: Answer) -> u8 {
    match answer {
        Answer::Yes => EXIT_YES,
        Answer::No => EXIT_NO,
        Answer::Immune => EXIT_IMMUNE,
    }
}

struct Output {
    text: String,
    code: u8,
}

fn cmd_eval(
    profile: PathBuf,
    rule: &str,
    subset: Option<&str>,
    trace: bool,
    format: Format,
) -> Result<Output, Failure> {
    let p = load_profile(&profile)?;
    let rule = parse_rule_spec(rule)?;
    let subset = parse_set(&p, subset)?;
    let (result, rounds) = eval_traced(&rule, subset, &p)?;
    let trace_line = rounds
        .filter(|_| trace)
        .map(|t| t.rounds.iter().map(|r| braced(&p, *r)).collect::<Vec<_>>().join(" "));
    let text = match format {
        Format::Tsv => {
            let mut s = names(&p, result) + "\n";
            if let Some(t) = trace_line {
                s += &t;
                s.push('\n');
            }
            s
        }
        Format::JsonLines => {
            let mut r = Report::new();
            r.push("qualified", names(&p, result));
            if let Some(t) = trace_line {
                r.push("trace", t);
            }
            r.render(format)
        }
    };
    Ok(Output { text, code: EXIT_YES })
}

fn verdict_pairs(r: &mut Report, inst: &AttackInstance, v: &Verdict) -> bool {
    r.push("verdict", v.answer);
    if let Some(tag) = v.immunity_tag {
        r.push("tag", tag);
    }
    let Some(w) = &v.witness else {
        return true;
    };
    let verified = check_witness(inst, w).unwrap_or(false);
    r.push("witness", names(&inst.profile, w.individuals()));
    if let Some(c) = changes(&inst.profile, w) {
        r.push("changes", c);
    }
    r.push("cost", w.cost(inst)).push("verified", verified);
    verified
}

fn cmd_solve(path: PathBuf, solver: &str, xval: bool, sb: SearchBudget, format: Format) -> Result<Output, Failure> {
    let inst = load_instance(&path)?;
    inst.rule.validate_for(inst.profile.kind(), inst.profile.n())?;
    let violations = inst.validate();
    for v in violations.iter().filter(|v| v.is_warning()) {
        eprintln!("warning\t{v}");
    }
    if let Some(v) = violations.iter().find(|v| !v.is_warning()) {
        return Err(Failure::config(format!("invalid instance: {v}")));
    }
    if solver != "auto" && !SOLVER_NAMES.contains(&solver) {
        return Err(Failure::config(format!(
            "unknown solver '{solver}' (expected auto or one of {})",
            SOLVER_NAMES.join(", ")
        )));
    }

    let mut r = Report::new();
    r.push("command", "solve")
        .push("instance", path.display())
        .push("digest", instance_digest(&inst))
        .push("problem", format!("{} {}", inst.objective, inst.family))
        .push("rule", inst.rule)
        .push("n", inst.profile.n());
    let start = Instant::now();
    let (used, result) = if solver == "auto" {
        let d = solve_auto(&inst, &sb);
        (d.solver, d.result)
    } else {
        (solver, solve_named(solver, &inst, &sb))
    };
    r.push("solver", used);
    let verdict = match result {
        Ok(v) => v,
        Err(e) => {
            r.push("error", &e).push("time_ms", ms(start));
            return Ok(Output {
                text: r.render(format),
                code: report::exit_code_for(&e),
            });
        }
    };
    let verified = verdict_pairs(&mut r, &inst, &verdict);
    r.push("time_ms", ms(start));
    let mut code = if verified {
        exit_for(verdict.answer)
    } else {
        EXIT_DISAGREEMENT
    };

    if xval {
        let start = Instant::now();
        match solve_brute(&inst, &sb) {
            Ok(o) => {
                let agree = (o.answer == Answer::Yes) == (verdict.answer == Answer::Yes);
                r.push("oracle", o.answer)
                    .push("oracle_ms", ms(start))
                    .push("agreement", agree);
                if !agree {
                    code = EXIT_DISAGREEMENT;
                }
            }
            Err(e) => {
                r.push("oracle", format!("error: {e}"));
                code = report::exit_code_for(&e);
            }
        }
    }
    Ok(Output {
        text: r.render(format),
        code,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_partial(
    path: PathBuf,
    mode: Mode,
    rule: &str,
    set: &str,
    r: Option<usize>,
    xval: bool,
    sb: SearchBudget,
    format: Format,
) -> Result<Output, Failure> {
    let p = load_profile(&path)?;
    let rule = parse_rule_spec(rule)?;
    let s = parse_set(&p, Some(set))?;
    let mode = match mode {
        Mode::Pqi => QueryMode::Pqi,
        Mode::Nqi => QueryMode::Nqi,
    };
    let q = PartialQuery { s, r, mode };
    let start = Instant::now();
    let (answer, method) = answer_query(&p, &q, &rule, &sb)?;
    let mut rep = Report::new();
    rep.push("command", "partial")
        .push("profile", path.display())
        .push("digest", profile_digest(&p))
        .push("mode", mode.as_str())
        .push("rule", rule)
        .push("set", names(&p, s))
        .push("r", r.map_or("-".to_string(), |r| r.to_string()))
        .push("solver", method)
        .push("result", answer)
        .push("time_ms", ms(start));
    let mut code = EXIT_YES;
    if xval {
        let (possible, necessary) = pqi_nqi_brute(&p, s, &rule, r, &sb)?;
        let oracle = match mode {
            QueryMode::Pqi => possible,
            QueryMode::Nqi => necessary,
        };
        rep.push("oracle", oracle).push("agreement", oracle == answer);
        if oracle != answer {
            code = EXIT_DISAGREEMENT;
        }
    }
    Ok(Output {
        text: rep.render(format),
        code,
    })
}

fn cmd_diag(path: PathBuf, format: Format) -> Result<Output, Failure> {
    let inst = load_instance(&path)?;
    let d = diagnostics(&inst)?;
    let opt = |v: Option<i64>| v.map_or("-".to_string(), |v| v.to_string());
    let mut r = Report::new();
    r.push("command", "diag")
        .push("instance", path.display())
        .push("digest", instance_digest(&inst))
        .push("s_star", opt(d.s_star))
        .push("t_star", opt(d.t_star));
    for (a, slack) in &d.per_individual {
        r.push(
            &format!("slack:{}", inst.profile.name(*a)),
            format!("missing={} choices={}", slack.missing, slack.choices),
        );
    }
    Ok(Output {
        text: r.render(format),
        code: EXIT_YES,
    })
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let format = cli.format;
    match cli.command {
        Command::Eval {
            profile,
            rule,
            subset,
            trace,
        } => cmd_eval(profile, &rule, subset.as_deref(), trace, format),
        Command::Solve {
            instance,
            solver,
            xval,
            limit_nodes,
        } => cmd_solve(instance, &solver, xval, budget(limit_nodes), format),
        Command::Partial {
            profile,
            mode,
            rule,
            set,
            r,
            xval,
            limit_nodes,
        } => cmd_partial(profile, mode, &rule, &set, r, xval, budget(limit_nodes), format),
        Command::Gen { config, out, seed } => {
            let mut cfg = batch::load_config(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let rows = batch::generate(&cfg, &out)?;
            Ok(Output {
                text: render_table(&rows, format),
                code: EXIT_YES,
            })
        }
        Command::Xval {
            config,
            seed,
            limit_nodes,
            details,
        } => {
            let mut cfg = batch::load_config(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let res = batch::cross_validate(&cfg, &budget(limit_nodes))?;
            let mut text = String::new();
            if details {
                text += &render_table(&res.details, format);
            }
            text += &render_table(&res.matrix, format);
            Ok(Output { text, code: res.exit })
        }
        Command::Diag { instance } => cmd_diag(instance, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { EXIT_YES });
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error\t{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
