//! Line-based text formats for profiles (`gid v1`) and attack instances
//! (`gidinst v1`), plus the compact rule syntax used on the command line.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::instance::{AttackInstance, Family, Objective};
use crate::profile::{Cell, Profile, ProfileKind};
use crate::rule::{SelfIndifferentQuota, SocialRule};
use crate::set::{IndividualSet, MAX_INDIVIDUALS};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

pub fn write_profile(p: &Profile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "gid v1");
    let _ = writeln!(out, "kind {}", p.kind());
    let _ = writeln!(out, "n {}", p.n());
    for a in 0..p.n() {
        let _ = write!(out, "row {}", p.name(a));
        for b in 0..p.n() {
            let _ = write!(out, " {}", p.cell(a, b).symbol());
        }
        out.push('\n');
    }
    out
}

pub fn parse_profile(text: &str) -> Result<Profile> {
    let mut lines = content_lines(text);
    let (l, header) = lines.next().ok_or_else(|| perr(0, "empty profile"))?;
    if header != ["gid", "v1"] {
        return Err(perr(l, "expected header 'gid v1'"));
    }
    let mut kind = None;
    let mut n = None;
    let mut names = Vec::new();
    let mut cells = Vec::new();
    for (l, words) in lines {
        match words[0] {
            "kind" => {
                let k = words.get(1).and_then(|w| ProfileKind::parse(w));
                kind = Some(k.ok_or_else(|| perr(l, "unknown profile kind"))?);
            }
            "n" => {
                let v: usize = words
                    .get(1)
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| perr(l, "bad n"))?;
                if v > MAX_INDIVIDUALS {
                    return Err(perr(l, format!("n={v} exceeds {MAX_INDIVIDUALS}")));
                }
                n = Some(v);
            }
            "row" => {
                let kind = kind.ok_or_else(|| perr(l, "row before kind"))?;
                let n = n.ok_or_else(|| perr(l, "row before n"))?;
                let name = words.get(1).ok_or_else(|| perr(l, "row without name"))?;
                // cells may be written spaced or packed
                let row: String = words[2..].concat();
                let row = row
                    .chars()
                    .map(|c| match Cell::from_symbol(c) {
                        Some(cell) if kind.admits(cell) => Ok(cell),
                        Some(_) => Err(perr(l, format!("cell '{c}' not allowed in a {kind} profile"))),
                        None => Err(perr(l, format!("bad cell '{c}'"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                if row.len() != n {
                    return Err(perr(l, format!("row has {} cells, expected {n}", row.len())));
                }
                names.push(name.to_string());
                cells.push(row);
            }
            other => return Err(perr(l, format!("unknown directive '{other}'"))),
        }
    }
    let kind = kind.ok_or_else(|| perr(0, "missing kind"))?;
    let n = n.ok_or_else(|| perr(0, "missing n"))?;
    if cells.len() != n {
        return Err(perr(0, format!("found {} rows, expected {n}", cells.len())));
    }
    let p = Profile::from_cells(kind, &cells).map_err(|e| perr(0, e.to_string()))?;
    p.with_names(names).map_err(|e| perr(0, e.to_string()))
}

/// Parses `consent:s,t`, `csr`, `lsr`, `ternary:s,s',t` (with `*` for the
/// majority quota).
pub fn parse_rule_spec(spec: &str) -> Result<SocialRule> {
    let (head, args) = match spec.split_once(':') {
        Some((h, a)) => (h, a.split(',').map(str::trim).collect::<Vec<_>>()),
        None => (spec, Vec::new()),
    };
    rule_from_parts(head.trim(), &args).map_err(|m| perr(0, m))
}

fn rule_from_parts(head: &str, args: &[&str]) -> std::result::Result<SocialRule, String> {
    let num = |s: &str| s.parse::<usize>().map_err(|_| format!("bad quota '{s}'"));
    match (head, args) {
        ("csr", []) => Ok(SocialRule::Csr),
        ("lsr", []) => Ok(SocialRule::Lsr),
        ("consent", [s, t]) => Ok(SocialRule::consent(num(s)?, num(t)?)),
        ("ternary", [s, sp, t]) => {
            let s_prime = if *sp == "*" {
                SelfIndifferentQuota::Majority
            } else {
                SelfIndifferentQuota::Fixed(num(sp)?)
            };
            Ok(SocialRule::Ternary {
                s: num(s)?,
                s_prime,
                t: num(t)?,
            })
        }
        _ => Err(format!("cannot parse rule '{head}' with {} arguments", args.len())),
    }
}

fn rule_words(rule: &SocialRule) -> String {
    match rule {
        SocialRule::Consent { s, t } => format!("consent {s} {t}"),
        SocialRule::Csr => "csr".into(),
        SocialRule::Lsr => "lsr".into(),
        SocialRule::Ternary { s, s_prime, t } => match s_prime {
            SelfIndifferentQuota::Fixed(q) => format!("ternary {s} {q} {t}"),
            SelfIndifferentQuota::Majority => format!("ternary {s} * {t}"),
        },
    }
}

fn names_of(p: &Profile, set: IndividualSet) -> String {
    set.iter().map(|a| p.name(a)).collect::<Vec<_>>().join(" ")
}

fn line_with(out: &mut String, key: &str, rest: &str) {
    if rest.is_empty() {
        let _ = writeln!(out, "{key}");
    } else {
        let _ = writeln!(out, "{key} {rest}");
    }
}

/// Serializes an instance; `profile_path` is written verbatim on the
/// `profile` line.
pub fn write_instance(inst: &AttackInstance, profile_path: &str) -> String {
    let p = &inst.profile;
    let mut out = String::new();
    let _ = writeln!(out, "gidinst v1");
    let _ = writeln!(out, "problem {}", inst.family);
    let _ = writeln!(out, "objective {}", inst.objective);
    let _ = writeln!(out, "rule {}", rule_words(&inst.rule));
    let _ = writeln!(out, "profile {profile_path}");
    if let Some(pool) = inst.pool {
        line_with(&mut out, "pool", &names_of(p, pool));
    }
    line_with(&mut out, "aplus", &names_of(p, inst.a_plus));
    line_with(&mut out, "aminus", &names_of(p, inst.a_minus));
    if let Some(b) = inst.budget {
        let _ = writeln!(out, "budget {b}");
    }
    if let Some(r) = inst.r_restriction {
        let _ = writeln!(out, "r {r}");
    }
    if let Some(prices) = &inst.agent_prices {
        for (a, price) in prices.iter().enumerate() {
            if *price != 1 {
                let _ = writeln!(out, "agentprice {} {price}", p.name(a));
            }
        }
    }
    if let Some(prices) = &inst.pair_prices {
        let n = p.n();
        for (i, price) in prices.iter().enumerate() {
            if *price != 1 {
                let _ = writeln!(out, "pairprice {} {} {price}", p.name(i / n), p.name(i % n));
            }
        }
    }
    out
}

/// Parses an instance; `load_profile` resolves the path on the `profile`
/// line.
pub fn parse_instance<F>(text: &str, mut load_profile: F) -> Result<AttackInstance>
where
    F: FnMut(&str) -> Result<Profile>,
{
    let mut lines = content_lines(text);
    let (l, header) = lines.next().ok_or_else(|| perr(0, "empty instance"))?;
    if header != ["gidinst", "v1"] {
        return Err(perr(l, "expected header 'gidinst v1'"));
    }
    let mut family = None;
    let mut objective = None;
    let mut rule = None;
    let mut profile: Option<Profile> = None;
    let mut pool = None;
    let mut a_plus = IndividualSet::EMPTY;
    let mut a_minus = IndividualSet::EMPTY;
    let mut budget = None;
    let mut r = None;
    let mut agent: Vec<(usize, u64)> = Vec::new();
    let mut pair: Vec<(usize, usize, u64)> = Vec::new();

    let need = |p: &Option<Profile>, l: usize| -> Result<Profile> {
        p.clone().ok_or_else(|| perr(l, "profile line must come first"))
    };
    let set_of = |p: &Profile, l: usize, names: &[&str]| -> Result<IndividualSet> {
        names
            .iter()
            .map(|w| {
                p.index_of(w)
                    .ok_or_else(|| perr(l, format!("unknown individual '{w}'")))
            })
            .collect()
    };
    let number = |w: Option<&&str>, l: usize| -> Result<u64> {
        w.and_then(|w| w.parse().ok())
            .ok_or_else(|| perr(l, "expected a non-negative integer"))
    };

    for (l, words) in lines {
        let rest = &words[1..];
        match words[0] {
            "problem" => {
                let f = rest.first().and_then(|w| Family::parse(w));
                family = Some(f.ok_or_else(|| perr(l, "unknown problem"))?);
            }
            "objective" => {
                let o = rest.first().and_then(|w| Objective::parse(w));
                objective = Some(o.ok_or_else(|| perr(l, "unknown objective"))?);
            }
            "rule" => {
                let head = rest.first().ok_or_else(|| perr(l, "empty rule"))?;
                rule = Some(rule_from_parts(head, &rest[1..]).map_err(|m| perr(l, m))?);
            }
            "profile" => {
                let path = rest.first().ok_or_else(|| perr(l, "missing profile path"))?;
                profile = Some(load_profile(path)?);
            }
            "pool" => pool = Some(set_of(&need(&profile, l)?, l, rest)?),
            "aplus" => a_plus = set_of(&need(&profile, l)?, l, rest)?,
            "aminus" => a_minus = set_of(&need(&profile, l)?, l, rest)?,
            "budget" => budget = Some(number(rest.first(), l)?),
            "r" => r = Some(number(rest.first(), l)? as usize),
            "agentprice" => {
                let p = need(&profile, l)?;
                let a = set_of(&p, l, &rest[..rest.len().min(1)])?;
                let a = a.first().ok_or_else(|| perr(l, "agentprice needs a name"))?;
                agent.push((a, number(rest.get(1), l)?));
            }
            "pairprice" => {
                let p = need(&profile, l)?;
                if rest.len() != 3 {
                    return Err(perr(l, "pairprice needs two names and a price"));
                }
                let a = p.index_of(rest[0]).ok_or_else(|| perr(l, "unknown individual"))?;
                let b = p.index_of(rest[1]).ok_or_else(|| perr(l, "unknown individual"))?;
                pair.push((a, b, number(rest.get(2), l)?));
            }
            other => return Err(perr(l, format!("unknown directive '{other}'"))),
        }
    }

    let profile = profile.ok_or_else(|| perr(0, "missing profile line"))?;
    let n = profile.n();
    let mut inst = AttackInstance::new(
        profile,
        rule.ok_or_else(|| perr(0, "missing rule"))?,
        family.ok_or_else(|| perr(0, "missing problem"))?,
        objective.ok_or_else(|| perr(0, "missing objective"))?,
    );
    inst.pool = pool;
    inst.a_plus = a_plus;
    inst.a_minus = a_minus;
    inst.budget = budget;
    inst.r_restriction = r;
    if !agent.is_empty() {
        let mut prices = vec![1; n];
        for (a, p) in agent {
            prices[a] = p;
        }
        inst.agent_prices = Some(prices);
    }
    if !pair.is_empty() {
        let mut prices = vec![1; n * n];
        for (a, b, p) in pair {
            prices[a * n + b] = p;
        }
        inst.pair_prices = Some(prices);
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = "gid v1\nkind binary\nn 5\nrow a1 + + + - +\nrow a2 - - + - +\n\
                       row a3 - + + - -\nrow a4 + + + + -\nrow a5 - + + - -\n";

    #[test]
    fn profile_round_trip() {
        let p = parse_profile(EX1).unwrap();
        assert_eq!(p.n(), 5);
        assert_eq!(p.cell(2, 1), Cell::Qualify);
        assert_eq!(write_profile(&p), EX1);
        assert_eq!(parse_profile(&write_profile(&p)).unwrap(), p);
    }

    #[test]
    fn rejects_mixed_unknown_kinds() {
        let t = "gid v1\nkind ternary\nn 2\nrow a + ?\nrow b * +\n";
        assert!(matches!(parse_profile(t), Err(Error::Parse { line: 4, .. })));
        let p = "gid v1\nkind partial\nn 2\nrow a + ?\nrow b * +\n";
        assert!(matches!(parse_profile(p), Err(Error::Parse { line: 5, .. })));
        let ok = "gid v1\nkind partial\nn 2\nrow a +?\nrow b -+\n";
        assert_eq!(parse_profile(ok).unwrap().count_open(), 1);
    }

    #[test]
    fn rejects_wrong_row_length() {
        let t = "gid v1\nkind binary\nn 2\nrow a + + +\nrow b - +\n";
        assert!(parse_profile(t).is_err());
    }

    #[test]
    fn rule_specs() {
        assert_eq!(parse_rule_spec("consent:2,1").unwrap(), SocialRule::consent(2, 1));
        assert_eq!(parse_rule_spec("lsr").unwrap(), SocialRule::Lsr);
        assert_eq!(
            parse_rule_spec("ternary:2,*,1").unwrap(),
            SocialRule::ternary_majority(2, 1)
        );
        assert!(parse_rule_spec("consent:2").is_err());
        assert!(parse_rule_spec("plurality").is_err());
        for r in ["consent:3,1", "csr", "ternary:1,4,2", "ternary:2,*,2"] {
            assert_eq!(parse_rule_spec(r).unwrap().to_string(), r);
        }
    }

    #[test]
    fn instance_round_trip() {
        let text = "gidinst v1\nproblem GB\nobjective general\nrule consent 2 1\n\
                    profile ex1.gid\naplus a5\naminus a1\nbudget 2\nagentprice a2 3\n";
        let inst = parse_instance(text, |path| {
            assert_eq!(path, "ex1.gid");
            parse_profile(EX1)
        })
        .unwrap();
        assert_eq!(inst.family, Family::Gb);
        assert_eq!(inst.agent_price(1), 3);
        assert_eq!(inst.agent_price(0), 1);
        assert_eq!(inst.a_plus.to_vec(), vec![4]);
        let again = parse_instance(&write_instance(&inst, "ex1.gid"), |_| parse_profile(EX1));
        assert_eq!(again.unwrap(), inst);
    }

    #[test]
    fn instance_errors_carry_line_numbers() {
        let text = "gidinst v1\nproblem GB\nprofile x\naplus zz\n";
        let err = parse_instance(text, |_| parse_profile(EX1)).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        let text = "gidinst v1\nproblem XYZ\n";
        assert!(matches!(
            parse_instance(text, |_| parse_profile(EX1)),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
