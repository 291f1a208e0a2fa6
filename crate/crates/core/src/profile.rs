//! Valuation profiles: who thinks whom is qualified.
//!
//! Row index is the evaluator, column index the evaluated individual, so
//! `cell(a, b)` is `a`'s opinion of `b`. Each row and column is kept as a
//! pair of bitmasks (positive, negative); cells in neither mask are
//! indifferent (ternary) or unknown (partial), depending on the kind.

use std::fmt;

use crate::error::{Error, Result};
use crate::set::{IndividualSet, MAX_INDIVIDUALS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    /// +1
    Qualify,
    /// -1
    Disqualify,
    /// ⋆, ternary profiles only
    Indifferent,
    /// ∗, partial profiles only
    Unknown,
}

impl Cell {
    pub fn symbol(self) -> char {
        match self {
            Cell::Qualify => '+',
            Cell::Disqualify => '-',
            Cell::Indifferent => '*',
            Cell::Unknown => '?',
        }
    }

    pub fn from_symbol(c: char) -> Option<Cell> {
        match c {
            '+' => Some(Cell::Qualify),
            '-' => Some(Cell::Disqualify),
            '*' => Some(Cell::Indifferent),
            '?' => Some(Cell::Unknown),
            _ => None,
        }
    }

    pub fn from_sign(positive: bool) -> Cell {
        if positive {
            Cell::Qualify
        } else {
            Cell::Disqualify
        }
    }

    pub fn is_known_sign(self) -> bool {
        matches!(self, Cell::Qualify | Cell::Disqualify)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileKind {
    Binary,
    Ternary,
    Partial,
}

impl ProfileKind {
    pub fn admits(self, cell: Cell) -> bool {
        match cell {
            Cell::Qualify | Cell::Disqualify => true,
            Cell::Indifferent => self == ProfileKind::Ternary,
            Cell::Unknown => self == ProfileKind::Partial,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProfileKind::Binary => "binary",
            ProfileKind::Ternary => "ternary",
            ProfileKind::Partial => "partial",
        }
    }

    pub fn parse(s: &str) -> Option<ProfileKind> {
        match s {
            "binary" => Some(ProfileKind::Binary),
            "ternary" => Some(ProfileKind::Ternary),
            "partial" => Some(ProfileKind::Partial),
            _ => None,
        }
    }
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    kind: ProfileKind,
    n: usize,
    rows_pos: Vec<IndividualSet>,
    rows_neg: Vec<IndividualSet>,
    cols_pos: Vec<IndividualSet>,
    cols_neg: Vec<IndividualSet>,
    names: Vec<String>,
}

pub fn default_name(a: usize) -> String {
    format!("a{}", a + 1)
}

impl Profile {
    /// A profile of the given kind where every cell is `fill`.
    pub fn filled(kind: ProfileKind, n: usize, fill: Cell) -> Result<Profile> {
        if n > MAX_INDIVIDUALS {
            return Err(Error::TooManyIndividuals {
                n,
                max: MAX_INDIVIDUALS,
            });
        }
        if !kind.admits(fill) {
            return Err(Error::InvalidProfile(format!(
                "cell '{}' not allowed in a {kind} profile",
                fill.symbol()
            )));
        }
        let full = IndividualSet::full(n);
        let (pos, neg) = match fill {
            Cell::Qualify => (full, IndividualSet::EMPTY),
            Cell::Disqualify => (IndividualSet::EMPTY, full),
            _ => (IndividualSet::EMPTY, IndividualSet::EMPTY),
        };
        Ok(Profile {
            kind,
            n,
            rows_pos: vec![pos; n],
            rows_neg: vec![neg; n],
            cols_pos: vec![pos; n],
            cols_neg: vec![neg; n],
            names: (0..n).map(default_name).collect(),
        })
    }

    pub fn from_cells(kind: ProfileKind, cells: &[Vec<Cell>]) -> Result<Profile> {
        let n = cells.len();
        let mut p = Profile::filled(kind, n, Cell::Disqualify)?;
        for (a, row) in cells.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidProfile(format!(
                    "row {} has {} entries, expected {n}",
                    a + 1,
                    row.len()
                )));
            }
            for (b, &c) in row.iter().enumerate() {
                p.set(a, b, c)?;
            }
        }
        Ok(p)
    }

    /// Builds a profile from one string per row, e.g. `"++-+"`; spaces are ignored.
    pub fn from_rows(kind: ProfileKind, rows: &[&str]) -> Result<Profile> {
        let cells = rows
            .iter()
            .map(|r| {
                r.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| Cell::from_symbol(c).ok_or_else(|| Error::InvalidProfile(format!("bad cell '{c}'"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Profile::from_cells(kind, &cells)
    }

    pub fn binary_from_rows(rows: &[&str]) -> Result<Profile> {
        Profile::from_rows(ProfileKind::Binary, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn everyone(&self) -> IndividualSet {
        IndividualSet::full(self.n)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    pub fn set_names(&mut self, names: Vec<String>) -> Result<()> {
        if names.len() != self.n {
            return Err(Error::InvalidProfile(format!(
                "{} names for {} individuals",
                names.len(),
                self.n
            )));
        }
        self.names = names;
        Ok(())
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Profile> {
        self.set_names(names)?;
        Ok(self)
    }

    pub fn check_index(&self, a: usize) -> Result<()> {
        if a < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: a, n: self.n })
        }
    }

    pub fn check_set(&self, set: IndividualSet) -> Result<()> {
        match set.difference(self.everyone()).first() {
            None => Ok(()),
            Some(index) => Err(Error::IndexOutOfRange { index, n: self.n }),
        }
    }

    pub fn cell(&self, a: usize, b: usize) -> Cell {
        if self.rows_pos[a].contains(b) {
            Cell::Qualify
        } else if self.rows_neg[a].contains(b) {
            Cell::Disqualify
        } else if self.kind == ProfileKind::Ternary {
            Cell::Indifferent
        } else {
            Cell::Unknown
        }
    }

    pub fn set(&mut self, a: usize, b: usize, cell: Cell) -> Result<()> {
        self.check_index(a)?;
        self.check_index(b)?;
        if !self.kind.admits(cell) {
            return Err(Error::InvalidProfile(format!(
                "cell '{}' not allowed in a {} profile",
                cell.symbol(),
                self.kind
            )));
        }
        self.rows_pos[a].remove(b);
        self.rows_neg[a].remove(b);
        self.cols_pos[b].remove(a);
        self.cols_neg[b].remove(a);
        match cell {
            Cell::Qualify => {
                self.rows_pos[a].insert(b);
                self.cols_pos[b].insert(a);
            }
            Cell::Disqualify => {
                self.rows_neg[a].insert(b);
                self.cols_neg[b].insert(a);
            }
            Cell::Indifferent | Cell::Unknown => {}
        }
        Ok(())
    }

    /// Replaces the whole outgoing row of `a` on a binary profile: `a`
    /// qualifies exactly `qualified`.
    pub fn set_row(&mut self, a: usize, qualified: IndividualSet) -> Result<()> {
        for b in 0..self.n {
            self.set(a, b, Cell::from_sign(qualified.contains(b)))?;
        }
        Ok(())
    }

    pub fn is_self_qualifying(&self, a: usize) -> bool {
        self.rows_pos[a].contains(a)
    }

    pub fn is_self_disqualifying(&self, a: usize) -> bool {
        self.rows_neg[a].contains(a)
    }

    /// Individuals `a` qualifies (outgoing +1).
    pub fn qualified_by(&self, a: usize) -> IndividualSet {
        self.rows_pos[a]
    }

    /// Individuals `a` disqualifies (outgoing -1).
    pub fn disqualified_by(&self, a: usize) -> IndividualSet {
        self.rows_neg[a]
    }

    /// `{b ∈ within : φ(b, a) = +1}`.
    pub fn qualifiers(&self, a: usize, within: IndividualSet) -> IndividualSet {
        self.cols_pos[a].intersection(within)
    }

    /// `{b ∈ within : φ(b, a) = -1}`.
    pub fn disqualifiers(&self, a: usize, within: IndividualSet) -> IndividualSet {
        self.cols_neg[a].intersection(within)
    }

    /// Cells of row `a` that are neither +1 nor -1.
    pub fn open_in_row(&self, a: usize) -> IndividualSet {
        self.everyone()
            .difference(self.rows_pos[a])
            .difference(self.rows_neg[a])
    }

    /// Cells of column `a` that are neither +1 nor -1.
    pub fn open_in_column(&self, a: usize) -> IndividualSet {
        self.everyone()
            .difference(self.cols_pos[a])
            .difference(self.cols_neg[a])
    }

    pub fn open_cells(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|a| self.open_in_row(a).iter().map(move |b| (a, b)))
            .collect()
    }

    pub fn count_open(&self) -> usize {
        (0..self.n).map(|a| self.open_in_row(a).len()).sum()
    }

    /// Reinterprets the profile as another kind; fails if a cell is not
    /// admitted by the target kind.
    pub fn into_kind(self, kind: ProfileKind) -> Result<Profile> {
        if kind != ProfileKind::Ternary && kind != ProfileKind::Partial && self.count_open() > 0 {
            return Err(Error::InvalidProfile(format!(
                "profile has open cells and cannot become {kind}"
            )));
        }
        Ok(Profile { kind, ..self })
    }

    /// Flips every entry; defined for binary profiles only.
    pub fn negate(&self) -> Result<Profile> {
        if self.kind != ProfileKind::Binary {
            return Err(Error::RuleNotApplicable {
                rule: "negate".into(),
                kind: self.kind,
            });
        }
        Ok(Profile {
            kind: self.kind,
            n: self.n,
            rows_pos: self.rows_neg.clone(),
            rows_neg: self.rows_pos.clone(),
            cols_pos: self.cols_neg.clone(),
            cols_neg: self.cols_pos.clone(),
            names: self.names.clone(),
        })
    }

    pub fn qualification_graph(&self) -> Result<QualificationGraph> {
        if self.kind != ProfileKind::Binary {
            return Err(Error::RuleNotApplicable {
                rule: "qualification graph".into(),
                kind: self.kind,
            });
        }
        Ok(QualificationGraph {
            successors: self.rows_pos.clone(),
        })
    }

    /// Number of +1 entries in each row.
    pub fn row_positive_counts(&self) -> Vec<usize> {
        self.rows_pos.iter().map(|r| r.len()).collect()
    }

    /// Every row has exactly `r` positive entries and no open cells.
    pub fn is_r_profile(&self, r: usize) -> bool {
        self.kind == ProfileKind::Binary && self.rows_pos.iter().all(|row| row.len() == r)
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Profile({}, n={})", self.kind, self.n)?;
        for a in 0..self.n {
            let row: String = (0..self.n).map(|b| self.cell(a, b).symbol()).collect();
            writeln!(f, "  {:>4} {row}", self.names[a])?;
        }
        Ok(())
    }
}

/// Directed graph with an arc `a -> b` whenever `a` qualifies `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualificationGraph {
    successors: Vec<IndividualSet>,
}

impl QualificationGraph {
    pub fn vertex_count(&self) -> usize {
        self.successors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.successors.iter().map(|s| s.len()).sum()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.successors[a].contains(b)
    }

    pub fn successors(&self, a: usize) -> IndividualSet {
        self.successors[a]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |b| (a, b)))
    }

    /// Vertices reachable from `start` (inclusive) using only vertices in `within`.
    pub fn reachable_within(&self, start: IndividualSet, within: IndividualSet) -> IndividualSet {
        let mut seen = start.intersection(within);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = IndividualSet::EMPTY;
            for a in frontier {
                next = next.union(self.successors[a]);
            }
            frontier = next.intersection(within).difference(seen);
            seen = seen.union(frontier);
        }
        seen
    }
}
