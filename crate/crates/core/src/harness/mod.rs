//! Command layer: configuration, seeded suites and TSV reports.
//!
//! Every command returns a [`Report`] whose records start with a lemma tag
//! from [`TAGS`]. Reports contain no timestamps, so the same configuration
//! and seed give byte-identical output.

mod cmds;
mod config;

use std::fmt;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::contbf::ContError;
use crate::crossed::CrossedError;
use crate::games::GameError;
use crate::groups::GroupError;
use crate::structures::StructureError;

pub use cmds::{cmd_bf, cmd_crossed, cmd_ef, cmd_lemma32, cmd_lemma33, cmd_r0, cmd_ralpha, cmd_selftest, BfArgs, BfMode, EfArgs};
pub use config::SuiteConfig;

/// Tool version printed in every report header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The lemma tags a record may carry.
pub const TAGS: [&str; 14] = [
    "ef-game",
    "bf-sym",
    "bf-asym",
    "bf-rank",
    "scott-finite",
    "karp-transfer",
    "inter-simulation",
    "trace-equality",
    "norm-equality",
    "norm-bounds",
    "crossed-trace",
    "crossed-moments",
    "r0-base",
    "r-alpha",
];

/// Process exit status of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// A lemma check came out false.
    Failure,
    /// Bad input or a refused certificate.
    Input,
    /// A resource cap was hit.
    Cap,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Failure => 1,
            Status::Input => 2,
            Status::Cap => 3,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("{0}")]
    Input(String),
    #[error("certificate refused: {0}")]
    Certificate(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl HarnessError {
    pub fn status(&self) -> Status {
        match self {
            HarnessError::Input(_) | HarnessError::Certificate(_) => Status::Input,
            HarnessError::Cap(_) => Status::Cap,
            HarnessError::Internal(_) => Status::Failure,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

impl From<GroupError> for HarnessError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::CapExceeded { .. } => HarnessError::Cap(e.to_string()),
            _ => HarnessError::Input(e.to_string()),
        }
    }
}

impl From<AlgebraError> for HarnessError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::CapExceeded { .. } => HarnessError::Cap(e.to_string()),
            AlgebraError::NotEqual(w) => HarnessError::Certificate(format!("tuples differ in qf-type, {w}")),
            AlgebraError::Group(g) => g.into(),
            _ => HarnessError::Input(e.to_string()),
        }
    }
}

impl From<CrossedError> for HarnessError {
    fn from(e: CrossedError) -> Self {
        match e {
            CrossedError::CapExceeded { .. } => HarnessError::Cap(e.to_string()),
            CrossedError::Transport(_) | CrossedError::Mismatch(_) => HarnessError::Certificate(e.to_string()),
            CrossedError::Algebra(a) => a.into(),
            CrossedError::Group(g) => g.into(),
            _ => HarnessError::Input(e.to_string()),
        }
    }
}

impl From<ContError> for HarnessError {
    fn from(e: ContError) -> Self {
        match e {
            ContError::Cap { .. } => HarnessError::Cap(e.to_string()),
            ContError::Algebra(a) => a.into(),
            ContError::Crossed(c) => c.into(),
            ContError::Group(g) => g.into(),
            _ => HarnessError::Input(e.to_string()),
        }
    }
}

impl From<GameError> for HarnessError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::Inconsistent(_) => HarnessError::Internal(e.to_string()),
            _ => HarnessError::Input(e.to_string()),
        }
    }
}

impl From<StructureError> for HarnessError {
    fn from(e: StructureError) -> Self {
        HarnessError::Input(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Line {
    Record(String),
    Note(String),
}

/// Header, ordered records and notes, and pass/fail counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    header: Vec<(String, String)>,
    lines: Vec<Line>,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), header: Vec::new(), lines: Vec::new(), passed: 0, failed: 0 }
    }

    /// Adds a `# key: value` header line.
    pub fn echo(&mut self, key: &str, value: impl fmt::Display) {
        self.header.push((key.to_string(), value.to_string()));
    }

    /// Adds `tag  subject  payload`, counting it as passed or failed.
    pub fn record(&mut self, tag: &str, subject: &str, payload: impl fmt::Display, ok: bool) {
        debug_assert!(TAGS.contains(&tag), "unknown tag {tag}");
        self.lines.push(Line::Record(format!("{tag}\t{subject}\t{payload}")));
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }

    /// Adds `#`-prefixed comment lines, one per line of `text`.
    pub fn note(&mut self, text: &str) {
        for l in text.lines() {
            self.lines.push(Line::Note(l.to_string()));
        }
    }

    pub fn records(&self) -> impl Iterator<Item = &str> {
        self.lines.iter().filter_map(|l| match l {
            Line::Record(r) => Some(r.as_str()),
            Line::Note(_) => None,
        })
    }

    /// Records carrying `tag`, with the tag column removed.
    pub fn payloads(&self, tag: &str) -> Vec<&str> {
        self.records().filter_map(|r| r.strip_prefix(tag)?.strip_prefix('\t')).collect()
    }

    pub fn status(&self) -> Status {
        if self.failed == 0 {
            Status::Pass
        } else {
            Status::Failure
        }
    }

    /// Appends the records and counts of `other`, keeping its notes.
    pub fn absorb(&mut self, other: Report) {
        self.lines.extend(other.lines);
        self.passed += other.passed;
        self.failed += other.failed;
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# backforth {VERSION}")?;
        writeln!(f, "# command: {}", self.command)?;
        for (k, v) in &self.header {
            writeln!(f, "# {k}: {v}")?;
        }
        for l in &self.lines {
            match l {
                Line::Record(r) => writeln!(f, "{r}")?,
                Line::Note(n) => writeln!(f, "# {n}")?,
            }
        }
        writeln!(f, "# summary: passed={} failed={} status={}", self.passed, self.failed, self.status().code())
    }
}
