//! Back-and-forth relations, EF games and finitary formula transfer on
//! finite structures.
//!
//! Positions are closed partial isomorphisms between the two structures; on
//! a finite structure a Spoiler tuple move is dominated by a full enumeration
//! of one carrier, so the engine only ever explores those.

mod bf;
mod ef;
mod formula;
mod karp;

use std::fmt;

use thiserror::Error;

use crate::structures::{FinStructure, SortedTuple, StructureError};

pub use bf::{bf_asym, bf_rank, bf_sym, Engine, Mode};
pub use ef::{ef_winner, EfOutcome, Winner};
pub use formula::{eval_formula, parse_formula, parse_pool, random_pool, Class, Formula, Node, Term};
pub use karp::{karp_check, relation_consistency, ConsistencyReport, KarpReport, KarpViolation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("asymmetric relations start at rank 1")]
    RankZero,
    #[error("formula error at line {line}: {msg}")]
    Formula { line: usize, msg: String },
    #[error("profile mismatch: {0}")]
    Profile(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = GameError> = std::result::Result<T, E>;

/// Outcome of a rank computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    /// Equivalent at rank `n` and not at `n + 1`.
    Finite(u32),
    /// Equivalent at every rank and isomorphic.
    Stabilized,
    /// Not even the quantifier-free types agree.
    Unrelated,
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "Finite({n})"),
            Rank::Stabilized => f.write_str("Stabilized"),
            Rank::Unrelated => f.write_str("Unrelated"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// One Spoiler move and Duplicator's answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Round {
    pub side: Side,
    pub played: SortedTuple,
    pub response: Option<SortedTuple>,
    pub rank_before: u32,
    pub rank_after: u32,
}

/// A principal line of play: for losses, Spoiler's winning moves against
/// Duplicator's first consistent replies, ending in a move with no reply.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Transcript {
    pub verdict: bool,
    pub rounds: Vec<Round>,
    pub discrepancy: Option<String>,
}

impl Transcript {
    pub fn won(verdict: bool) -> Self {
        Transcript { verdict, rounds: Vec::new(), discrepancy: None }
    }

    /// Indented plain-text rendering with element names.
    pub fn render(&self, s: &FinStructure, t: &FinStructure) -> String {
        let names = |side: Side, tup: &SortedTuple| {
            let st = if side == Side::Left { s } else { t };
            tup.0.iter().map(|&e| st.element_name(e)).collect::<Vec<_>>().join(" ")
        };
        let mut out = format!("verdict: {}\n", if self.verdict { "holds" } else { "fails" });
        for (depth, r) in self.rounds.iter().enumerate() {
            let pad = "  ".repeat(depth + 1);
            out.push_str(&format!(
                "{pad}rank {} -> {}: spoiler plays {} ({})\n",
                r.rank_before,
                r.rank_after,
                r.side,
                names(r.side, &r.played)
            ));
            match &r.response {
                Some(resp) => out.push_str(&format!("{pad}  duplicator answers {} ({})\n", r.side.other(), names(r.side.other(), resp))),
                None => out.push_str(&format!("{pad}  duplicator has no answer\n")),
            }
        }
        if let Some(d) = &self.discrepancy {
            let pad = "  ".repeat(self.rounds.len() + 1);
            out.push_str(&format!("{pad}discrepancy: {d}\n"));
        }
        out
    }
}
