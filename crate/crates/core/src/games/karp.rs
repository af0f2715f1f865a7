use super::{eval_formula, Class, Engine, Formula, Mode, Result};
use crate::structures::{FinStructure, SortedTuple};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KarpViolation {
    pub formula: usize,
    pub relation: &'static str,
    pub detail: String,
}

/// Outcome of checking formula transfer against the game relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KarpReport {
    pub alpha: u32,
    /// `(S, a) ≤_α (T, b)`; false at rank 0, where it is undefined.
    pub leq: bool,
    /// `(T, b) ≤_α (S, a)`.
    pub geq: bool,
    pub sym: bool,
    pub checked: usize,
    /// Formulas above rank `α` that were not used.
    pub skipped: usize,
    /// Formulas whose truth values differ between the two sides.
    pub distinguishing: Vec<usize>,
    pub violations: Vec<KarpViolation>,
}

/// Checks that whenever a game relation holds at `alpha`, the corresponding
/// Σ_α/Π_α formulas in `pool` transfer. Violations indicate an engine bug.
pub fn karp_check(
    s: &FinStructure,
    a: &SortedTuple,
    t: &FinStructure,
    b: &SortedTuple,
    alpha: u32,
    pool: &[Formula],
) -> Result<KarpReport> {
    let engine = Engine::new(s, t)?;
    let pos = engine.position(a, b)?;
    let (leq, geq, sym) = match &pos {
        Err(_) => (false, false, false),
        Ok(p) => (
            alpha >= 1 && engine.holds(p, alpha, Mode::Leq),
            alpha >= 1 && engine.holds(p, alpha, Mode::Geq),
            engine.holds(p, alpha, Mode::Sym),
        ),
    };
    let mut rep = KarpReport {
        alpha,
        leq,
        geq,
        sym,
        checked: 0,
        skipped: 0,
        distinguishing: Vec::new(),
        violations: Vec::new(),
    };
    for (i, f) in pool.iter().enumerate() {
        let is_sigma = f.in_class(Class::Sigma(alpha));
        let is_pi = f.in_class(Class::Pi(alpha));
        if !is_sigma && !is_pi {
            rep.skipped += 1;
            continue;
        }
        rep.checked += 1;
        let vs = eval_formula(s, f, a)?;
        let vt = eval_formula(t, f, b)?;
        if vs != vt {
            rep.distinguishing.push(i);
        }
        let mut fail = |relation: &'static str, detail: &str| {
            rep.violations.push(KarpViolation { formula: i, relation, detail: format!("{detail}: {f}") })
        };
        if leq {
            if is_sigma && vt && !vs {
                fail("leq", "sigma formula true on the right, false on the left");
            }
            if is_pi && vs && !vt {
                fail("leq", "pi formula true on the left, false on the right");
            }
        }
        if geq {
            if is_sigma && vs && !vt {
                fail("geq", "sigma formula true on the left, false on the right");
            }
            if is_pi && vt && !vs {
                fail("geq", "pi formula true on the right, false on the left");
            }
        }
        if sym && vs != vt {
            fail("sym", "formula differs although the symmetric relation holds");
        }
    }
    Ok(rep)
}

/// Per-rank relation values for a pair of structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyRow {
    pub alpha: u32,
    pub sym: bool,
    pub leq: bool,
    pub geq: bool,
    pub leq_odd: bool,
    pub geq_odd: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub rows: Vec<ConsistencyRow>,
    pub violations: Vec<String>,
}

/// Checks the simulation relationships between the symmetric and
/// asymmetric relations for `α ≤ cap`: `≡_α` gives `≤_α` both ways, and
/// `≤_{1+2α}` in either direction gives `≡_α`.
pub fn relation_consistency(s: &FinStructure, t: &FinStructure, cap: u32) -> Result<ConsistencyReport> {
    let engine = Engine::new(s, t)?;
    let pos = engine.position(&SortedTuple::empty(), &SortedTuple::empty())?;
    let mut rep = ConsistencyReport { rows: Vec::new(), violations: Vec::new() };
    for alpha in 0..=cap {
        let eval = |rank: u32, mode: Mode| match &pos {
            Ok(p) => engine.holds(p, rank, mode),
            Err(_) => false,
        };
        let row = ConsistencyRow {
            alpha,
            sym: eval(alpha, Mode::Sym),
            leq: alpha >= 1 && eval(alpha, Mode::Leq),
            geq: alpha >= 1 && eval(alpha, Mode::Geq),
            leq_odd: eval(1 + 2 * alpha, Mode::Leq),
            geq_odd: eval(1 + 2 * alpha, Mode::Geq),
        };
        if alpha >= 1 && row.sym && !(row.leq && row.geq) {
            rep.violations.push(format!("rank {alpha}: symmetric holds but an asymmetric direction fails"));
        }
        if row.leq_odd && !row.sym {
            rep.violations.push(format!("rank {alpha}: S <= T at rank {} without symmetric rank {alpha}", 1 + 2 * alpha));
        }
        if row.geq_odd && !row.sym {
            rep.violations.push(format!("rank {alpha}: T <= S at rank {} without symmetric rank {alpha}", 1 + 2 * alpha));
        }
        rep.rows.push(row);
    }
    Ok(rep)
}
