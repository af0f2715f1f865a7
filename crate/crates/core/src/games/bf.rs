use std::collections::HashMap;
use std::sync::Mutex;

use super::{GameError, Rank, Result, Round, Side, Transcript};
use crate::structures::{check_profiles, iso_search, Discrepancy, Elem, FinStructure, PartialIso, SortedTuple};

/// Which relation a position is being evaluated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `(S, a) ≡_α (T, b)`.
    Sym,
    /// `(S, a) ≤_α (T, b)`: Spoiler moves in `T`.
    Leq,
    /// `(T, b) ≤_α (S, a)`: Spoiler moves in `S`.
    Geq,
}

impl Mode {
    fn spoiler_side(self) -> Side {
        match self {
            Mode::Leq => Side::Right,
            Mode::Geq => Side::Left,
            Mode::Sym => unreachable!("symmetric mode moves on both sides"),
        }
    }

    fn flip(self) -> Mode {
        match self {
            Mode::Leq => Mode::Geq,
            Mode::Geq => Mode::Leq,
            Mode::Sym => Mode::Sym,
        }
    }
}

type MemoKey = (Vec<(u32, u32, u32)>, u32, Mode);

/// Game solver for a fixed pair of structures. The memo table is shared and
/// safe to use from several threads.
pub struct Engine<'a> {
    s: &'a FinStructure,
    t: &'a FinStructure,
    memo: Mutex<HashMap<MemoKey, bool>>,
}

impl<'a> Engine<'a> {
    pub fn new(s: &'a FinStructure, t: &'a FinStructure) -> Result<Self> {
        if s.signature() != t.signature() {
            return Err(crate::structures::StructureError::SignatureMismatch.into());
        }
        Ok(Engine { s, t, memo: Mutex::new(HashMap::new()) })
    }

    pub fn left(&self) -> &'a FinStructure {
        self.s
    }

    pub fn right(&self) -> &'a FinStructure {
        self.t
    }

    /// The closed position generated by `a ↦ b`, or the reason it is not a
    /// partial isomorphism.
    pub fn position(&self, a: &SortedTuple, b: &SortedTuple) -> Result<std::result::Result<PartialIso<'a>, Discrepancy>> {
        check_profiles(self.s, a, self.t, b)?;
        Ok(PartialIso::from_pairs(self.s, self.t, a.0.iter().copied().zip(b.0.iter().copied())))
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().unwrap().len()
    }

    /// Decides the relation at `rank` for a consistent position.
    pub fn holds(&self, p: &PartialIso<'a>, rank: u32, mode: Mode) -> bool {
        if rank == 0 {
            return true;
        }
        let key = (p.key(), rank, mode);
        if let Some(&v) = self.memo.lock().unwrap().get(&key) {
            return v;
        }
        let v = match mode {
            Mode::Sym => (0..rank).all(|beta| {
                [Side::Left, Side::Right]
                    .into_iter()
                    .all(|side| self.has_response(p, side, &mut |q| self.holds(q, beta, Mode::Sym)))
            }),
            Mode::Leq | Mode::Geq => {
                let side = mode.spoiler_side();
                (0..rank).all(|beta| self.has_response(p, side, &mut |q| self.holds(q, beta, mode.flip())))
            }
        };
        self.memo.lock().unwrap().insert(key, v);
        v
    }

    fn has_response(&self, p: &PartialIso<'a>, side: Side, pred: &mut dyn FnMut(&PartialIso<'a>) -> bool) -> bool {
        let mut last = None;
        self.search(p, side, pred, &mut last)
    }

    /// Enumerates extensions of `p` that are total on `side`, in carrier
    /// order, stopping at the first one accepted by `pred`.
    fn search(
        &self,
        p: &PartialIso<'a>,
        side: Side,
        pred: &mut dyn FnMut(&PartialIso<'a>) -> bool,
        last: &mut Option<Discrepancy>,
    ) -> bool {
        let (mover, other) = match side {
            Side::Left => (self.s, self.t),
            Side::Right => (self.t, self.s),
        };
        let mapped = |q: &PartialIso<'a>, e: Elem| match side {
            Side::Left => q.image(e).is_some(),
            Side::Right => q.preimage(e).is_some(),
        };
        let Some(x) = mover.elements().find(|&e| !mapped(p, e)) else {
            return pred(p);
        };
        for j in 0..other.carrier_size(x.sort) {
            let y = Elem::new(x.sort, j);
            let taken = match side {
                Side::Left => p.preimage(y).is_some(),
                Side::Right => p.image(y).is_some(),
            };
            if taken {
                continue;
            }
            let pair = match side {
                Side::Left => (x, y),
                Side::Right => (y, x),
            };
            let mut q = p.clone();
            match q.extend([pair]) {
                Ok(()) => {
                    if self.search(&q, side, pred, last) {
                        return true;
                    }
                }
                Err(d) => *last = Some(d),
            }
        }
        false
    }

    fn first_response(&self, p: &PartialIso<'a>, side: Side) -> (Option<PartialIso<'a>>, Option<Discrepancy>) {
        let mut first = None;
        let mut last = None;
        self.search(
            p,
            side,
            &mut |q| {
                first = Some(q.clone());
                true
            },
            &mut last,
        );
        (first, last)
    }

    fn enumeration(&self, side: Side) -> SortedTuple {
        match side {
            Side::Left => self.s.enumeration(),
            Side::Right => self.t.enumeration(),
        }
    }

    fn answer(&self, q: &PartialIso<'a>, side: Side) -> SortedTuple {
        let played = self.enumeration(side);
        SortedTuple(
            played
                .0
                .iter()
                .map(|&e| match side {
                    Side::Left => q.image(e).unwrap(),
                    Side::Right => q.preimage(e).unwrap(),
                })
                .collect(),
        )
    }

    /// Builds a transcript for a position. Spoiler moves are tried left
    /// side first, then by increasing target rank.
    pub fn transcript(&self, p: &PartialIso<'a>, rank: u32, mode: Mode) -> Transcript {
        if self.holds(p, rank, mode) {
            return Transcript::won(true);
        }
        let mut t = Transcript::won(false);
        self.explain(p, rank, mode, &mut t);
        t
    }

    fn explain(&self, p: &PartialIso<'a>, rank: u32, mode: Mode, out: &mut Transcript) {
        let moves: Vec<(Side, u32, Mode)> = match mode {
            Mode::Sym => [Side::Left, Side::Right]
                .into_iter()
                .flat_map(|side| (0..rank).map(move |b| (side, b, Mode::Sym)))
                .collect(),
            _ => (0..rank).map(|b| (mode.spoiler_side(), b, mode.flip())).collect(),
        };
        for (side, beta, next) in moves {
            if self.has_response(p, side, &mut |q| self.holds(q, beta, next)) {
                continue;
            }
            let (first, last) = self.first_response(p, side);
            out.rounds.push(Round {
                side,
                played: self.enumeration(side),
                response: first.as_ref().map(|q| self.answer(q, side)),
                rank_before: rank,
                rank_after: beta,
            });
            match first {
                Some(q) => self.explain(&q, beta, next, out),
                None => out.discrepancy = last.map(|d| d.describe(self.s, self.t)),
            }
            return;
        }
        out.discrepancy = Some("no losing move found".into());
    }
}

fn decide(s: &FinStructure, a: &SortedTuple, t: &FinStructure, b: &SortedTuple, alpha: u32, mode: Mode) -> Result<(bool, Transcript)> {
    let engine = Engine::new(s, t)?;
    match engine.position(a, b)? {
        Err(d) => Ok((
            false,
            Transcript { verdict: false, rounds: Vec::new(), discrepancy: Some(d.describe(s, t)) },
        )),
        Ok(p) => {
            let tr = engine.transcript(&p, alpha, mode);
            Ok((tr.verdict, tr))
        }
    }
}

/// `(S, a) ≡^bf_α (T, b)`, with a transcript of Spoiler's win on failure.
pub fn bf_sym(s: &FinStructure, a: &SortedTuple, t: &FinStructure, b: &SortedTuple, alpha: u32) -> Result<(bool, Transcript)> {
    decide(s, a, t, b, alpha, Mode::Sym)
}

/// `(S, a) ≤_α (T, b)` for `α ≥ 1`.
pub fn bf_asym(s: &FinStructure, a: &SortedTuple, t: &FinStructure, b: &SortedTuple, alpha: u32) -> Result<(bool, Transcript)> {
    if alpha == 0 {
        return Err(GameError::RankZero);
    }
    decide(s, a, t, b, alpha, Mode::Leq)
}

/// Largest rank at which the structures are equivalent, up to `cap`.
pub fn bf_rank(s: &FinStructure, t: &FinStructure, cap: u32) -> Result<Rank> {
    let engine = Engine::new(s, t)?;
    let Ok(p) = engine.position(&SortedTuple::empty(), &SortedTuple::empty())? else {
        return Ok(Rank::Unrelated);
    };
    for alpha in 1..=cap + 1 {
        if !engine.holds(&p, alpha, Mode::Sym) {
            return Ok(Rank::Finite(alpha - 1));
        }
    }
    // On finite structures rank 1 already forces isomorphism.
    match iso_search(s, t)? {
        Some(_) => Ok(Rank::Stabilized),
        None => Err(GameError::Inconsistent(format!(
            "`{}` and `{}` are equivalent at rank {} but not isomorphic",
            s.name(),
            t.name(),
            cap + 1
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{parse_structure, pure_set};

    const C4: &str = "structure C4
sort G = 0 1 2 3
fun mul/2 : G G -> G = 0 0 -> 0 ; 0 1 -> 1 ; 0 2 -> 2 ; 0 3 -> 3 ; 1 0 -> 1 ; 1 1 -> 2 ; 1 2 -> 3 ; 1 3 -> 0
fun mul/2 : G G -> G = 2 0 -> 2 ; 2 1 -> 3 ; 2 2 -> 0 ; 2 3 -> 1 ; 3 0 -> 3 ; 3 1 -> 0 ; 3 2 -> 1 ; 3 3 -> 2
const e : G = 0
";
    const V4: &str = "structure V4
sort G = e a b c
fun mul/2 : G G -> G = e e -> e ; e a -> a ; e b -> b ; e c -> c ; a e -> a ; a a -> e ; a b -> c ; a c -> b
fun mul/2 : G G -> G = b e -> b ; b a -> c ; b b -> e ; b c -> a ; c e -> c ; c a -> b ; c b -> a ; c c -> e
const e : G = e
";

    fn empty() -> SortedTuple {
        SortedTuple::empty()
    }

    #[test]
    fn pure_sets_rank_zero_and_one() {
        let (one, two) = (pure_set(1), pure_set(2));
        assert!(bf_sym(&one, &empty(), &two, &empty(), 0).unwrap().0);
        let (v, tr) = bf_sym(&one, &empty(), &two, &empty(), 1).unwrap();
        assert!(!v);
        assert_eq!(tr.rounds[0].side, Side::Right);
        assert_eq!(bf_rank(&one, &two, 3).unwrap(), Rank::Finite(0));
    }

    #[test]
    fn cyclic_four_vs_klein() {
        let c4 = parse_structure(C4).unwrap();
        let v4 = parse_structure(V4).unwrap();
        let (v, tr) = bf_sym(&c4, &empty(), &v4, &empty(), 1).unwrap();
        assert!(!v);
        assert_eq!(tr.rounds.len(), 1);
        assert_eq!(tr.rounds[0].side, Side::Left);
        assert!(tr.rounds[0].response.is_none());
        assert!(tr.discrepancy.is_some());
        let text = tr.render(&c4, &v4);
        assert!(text.contains("spoiler plays left (0 1 2 3)"), "{text}");
        assert_eq!(bf_rank(&c4, &v4, 3).unwrap(), Rank::Finite(0));
        assert!(!bf_asym(&v4, &empty(), &c4, &empty(), 2).unwrap().0);
    }

    #[test]
    fn self_pairs_stabilize() {
        let c4 = parse_structure(C4).unwrap();
        assert_eq!(bf_rank(&c4, &c4, 3).unwrap(), Rank::Stabilized);
        for alpha in 1..4 {
            assert!(bf_asym(&c4, &empty(), &c4, &empty(), alpha).unwrap().0);
        }
    }

    #[test]
    fn asymmetric_pure_sets() {
        let (one, two) = (pure_set(1), pure_set(2));
        // Every existential sentence true in the singleton holds in the pair.
        assert!(bf_asym(&two, &empty(), &one, &empty(), 1).unwrap().0);
        // "There are two distinct elements" separates them the other way.
        assert!(!bf_asym(&one, &empty(), &two, &empty(), 1).unwrap().0);
        // At rank 2 Spoiler plays both elements of the pair first.
        assert!(!bf_asym(&two, &empty(), &one, &empty(), 2).unwrap().0);
        assert_eq!(bf_asym(&one, &empty(), &one, &empty(), 0), Err(GameError::RankZero));
    }

    #[test]
    fn transcript_ranks_decrease() {
        let s = parse_structure("sort S = a b c\nrel R/2 : S S = (a b) (b c)\n").unwrap();
        let t = parse_structure("sort S = a b c\nrel R/2 : S S = (a b) (a c)\n").unwrap();
        let (v, tr) = bf_sym(&s, &empty(), &t, &empty(), 3).unwrap();
        assert!(!v);
        for r in &tr.rounds {
            assert!(r.rank_after < r.rank_before);
        }
        let mut prev = u32::MAX;
        for r in &tr.rounds {
            assert!(r.rank_before < prev || prev == u32::MAX);
            prev = r.rank_before;
        }
    }

    #[test]
    fn inconsistent_start_is_reported() {
        let s = parse_structure("sort S = a b\nrel R/2 : S S = (a b)\n").unwrap();
        let a = s.tuple(&["a", "b"]).unwrap();
        let b = s.tuple(&["b", "a"]).unwrap();
        let (v, tr) = bf_sym(&s, &a, &s, &b, 0).unwrap();
        assert!(!v);
        assert!(tr.discrepancy.unwrap().contains("holds on the left only"));
    }
}
