use super::{eval_formula, Formula, GameError, Result, Round, Side, Transcript};
use crate::structures::{Elem, FinStructure, SortedTuple, StructureError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    Spoiler,
    Duplicator,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfOutcome {
    pub winner: Winner,
    pub transcript: Transcript,
}

struct Game<'a> {
    s: &'a FinStructure,
    t: &'a FinStructure,
    phi: &'a [Formula],
    sorts: Vec<usize>,
}

impl Game<'_> {
    /// Index of the first formula on which the final tuples disagree.
    fn violated(&self, a: &[Elem], b: &[Elem]) -> Option<usize> {
        let (ta, tb) = (SortedTuple(a.to_vec()), SortedTuple(b.to_vec()));
        self.phi.iter().position(|f| {
            eval_formula(self.s, f, &ta).expect("checked profile") != eval_formula(self.t, f, &tb).expect("checked profile")
        })
    }

    fn moves(&self, side: Side, round: usize) -> Vec<Elem> {
        let st = if side == Side::Left { self.s } else { self.t };
        let sort = self.sorts[round];
        (0..st.carrier_size(sort)).map(|i| Elem::new(sort, i)).collect()
    }

    /// Spoiler's first winning move from this position, if any.
    fn spoiler_move(&self, a: &mut Vec<Elem>, b: &mut Vec<Elem>) -> Option<(Side, Elem)> {
        let round = a.len();
        for side in [Side::Left, Side::Right] {
            for x in self.moves(side, round) {
                if self.duplicator_reply(side, x, a, b).is_none() {
                    return Some((side, x));
                }
            }
        }
        None
    }

    /// Duplicator's first surviving reply to `x` played on `side`.
    fn duplicator_reply(&self, side: Side, x: Elem, a: &mut Vec<Elem>, b: &mut Vec<Elem>) -> Option<Elem> {
        let round = a.len();
        for y in self.moves(side.other(), round) {
            let (l, r) = if side == Side::Left { (x, y) } else { (y, x) };
            a.push(l);
            b.push(r);
            let ok = if round + 1 == self.sorts.len() {
                self.violated(a, b).is_none()
            } else {
                self.spoiler_move(a, b).is_none()
            };
            a.pop();
            b.pop();
            if ok {
                return Some(y);
            }
        }
        None
    }
}

/// Solves the `n`-round EF game with winning condition given by the atomic
/// formulas `phi` in `x1..xn`.
pub fn ef_winner(s: &FinStructure, t: &FinStructure, phi: &[Formula], n: usize) -> Result<EfOutcome> {
    if s.signature() != t.signature() {
        return Err(StructureError::SignatureMismatch.into());
    }
    let mut sorts: Vec<Option<usize>> = vec![None; n];
    for (i, f) in phi.iter().enumerate() {
        if f.signature() != s.signature() {
            return Err(StructureError::SignatureMismatch.into());
        }
        if !f.is_atomic() {
            return Err(GameError::Profile(format!("formula {} is not atomic: {f}", i + 1)));
        }
        if f.arity() > n {
            return Err(GameError::Profile(format!("formula {} mentions x{} but the game has {n} rounds", i + 1, f.arity())));
        }
        for (k, slot) in sorts.iter_mut().enumerate().take(f.arity()) {
            if let Some(srt) = f.free_sort(k) {
                match slot {
                    Some(prev) if *prev != srt => {
                        return Err(GameError::Profile(format!("x{} is used at two sorts", k + 1)));
                    }
                    _ => *slot = Some(srt),
                }
            }
        }
    }
    let game = Game { s, t, phi, sorts: sorts.into_iter().map(|x| x.unwrap_or(0)).collect() };
    if n == 0 {
        let v = game.violated(&[], &[]);
        let winner = if v.is_none() { Winner::Duplicator } else { Winner::Spoiler };
        let mut transcript = Transcript::won(v.is_none());
        transcript.discrepancy = v.map(|i| format!("formula {} differs: {}", i + 1, phi[i]));
        return Ok(EfOutcome { winner, transcript });
    }
    let (mut a, mut b) = (Vec::new(), Vec::new());
    if game.spoiler_move(&mut a, &mut b).is_none() {
        return Ok(EfOutcome { winner: Winner::Duplicator, transcript: Transcript::won(true) });
    }
    let mut transcript = Transcript::won(false);
    while a.len() < n {
        let (side, x) = game.spoiler_move(&mut a, &mut b).expect("spoiler keeps winning");
        let reply = game.moves(side.other(), a.len()).first().copied();
        let remaining = (n - a.len()) as u32;
        transcript.rounds.push(Round {
            side,
            played: SortedTuple(vec![x]),
            response: reply.map(|y| SortedTuple(vec![y])),
            rank_before: remaining,
            rank_after: remaining - 1,
        });
        let Some(y) = reply else {
            transcript.discrepancy = Some("duplicator has no element of the required sort".into());
            break;
        };
        let (l, r) = if side == Side::Left { (x, y) } else { (y, x) };
        a.push(l);
        b.push(r);
    }
    if a.len() == n {
        if let Some(i) = game.violated(&a, &b) {
            transcript.discrepancy = Some(format!("formula {} differs: {}", i + 1, phi[i]));
        }
    }
    Ok(EfOutcome { winner: Winner::Spoiler, transcript })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::parse_formula;
    use crate::structures::parse_structure;

    fn chain2() -> FinStructure {
        parse_structure("structure chain\nsort S = a b\nrel lt/2 : S S = (a b)\n").unwrap()
    }

    fn antichain2() -> FinStructure {
        parse_structure("structure anti\nsort S = a b\nrel lt/2 : S S =\n").unwrap()
    }

    #[test]
    fn empty_phi_is_a_duplicator_win() {
        let out = ef_winner(&chain2(), &antichain2(), &[], 3).unwrap();
        assert_eq!(out.winner, Winner::Duplicator);
    }

    #[test]
    fn copy_strategy_on_equal_structures() {
        let s = chain2();
        let phi = [parse_formula(s.signature(), "(atom lt x1 x2)").unwrap(), parse_formula(s.signature(), "(eq x1 x2)").unwrap()];
        assert_eq!(ef_winner(&s, &s, &phi, 2).unwrap().winner, Winner::Duplicator);
    }

    #[test]
    fn chain_versus_antichain() {
        let (s, t) = (chain2(), antichain2());
        let phi = [parse_formula(s.signature(), "(atom lt x1 x2)").unwrap()];
        let out = ef_winner(&s, &t, &phi, 2).unwrap();
        assert_eq!(out.winner, Winner::Spoiler);
        assert_eq!(out.transcript.rounds.len(), 2);
        assert!(out.transcript.discrepancy.as_deref().unwrap().contains("formula 1"));
        // One round is not enough to see a pair.
        let phi1 = [parse_formula(s.signature(), "(atom lt x1 x1)").unwrap()];
        assert_eq!(ef_winner(&s, &t, &phi1, 1).unwrap().winner, Winner::Duplicator);
    }

    #[test]
    fn variables_beyond_rounds_are_rejected() {
        let s = chain2();
        let phi = [parse_formula(s.signature(), "(atom lt x1 x3)").unwrap()];
        assert!(matches!(ef_winner(&s, &s, &phi, 2), Err(GameError::Profile(_))));
        let q = [parse_formula(s.signature(), "(exists (y) (atom lt x1 y))").unwrap()];
        assert!(ef_winner(&s, &s, &q, 2).is_err());
    }
}
