use std::fmt;

use super::{product_indices, Elem, FinStructure};

/// Reason a set of element pairs fails to extend to an isomorphism of
/// generated substructures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Discrepancy {
    /// One left element would have to go to two right elements.
    NotFunctional { left: Elem, right: (Elem, Elem) },
    /// Two left elements would have to go to one right element.
    NotInjective { left: (Elem, Elem), right: Elem },
    /// A relation holds on one side only.
    Relation { rel: usize, left: Vec<Elem>, right: Vec<Elem>, holds_left: bool },
}

impl Discrepancy {
    /// Human-readable rendering with element names.
    pub fn describe(&self, s: &FinStructure, t: &FinStructure) -> String {
        match self {
            Discrepancy::NotFunctional { left, right } => format!(
                "{} must map to both {} and {}",
                s.element_name(*left),
                t.element_name(right.0),
                t.element_name(right.1)
            ),
            Discrepancy::NotInjective { left, right } => format!(
                "{} and {} both map to {}",
                s.element_name(left.0),
                s.element_name(left.1),
                t.element_name(*right)
            ),
            Discrepancy::Relation { rel, left, right, holds_left } => {
                let name = &s.signature().relations[*rel].name;
                let l: Vec<&str> = left.iter().map(|&e| s.element_name(e)).collect();
                let r: Vec<&str> = right.iter().map(|&e| t.element_name(e)).collect();
                let (yes, no) = if *holds_left { ("left", "right") } else { ("right", "left") };
                format!("{name}({}) vs {name}({}): holds on the {yes} only, not the {no}", l.join(","), r.join(","))
            }
        }
    }
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A partial isomorphism between two structures of the same signature,
/// always kept closed under functions and constants.
#[derive(Debug, Clone)]
pub struct PartialIso<'a> {
    left: &'a FinStructure,
    right: &'a FinStructure,
    fwd: Vec<Vec<Option<u32>>>,
    bwd: Vec<Vec<Option<u32>>>,
    /// Mapped pairs in insertion order.
    pairs: Vec<(Elem, Elem)>,
}

impl<'a> PartialIso<'a> {
    /// The closure of the constants alone.
    pub fn new(left: &'a FinStructure, right: &'a FinStructure) -> Result<Self, Discrepancy> {
        let sorts = left.signature().sorts.len();
        let mut p = PartialIso {
            left,
            right,
            fwd: (0..sorts).map(|s| vec![None; left.carrier_size(s)]).collect(),
            bwd: (0..sorts).map(|s| vec![None; right.carrier_size(s)]).collect(),
            pairs: Vec::new(),
        };
        let consts: Vec<(Elem, Elem)> =
            (0..left.signature().constants.len()).map(|c| (left.constant(c), right.constant(c))).collect();
        p.extend(consts)?;
        Ok(p)
    }

    /// Closure of the given pairs together with the constants.
    pub fn from_pairs<I>(left: &'a FinStructure, right: &'a FinStructure, pairs: I) -> Result<Self, Discrepancy>
    where
        I: IntoIterator<Item = (Elem, Elem)>,
    {
        let mut p = Self::new(left, right)?;
        p.extend(pairs)?;
        Ok(p)
    }

    pub fn left(&self) -> &'a FinStructure {
        self.left
    }

    pub fn right(&self) -> &'a FinStructure {
        self.right
    }

    pub fn image(&self, e: Elem) -> Option<Elem> {
        self.fwd[e.sort][e.index].map(|i| Elem::new(e.sort, i as usize))
    }

    pub fn preimage(&self, e: Elem) -> Option<Elem> {
        self.bwd[e.sort][e.index].map(|i| Elem::new(e.sort, i as usize))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(Elem, Elem)] {
        &self.pairs
    }

    /// True when every element of both structures is mapped.
    pub fn is_total(&self) -> bool {
        self.pairs.len() == self.left.total_size() && self.pairs.len() == self.right.total_size()
    }

    /// Canonical key: the sorted pair set.
    pub fn key(&self) -> Vec<(u32, u32, u32)> {
        let mut k: Vec<(u32, u32, u32)> =
            self.pairs.iter().map(|(a, b)| (a.sort as u32, a.index as u32, b.index as u32)).collect();
        k.sort_unstable();
        k
    }

    /// Adds pairs and restores closure. On failure `self` is left in an
    /// unspecified state; callers clone first when they need to backtrack.
    pub fn extend<I>(&mut self, pairs: I) -> Result<(), Discrepancy>
    where
        I: IntoIterator<Item = (Elem, Elem)>,
    {
        let start = self.pairs.len();
        for (a, b) in pairs {
            self.insert(a, b)?;
        }
        self.close_from(start)
    }

    fn insert(&mut self, a: Elem, b: Elem) -> Result<bool, Discrepancy> {
        debug_assert_eq!(a.sort, b.sort);
        match (self.image(a), self.preimage(b)) {
            (Some(x), _) if x == b => Ok(false),
            (Some(x), _) => Err(Discrepancy::NotFunctional { left: a, right: (x, b) }),
            (None, Some(y)) => Err(Discrepancy::NotInjective { left: (y, a), right: b }),
            (None, None) => {
                self.fwd[a.sort][a.index] = Some(b.index as u32);
                self.bwd[b.sort][b.index] = Some(a.index as u32);
                self.pairs.push((a, b));
                Ok(true)
            }
        }
    }

    /// Closes under functions, treating pairs from position `start` on as
    /// new, then checks relations on every tuple touching a new pair.
    fn close_from(&mut self, start: usize) -> Result<(), Discrepancy> {
        let sig = self.left.signature();
        let mut frontier = start;
        while frontier < self.pairs.len() {
            let end = self.pairs.len();
            for (f, sym) in sig.functions.iter().enumerate() {
                for (la, ra) in self.new_arg_tuples(&sym.args, frontier, end) {
                    let a = Elem::new(sym.result, self.left.apply(f, &la));
                    let b = Elem::new(sym.result, self.right.apply(f, &ra));
                    self.insert(a, b)?;
                }
            }
            frontier = end;
        }
        let end = self.pairs.len();
        for (r, sym) in sig.relations.iter().enumerate() {
            for (la, ra) in self.new_arg_tuples(&sym.profile, start, end) {
                let hl = self.left.holds(r, &la);
                if hl != self.right.holds(r, &ra) {
                    return Err(Discrepancy::Relation {
                        rel: r,
                        left: la.iter().zip(&sym.profile).map(|(&i, &s)| Elem::new(s, i)).collect(),
                        right: ra.iter().zip(&sym.profile).map(|(&i, &s)| Elem::new(s, i)).collect(),
                        holds_left: hl,
                    });
                }
            }
        }
        Ok(())
    }

    /// Argument tuples over mapped elements that use at least one pair with
    /// insertion position in `lo..hi` and none at or beyond `hi`. Returned as
    /// matching (left, right) index vectors.
    fn new_arg_tuples(&self, profile: &[usize], lo: usize, hi: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        if profile.is_empty() {
            // Nullary symbols are checked once, with the first batch.
            return if lo == 0 { vec![(Vec::new(), Vec::new())] } else { Vec::new() };
        }
        let pools: Vec<Vec<usize>> = profile
            .iter()
            .map(|&s| (0..hi).filter(|&i| self.pairs[i].0.sort == s).collect())
            .collect();
        product_indices(&pools)
            .filter(|pos| pos.iter().any(|&i| i >= lo))
            .map(|pos| {
                let l = pos.iter().map(|&i| self.pairs[i].0.index).collect();
                let r = pos.iter().map(|&i| self.pairs[i].1.index).collect();
                (l, r)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{Signature, StructureBuilder};

    fn chain(name: &str, order: &[&str]) -> FinStructure {
        let sig = Signature::one_binary_relation();
        let mut b = StructureBuilder::new(name, sig);
        let mut names: Vec<&str> = order.to_vec();
        names.sort();
        b.set_carrier(0, &names).unwrap();
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                let x = names.iter().position(|n| *n == order[i]).unwrap();
                let y = names.iter().position(|n| *n == order[j]).unwrap();
                b.add_tuple(0, vec![x, y]).unwrap();
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn relation_discrepancy_is_reported() {
        let s = chain("s", &["a", "b"]);
        let a = s.find("a").unwrap();
        let b = s.find("b").unwrap();
        let err = PartialIso::from_pairs(&s, &s, [(a, b), (b, a)]).unwrap_err();
        assert!(matches!(err, Discrepancy::Relation { .. }));
        assert!(err.describe(&s, &s).contains("R("));
    }

    #[test]
    fn injectivity_and_functionality() {
        let s = chain("s", &["a", "b"]);
        let a = s.find("a").unwrap();
        let b = s.find("b").unwrap();
        assert!(matches!(
            PartialIso::from_pairs(&s, &s, [(a, a), (b, a)]),
            Err(Discrepancy::NotInjective { .. })
        ));
        assert!(matches!(
            PartialIso::from_pairs(&s, &s, [(a, a), (a, b)]),
            Err(Discrepancy::NotFunctional { .. })
        ));
    }

    #[test]
    fn nullary_relation_is_checked_on_empty_map() {
        let mut sig = Signature::new();
        sig.add_sort("S").unwrap();
        sig.add_relation("P", vec![]).unwrap();
        let mut b1 = StructureBuilder::new("yes", sig.clone());
        b1.set_carrier(0, &["x"]).unwrap();
        b1.add_tuple(0, vec![]).unwrap();
        let mut b2 = StructureBuilder::new("no", sig);
        b2.set_carrier(0, &["x"]).unwrap();
        let (s, t) = (b1.build().unwrap(), b2.build().unwrap());
        assert!(PartialIso::new(&s, &t).is_err());
        assert!(PartialIso::new(&s, &s).is_ok());
    }
}
