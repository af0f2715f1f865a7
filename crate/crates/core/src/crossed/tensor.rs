use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::{CrossedError, MatElement, MultiMatrixAlgebra, Result};
use crate::algebra::GaussScalar;
use crate::groups::{Group, Word};

/// An elementary tensor `⊗_{h ∈ F} x_h`, legs with factor `1` omitted.
pub type Elementary = BTreeMap<Word, MatElement>;

/// Expanded coordinates: one `(block, row, col)` per leg, in leg order.
pub type Expanded = BTreeMap<Vec<MatUnit>, GaussScalar>;

/// `(block, row, column)` of a matrix unit.
type MatUnit = (usize, usize, usize);

/// A finite sum of elementary tensors in `M^{⊗F}`, legs labelled by group
/// elements. Each elementary tensor is stored with the first nonzero entry
/// of every leg scaled to 1, so equal elementary tensors share a key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorElement {
    alg: Arc<MultiMatrixAlgebra>,
    terms: BTreeMap<Elementary, GaussScalar>,
}

fn normalize(mut c: GaussScalar, legs: Elementary) -> Option<(Elementary, GaussScalar)> {
    let mut out = Elementary::new();
    for (leg, x) in legs {
        let lead = x.leading()?.clone();
        let x = x.scale(&lead.inv()?);
        c = &c * &lead;
        if !x.is_one() {
            out.insert(leg, x);
        }
    }
    (!c.is_zero()).then_some((out, c))
}

impl TensorElement {
    pub fn zero(alg: &Arc<MultiMatrixAlgebra>) -> Self {
        TensorElement { alg: alg.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(alg: &Arc<MultiMatrixAlgebra>, c: GaussScalar) -> Self {
        let mut t = Self::zero(alg);
        t.push(c, Elementary::new());
        t
    }

    pub fn one(alg: &Arc<MultiMatrixAlgebra>) -> Self {
        Self::scalar(alg, GaussScalar::one())
    }

    /// The elementary tensor with the given leg factors.
    pub fn embed(alg: &Arc<MultiMatrixAlgebra>, factors: Vec<(Word, MatElement)>) -> Result<Self> {
        let mut legs = Elementary::new();
        for (leg, x) in factors {
            if x.algebra() != alg {
                return Err(CrossedError::Dimension(format!("{} vs {alg}", x.algebra())));
            }
            if legs.insert(leg.clone(), x).is_some() {
                return Err(CrossedError::DuplicateLeg(format!("{leg:?}")));
            }
        }
        let mut t = Self::zero(alg);
        t.push(GaussScalar::one(), legs);
        Ok(t)
    }

    fn push(&mut self, c: GaussScalar, legs: Elementary) {
        if let Some((k, c)) = normalize(c, legs) {
            match self.terms.get_mut(&k) {
                Some(v) => {
                    *v += &c;
                    if v.is_zero() {
                        self.terms.remove(&k);
                    }
                }
                None => {
                    self.terms.insert(k, c);
                }
            }
        }
    }

    pub fn algebra(&self) -> &Arc<MultiMatrixAlgebra> {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<Elementary, GaussScalar> {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Every leg that carries a non-identity factor in some term.
    pub fn legs(&self) -> BTreeSet<Word> {
        self.terms.keys().flat_map(|k| k.keys().cloned()).collect()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.alg == o.alg {
            Ok(())
        } else {
            Err(CrossedError::Dimension(format!("{} vs {}", self.alg, o.alg)))
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut t = self.clone();
        for (k, c) in &o.terms {
            t.push(c.clone(), k.clone());
        }
        Ok(t)
    }

    pub fn scale(&self, c: &GaussScalar) -> Self {
        let mut t = Self::zero(&self.alg);
        for (k, x) in &self.terms {
            t.push(c * x, k.clone());
        }
        t
    }

    /// Legwise product of elementary tensors, extended bilinearly.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut t = Self::zero(&self.alg);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let mut legs = ka.clone();
                for (leg, y) in kb {
                    let x = match legs.remove(leg) {
                        Some(x) => x.mul(y)?,
                        None => y.clone(),
                    };
                    legs.insert(leg.clone(), x);
                }
                t.push(ca * cb, legs);
            }
        }
        Ok(t)
    }

    pub fn adjoint(&self) -> Self {
        let mut t = Self::zero(&self.alg);
        for (k, c) in &self.terms {
            t.push(c.conj(), k.iter().map(|(l, x)| (l.clone(), x.adjoint())).collect());
        }
        t
    }

    /// `τ(⊗ x_h) = Π τ_M(x_h)`, extended linearly.
    pub fn trace(&self) -> GaussScalar {
        let mut s = GaussScalar::zero();
        for (k, c) in &self.terms {
            s += &k.values().fold(c.clone(), |acc, x| &acc * &x.trace());
        }
        s
    }

    /// Relabels every leg through `f`, which must be injective.
    pub(crate) fn relabel(&self, mut f: impl FnMut(&Word) -> Result<Word>) -> Result<Self> {
        let mut t = Self::zero(&self.alg);
        for (k, c) in &self.terms {
            let mut legs = Elementary::new();
            for (l, x) in k {
                legs.insert(f(l)?, x.clone());
            }
            t.push(c.clone(), legs);
        }
        Ok(t)
    }

    /// Kronecker expansion over `legs`, which must contain every leg in use.
    pub fn expand(&self, legs: &[Word], cap: usize) -> Result<Expanded> {
        let pos: HashMap<&Word, usize> = legs.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let one: Vec<(usize, usize, usize, GaussScalar)> =
            MatElement::one(&self.alg).entries().map(|(b, r, c, x)| (b, r, c, x.clone())).collect();
        let mut out = Expanded::new();
        for (k, c) in &self.terms {
            let mut per_leg: Vec<Vec<(usize, usize, usize, GaussScalar)>> = vec![one.clone(); legs.len()];
            for (l, x) in k {
                let &i = pos.get(l).ok_or_else(|| CrossedError::Dimension("leg missing from expansion".into()))?;
                per_leg[i] = x.entries().map(|(b, r, c, x)| (b, r, c, x.clone())).collect();
            }
            let mut partial: Vec<(Vec<MatUnit>, GaussScalar)> = vec![(Vec::new(), c.clone())];
            for entries in &per_leg {
                let mut next = Vec::with_capacity(partial.len() * entries.len());
                for (key, v) in &partial {
                    for (b, r, cc, x) in entries {
                        let mut key = key.clone();
                        key.push((*b, *r, *cc));
                        next.push((key, v * x));
                    }
                }
                if next.len() > cap {
                    return Err(CrossedError::CapExceeded { what: "Kronecker expansion".into(), cap });
                }
                partial = next;
            }
            for (key, v) in partial {
                *out.entry(key).or_default() += &v;
            }
            if out.len() > cap {
                return Err(CrossedError::CapExceeded { what: "Kronecker expansion".into(), cap });
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// Equality as elements of `M^{⊗F}`, by expansion over the union of legs.
    pub fn value_eq(&self, o: &Self, cap: usize) -> Result<bool> {
        self.check(o)?;
        if self == o {
            return Ok(true);
        }
        let legs: Vec<Word> = self.legs().union(&o.legs()).cloned().collect();
        Ok(self.expand(&legs, cap)? == o.expand(&legs, cap)?)
    }

    pub fn value_is_zero(&self, cap: usize) -> Result<bool> {
        if self.terms.is_empty() {
            return Ok(true);
        }
        let legs: Vec<Word> = self.legs().into_iter().collect();
        Ok(self.expand(&legs, cap)?.is_empty())
    }
}

/// The Bernoulli shift `σ_g`: the leg labelled `h` of `t` moves to `g·h`.
pub fn bernoulli_apply(group: &Group, g: &Word, t: &TensorElement) -> Result<TensorElement> {
    group.check_word(g)?;
    t.relabel(|h| {
        group.check_word(h)?;
        Ok(group.mul(g, h))
    })
}

/// Moves legs labelled `gs[j]` to `hs[j]`. The map must be well defined and
/// injective, which holds when `g_i = g_j` exactly when `h_i = h_j`.
pub fn transport_coeffs(gs: &[Word], hs: &[Word], t: &TensorElement) -> Result<TensorElement> {
    if gs.len() != hs.len() {
        return Err(CrossedError::Transport(format!("tuple lengths {} and {}", gs.len(), hs.len())));
    }
    let mut fwd: HashMap<&Word, &Word> = HashMap::new();
    let mut back: HashMap<&Word, &Word> = HashMap::new();
    for (i, (g, h)) in gs.iter().zip(hs).enumerate() {
        if *fwd.entry(g).or_insert(h) != h || *back.entry(h).or_insert(g) != g {
            return Err(CrossedError::Transport(format!("collision pattern differs at position {}", i + 1)));
        }
    }
    t.relabel(|l| {
        fwd.get(l).map(|h| (*h).clone()).ok_or_else(|| CrossedError::Transport("leg outside the tuple".into()))
    })
}
