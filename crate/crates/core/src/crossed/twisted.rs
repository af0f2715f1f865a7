use std::collections::BTreeMap;
use std::sync::Arc;

use super::{bernoulli_apply, CrossedError, MatElement, MultiMatrixAlgebra, Result, TensorElement};
use crate::algebra::{AlgebraElement, GaussScalar, StarPolynomial};
use crate::groups::{Group, Word};

/// `Σ b_g u_g` in `M^{⊗G}[G]`, with the Bernoulli action twisting products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedElement {
    group: Group,
    alg: Arc<MultiMatrixAlgebra>,
    coeffs: BTreeMap<Word, TensorElement>,
}

impl TwistedElement {
    pub fn zero(group: &Group, alg: &Arc<MultiMatrixAlgebra>) -> Self {
        TwistedElement { group: group.clone(), alg: alg.clone(), coeffs: BTreeMap::new() }
    }

    pub fn one(group: &Group, alg: &Arc<MultiMatrixAlgebra>) -> Self {
        Self::unitary(group, alg, group.identity())
    }

    pub fn unitary(group: &Group, alg: &Arc<MultiMatrixAlgebra>, g: Word) -> Self {
        Self::term(group, TensorElement::one(alg), g)
    }

    /// `b·u_g`.
    pub fn term(group: &Group, b: TensorElement, g: Word) -> Self {
        let mut x = Self::zero(group, b.algebra());
        x.push(g, b);
        x
    }

    /// The image of a group-algebra element under `c·u_g ↦ (c·1)·u_g`.
    pub fn from_group_algebra(x: &AlgebraElement, alg: &Arc<MultiMatrixAlgebra>) -> Self {
        let mut out = Self::zero(x.group(), alg);
        for (g, c) in x.terms() {
            out.push(g.clone(), TensorElement::scalar(alg, c.clone()));
        }
        out
    }

    fn push(&mut self, g: Word, b: TensorElement) {
        match self.coeffs.get_mut(&g) {
            Some(v) => {
                *v = v.add(&b).expect("coefficient algebras checked by caller");
                if v.terms().is_empty() {
                    self.coeffs.remove(&g);
                }
            }
            None if !b.terms().is_empty() => {
                self.coeffs.insert(g, b);
            }
            None => {}
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn algebra(&self) -> &Arc<MultiMatrixAlgebra> {
        &self.alg
    }

    pub fn coeffs(&self) -> &BTreeMap<Word, TensorElement> {
        &self.coeffs
    }

    pub fn coeff(&self, g: &Word) -> TensorElement {
        self.coeffs.get(g).cloned().unwrap_or_else(|| TensorElement::zero(&self.alg))
    }

    /// Elementary tensors summed over all group elements.
    pub fn term_count(&self) -> usize {
        self.coeffs.values().map(TensorElement::term_count).sum()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.group != o.group {
            return Err(CrossedError::Mismatch(format!("groups {} and {}", self.group, o.group)));
        }
        if self.alg != o.alg {
            return Err(CrossedError::Mismatch(format!("coefficients {} and {}", self.alg, o.alg)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut x = self.clone();
        for (g, b) in &o.coeffs {
            x.push(g.clone(), b.clone());
        }
        Ok(x)
    }

    pub fn scale(&self, c: &GaussScalar) -> Self {
        let mut x = Self::zero(&self.group, &self.alg);
        for (g, b) in &self.coeffs {
            x.push(g.clone(), b.scale(c));
        }
        x
    }

    /// `(b₁u_g)(b₂u_h) = b₁σ_g(b₂)u_{gh}`.
    pub fn mul(&self, o: &Self, cap: usize) -> Result<Self> {
        self.check(o)?;
        let g = &self.group;
        let mut x = Self::zero(g, &self.alg);
        for (a, ba) in &self.coeffs {
            for (b, bb) in &o.coeffs {
                x.push(g.mul(a, b), ba.mul(&bernoulli_apply(g, a, bb)?)?);
            }
            if x.term_count() > cap {
                return Err(CrossedError::CapExceeded { what: "twisted product".into(), cap });
            }
        }
        Ok(x)
    }

    /// `(b u_g)* = σ_{g⁻¹}(b*) u_{g⁻¹}`.
    pub fn adjoint(&self) -> Result<Self> {
        let g = &self.group;
        let mut x = Self::zero(g, &self.alg);
        for (a, b) in &self.coeffs {
            let ai = g.inv(a);
            x.push(ai.clone(), bernoulli_apply(g, &ai, &b.adjoint())?);
        }
        Ok(x)
    }

    /// `τ(Σ b_g u_g) = τ(b_e)`.
    pub fn trace(&self) -> GaussScalar {
        self.coeffs.get(&self.group.identity()).map(TensorElement::trace).unwrap_or_default()
    }

    /// Equality of values, comparing coefficients after expansion.
    pub fn value_eq(&self, o: &Self, cap: usize) -> Result<bool> {
        self.check(o)?;
        for g in self.coeffs.keys().chain(o.coeffs.keys()) {
            if !self.coeff(g).value_eq(&o.coeff(g), cap)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn value_is_zero(&self, cap: usize) -> Result<bool> {
        for b in self.coeffs.values() {
            if !b.value_is_zero(cap)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Parses `[b@g] + 2*[c@e]`. A coefficient is a matrix literal placed on
    /// the leg `e`, or a juxtaposition `x{h} y{k}` of matrix literals on the
    /// named legs.
    pub fn parse(group: &Group, alg: &Arc<MultiMatrixAlgebra>, s: &str) -> Result<Self> {
        let mut x = Self::zero(group, alg);
        for term in split_top(s, '+') {
            let term = term.trim();
            let (scalar, rest) = match term.find('[') {
                Some(0) => (GaussScalar::one(), term),
                Some(k) => {
                    let c = term[..k].trim().trim_end_matches('*');
                    (GaussScalar::parse(c).map_err(|e| CrossedError::Parse(e.to_string()))?, &term[k..])
                }
                None => return Err(CrossedError::Parse(format!("term `{term}` needs [b@g]"))),
            };
            let inner = rest
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| CrossedError::Parse(format!("bad term `{term}`")))?;
            let (b, g) = inner.rsplit_once('@').ok_or_else(|| CrossedError::Parse(format!("term `{term}` needs @")))?;
            let g = group.parse_word(g.trim())?;
            let b = parse_tensor(group, alg, b)?;
            x.push(g, b.scale(&scalar));
        }
        Ok(x)
    }
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '[' | '{' | '(' => depth += 1,
            ']' | '}' | ')' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_tensor(group: &Group, alg: &Arc<MultiMatrixAlgebra>, s: &str) -> Result<TensorElement> {
    let s = s.trim();
    if !s.contains('{') {
        return TensorElement::embed(alg, vec![(group.identity(), MatElement::parse(alg, s)?)]);
    }
    let mut factors = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let open = rest.find('{').ok_or_else(|| CrossedError::Parse(format!("missing leg in `{rest}`")))?;
        let close = rest.find('}').ok_or_else(|| CrossedError::Parse(format!("unclosed leg in `{rest}`")))?;
        let m = MatElement::parse(alg, &rest[..open])?;
        let leg = group.parse_word(rest[open + 1..close].trim())?;
        factors.push((leg, m));
        rest = rest[close + 1..].trim_start();
    }
    TensorElement::embed(alg, factors)
}

/// Evaluates a *-polynomial in the twisted algebra.
pub fn eval_twisted(p: &StarPolynomial, xs: &[TwistedElement], cap: usize) -> Result<TwistedElement> {
    if xs.len() != p.arity() {
        return Err(CrossedError::Mismatch(format!("arity {} with {} arguments", p.arity(), xs.len())));
    }
    let first = xs.first().ok_or_else(|| CrossedError::Mismatch("no arguments".into()))?;
    let (g, alg) = (first.group().clone(), first.algebra().clone());
    let adj: Vec<TwistedElement> = xs.iter().map(TwistedElement::adjoint).collect::<Result<_>>()?;
    let mut total = TwistedElement::zero(&g, &alg);
    for m in p.terms() {
        if m.coeff.is_zero() {
            continue;
        }
        let mut acc = TwistedElement::one(&g, &alg).scale(&m.coeff);
        for &(v, e) in &m.factors {
            let base = if e > 0 { &xs[v] } else { &adj[v] };
            for _ in 0..e.unsigned_abs() {
                acc = acc.mul(base, cap)?;
            }
        }
        total = total.add(&acc)?;
    }
    Ok(total)
}

/// Exact moments `τ((x*x)^k)` for `k = 1..=k_max`.
pub fn twisted_moments(x: &TwistedElement, k_max: u32, cap: usize) -> Result<Vec<GaussScalar>> {
    let a = x.adjoint()?.mul(x, cap)?;
    let mut p = TwistedElement::one(x.group(), x.algebra());
    (0..k_max)
        .map(|_| {
            p = p.mul(&a, cap)?;
            Ok(p.trace())
        })
        .collect()
}
