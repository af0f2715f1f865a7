use std::fmt;

use rand::Rng;

use super::{AlgebraElement, AlgebraError, GaussScalar, Result, DEFAULT_SUPPORT_CAP};
use crate::groups::{Group, Word};

/// `coeff · Π x_v^e`, where a negative exponent `e` stands for `(x_v*)^{|e|}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: GaussScalar,
    pub factors: Vec<(usize, i64)>,
}

impl Monomial {
    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }
}

/// A noncommutative *-polynomial in `x1..x_arity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarPolynomial {
    arity: usize,
    terms: Vec<Monomial>,
}

/// Merges neighbouring factors on the same variable with the same sign and
/// drops zero exponents.
fn canonical_factors(fs: impl IntoIterator<Item = (usize, i64)>) -> Vec<(usize, i64)> {
    let mut out: Vec<(usize, i64)> = Vec::new();
    for (v, e) in fs {
        if e == 0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.0 == v && last.1.signum() == e.signum() => last.1 += e,
            _ => out.push((v, e)),
        }
    }
    out
}

impl StarPolynomial {
    pub fn new(arity: usize, terms: Vec<Monomial>) -> Result<Self> {
        let mut clean = Vec::with_capacity(terms.len());
        for m in terms {
            if let Some(&(v, _)) = m.factors.iter().find(|(v, _)| *v >= arity) {
                return Err(AlgebraError::Arity { expected: arity, got: v + 1 });
            }
            clean.push(Monomial { coeff: m.coeff, factors: canonical_factors(m.factors) });
        }
        Ok(StarPolynomial { arity, terms: clean })
    }

    /// The single-variable monomial `x_{v+1}`.
    pub fn var(arity: usize, v: usize) -> Result<Self> {
        Self::new(arity, vec![Monomial { coeff: GaussScalar::one(), factors: vec![(v, 1)] }])
    }

    pub fn constant(arity: usize, c: GaussScalar) -> Self {
        StarPolynomial { arity, terms: vec![Monomial { coeff: c, factors: vec![] }] }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn degree(&self) -> u64 {
        self.terms.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Parses `x1^2*x2^-1 - x2*x1`, with optional scalar factors such as
    /// `(1+2i)*x1` or `-1/3`. The arity is the largest variable index unless
    /// given.
    pub fn parse(s: &str, arity: Option<usize>) -> Result<Self> {
        let mut terms = Vec::new();
        let mut max_var = 0;
        for (sign, body) in split_terms(s)? {
            let mut coeff = GaussScalar::from_ints(sign, 0);
            let mut factors = Vec::new();
            for f in split_factors(body) {
                let (neg, f) = match f.strip_prefix('-') {
                    Some(rest) if rest.starts_with('x') => (true, rest),
                    _ => (false, f),
                };
                if neg {
                    coeff = -coeff;
                }
                if let Some(rest) = f.strip_prefix('x') {
                    let (idx, exp) = match rest.split_once('^') {
                        Some((i, e)) => (i, e.trim().parse::<i64>().map_err(|_| bad(f))?),
                        None => (rest, 1),
                    };
                    let idx: usize = idx.trim().parse().map_err(|_| bad(f))?;
                    if idx == 0 || exp == 0 {
                        return Err(bad(f));
                    }
                    max_var = max_var.max(idx);
                    factors.push((idx - 1, exp));
                } else {
                    coeff = &coeff * &GaussScalar::parse(f)?;
                }
            }
            terms.push(Monomial { coeff, factors });
        }
        Self::new(arity.unwrap_or(max_var), terms)
    }

    /// Evaluates at `xs`, reading negative exponents as adjoint powers.
    pub fn eval(&self, xs: &[AlgebraElement]) -> Result<AlgebraElement> {
        eval_star_poly_capped(self, xs, DEFAULT_SUPPORT_CAP)
    }

    /// A seeded random polynomial: `1..=max_terms` monomials of degree at
    /// most `degree`, coefficients from `{0, ±1, ±i, ±2}`.
    pub fn random(rng: &mut impl Rng, arity: usize, degree: u32, max_terms: usize) -> Self {
        let n = rng.random_range(1..=max_terms.max(1));
        let terms = (0..n)
            .map(|_| {
                let d = rng.random_range(0..=degree);
                let fs = (0..d).map(|_| (rng.random_range(0..arity.max(1)), if rng.random_bool(0.5) { 1 } else { -1 }));
                let factors = canonical_factors(fs.collect::<Vec<_>>());
                Monomial { coeff: palette(rng), factors }
            })
            .collect();
        StarPolynomial { arity, terms }
    }
}

fn bad(f: &str) -> AlgebraError {
    AlgebraError::Parse(format!("bad polynomial factor `{f}`"))
}

/// A coefficient drawn from `{0, ±1, ±i, ±2}`.
pub fn palette(rng: &mut impl Rng) -> GaussScalar {
    const P: [(i64, i64); 7] = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (2, 0), (-2, 0)];
    let (a, b) = P[rng.random_range(0..P.len())];
    GaussScalar::from_ints(a, b)
}

impl fmt::Display for StarPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, m) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut parts = Vec::new();
            if m.coeff != GaussScalar::one() || m.factors.is_empty() {
                parts.push(format!("({})", m.coeff.to_literal()));
            }
            for &(v, e) in &m.factors {
                parts.push(if e == 1 { format!("x{}", v + 1) } else { format!("x{}^{e}", v + 1) });
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Splits a sum at top-level `+`/`-` into signed bodies.
pub(crate) fn split_terms(s: &str) -> Result<Vec<(i64, &str)>> {
    let mut out = Vec::new();
    let (mut depth, mut start, mut sign) = (0i32, 0usize, 1i64);
    let mut prev: Option<char> = None;
    for (k, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '+' | '-' if depth == 0 && !matches!(prev, Some('^') | Some('*')) => {
                let body = s[start..k].trim();
                let cs = if c == '-' { -1 } else { 1 };
                if body.is_empty() {
                    sign *= cs;
                } else {
                    out.push((sign, body));
                    sign = cs;
                }
                start = k + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(AlgebraError::Parse(format!("unbalanced brackets in `{s}`")));
        }
        if !c.is_whitespace() {
            prev = Some(c);
        }
    }
    if depth != 0 {
        return Err(AlgebraError::Parse(format!("unbalanced brackets in `{s}`")));
    }
    let body = s[start..].trim();
    if body.is_empty() {
        return Err(AlgebraError::Parse(format!("missing term in `{s}`")));
    }
    out.push((sign, body));
    Ok(out)
}

/// Splits a product at top-level `*`.
pub(crate) fn split_factors(body: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (k, c) in body.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '*' if depth == 0 => {
                out.push(body[start..k].trim());
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(body[start..].trim());
    out
}

pub fn eval_star_poly(p: &StarPolynomial, xs: &[AlgebraElement]) -> Result<AlgebraElement> {
    eval_star_poly_capped(p, xs, DEFAULT_SUPPORT_CAP)
}

pub fn eval_star_poly_capped(p: &StarPolynomial, xs: &[AlgebraElement], cap: usize) -> Result<AlgebraElement> {
    if xs.len() != p.arity {
        return Err(AlgebraError::Arity { expected: p.arity, got: xs.len() });
    }
    let group = xs
        .first()
        .map(|x| x.group().clone())
        .ok_or(AlgebraError::Arity { expected: 1, got: 0 })?;
    let adj: Vec<AlgebraElement> = xs.iter().map(AlgebraElement::adjoint).collect();
    let mut total = AlgebraElement::zero(&group);
    for m in &p.terms {
        if m.coeff.is_zero() {
            continue;
        }
        let mut acc = AlgebraElement::one(&group).scale(&m.coeff);
        for &(v, e) in &m.factors {
            let base = if e > 0 { &xs[v] } else { &adj[v] };
            for _ in 0..e.unsigned_abs() {
                acc = acc.conv_mul_capped(base, cap)?;
            }
        }
        total = total.add(&acc)?;
    }
    Ok(total)
}

/// Coefficients `b_{s,ℓ}` and indices `i(s,ℓ)`: variable `ℓ` becomes
/// `Σ_s b_{s,ℓ} u_{g_{i(s,ℓ)}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffScheme {
    pub vars: Vec<Vec<(GaussScalar, usize)>>,
}

impl CoeffScheme {
    /// Variable `ℓ` is the single unitary `u_{g_ℓ}`.
    pub fn unitaries(n: usize) -> Self {
        CoeffScheme { vars: (0..n).map(|i| vec![(GaussScalar::one(), i)]).collect() }
    }

    /// `m` variables with `1..=max_terms` palette-weighted unitaries each,
    /// drawn from a tuple of length `n`.
    pub fn random(rng: &mut impl Rng, n: usize, m: usize, max_terms: usize) -> Self {
        let vars = (0..m)
            .map(|_| {
                let p = rng.random_range(1..=max_terms.max(1));
                (0..p).map(|_| (palette(rng), rng.random_range(0..n.max(1)))).collect()
            })
            .collect();
        CoeffScheme { vars }
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn build(&self, g: &Group, tuple: &[Word]) -> Result<Vec<AlgebraElement>> {
        self.vars
            .iter()
            .map(|terms| {
                let mut out = Vec::new();
                for (b, i) in terms {
                    let w = tuple.get(*i).ok_or(AlgebraError::Arity { expected: *i + 1, got: tuple.len() })?;
                    out.push((w.clone(), b.clone()));
                }
                Ok(AlgebraElement::from_terms(g, out))
            })
            .collect()
    }

    /// Text form: one variable per `;`-separated block of `b@i` terms.
    pub fn to_text(&self) -> String {
        self.vars
            .iter()
            .map(|t| t.iter().map(|(b, i)| format!("{}@{}", b.to_literal(), i + 1)).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// `tr p(ŷ)` by expanding every factor over its coefficient terms and
/// checking which group products are the identity, without convolution.
pub fn trace_oracle_expand(p: &StarPolynomial, g: &Group, tuple: &[Word], scheme: &CoeffScheme, cap: usize) -> Result<GaussScalar> {
    if scheme.arity() != p.arity {
        return Err(AlgebraError::Arity { expected: p.arity, got: scheme.arity() });
    }
    if let Some(&(_, i)) = scheme.vars.iter().flatten().find(|(_, i)| *i >= tuple.len()) {
        return Err(AlgebraError::Arity { expected: i + 1, got: tuple.len() });
    }
    let inv: Vec<Word> = tuple.iter().map(|w| g.inv(w)).collect();
    let mut total = GaussScalar::zero();
    for m in &p.terms {
        if m.coeff.is_zero() {
            continue;
        }
        let slots: Vec<(usize, bool)> =
            m.factors.iter().flat_map(|&(v, e)| std::iter::repeat_n((v, e > 0), e.unsigned_abs() as usize)).collect();
        let count = slots.iter().try_fold(1usize, |acc, (v, _)| acc.checked_mul(scheme.vars[*v].len()));
        if count.is_none_or(|c| c > cap) {
            return Err(AlgebraError::CapExceeded { what: "expansion size".into(), cap });
        }
        let mut sum = GaussScalar::zero();
        expand(g, tuple, &inv, scheme, &slots, g.identity(), GaussScalar::one(), &mut sum);
        total += &(&sum * &m.coeff);
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn expand(
    g: &Group,
    tuple: &[Word],
    inv: &[Word],
    scheme: &CoeffScheme,
    slots: &[(usize, bool)],
    prod: Word,
    coeff: GaussScalar,
    sum: &mut GaussScalar,
) {
    let Some((&(v, pos), rest)) = slots.split_first() else {
        if g.is_identity(&prod) {
            *sum += &coeff;
        }
        return;
    };
    for (b, i) in &scheme.vars[v] {
        let (c, w) = if pos { (b.clone(), &tuple[*i]) } else { (b.conj(), &inv[*i]) };
        expand(g, tuple, inv, scheme, rest, g.mul(&prod, w), &coeff * &c, sum);
    }
}
