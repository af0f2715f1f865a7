use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use super::{AlgebraError, GaussScalar, Result, DEFAULT_SUPPORT_CAP};
use crate::groups::{Group, Word};

/// A finitely supported element `Σ c_g u_g` of the group algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    group: Group,
    terms: BTreeMap<Word, GaussScalar>,
}

/// A finitely supported vector `Σ c_t δ_t` in `ℓ²(G)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct L2Vector {
    group: Group,
    terms: BTreeMap<Word, GaussScalar>,
}

fn accumulate(acc: &mut HashMap<Word, GaussScalar>, w: Word, c: GaussScalar) {
    use std::collections::hash_map::Entry;
    match acc.entry(w) {
        Entry::Occupied(mut e) => *e.get_mut() += &c,
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

fn prune(acc: HashMap<Word, GaussScalar>) -> BTreeMap<Word, GaussScalar> {
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl AlgebraElement {
    pub fn zero(group: &Group) -> Self {
        AlgebraElement { group: group.clone(), terms: BTreeMap::new() }
    }

    pub fn one(group: &Group) -> Self {
        Self::unitary(group, group.identity())
    }

    /// The canonical unitary `u_g`.
    pub fn unitary(group: &Group, g: Word) -> Self {
        Self::from_terms(group, [(g, GaussScalar::one())])
    }

    pub fn from_terms(group: &Group, terms: impl IntoIterator<Item = (Word, GaussScalar)>) -> Self {
        let mut acc = HashMap::new();
        for (w, c) in terms {
            accumulate(&mut acc, w, c);
        }
        AlgebraElement { group: group.clone(), terms: prune(acc) }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn terms(&self) -> &BTreeMap<Word, GaussScalar> {
        &self.terms
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, g: &Word) -> GaussScalar {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_group(&self, other: &Group) -> Result<()> {
        if self.group == *other {
            Ok(())
        } else {
            Err(AlgebraError::GroupMismatch(self.group.to_string(), other.to_string()))
        }
    }

    pub fn add(&self, y: &Self) -> Result<Self> {
        self.same_group(&y.group)?;
        let mut acc: HashMap<Word, GaussScalar> = self.terms.clone().into_iter().collect();
        for (w, c) in &y.terms {
            accumulate(&mut acc, w.clone(), c.clone());
        }
        Ok(AlgebraElement { group: self.group.clone(), terms: prune(acc) })
    }

    pub fn scale(&self, c: &GaussScalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.group);
        }
        AlgebraElement { group: self.group.clone(), terms: self.terms.iter().map(|(w, x)| (w.clone(), c * x)).collect() }
    }

    /// Convolution product, induced by `u_g u_h = u_{gh}`.
    pub fn conv_mul(&self, y: &Self) -> Result<Self> {
        self.conv_mul_capped(y, DEFAULT_SUPPORT_CAP)
    }

    pub fn conv_mul_capped(&self, y: &Self, cap: usize) -> Result<Self> {
        self.same_group(&y.group)?;
        let g = &self.group;
        let mut acc: HashMap<Word, GaussScalar> = HashMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &y.terms {
                accumulate(&mut acc, g.mul(a, b), ca * cb);
            }
            if acc.len() > cap {
                return Err(AlgebraError::CapExceeded { what: "convolution support".into(), cap });
            }
        }
        Ok(AlgebraElement { group: g.clone(), terms: prune(acc) })
    }

    /// `(Σ c_g u_g)* = Σ conj(c_g) u_{g⁻¹}`.
    pub fn adjoint(&self) -> Self {
        let g = &self.group;
        AlgebraElement { group: g.clone(), terms: self.terms.iter().map(|(w, c)| (g.inv(w), c.conj())).collect() }
    }

    /// The coefficient at the identity.
    pub fn trace(&self) -> GaussScalar {
        self.coeff(&self.group.identity())
    }

    /// `tr(x y)` without forming the product.
    pub fn trace_of_product(&self, y: &Self) -> Result<GaussScalar> {
        self.same_group(&y.group)?;
        let g = &self.group;
        let mut s = GaussScalar::zero();
        for (a, ca) in &self.terms {
            if let Some(cb) = y.terms.get(&g.inv(a)) {
                s += &(ca * cb);
            }
        }
        Ok(s)
    }

    /// `‖x‖₂² = Σ |c_g|² = tr(x* x)`.
    pub fn l2_norm_sqr(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c.norm_sqr())
    }

    /// `Σ |c_g|`, an upper bound for the operator norm.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(GaussScalar::abs_f64).sum()
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(&self.group);
        for _ in 0..k {
            acc = acc.conv_mul(self)?;
        }
        Ok(acc)
    }

    /// The left regular representation: `u_g δ_h = δ_{gh}`.
    pub fn apply_regular(&self, v: &L2Vector) -> Result<L2Vector> {
        self.same_group(&v.group)?;
        let g = &self.group;
        let mut acc = HashMap::new();
        for (a, ca) in &self.terms {
            for (t, ct) in &v.terms {
                accumulate(&mut acc, g.mul(a, t), ca * ct);
            }
        }
        Ok(L2Vector { group: g.clone(), terms: prune(acc) })
    }

    /// Parses `(1+2i)*u[a*b] + (-1/3)*u[e]`.
    pub fn parse(group: &Group, s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (sign, body) in super::poly::split_terms(s)? {
            let mut coeff = GaussScalar::from_ints(sign, 0);
            let mut word = None;
            for factor in super::poly::split_factors(body) {
                if let Some(inner) = factor.strip_prefix("u[").and_then(|f| f.strip_suffix(']')) {
                    if word.is_some() {
                        return Err(AlgebraError::Parse(format!("term `{body}` has two unitaries")));
                    }
                    word = Some(group.parse_word(inner)?);
                } else {
                    coeff = &coeff * &GaussScalar::parse(factor)?;
                }
            }
            terms.push((word.unwrap_or_else(|| group.identity()), coeff));
        }
        Ok(Self::from_terms(group, terms))
    }

    /// Literal form accepted by [`AlgebraElement::parse`].
    pub fn to_literal(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(w, c)| format!("({})*u[{}]", c.to_literal(), self.group.display_word(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

impl L2Vector {
    pub fn delta(group: &Group, t: Word) -> Self {
        L2Vector { group: group.clone(), terms: BTreeMap::from([(t, GaussScalar::one())]) }
    }

    pub fn from_terms(group: &Group, terms: impl IntoIterator<Item = (Word, GaussScalar)>) -> Self {
        let e = AlgebraElement::from_terms(group, terms);
        L2Vector { group: e.group, terms: e.terms }
    }

    pub fn terms(&self) -> &BTreeMap<Word, GaussScalar> {
        &self.terms
    }

    pub fn norm_sqr(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c.norm_sqr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::parse_group;

    fn el(g: &Group, s: &str) -> AlgebraElement {
        AlgebraElement::parse(g, s).unwrap()
    }

    #[test]
    fn spec_examples() {
        let z = Group::z();
        let y = el(&z, "u[1] + u[-1]");
        assert_eq!(y.conv_mul(&y).unwrap(), el(&z, "u[2] + 2*u[0] + u[-2]"));
        assert_eq!(y.conv_mul(&y).unwrap().trace(), GaussScalar::from_ints(2, 0));
        let f2 = Group::free(2);
        let x = el(&f2, "i*u[a]");
        assert_eq!(x.adjoint(), el(&f2, "(-i)*u[a^-1]"));
        assert_eq!(el(&f2, "u[a]").conv_mul(&el(&f2, "u[b]")).unwrap(), el(&f2, "u[a*b]"));
        assert_eq!(AlgebraElement::one(&f2).trace(), GaussScalar::one());
        assert!(el(&f2, "u[a]").trace().is_zero());
    }

    #[test]
    fn regular_representation() {
        let z = Group::z();
        let y = el(&z, "u[1] + u[-1]");
        let v = y.apply_regular(&L2Vector::delta(&z, z.parse_word("0").unwrap())).unwrap();
        assert_eq!(v.terms().len(), 2);
        assert_eq!(v.norm_sqr(), BigRational::from_integer(2.into()));
        let y2 = el(&z, "u[3] + u[3]");
        let v = y2.apply_regular(&L2Vector::delta(&z, z.parse_word("1").unwrap())).unwrap();
        assert_eq!(v.terms()[&z.parse_word("4").unwrap()], GaussScalar::from_ints(2, 0));
    }

    #[test]
    fn literal_round_trip_and_errors() {
        let g = parse_group("free(2)").unwrap();
        let x = el(&g, "(1+2i)*u[a*b] + (-1/3)*u[e]");
        assert_eq!(x.coeff(&g.identity()), GaussScalar::from_ratio(-1, 3));
        assert_eq!(AlgebraElement::parse(&g, &x.to_literal()).unwrap(), x);
        assert!(el(&g, "u[a] - u[a]").is_zero());
        assert!(AlgebraElement::parse(&g, "u[a]*u[b]").is_err());
        assert!(AlgebraElement::parse(&g, "u[q]").is_err());
        let z = Group::z();
        assert!(matches!(x.add(&AlgebraElement::one(&z)), Err(AlgebraError::GroupMismatch(..))));
    }
}
