//! Groups with solvable word problem: finite tables, free groups, finitely
//! generated abelian groups and direct, free and graph products. Every
//! element is held as a canonical [`Word`], so equality of words is equality
//! in the group.

mod abelian;
mod graph;
mod parse;
mod product;
mod qf;
mod recipes;
mod table;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::structures::FinStructure;

pub use abelian::relation_lattice;
pub use graph::Graph;
pub use parse::{parse_group, parse_group_in, parse_tuple};
pub use product::{boxplus_decompose, boxplus_recompose};
pub use qf::{qf_equal_tuples, Certificate, TupleMatchResult, Witness};
pub use recipes::{recipe_build, Recipe, LEMMA_RECIPES, RECIPES};
pub use table::TableGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("group expression: {0}")]
    Parse(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("operation needs a finite group, got {0}")]
    NotFinite(String),
    #[error("{what} exceeds the cap of {cap} elements")]
    CapExceeded { what: String, cap: usize },
    #[error("unknown recipe `{0}`")]
    UnknownRecipe(String),
    #[error("tuple lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("graph: {0}")]
    Graph(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, GroupError>;

/// Default cap on enumerated element counts (balls, finite closures).
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphProduct {
    pub graph: Graph,
    pub vertices: Vec<Group>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Group {
    FiniteTable(Arc<TableGroup>),
    Free { rank: u32 },
    /// `Z^free_rank × Z/t_1 × ... × Z/t_k`.
    FgAbelian { free_rank: u32, torsion: Vec<u64> },
    DirectProduct(Vec<Group>),
    FreeProduct(Box<Group>, Box<Group>),
    GraphProduct(Arc<GraphProduct>),
}

/// Canonical group element. Which variant is valid depends on the group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Word {
    Table(u32),
    /// Freely reduced: neighbouring letters differ, exponents are nonzero.
    Free(Vec<(u32, i64)>),
    /// Coordinates, torsion coordinates reduced into `0..t`.
    Abelian(Vec<i64>),
    Tuple(Vec<Word>),
    /// Alternating non-identity syllables tagged by factor 0 or 1.
    Alt(Vec<(u8, Word)>),
    /// Reduced syllables in lexicographically least shuffle order.
    Graph(Vec<(u32, Word)>),
}

impl Group {
    pub fn table(t: TableGroup) -> Self {
        Group::FiniteTable(Arc::new(t))
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Ok(Group::table(TableGroup::cyclic(n)?))
    }

    pub fn free(rank: u32) -> Self {
        Group::Free { rank }
    }

    pub fn z() -> Self {
        Group::FgAbelian { free_rank: 1, torsion: vec![] }
    }

    pub fn zn(rank: u32) -> Self {
        Group::FgAbelian { free_rank: rank, torsion: vec![] }
    }

    pub fn abelian(free_rank: u32, torsion: Vec<u64>) -> Result<Self> {
        if torsion.iter().any(|&t| t < 2) {
            return Err(GroupError::NotAGroup("torsion moduli must be at least 2".into()));
        }
        Ok(Group::FgAbelian { free_rank, torsion })
    }

    pub fn direct(factors: Vec<Group>) -> Self {
        Group::DirectProduct(factors)
    }

    pub fn free_product(a: Group, b: Group) -> Self {
        Group::FreeProduct(Box::new(a), Box::new(b))
    }

    pub fn graph_product(graph: Graph, vertices: Vec<Group>) -> Result<Self> {
        if graph.len() != vertices.len() {
            return Err(GroupError::Graph(format!(
                "graph has {} vertices but {} vertex groups were given",
                graph.len(),
                vertices.len()
            )));
        }
        Ok(Group::GraphProduct(Arc::new(GraphProduct { graph, vertices })))
    }

    pub fn identity(&self) -> Word {
        match self {
            Group::FiniteTable(t) => Word::Table(t.identity()),
            Group::Free { .. } => Word::Free(vec![]),
            Group::FgAbelian { free_rank, torsion } => Word::Abelian(vec![0; *free_rank as usize + torsion.len()]),
            Group::DirectProduct(fs) => Word::Tuple(fs.iter().map(Group::identity).collect()),
            Group::FreeProduct(..) => Word::Alt(vec![]),
            Group::GraphProduct(_) => Word::Graph(vec![]),
        }
    }

    pub fn is_identity(&self, x: &Word) -> bool {
        match (self, x) {
            (Group::FiniteTable(t), Word::Table(i)) => *i == t.identity(),
            (Group::DirectProduct(fs), Word::Tuple(xs)) => fs.iter().zip(xs).all(|(f, x)| f.is_identity(x)),
            (_, Word::Free(v)) => v.is_empty(),
            (_, Word::Abelian(v)) => v.iter().all(|&c| c == 0),
            (_, Word::Alt(v)) => v.is_empty(),
            (_, Word::Graph(v)) => v.is_empty(),
            _ => false,
        }
    }

    /// Product of two canonical words. Panics if a word is not of this
    /// group's shape; use [`Group::check_word`] on untrusted input.
    pub fn mul(&self, x: &Word, y: &Word) -> Word {
        match (self, x, y) {
            (Group::FiniteTable(t), Word::Table(a), Word::Table(b)) => Word::Table(t.mul(*a, *b)),
            (Group::Free { .. }, Word::Free(a), Word::Free(b)) => Word::Free(free_mul(a, b)),
            (Group::FgAbelian { free_rank, torsion }, Word::Abelian(a), Word::Abelian(b)) => {
                Word::Abelian(abelian::add(*free_rank, torsion, a, b))
            }
            (Group::DirectProduct(fs), Word::Tuple(a), Word::Tuple(b)) => {
                Word::Tuple(fs.iter().zip(a.iter().zip(b)).map(|(f, (p, q))| f.mul(p, q)).collect())
            }
            (Group::FreeProduct(f0, f1), Word::Alt(a), Word::Alt(b)) => Word::Alt(product::alt_mul(f0, f1, a, b)),
            (Group::GraphProduct(gp), Word::Graph(a), Word::Graph(b)) => {
                let mut s = a.clone();
                s.extend(b.iter().cloned());
                Word::Graph(graph::normalize(gp, s))
            }
            _ => panic!("word does not belong to {self}"),
        }
    }

    pub fn inv(&self, x: &Word) -> Word {
        match (self, x) {
            (Group::FiniteTable(t), Word::Table(a)) => Word::Table(t.inv(*a)),
            (Group::Free { .. }, Word::Free(a)) => Word::Free(a.iter().rev().map(|&(l, e)| (l, -e)).collect()),
            (Group::FgAbelian { free_rank, torsion }, Word::Abelian(a)) => Word::Abelian(abelian::neg(*free_rank, torsion, a)),
            (Group::DirectProduct(fs), Word::Tuple(a)) => Word::Tuple(fs.iter().zip(a).map(|(f, p)| f.inv(p)).collect()),
            (Group::FreeProduct(f0, f1), Word::Alt(a)) => Word::Alt(
                a.iter()
                    .rev()
                    .map(|(k, w)| (*k, if *k == 0 { f0.inv(w) } else { f1.inv(w) }))
                    .collect(),
            ),
            (Group::GraphProduct(gp), Word::Graph(a)) => Word::Graph(graph::normalize(
                gp,
                a.iter().rev().map(|(v, w)| (*v, gp.vertices[*v as usize].inv(w))).collect(),
            )),
            _ => panic!("word does not belong to {self}"),
        }
    }

    pub fn pow(&self, x: &Word, n: i64) -> Word {
        let mut base = if n < 0 { self.inv(x) } else { x.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Evaluates the word `x_{i1}^{e1} x_{i2}^{e2} ...` at `tuple`.
    pub fn eval(&self, letters: &[(usize, i64)], tuple: &[Word]) -> Word {
        letters.iter().fold(self.identity(), |acc, &(i, e)| self.mul(&acc, &self.pow(&tuple[i], e)))
    }

    /// Checks that `x` is a canonical word of this group.
    pub fn check_word(&self, x: &Word) -> Result<()> {
        let bad = |msg: &str| Err(GroupError::MalformedWord(format!("{msg} in {self}")));
        match (self, x) {
            (Group::FiniteTable(t), Word::Table(a)) => {
                if (*a as usize) < t.order() {
                    Ok(())
                } else {
                    bad("table index out of range")
                }
            }
            (Group::Free { rank }, Word::Free(a)) => {
                if a.iter().any(|&(l, e)| l >= *rank || e == 0) || a.windows(2).any(|w| w[0].0 == w[1].0) {
                    bad("free word is not reduced")
                } else {
                    Ok(())
                }
            }
            (Group::FgAbelian { free_rank, torsion }, Word::Abelian(a)) => {
                let r = *free_rank as usize;
                if a.len() != r + torsion.len() {
                    return bad("wrong number of coordinates");
                }
                if torsion.iter().zip(&a[r..]).any(|(&t, &c)| c < 0 || c as u64 >= t) {
                    return bad("torsion coordinate not reduced");
                }
                Ok(())
            }
            (Group::DirectProduct(fs), Word::Tuple(a)) => {
                if fs.len() != a.len() {
                    return bad("wrong number of components");
                }
                fs.iter().zip(a).try_for_each(|(f, p)| f.check_word(p))
            }
            (Group::FreeProduct(f0, f1), Word::Alt(a)) => {
                for (i, (k, w)) in a.iter().enumerate() {
                    let f = match k {
                        0 => f0,
                        1 => f1,
                        _ => return bad("factor tag out of range"),
                    };
                    f.check_word(w)?;
                    if f.is_identity(w) || (i > 0 && a[i - 1].0 == *k) {
                        return bad("free product word is not alternating");
                    }
                }
                Ok(())
            }
            (Group::GraphProduct(gp), Word::Graph(a)) => {
                for (v, w) in a {
                    let Some(f) = gp.vertices.get(*v as usize) else { return bad("vertex out of range") };
                    f.check_word(w)?;
                }
                if graph::normalize(gp, a.clone()) != *a {
                    return bad("graph product word is not in normal form");
                }
                Ok(())
            }
            _ => bad("word shape does not match the group"),
        }
    }

    /// Group order, or `None` for infinite groups.
    pub fn order(&self) -> Option<u128> {
        match self {
            Group::FiniteTable(t) => Some(t.order() as u128),
            Group::Free { rank } => (*rank == 0).then_some(1),
            Group::FgAbelian { free_rank, torsion } => {
                if *free_rank > 0 {
                    return None;
                }
                torsion.iter().try_fold(1u128, |acc, &t| acc.checked_mul(t as u128))
            }
            Group::DirectProduct(fs) => fs.iter().try_fold(1u128, |acc, f| acc.checked_mul(f.order()?)),
            Group::FreeProduct(a, b) => match (a.order()?, b.order()?) {
                (1, n) | (n, 1) => Some(n),
                _ => None,
            },
            Group::GraphProduct(gp) => {
                let orders: Vec<u128> = gp.vertices.iter().map(Group::order).collect::<Option<_>>()?;
                let n = orders.len();
                for i in 0..n {
                    for j in i + 1..n {
                        if !gp.graph.adjacent(i, j) && orders[i] > 1 && orders[j] > 1 {
                            return None;
                        }
                    }
                }
                orders.iter().try_fold(1u128, |acc, &o| acc.checked_mul(o))
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// A standard finite generating set.
    pub fn generators(&self) -> Vec<Word> {
        match self {
            Group::FiniteTable(t) => (0..t.order() as u32).filter(|&i| i != t.identity()).map(Word::Table).collect(),
            Group::Free { rank } => (0..*rank).map(|l| Word::Free(vec![(l, 1)])).collect(),
            Group::FgAbelian { free_rank, torsion } => {
                let m = *free_rank as usize + torsion.len();
                (0..m)
                    .map(|i| {
                        let mut v = vec![0; m];
                        v[i] = 1;
                        Word::Abelian(abelian::reduce(*free_rank, torsion, v))
                    })
                    .filter(|w| !self.is_identity(w))
                    .collect()
            }
            Group::DirectProduct(fs) => (0..fs.len())
                .flat_map(|k| fs[k].generators().into_iter().map(move |w| (k, w)))
                .map(|(k, w)| self.embed(k, w))
                .collect(),
            Group::FreeProduct(a, b) => {
                let mut out: Vec<Word> = a.generators().into_iter().map(|w| self.embed(0, w)).collect();
                out.extend(b.generators().into_iter().map(|w| self.embed(1, w)));
                out
            }
            Group::GraphProduct(gp) => (0..gp.vertices.len())
                .flat_map(|v| gp.vertices[v].generators().into_iter().map(move |w| (v, w)))
                .map(|(v, w)| self.embed(v, w))
                .collect(),
        }
    }

    /// The image of `w` from factor (or vertex) `k` in a product group.
    /// Panics on non-product groups.
    pub fn embed(&self, k: usize, w: Word) -> Word {
        match self {
            Group::DirectProduct(fs) => {
                let mut v: Vec<Word> = fs.iter().map(Group::identity).collect();
                v[k] = w;
                Word::Tuple(v)
            }
            Group::FreeProduct(a, b) => {
                let f = if k == 0 { a } else { b };
                if f.is_identity(&w) {
                    Word::Alt(vec![])
                } else {
                    Word::Alt(vec![(k as u8, w)])
                }
            }
            Group::GraphProduct(gp) => {
                if gp.vertices[k].is_identity(&w) {
                    Word::Graph(vec![])
                } else {
                    Word::Graph(vec![(k as u32, w)])
                }
            }
            _ => panic!("{self} is not a product"),
        }
    }

    /// All elements of a finite group, sorted.
    pub fn elements(&self, cap: usize) -> Result<Vec<Word>> {
        let order = self.order().ok_or_else(|| GroupError::NotFinite(self.to_string()))?;
        if order > cap as u128 {
            return Err(GroupError::CapExceeded { what: format!("order of {self}"), cap });
        }
        let gens = self.generators();
        let mut seen: BTreeSet<Word> = BTreeSet::new();
        let mut queue = VecDeque::from([self.identity()]);
        seen.insert(self.identity());
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = self.mul(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        debug_assert_eq!(seen.len() as u128, order);
        Ok(seen.into_iter().collect())
    }

    /// Cayley table of a finite group. Element names are `e` for the
    /// identity and `g1, g2, ...` in word order otherwise.
    pub fn materialize(&self) -> Result<TableGroup> {
        if let Group::FiniteTable(t) = self {
            return Ok((**t).clone());
        }
        let elems = self.elements(4096)?;
        let index: std::collections::HashMap<&Word, u32> = elems.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
        let id = index[&self.identity()];
        let mut k = 0;
        let names = (0..elems.len() as u32)
            .map(|i| {
                if i == id {
                    "e".to_string()
                } else {
                    k += 1;
                    format!("g{k}")
                }
            })
            .collect();
        let table = elems.iter().map(|x| elems.iter().map(|y| index[&self.mul(x, y)]).collect()).collect();
        Ok(TableGroup::new(names, table)?.with_label(&self.to_string()))
    }

    /// One-sorted structure with `mul/2`, `inv/1` and constant `e`.
    pub fn to_fin_structure(&self) -> Result<FinStructure> {
        if !self.is_finite() {
            return Err(GroupError::NotFinite(self.to_string()));
        }
        Ok(self.materialize()?.to_fin_structure(&self.to_string()))
    }

    pub fn display_word(&self, w: &Word) -> String {
        parse::display_word(self, w)
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        parse::parse_word(self, s)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, gs: &[&Group]| -> fmt::Result {
            for (i, g) in gs.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{g}")?;
            }
            Ok(())
        };
        match self {
            Group::FiniteTable(t) => write!(f, "{}", t.label()),
            Group::Free { rank } => write!(f, "free({rank})"),
            Group::FgAbelian { free_rank, torsion } if torsion.is_empty() => match free_rank {
                1 => write!(f, "Z"),
                r => write!(f, "Z^{r}"),
            },
            Group::FgAbelian { free_rank, torsion } => {
                write!(f, "abelian({free_rank}")?;
                for t in torsion {
                    write!(f, ",{t}")?;
                }
                write!(f, ")")
            }
            Group::DirectProduct(fs) => {
                write!(f, "prod(")?;
                list(f, &fs.iter().collect::<Vec<_>>())?;
                write!(f, ")")
            }
            Group::FreeProduct(a, b) => write!(f, "freeprod({a},{b})"),
            Group::GraphProduct(gp) => {
                write!(f, "graphprod({},", gp.graph)?;
                list(f, &gp.vertices.iter().collect::<Vec<_>>())?;
                write!(f, ")")
            }
        }
    }
}

pub(crate) fn free_mul(a: &[(u32, i64)], b: &[(u32, i64)]) -> Vec<(u32, i64)> {
    let mut out = a.to_vec();
    for &(l, e) in b {
        match out.last_mut() {
            Some(last) if last.0 == l => {
                last.1 += e;
                if last.1 == 0 {
                    out.pop();
                }
            }
            _ => out.push((l, e)),
        }
    }
    out
}

/// All products of at most `radius` generators and their inverses.
pub fn ball(g: &Group, generators: &[Word], radius: usize, cap: usize) -> Result<Vec<Word>> {
    let mut steps: Vec<Word> = Vec::new();
    for x in generators {
        g.check_word(x)?;
        steps.push(x.clone());
        steps.push(g.inv(x));
    }
    let mut seen: BTreeSet<Word> = BTreeSet::from([g.identity()]);
    let mut frontier = vec![g.identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in &frontier {
            for s in &steps {
                let y = g.mul(x, s);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(GroupError::CapExceeded { what: format!("ball of radius {radius}"), cap });
                    }
                    seen.insert(y.clone());
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(seen.into_iter().collect())
}

#[cfg(test)]
mod tests;
