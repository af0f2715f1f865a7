use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::{boxplus_decompose, free_mul, relation_lattice, Group, GroupError, Result, Word, DEFAULT_CAP};

/// How equality of quantifier-free types was established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Identical,
    /// Pair closure of the generated subgroups, one side finite.
    FiniteClosure,
    /// Equal relation lattices in finitely generated abelian groups.
    AbelianLattice,
    /// Both tuples consist of free basis letters, their inverses and the
    /// identity, in the same pattern.
    FreeBasis,
    /// Componentwise equality in direct products.
    DirectProduct,
    /// Equality of both ⊞ component tuples, with matching shapes.
    FreeProduct,
    /// Equality of the syllable tuples at every vertex, with matching shapes.
    GraphProduct,
    Recipe(String),
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Identical => write!(f, "identical"),
            Certificate::FiniteClosure => write!(f, "finite-closure"),
            Certificate::AbelianLattice => write!(f, "abelian-lattice"),
            Certificate::FreeBasis => write!(f, "free-basis"),
            Certificate::DirectProduct => write!(f, "direct-product"),
            Certificate::FreeProduct => write!(f, "free-product"),
            Certificate::GraphProduct => write!(f, "graph-product"),
            Certificate::Recipe(name) => write!(f, "recipe:{name}"),
        }
    }
}

/// A word in the letters `x1..xn` that is the identity on exactly one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub letters: Vec<(usize, i64)>,
    pub identity_on_left: bool,
}

impl Witness {
    pub fn eval(&self, g: &Group, tuple: &[Word]) -> Word {
        g.eval(&self.letters, tuple)
    }

    /// Re-evaluates the witness on both sides.
    pub fn verify(&self, g: &Group, gs: &[Word], h: &Group, hs: &[Word]) -> bool {
        let l = g.is_identity(&self.eval(g, gs));
        let r = h.is_identity(&self.eval(h, hs));
        l != r && l == self.identity_on_left
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (k, &(i, e)) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "x{}", i + 1)?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TupleMatchResult {
    Equal(Certificate),
    NotEqual(Witness),
    UnknownUpTo(usize),
}

impl TupleMatchResult {
    pub fn is_equal(&self) -> bool {
        matches!(self, TupleMatchResult::Equal(_))
    }
}

impl fmt::Display for TupleMatchResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TupleMatchResult::Equal(c) => write!(f, "equal\t{c}"),
            TupleMatchResult::NotEqual(w) => {
                let side = if w.identity_on_left { "left" } else { "right" };
                write!(f, "not-equal\t{w} is the identity on the {side} only")
            }
            TupleMatchResult::UnknownUpTo(l) => write!(f, "unknown\tno discrepancy up to word length {l}"),
        }
    }
}

/// Decides whether `gs` in `g` and `hs` in `h` satisfy the same word
/// equations. Exact for finite groups, finitely generated abelian groups and
/// free-basis tuples; products are certified equal by recursion into their
/// factors. Otherwise all reduced words of length at most `max_len` are
/// compared.
pub fn qf_equal_tuples(g: &Group, gs: &[Word], h: &Group, hs: &[Word], max_len: usize) -> Result<TupleMatchResult> {
    if gs.len() != hs.len() {
        return Err(GroupError::LengthMismatch(gs.len(), hs.len()));
    }
    for x in gs {
        g.check_word(x)?;
    }
    for x in hs {
        h.check_word(x)?;
    }
    if let Some(r) = exact(g, gs, h, hs) {
        return Ok(r);
    }
    Ok(enumerate(g, gs, h, hs, max_len))
}

fn exact(g: &Group, gs: &[Word], h: &Group, hs: &[Word]) -> Option<TupleMatchResult> {
    if gs.is_empty() || (g == h && gs == hs) {
        return Some(TupleMatchResult::Equal(Certificate::Identical));
    }
    let small = |x: &Group| x.order().is_some_and(|n| n <= DEFAULT_CAP as u128);
    if small(g) || small(h) {
        return Some(closure(g, gs, h, hs));
    }
    if let (Group::FgAbelian { free_rank: r1, torsion: t1 }, Group::FgAbelian { free_rank: r2, torsion: t2 }) = (g, h) {
        return Some(lattice(g, gs, (*r1, t1), h, hs, (*r2, t2)));
    }
    if let (Group::Free { .. }, Group::Free { .. }) = (g, h) {
        if let (Some(p), Some(q)) = (basis_pattern(gs), basis_pattern(hs)) {
            return Some(if p == q {
                TupleMatchResult::Equal(Certificate::FreeBasis)
            } else {
                // Free-basis tuples are separated by words of length two.
                enumerate(g, gs, h, hs, 2)
            });
        }
    }
    structural(g, gs, h, hs).then_some(()).map(|_| TupleMatchResult::Equal(structural_tag(g)))
}

fn structural_tag(g: &Group) -> Certificate {
    match g {
        Group::DirectProduct(_) => Certificate::DirectProduct,
        Group::FreeProduct(..) => Certificate::FreeProduct,
        _ => Certificate::GraphProduct,
    }
}

fn equal_exact(g: &Group, gs: &[Word], h: &Group, hs: &[Word]) -> bool {
    matches!(exact(g, gs, h, hs), Some(TupleMatchResult::Equal(_)))
}

/// Sufficient conditions for products: isomorphisms between the factor
/// subgroups combine into one between the generated subgroups.
fn structural(g: &Group, gs: &[Word], h: &Group, hs: &[Word]) -> bool {
    match (g, h) {
        (Group::DirectProduct(fg), Group::DirectProduct(fh)) if fg.len() == fh.len() => {
            (0..fg.len()).all(|k| {
                let pick = |ws: &[Word]| -> Vec<Word> {
                    ws.iter().map(|w| if let Word::Tuple(c) = w { c[k].clone() } else { unreachable!() }).collect()
                };
                equal_exact(&fg[k], &pick(gs), &fh[k], &pick(hs))
            })
        }
        (Group::FreeProduct(g0, g1), Group::FreeProduct(h0, h1)) => {
            let (mut a0, mut a1, mut b0, mut b1) = (vec![], vec![], vec![], vec![]);
            for (x, y) in gs.iter().zip(hs) {
                let (p0, p1) = boxplus_decompose(g, x).expect("checked word");
                let (q0, q1) = boxplus_decompose(h, y).expect("checked word");
                if p0.len() != q0.len() {
                    return false;
                }
                a0.extend(p0);
                a1.extend(p1);
                b0.extend(q0);
                b1.extend(q1);
            }
            equal_exact(g0, &a0, h0, &b0) && equal_exact(g1, &a1, h1, &b1)
        }
        (Group::GraphProduct(pg), Group::GraphProduct(ph)) if pg.graph == ph.graph => {
            let n = pg.vertices.len();
            let (mut a, mut b) = (vec![vec![]; n], vec![vec![]; n]);
            for (x, y) in gs.iter().zip(hs) {
                let (Word::Graph(sx), Word::Graph(sy)) = (x, y) else { unreachable!() };
                if sx.len() != sy.len() || sx.iter().zip(sy).any(|(p, q)| p.0 != q.0) {
                    return false;
                }
                for ((v, p), (_, q)) in sx.iter().zip(sy) {
                    a[*v as usize].push(p.clone());
                    b[*v as usize].push(q.clone());
                }
            }
            (0..n).all(|v| equal_exact(&pg.vertices[v], &a[v], &ph.vertices[v], &b[v]))
        }
        _ => false,
    }
}

/// `Some(pattern)` when every entry is the identity or a letter to the power
/// ±1; the pattern records, per entry, the first entry on the same letter
/// and the relative sign.
fn basis_pattern(ws: &[Word]) -> Option<Vec<Option<(usize, i64)>>> {
    let mut first: HashMap<u32, (usize, i64)> = HashMap::new();
    ws.iter()
        .enumerate()
        .map(|(i, w)| match w {
            Word::Free(v) if v.is_empty() => Some(None),
            Word::Free(v) if v.len() == 1 && v[0].1.abs() == 1 => {
                let (l, e) = v[0];
                let (j, f) = *first.entry(l).or_insert((i, e));
                Some(Some((j, e * f)))
            }
            _ => None,
        })
        .collect()
}

fn push_letter(w: &[(usize, i64)], i: usize, e: i64) -> Vec<(usize, i64)> {
    let a: Vec<(u32, i64)> = w.iter().map(|&(l, x)| (l as u32, x)).collect();
    free_mul(&a, &[(i as u32, e)]).into_iter().map(|(l, x)| (l as usize, x)).collect()
}

fn word_quotient(a: &[(usize, i64)], b: &[(usize, i64)]) -> Vec<(usize, i64)> {
    b.iter().rev().fold(a.to_vec(), |acc, &(i, e)| push_letter(&acc, i, -e))
}

/// Breadth-first closure of the pairs `(w(gs), w(hs))`. The map it builds
/// is a well-defined bijection exactly when the types agree.
fn closure(g: &Group, gs: &[Word], h: &Group, hs: &[Word]) -> TupleMatchResult {
    let mut steps = Vec::new();
    for i in 0..gs.len() {
        steps.push((i, 1, gs[i].clone(), hs[i].clone()));
        steps.push((i, -1, g.inv(&gs[i]), h.inv(&hs[i])));
    }
    let mut fwd: HashMap<Word, (Word, usize)> = HashMap::new();
    let mut bwd: HashMap<Word, usize> = HashMap::new();
    let mut paths: Vec<Vec<(usize, i64)>> = vec![vec![]];
    fwd.insert(g.identity(), (h.identity(), 0));
    bwd.insert(h.identity(), 0);
    let mut queue = VecDeque::from([(g.identity(), h.identity(), 0usize)]);
    while let Some((l, r, p)) = queue.pop_front() {
        for (i, e, sg, sh) in &steps {
            let (nl, nr) = (g.mul(&l, sg), h.mul(&r, sh));
            let path = push_letter(&paths[p], *i, *e);
            match fwd.get(&nl) {
                Some((r0, p0)) => {
                    if *r0 != nr {
                        return TupleMatchResult::NotEqual(Witness {
                            letters: word_quotient(&path, &paths[*p0]),
                            identity_on_left: true,
                        });
                    }
                }
                None => {
                    if let Some(&p0) = bwd.get(&nr) {
                        return TupleMatchResult::NotEqual(Witness {
                            letters: word_quotient(&path, &paths[p0]),
                            identity_on_left: false,
                        });
                    }
                    paths.push(path);
                    let k = paths.len() - 1;
                    fwd.insert(nl.clone(), (nr.clone(), k));
                    bwd.insert(nr.clone(), k);
                    queue.push_back((nl, nr, k));
                }
            }
        }
    }
    TupleMatchResult::Equal(Certificate::FiniteClosure)
}

fn lattice(g: &Group, gs: &[Word], (r1, t1): (u32, &Vec<u64>), h: &Group, hs: &[Word], (r2, t2): (u32, &Vec<u64>)) -> TupleMatchResult {
    let coords = |ws: &[Word]| -> Vec<Vec<i64>> {
        ws.iter().map(|w| if let Word::Abelian(v) = w { v.clone() } else { unreachable!() }).collect()
    };
    let lg = relation_lattice(r1, t1, &coords(gs));
    let lh = relation_lattice(r2, t2, &coords(hs));
    if lg == lh {
        return TupleMatchResult::Equal(Certificate::AbelianLattice);
    }
    for (rows, other, os, on_left) in [(&lg, h, hs, true), (&lh, g, gs, false)] {
        for row in rows.iter() {
            let letters: Option<Vec<(usize, i64)>> = row
                .iter()
                .enumerate()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(i, c)| num_traits::ToPrimitive::to_i64(c).map(|c| (i, c)))
                .collect();
            let Some(letters) = letters else { continue };
            if !other.is_identity(&other.eval(&letters, os)) {
                return TupleMatchResult::NotEqual(Witness { letters, identity_on_left: on_left });
            }
        }
    }
    unreachable!("distinct lattices have a separating basis vector")
}

/// Compares all reduced words up to `max_len`, shortest first.
pub(super) fn enumerate(g: &Group, gs: &[Word], h: &Group, hs: &[Word], max_len: usize) -> TupleMatchResult {
    let mut steps = Vec::new();
    for i in 0..gs.len() {
        steps.push((i, 1i64, gs[i].clone(), hs[i].clone()));
        steps.push((i, -1i64, g.inv(&gs[i]), h.inv(&hs[i])));
    }
    struct Search<'a> {
        g: &'a Group,
        h: &'a Group,
        steps: Vec<(usize, i64, Word, Word)>,
        path: Vec<(usize, i64)>,
    }
    impl Search<'_> {
        fn go(&mut self, l: &Word, r: &Word, left: usize, prev: Option<usize>) -> Option<Witness> {
            if left == 0 {
                let (a, b) = (self.g.is_identity(l), self.h.is_identity(r));
                return (a != b).then(|| Witness {
                    letters: self.path.iter().fold(vec![], |acc, &(i, e)| push_letter(&acc, i, e)),
                    identity_on_left: a,
                });
            }
            for k in 0..self.steps.len() {
                // Skip a letter followed by its own inverse.
                if prev == Some(k ^ 1) {
                    continue;
                }
                let (i, e) = (self.steps[k].0, self.steps[k].1);
                let nl = self.g.mul(l, &self.steps[k].2);
                let nr = self.h.mul(r, &self.steps[k].3);
                self.path.push((i, e));
                let found = self.go(&nl, &nr, left - 1, Some(k));
                self.path.pop();
                if found.is_some() {
                    return found;
                }
            }
            None
        }
    }
    let mut s = Search { g, h, steps, path: vec![] };
    for len in 1..=max_len {
        if let Some(w) = s.go(&g.identity(), &h.identity(), len, None) {
            return TupleMatchResult::NotEqual(w);
        }
    }
    TupleMatchResult::UnknownUpTo(max_len)
}
