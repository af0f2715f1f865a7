//! Brute-force oracles and corpora shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use std::sync::Arc;

use backforth::algebra::palette;
use backforth::crossed::{MatElement, MultiMatrixAlgebra, TensorElement, TwistedElement};
use backforth::groups::{Group, TableGroup, Word};
use backforth::structures::{all_binary_relation_structures, qf_equal, Elem, FinStructure, SortedTuple};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Pairs of one-binary-relation structures with `|S| + |T| <= total`.
pub fn binary_pairs(total: usize) -> Vec<(FinStructure, FinStructure)> {
    let by_size: Vec<Vec<FinStructure>> = (1..total).map(all_binary_relation_structures).collect();
    let mut out = Vec::new();
    for m in 1..total {
        for n in 1..=total - m {
            for s in &by_size[m - 1] {
                for t in &by_size[n - 1] {
                    out.push((s.clone(), t.clone()));
                }
            }
        }
    }
    out
}

fn table_structure(label: &str, table: Vec<Vec<u32>>, relabel: bool) -> FinStructure {
    let n = table.len();
    // Relabelling reverses element indices, moving the identity last.
    let pi = |i: u32| if relabel { (n as u32 - 1) - i } else { i };
    let mut t = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            t[pi(i as u32) as usize][pi(j as u32) as usize] = pi(table[i][j]);
        }
    }
    let names: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
    let name = if relabel { format!("{label}'") } else { label.to_string() };
    Group::table(TableGroup::new(names, t).unwrap().with_label(&name)).to_fin_structure().unwrap()
}

/// Every group of order at most 6 as a multiplication table, each with a
/// relabelled copy.
pub fn group_tables() -> Vec<FinStructure> {
    let cyclic = |n: usize| (0..n).map(|i| (0..n).map(|j| ((i + j) % n) as u32).collect()).collect::<Vec<Vec<u32>>>();
    let klein: Vec<Vec<u32>> = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let s3: Vec<Vec<u32>> = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| {
                    let pq = [p[q[0]], p[q[1]], p[q[2]]];
                    perms.iter().position(|r| *r == pq).unwrap() as u32
                })
                .collect()
        })
        .collect();
    let mut tables = vec![];
    for n in 1..=6 {
        tables.push((format!("C{n}"), cyclic(n)));
    }
    tables.push(("V4".into(), klein));
    tables.push(("S3".into(), s3));
    let mut out = Vec::new();
    for (label, t) in tables {
        out.push(table_structure(&label, t.clone(), false));
        out.push(table_structure(&label, t, true));
    }
    out
}

pub fn group_pairs() -> Vec<(FinStructure, FinStructure)> {
    let gs = group_tables();
    gs.iter().flat_map(|s| gs.iter().map(move |t| (s.clone(), t.clone()))).collect()
}

fn tuples(s: &FinStructure, max_len: usize) -> Vec<Vec<Elem>> {
    let elems: Vec<Elem> = s.elements().collect();
    let mut out: Vec<Vec<Elem>> = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let next: Vec<Vec<Elem>> = frontier
            .iter()
            .flat_map(|t: &Vec<Elem>| {
                elems.iter().map(move |&e| {
                    let mut u = t.clone();
                    u.push(e);
                    u
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.remove(0);
    out
}

/// The symmetric game played literally: Spoiler picks a rank `β < α`, a
/// side and a tuple of length at most `max_len`; Duplicator answers with a
/// tuple of the same length on the other side.
pub struct NaiveGame<'a> {
    s: &'a FinStructure,
    t: &'a FinStructure,
    ts: Rc<Vec<Vec<Elem>>>,
    tt: Rc<Vec<Vec<Elem>>>,
    memo: HashMap<(Vec<Elem>, Vec<Elem>, u32), bool>,
}

impl<'a> NaiveGame<'a> {
    pub fn new(s: &'a FinStructure, t: &'a FinStructure, max_len: usize) -> Self {
        NaiveGame { s, t, ts: Rc::new(tuples(s, max_len)), tt: Rc::new(tuples(t, max_len)), memo: HashMap::new() }
    }

    pub fn sym(&mut self, a: &[Elem], b: &[Elem], alpha: u32) -> bool {
        if !qf_equal(self.s, &SortedTuple(a.to_vec()), self.t, &SortedTuple(b.to_vec())).unwrap() {
            return false;
        }
        let key = (a.to_vec(), b.to_vec(), alpha);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let mut v = true;
        'outer: for beta in (0..alpha).rev() {
            for left in [true, false] {
                let (moves, replies) = if left { (self.ts.clone(), self.tt.clone()) } else { (self.tt.clone(), self.ts.clone()) };
                for c in moves.iter() {
                    let found = replies.iter().filter(|d| d.len() == c.len()).any(|d| {
                        let (x, y) = if left { (c, d) } else { (d, c) };
                        let (ax, by) = ([a, x.as_slice()].concat(), [b, y.as_slice()].concat());
                        self.sym(&ax, &by, beta)
                    });
                    if !found {
                        v = false;
                        break 'outer;
                    }
                }
            }
        }
        self.memo.insert(key, v);
        v
    }
}

/// `tr((y*y)^k)` for `k = 1..=k_max`, for `y` in `ℂ[ℤ]` with integer
/// coefficients, by schoolbook multiplication of Laurent polynomials.
pub fn laurent_moments(y: &BTreeMap<i64, i64>, k_max: u32) -> Vec<i64> {
    let mul = |p: &BTreeMap<i64, i64>, q: &BTreeMap<i64, i64>| {
        let mut r = BTreeMap::new();
        for (i, a) in p {
            for (j, b) in q {
                *r.entry(i + j).or_insert(0) += a * b;
            }
        }
        r
    };
    let adj: BTreeMap<i64, i64> = y.iter().map(|(i, a)| (-i, *a)).collect();
    let a = mul(&adj, y);
    let mut pow = a.clone();
    let mut out = Vec::new();
    for _ in 0..k_max {
        out.push(*pow.get(&0).unwrap_or(&0));
        pow = mul(&pow, &a);
    }
    out
}

pub fn random_tensor(rng: &mut ChaCha8Rng, alg: &Arc<MultiMatrixAlgebra>, legs: &[Word]) -> TensorElement {
    let mut t = TensorElement::zero(alg);
    for _ in 0..rng.random_range(1..=2) {
        let mut factors = Vec::new();
        for l in legs {
            if rng.random_bool(0.6) {
                factors.push((l.clone(), MatElement::random(rng, alg, 0.7)));
            }
        }
        t = t.add(&TensorElement::embed(alg, factors).unwrap().scale(&palette(rng))).unwrap();
    }
    t
}

pub fn random_twisted(rng: &mut ChaCha8Rng, g: &Group, alg: &Arc<MultiMatrixAlgebra>) -> TwistedElement {
    let elems = g.elements(64).unwrap();
    let mut x = TwistedElement::zero(g, alg);
    for _ in 0..rng.random_range(1..=3) {
        let at = elems[rng.random_range(0..elems.len())].clone();
        x = x.add(&TwistedElement::term(g, random_tensor(rng, alg, &elems), at)).unwrap();
    }
    x
}
