use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::{ContError, FdElement, FloatElement, Result};
use crate::algebra::GaussScalar;

/// Most words a formula family may contain.
pub const FORMULA_CAP: usize = 1 << 20;

/// A letter `x_v` or, with the flag set, `x_v*`.
pub type Letter = (usize, bool);

/// `φ(x) = Re τ(m(x)) / L` or `Im τ(m(x)) / L` for a *-monomial `m`, with
/// `L = Σ_k Π_{j≠k} R_{v_j}` over the positions of `m`. Telescoping and
/// `|τ(XdY)| ≤ ‖X‖‖Y‖‖d‖₂` make `φ` 1-Lipschitz for `sup_i ‖x_i − y_i‖₂`
/// when each `x_i` ranges over the ball of radius `R_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicFormula {
    pub word: Vec<Letter>,
    pub imag: bool,
    pub lipschitz: u64,
    /// Values lie in `[-bound, bound]`.
    pub bound: BigRational,
}

impl BasicFormula {
    /// `1/L`.
    pub fn normalization(&self) -> f64 {
        1.0 / self.lipschitz as f64
    }

    pub fn eval(&self, xs: &[FdElement]) -> Result<BigRational> {
        let t = word_trace(&self.word, xs)?;
        Ok(self.value_of(&t))
    }

    pub(crate) fn value_of(&self, t: &GaussScalar) -> BigRational {
        let part = if self.imag { &t.im } else { &t.re };
        part / BigRational::from_integer(self.lipschitz.into())
    }

    pub fn display(&self) -> String {
        let m: Vec<String> =
            self.word.iter().map(|&(v, s)| format!("x{}{}", v + 1, if s { "*" } else { "" })).collect();
        format!("{}tr({})/{}", if self.imag { "Im " } else { "Re " }, m.join(" "), self.lipschitz)
    }
}

/// All words of length `1..=degree` in `n` variables and their adjoints,
/// in prefix (depth-first) order.
pub fn words(n: usize, degree: u32) -> Result<Vec<Vec<Letter>>> {
    let total: f64 = (1..=degree as i32).map(|d| (2.0 * n as f64).powi(d)).sum();
    if total > FORMULA_CAP as f64 {
        return Err(ContError::Cap { what: "formula family".into(), cap: FORMULA_CAP });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut cur = Vec::new();
    walk(n, degree as usize, &mut cur, &mut |w: &[Letter]| out.push(w.to_vec()));
    Ok(out)
}

fn walk(n: usize, degree: usize, cur: &mut Vec<Letter>, visit: &mut impl FnMut(&[Letter])) {
    if cur.len() == degree {
        return;
    }
    for v in 0..n {
        for s in [false, true] {
            cur.push((v, s));
            visit(cur);
            walk(n, degree, cur, visit);
            cur.pop();
        }
    }
}

/// `L = Σ_k Π_{j≠k} R_{v_j}`.
pub fn lipschitz(word: &[Letter], radii: &[u32]) -> u64 {
    (0..word.len())
        .map(|k| word.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &(v, _))| radii[v] as u64).product::<u64>())
        .sum()
}

/// Real and imaginary parts of every monomial trace of degree `≤ degree`,
/// normalized for tuples in the balls of the given radii.
pub fn basic_formulas(radii: &[u32], degree: u32) -> Result<Vec<BasicFormula>> {
    let mut out = Vec::new();
    for word in words(radii.len(), degree)? {
        let l = lipschitz(&word, radii);
        let top: u64 = word.iter().map(|&(v, _)| radii[v] as u64).product();
        let bound = BigRational::new(top.into(), l.into());
        for imag in [false, true] {
            out.push(BasicFormula { word: word.clone(), imag, lipschitz: l, bound: bound.clone() });
        }
    }
    Ok(out)
}

pub fn word_trace(word: &[Letter], xs: &[FdElement]) -> Result<GaussScalar> {
    let mut it = word.iter();
    let first = it.next().ok_or_else(|| ContError::Sort("empty word".into()))?;
    let mut acc = letter(first, xs)?;
    for l in it {
        acc = acc.mul(&letter(l, xs)?)?;
    }
    Ok(acc.trace())
}

fn letter(&(v, s): &Letter, xs: &[FdElement]) -> Result<FdElement> {
    let x = xs.get(v).ok_or_else(|| ContError::Sort(format!("variable {} outside the tuple", v + 1)))?;
    Ok(if s { x.adjoint() } else { x.clone() })
}

/// Traces of all words of [`words`], sharing prefix products.
pub fn word_traces(xs: &[FdElement], degree: u32) -> Result<Vec<GaussScalar>> {
    words(xs.len(), degree)?;
    let adj: Vec<FdElement> = xs.iter().map(FdElement::adjoint).collect();
    let mut out = Vec::new();
    traces_from(xs, &adj, None, degree as usize, &mut out)?;
    Ok(out)
}

fn traces_from(
    xs: &[FdElement],
    adj: &[FdElement],
    prefix: Option<&FdElement>,
    left: usize,
    out: &mut Vec<GaussScalar>,
) -> Result<()> {
    if left == 0 {
        return Ok(());
    }
    for v in 0..xs.len() {
        for base in [&xs[v], &adj[v]] {
            let p = match prefix {
                Some(p) => p.mul(base)?,
                None => base.clone(),
            };
            out.push(p.trace());
            traces_from(xs, adj, Some(&p), left - 1, out)?;
        }
    }
    Ok(())
}

/// `max_φ |φ(a) − φ(b)|` over the family for the given radii, exactly.
pub fn max_gap(a: &[GaussScalar], b: &[GaussScalar], lips: &[u64]) -> BigRational {
    let mut best = BigRational::default();
    for ((x, y), &l) in a.iter().zip(b).zip(lips) {
        let d = x - y;
        let m = if d.re.abs() > d.im.abs() { d.re.abs() } else { d.im.abs() };
        let v = m / BigRational::from_integer(l.into());
        if v > best {
            best = v;
        }
    }
    best
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Floating-point [`word_traces`].
pub fn word_traces_f64(xs: &[FloatElement], degree: u32) -> Vec<Complex64> {
    let adj: Vec<FloatElement> = xs.iter().map(FloatElement::adjoint).collect();
    let mut out = Vec::new();
    traces_from_f64(xs, &adj, None, degree as usize, &mut out);
    out
}

fn traces_from_f64(xs: &[FloatElement], adj: &[FloatElement], prefix: Option<&FloatElement>, left: usize, out: &mut Vec<Complex64>) {
    if left == 0 {
        return;
    }
    for v in 0..xs.len() {
        for base in [&xs[v], &adj[v]] {
            let p = match prefix {
                Some(p) => p.mul(base),
                None => base.clone(),
            };
            out.push(p.trace());
            traces_from_f64(xs, adj, Some(&p), left - 1, out);
        }
    }
}

/// Floating-point [`max_gap`].
pub fn max_gap_f64(a: &[Complex64], b: &[Complex64], lips: &[u64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(lips)
        .map(|((x, y), &l)| {
            let d = x - y;
            d.re.abs().max(d.im.abs()) / l as f64
        })
        .fold(0.0, f64::max)
}
