use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use super::{eval_twisted, transport_coeffs, twisted_moments, CrossedError, MatElement, MultiMatrixAlgebra, Result};
use super::{TensorElement, TwistedElement};
use crate::algebra::{palette, CoeffScheme, GaussScalar, LemmaOptions, MatchCheck, NormRecord, StarPolynomial, TraceRecord, TraceReport};
use crate::groups::{Group, Recipe, Word};

/// A sum of elementary tensors whose legs are tuple positions.
pub type PositionalTensor = Vec<(GaussScalar, Vec<(usize, MatElement)>)>;

/// Variable `ℓ` becomes `Σ_s b_{s,ℓ} u_{g_{i(s,ℓ)}}` with each `b_{s,ℓ}` in
/// `M^{⊙ĝ}`, its legs given by positions in the tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedScheme {
    pub alg: Arc<MultiMatrixAlgebra>,
    pub vars: Vec<Vec<(PositionalTensor, usize)>>,
}

impl CrossedScheme {
    /// Scalar coefficients only; the crossed construction then reduces to
    /// the group algebra one.
    pub fn from_scalar(scheme: &CoeffScheme, alg: &Arc<MultiMatrixAlgebra>) -> Self {
        let vars = scheme.vars.iter().map(|t| t.iter().map(|(b, i)| (vec![(b.clone(), Vec::new())], *i)).collect()).collect();
        CrossedScheme { alg: alg.clone(), vars }
    }

    /// `m` variables with `1..=max_terms` terms each; every coefficient is a
    /// palette scalar times matrices on up to two random positions.
    pub fn random(rng: &mut impl Rng, alg: &Arc<MultiMatrixAlgebra>, n: usize, m: usize, max_terms: usize) -> Self {
        let vars = (0..m)
            .map(|_| {
                let p = rng.random_range(1..=max_terms.max(1));
                (0..p)
                    .map(|_| {
                        let legs = rng.random_range(0..=2usize.min(n));
                        let factors = (0..legs).map(|_| (rng.random_range(0..n), MatElement::random(rng, alg, 0.6))).collect();
                        (vec![(palette(rng), factors)], rng.random_range(0..n))
                    })
                    .collect()
            })
            .collect();
        CrossedScheme { alg: alg.clone(), vars }
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    /// Places position `j` on the leg `tuple[j]`; positions that name the
    /// same element multiply in position order.
    pub fn materialize(&self, b: &PositionalTensor, tuple: &[Word]) -> Result<TensorElement> {
        let mut out = TensorElement::zero(&self.alg);
        for (c, factors) in b {
            let mut legs: Vec<(Word, MatElement)> = Vec::new();
            for (j, x) in factors {
                let w = tuple.get(*j).ok_or_else(|| CrossedError::Mismatch(format!("position {} outside the tuple", j + 1)))?;
                match legs.iter_mut().find(|(l, _)| l == w) {
                    Some((_, y)) => *y = y.mul(x)?,
                    None => legs.push((w.clone(), x.clone())),
                }
            }
            out = out.add(&TensorElement::embed(&self.alg, legs)?.scale(c))?;
        }
        Ok(out)
    }

    pub fn build(&self, g: &Group, tuple: &[Word]) -> Result<Vec<TwistedElement>> {
        self.build_with(g, tuple, |b| self.materialize(b, tuple))
    }

    /// The right-hand side: coefficients materialized on `gs` and moved to
    /// `hs` by [`transport_coeffs`].
    pub fn build_transported(&self, h: &Group, gs: &[Word], hs: &[Word]) -> Result<Vec<TwistedElement>> {
        self.build_with(h, hs, |b| transport_coeffs(gs, hs, &self.materialize(b, gs)?))
    }

    fn build_with(
        &self,
        g: &Group,
        tuple: &[Word],
        coeff: impl Fn(&PositionalTensor) -> Result<TensorElement>,
    ) -> Result<Vec<TwistedElement>> {
        self.vars
            .iter()
            .map(|terms| {
                let mut y = TwistedElement::zero(g, &self.alg);
                for (b, i) in terms {
                    let w = tuple.get(*i).ok_or_else(|| CrossedError::Mismatch(format!("position {} outside the tuple", i + 1)))?;
                    y = y.add(&TwistedElement::term(g, coeff(b)?, w.clone()))?;
                }
                Ok(y)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossedReport {
    pub algebra: String,
    pub trace: TraceReport,
    /// Moment comparisons, empty when no moments were requested.
    pub moments: Vec<NormRecord>,
}

impl CrossedReport {
    pub fn failures(&self) -> usize {
        self.trace.failures() + self.moments.iter().filter(|r| !r.equal()).count()
    }

    pub fn all_equal(&self) -> bool {
        self.failures() == 0
    }
}

/// Builds `ŷ` in `M^{⊗G}[G]` and `ẑ` in `M^{⊗H}[H]` with transported
/// coefficients and compares `τ(p(ŷ))` with `τ(p(ẑ))` for every `p`, and
/// the first `opts.moments` moments of each.
pub fn verify_crossed_trace_equality(
    pair: &Recipe,
    scheme: &CrossedScheme,
    polys: &[StarPolynomial],
    opts: &LemmaOptions,
) -> Result<CrossedReport> {
    let check = MatchCheck::run(pair, opts.wordlen)?;
    let ys = scheme.build(&pair.g, &pair.gs)?;
    let zs = scheme.build_transported(&pair.h, &pair.gs, &pair.hs)?;
    let results: Vec<Result<(TraceRecord, Option<NormRecord>)>> = (0..polys.len())
        .into_par_iter()
        .map(|i| {
            let y = eval_twisted(&polys[i], &ys, opts.cap)?;
            let z = eval_twisted(&polys[i], &zs, opts.cap)?;
            let trace = TraceRecord { index: i, left: y.trace(), right: z.trace() };
            let moments = if opts.moments > 0 {
                Some(NormRecord {
                    index: i,
                    left: twisted_moments(&y, opts.moments, opts.cap)?,
                    right: twisted_moments(&z, opts.moments, opts.cap)?,
                    norms: None,
                    tol: opts.norm_tol,
                })
            } else {
                None
            };
            Ok((trace, moments))
        })
        .collect();
    let mut records = Vec::new();
    let mut moments = Vec::new();
    for r in results {
        let (t, m) = r?;
        records.push(t);
        moments.extend(m);
    }
    Ok(CrossedReport { algebra: scheme.alg.to_string(), trace: TraceReport { check, records }, moments })
}
