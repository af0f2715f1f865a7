use rand::Rng;
use rayon::prelude::*;

use super::{eval_star_poly_capped, moments, norm_exact_finite, AlgebraError, CoeffScheme, GaussScalar, Result, StarPolynomial};
use crate::groups::{qf_equal_tuples, Recipe, TupleMatchResult, DEFAULT_CAP};

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaOptions {
    /// Word length for the bounded qf-type search.
    pub wordlen: usize,
    /// Support cap for convolutions.
    pub cap: usize,
    /// Number of moments compared by the norm verifier.
    pub moments: u32,
    /// Relative tolerance for exact finite norms.
    pub norm_tol: f64,
}

impl Default for LemmaOptions {
    fn default() -> Self {
        LemmaOptions { wordlen: 6, cap: DEFAULT_CAP, moments: 6, norm_tol: 1e-9 }
    }
}

/// The match verdict a verifier ran under, plus any warning it raised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchCheck {
    pub verdict: TupleMatchResult,
    pub warning: Option<String>,
}

impl MatchCheck {
    /// Runs `qf_equal_tuples` on the pair. Refuses a `NotEqual` verdict.
    pub fn run(pair: &Recipe, wordlen: usize) -> Result<Self> {
        let verdict = qf_equal_tuples(&pair.g, &pair.gs, &pair.h, &pair.hs, wordlen)?;
        match &verdict {
            TupleMatchResult::NotEqual(w) => Err(AlgebraError::NotEqual(format!("witness {w}"))),
            TupleMatchResult::UnknownUpTo(l) => Ok(MatchCheck {
                warning: Some(format!("qf-types agree on words up to length {l} only")),
                verdict,
            }),
            TupleMatchResult::Equal(_) => Ok(MatchCheck { verdict, warning: None }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub index: usize,
    pub left: GaussScalar,
    pub right: GaussScalar,
}

impl TraceRecord {
    pub fn equal(&self) -> bool {
        self.left == self.right
    }

    /// `poly_index  trace_left  trace_right  equal`.
    pub fn tsv(&self) -> String {
        format!("{}\t{}\t{}\t{}", self.index, self.left, self.right, self.equal())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceReport {
    pub check: MatchCheck,
    pub records: Vec<TraceRecord>,
}

impl TraceReport {
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.equal()).count()
    }

    pub fn all_equal(&self) -> bool {
        self.failures() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormRecord {
    pub index: usize,
    pub left: Vec<GaussScalar>,
    pub right: Vec<GaussScalar>,
    /// Exact operator norms when both groups are finite.
    pub norms: Option<(f64, f64)>,
    pub tol: f64,
}

impl NormRecord {
    pub fn moments_equal(&self) -> bool {
        self.left == self.right
    }

    pub fn norms_equal(&self) -> bool {
        self.norms.is_none_or(|(a, b)| (a - b).abs() <= self.tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE))
    }

    pub fn equal(&self) -> bool {
        self.moments_equal() && self.norms_equal()
    }

    /// `poly_index  moments_left  moments_right  norm_left  norm_right  equal`,
    /// moments comma-separated, norms `-` for infinite groups.
    pub fn tsv(&self) -> String {
        let join = |ms: &[GaussScalar]| ms.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        let (nl, nr) = match self.norms {
            Some((a, b)) => (format!("{a:.12e}"), format!("{b:.12e}")),
            None => ("-".into(), "-".into()),
        };
        format!("{}\t{}\t{}\t{nl}\t{nr}\t{}", self.index, join(&self.left), join(&self.right), self.equal())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub check: MatchCheck,
    pub records: Vec<NormRecord>,
}

impl NormReport {
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.equal()).count()
    }

    pub fn all_equal(&self) -> bool {
        self.failures() == 0
    }
}

/// Evaluates in parallel and returns results in index order, reporting the
/// lowest-index error.
fn ordered<T: Send>(n: usize, f: impl Fn(usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..n).into_par_iter().map(f).collect::<Vec<_>>().into_iter().collect()
}

/// Builds `ŷ` from `gs` and `ẑ` from `hs` with the same scheme and compares
/// `tr p(ŷ)` with `tr p(ẑ)` exactly for every `p`.
pub fn verify_trace_equality(
    pair: &Recipe,
    scheme: &CoeffScheme,
    polys: &[StarPolynomial],
    opts: &LemmaOptions,
) -> Result<TraceReport> {
    let check = MatchCheck::run(pair, opts.wordlen)?;
    let ys = scheme.build(&pair.g, &pair.gs)?;
    let zs = scheme.build(&pair.h, &pair.hs)?;
    let records = ordered(polys.len(), |i| {
        let left = eval_star_poly_capped(&polys[i], &ys, opts.cap)?.trace();
        let right = eval_star_poly_capped(&polys[i], &zs, opts.cap)?.trace();
        Ok(TraceRecord { index: i, left, right })
    })?;
    Ok(TraceReport { check, records })
}

/// Compares the exact moments `tr((p(ŷ)* p(ŷ))^k)`, `k = 1..=K`, with those
/// of `p(ẑ)`, and the exact operator norms when both groups are finite.
pub fn verify_norm_equality(
    pair: &Recipe,
    scheme: &CoeffScheme,
    polys: &[StarPolynomial],
    opts: &LemmaOptions,
) -> Result<NormReport> {
    let check = MatchCheck::run(pair, opts.wordlen)?;
    let ys = scheme.build(&pair.g, &pair.gs)?;
    let zs = scheme.build(&pair.h, &pair.hs)?;
    let finite = pair.g.is_finite() && pair.h.is_finite();
    let records = ordered(polys.len(), |i| {
        let y = eval_star_poly_capped(&polys[i], &ys, opts.cap)?;
        let z = eval_star_poly_capped(&polys[i], &zs, opts.cap)?;
        let norms = if finite {
            Some((norm_exact_finite(&y, opts.norm_tol * 1e-3)?, norm_exact_finite(&z, opts.norm_tol * 1e-3)?))
        } else {
            None
        };
        Ok(NormRecord {
            index: i,
            left: moments(&y, opts.moments, opts.cap)?,
            right: moments(&z, opts.moments, opts.cap)?,
            norms,
            tol: opts.norm_tol,
        })
    })?;
    Ok(NormReport { check, records })
}

/// `count` seeded polynomials, as used by the suites.
pub fn random_polys(rng: &mut impl Rng, count: usize, arity: usize, degree: u32, max_terms: usize) -> Vec<StarPolynomial> {
    (0..count).map(|_| StarPolynomial::random(rng, arity, degree, max_terms)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Monomial;
    use crate::groups::{parse_group, parse_tuple, recipe_build};

    fn poly(s: &str) -> StarPolynomial {
        StarPolynomial::parse(s, Some(2)).unwrap()
    }

    #[test]
    fn commutator_traces_vanish() {
        let r = recipe_build("free-embed").unwrap();
        let rep = verify_trace_equality(
            &r,
            &CoeffScheme::unitaries(2),
            &[poly("x1*x2*x1^-1*x2^-1")],
            &LemmaOptions::default(),
        )
        .unwrap();
        assert!(rep.check.verdict.is_equal());
        assert_eq!(rep.records[0].left, GaussScalar::zero());
        assert!(rep.all_equal());
        assert_eq!(rep.records[0].tsv(), "0\t0/1+0/1 i\t0/1+0/1 i\ttrue");
    }

    #[test]
    fn constants_have_trace_one() {
        for name in crate::groups::RECIPES {
            let r = recipe_build(name).unwrap();
            let one = StarPolynomial::new(r.gs.len(), vec![Monomial { coeff: GaussScalar::one(), factors: vec![] }]).unwrap();
            let rep = verify_trace_equality(&r, &CoeffScheme::unitaries(r.gs.len()), &[one], &LemmaOptions::default())
                .unwrap();
            assert_eq!(rep.records[0].left, GaussScalar::one(), "{name}");
            assert!(rep.all_equal());
        }
    }

    #[test]
    fn refuses_mismatched_pairs() {
        let g = parse_group("free(2)").unwrap();
        let h = parse_group("Z^2").unwrap();
        let pair = Recipe {
            name: "bad".into(),
            gs: parse_tuple(&g, "a, b").unwrap(),
            hs: parse_tuple(&h, "e1, e2").unwrap(),
            g,
            h,
        };
        let err = verify_trace_equality(&pair, &CoeffScheme::unitaries(2), &[poly("x1")], &LemmaOptions::default());
        assert!(matches!(err, Err(AlgebraError::NotEqual(_))));
    }

    #[test]
    fn norm_examples() {
        let r = recipe_build("free-embed").unwrap();
        let single = verify_norm_equality(&r, &CoeffScheme::unitaries(2), &[poly("x1")], &LemmaOptions::default()).unwrap();
        assert!(single.records[0].left.iter().all(|m| *m == GaussScalar::one()));
        assert!(single.all_equal());
        let sum = verify_norm_equality(&r, &CoeffScheme::unitaries(2), &[poly("x1 + x2")], &LemmaOptions::default()).unwrap();
        assert!(sum.all_equal());
        assert_eq!(sum.records[0].left[0], GaussScalar::from_ints(2, 0));
        let fin = recipe_build("finite-relabel").unwrap();
        let rep = verify_norm_equality(
            &fin,
            &CoeffScheme::unitaries(2),
            &[poly("x1 + (2i)*x2*x1 - x2^-1"), poly("x1*x2 + 1")],
            &LemmaOptions::default(),
        )
        .unwrap();
        assert!(rep.all_equal(), "{:?}", rep.records);
        assert!(rep.records.iter().all(|r| r.norms.is_some()));
    }
}
