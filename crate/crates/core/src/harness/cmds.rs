use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{HarnessError, Report, Result, SuiteConfig};
use crate::algebra::{
    norm_bounds, random_polys, verify_norm_equality, verify_trace_equality, AlgebraElement, CoeffScheme, GaussScalar,
    LemmaOptions, StarPolynomial,
};
use crate::contbf::{r0_lower, r_alpha_lower, FdAlgebra, FdElement, RAlphaParams, RBound, WeakModulus};
use crate::crossed::{verify_crossed_trace_equality, CrossedScheme, MultiMatrixAlgebra};
use crate::games::{
    bf_asym, bf_rank, bf_sym, ef_winner, karp_check, parse_pool, random_pool, relation_consistency, Winner,
};
use crate::groups::{parse_group, parse_tuple, recipe_build, Group, Recipe, DEFAULT_CAP, LEMMA_RECIPES};
use crate::structures::{all_binary_relation_structures, iso_search, parse_structure, FinStructure, SortedTuple};

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &PathBuf) -> Result<FinStructure> {
    parse_structure(&read(path)?).map_err(|e| HarnessError::Input(format!("{}: {e}", path.display())))
}

fn tuple_of(s: &FinStructure, names: Option<&str>) -> Result<SortedTuple> {
    match names {
        None => Ok(SortedTuple::empty()),
        Some(text) => {
            let names: Vec<&str> = text.split([' ', ',']).filter(|n| !n.is_empty()).collect();
            Ok(s.tuple(&names)?)
        }
    }
}

/// A ChaCha8 generator seeded with `seed` on stream `stream`, so that each
/// recipe of a suite draws independently of the others.
pub(crate) fn suite_rng(seed: u64, stream: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfMode {
    Sym,
    Asym,
    Rank,
    Karp,
    Consistency,
}

impl std::str::FromStr for BfMode {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sym" => BfMode::Sym,
            "asym" => BfMode::Asym,
            "rank" => BfMode::Rank,
            "karp" => BfMode::Karp,
            "consistency" => BfMode::Consistency,
            _ => return Err(HarnessError::Input(format!("unknown bf mode `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfArgs {
    pub mode: BfMode,
    /// Two structure files; `consistency` accepts any number and checks
    /// every pair.
    pub files: Vec<PathBuf>,
    pub left_tuple: Option<String>,
    pub right_tuple: Option<String>,
    pub alpha: u32,
    /// Rank cap for `rank` and `consistency`.
    pub cap: u32,
    /// Formula pool file for `karp`; a seeded random pool otherwise.
    pub pool: Option<PathBuf>,
    pub pool_size: usize,
    pub seed: u64,
}

impl Default for BfArgs {
    fn default() -> Self {
        BfArgs {
            mode: BfMode::Sym,
            files: Vec::new(),
            left_tuple: None,
            right_tuple: None,
            alpha: 1,
            cap: 3,
            pool: None,
            pool_size: 60,
            seed: 1,
        }
    }
}

fn pair_of(files: &[PathBuf]) -> Result<(FinStructure, FinStructure)> {
    match files {
        [a, b] => Ok((load(a)?, load(b)?)),
        _ => Err(HarnessError::Input(format!("expected two structure files, got {}", files.len()))),
    }
}

/// Back-and-forth relations, ranks, formula transfer and relation
/// consistency on structure files.
pub fn cmd_bf(args: &BfArgs) -> Result<Report> {
    let mut rep = Report::new("bf");
    rep.echo("mode", format!("{:?}", args.mode).to_lowercase());
    rep.echo("files", args.files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(" "));
    match args.mode {
        BfMode::Sym | BfMode::Asym => {
            let (s, t) = pair_of(&args.files)?;
            let (a, b) = (tuple_of(&s, args.left_tuple.as_deref())?, tuple_of(&t, args.right_tuple.as_deref())?);
            rep.echo("alpha", args.alpha);
            let (tag, (holds, tr)) = if args.mode == BfMode::Sym {
                ("bf-sym", bf_sym(&s, &a, &t, &b, args.alpha)?)
            } else {
                ("bf-asym", bf_asym(&s, &a, &t, &b, args.alpha)?)
            };
            rep.note("columns: tag pair alpha holds");
            rep.record(tag, &format!("{}|{}", s.name(), t.name()), format!("{}\t{holds}", args.alpha), true);
            rep.note(&tr.render(&s, &t));
        }
        BfMode::Rank => {
            let (s, t) = pair_of(&args.files)?;
            rep.echo("cap", args.cap);
            rep.note("columns: tag pair rank");
            let rank = bf_rank(&s, &t, args.cap)?;
            rep.record("bf-rank", &format!("{}|{}", s.name(), t.name()), rank, true);
        }
        BfMode::Karp => {
            let (s, t) = pair_of(&args.files)?;
            let (a, b) = (tuple_of(&s, args.left_tuple.as_deref())?, tuple_of(&t, args.right_tuple.as_deref())?);
            let pool = match &args.pool {
                Some(p) => parse_pool(s.signature(), &read(p)?)?,
                None => random_pool(s.signature(), a.len(), args.pool_size, 2, args.seed)?,
            };
            rep.echo("alpha", args.alpha);
            rep.echo("pool", pool.len());
            rep.echo("seed", args.seed);
            rep.note("columns: tag pair alpha leq geq sym checked distinguishing violations");
            for alpha in 0..=args.alpha {
                let k = karp_check(&s, &a, &t, &b, alpha, &pool)?;
                let payload = format!(
                    "{alpha}\t{}\t{}\t{}\t{}\t{}\t{}",
                    k.leq,
                    k.geq,
                    k.sym,
                    k.checked,
                    k.distinguishing.len(),
                    k.violations.len()
                );
                rep.record("karp-transfer", &format!("{}|{}", s.name(), t.name()), payload, k.violations.is_empty());
                for v in &k.violations {
                    rep.note(&format!("violation: formula {} ({}) {}", v.formula, v.relation, v.detail));
                }
            }
        }
        BfMode::Consistency => {
            let structs = args.files.iter().map(load).collect::<Result<Vec<_>>>()?;
            rep.echo("cap", args.cap);
            rep.note("columns: tag pair rows violations");
            for i in 0..structs.len() {
                for j in i..structs.len() {
                    let c = relation_consistency(&structs[i], &structs[j], args.cap)?;
                    let pair = format!("{}|{}", structs[i].name(), structs[j].name());
                    rep.record("inter-simulation", &pair, format!("{}\t{}", c.rows.len(), c.violations.len()), c.violations.is_empty());
                    for v in &c.violations {
                        rep.note(&format!("violation: {v}"));
                    }
                }
            }
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfArgs {
    pub files: Vec<PathBuf>,
    /// File with one formula per line.
    pub formulas: PathBuf,
    pub rounds: usize,
}

/// Winner of the finite EF game for the formulas in a file.
pub fn cmd_ef(args: &EfArgs) -> Result<Report> {
    let (s, t) = pair_of(&args.files)?;
    let phi = parse_pool(s.signature(), &read(&args.formulas)?)?;
    let mut rep = Report::new("ef");
    rep.echo("files", args.files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(" "));
    rep.echo("formulas", phi.len());
    rep.echo("rounds", args.rounds);
    rep.note("columns: tag pair rounds winner");
    let out = ef_winner(&s, &t, &phi, args.rounds)?;
    let winner = match out.winner {
        Winner::Spoiler => "spoiler",
        Winner::Duplicator => "duplicator",
    };
    rep.record("ef-game", &format!("{}|{}", s.name(), t.name()), format!("{}\t{winner}", args.rounds), true);
    rep.note(&out.transcript.render(&s, &t));
    Ok(rep)
}

/// The recipes a suite runs: a custom pair if one is configured, else the
/// named recipes, else `default`.
fn suite_pairs(cfg: &SuiteConfig, default: &[&str]) -> Result<Vec<Recipe>> {
    if cfg.has_custom_pair() {
        let need = |v: &Option<String>, k: &str| v.clone().ok_or_else(|| HarnessError::Input(format!("custom pair needs `{k}`")));
        let g = parse_group(&need(&cfg.left, "left")?)?;
        let h = parse_group(&need(&cfg.right, "right")?)?;
        let gs = parse_tuple(&g, &need(&cfg.left_tuple, "left-tuple")?)?;
        let hs = parse_tuple(&h, &need(&cfg.right_tuple, "right-tuple")?)?;
        return Ok(vec![Recipe { name: "custom".into(), g, gs, h, hs }]);
    }
    let names: Vec<String> = if cfg.recipes.is_empty() {
        default.iter().map(|s| s.to_string()).collect()
    } else {
        cfg.recipes.clone()
    };
    names.iter().map(|n| recipe_build(n).map_err(HarnessError::from)).collect()
}

/// Draws the coefficient scheme and polynomials for one recipe. The scalar
/// scheme is drawn before the polynomials in every suite that uses it, so
/// suites sharing a seed and recipe see the same instances.
struct Draw {
    scheme: CoeffScheme,
    polys: Vec<StarPolynomial>,
}

fn draw(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, n: usize, count: usize, degree: u32) -> Result<Draw> {
    let vars = cfg.vars.unwrap_or(4);
    let terms = cfg.terms.unwrap_or(3);
    let m = rng.random_range(1..=vars);
    let scheme = CoeffScheme::random(rng, n, m, terms);
    let polys = if cfg.polys.is_empty() {
        random_polys(rng, count, m, degree, terms)
    } else {
        cfg.polys.iter().map(|p| StarPolynomial::parse(p, Some(m)).map_err(HarnessError::from)).collect::<Result<_>>()?
    };
    Ok(Draw { scheme, polys })
}

fn lemma_opts(cfg: &SuiteConfig, moments: u32) -> LemmaOptions {
    LemmaOptions {
        wordlen: cfg.wordlen.unwrap_or(6),
        cap: cfg.cap.unwrap_or(DEFAULT_CAP),
        moments,
        ..Default::default()
    }
}

fn echo_suite(rep: &mut Report, cfg: &SuiteConfig, pairs: &[Recipe], degree: u32, count: usize) {
    if let Some(s) = &cfg.suite {
        rep.echo("suite", s);
    }
    rep.echo("seed", cfg.seed);
    rep.echo("rng", "chacha8, stream = recipe index");
    rep.echo("recipes", pairs.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(","));
    rep.echo("degree", degree);
    rep.echo("count", if cfg.polys.is_empty() { count } else { cfg.polys.len() });
    rep.echo("vars", cfg.vars.unwrap_or(4));
    rep.echo("terms", cfg.terms.unwrap_or(3));
    rep.echo("wordlen", cfg.wordlen.unwrap_or(6));
    rep.echo("cap", cfg.cap.unwrap_or(DEFAULT_CAP));
}

fn note_check(rep: &mut Report, pair: &Recipe, warning: &Option<String>) {
    if let Some(w) = warning {
        rep.note(&format!("{}: warning: {w}", pair.name));
    }
}

/// Trace equality `tr p(ŷ) = tr p(ẑ)` over seeded random polynomials.
pub fn cmd_lemma32(cfg: &SuiteConfig) -> Result<Report> {
    let pairs = suite_pairs(cfg, &LEMMA_RECIPES)?;
    let (degree, count) = (cfg.degree.unwrap_or(6), cfg.count.unwrap_or(100));
    let mut rep = Report::new("lemma32");
    echo_suite(&mut rep, cfg, &pairs, degree, count);
    rep.note("columns: tag recipe poly_index trace_left trace_right equal");
    let opts = lemma_opts(cfg, 0);
    for (i, pair) in pairs.iter().enumerate() {
        let d = draw(cfg, &mut suite_rng(cfg.seed, i), pair.gs.len(), count, degree)?;
        let tr = verify_trace_equality(pair, &d.scheme, &d.polys, &opts)?;
        note_check(&mut rep, pair, &tr.check.warning);
        for r in &tr.records {
            rep.record("trace-equality", &pair.name, r.tsv(), r.equal());
        }
    }
    Ok(rep)
}

/// Exact moment equality and, for finite groups, operator norm equality.
/// With `radius` set, also reports `norm_bounds` for the first polynomial.
pub fn cmd_lemma33(cfg: &SuiteConfig) -> Result<Report> {
    let pairs = suite_pairs(cfg, &LEMMA_RECIPES)?;
    let (degree, count) = (cfg.degree.unwrap_or(3), cfg.count.unwrap_or(20));
    let moments = cfg.moments.unwrap_or(6);
    let mut rep = Report::new("lemma33");
    echo_suite(&mut rep, cfg, &pairs, degree, count);
    rep.echo("moments", moments);
    rep.note("columns: tag recipe poly_index moments_left moments_right norm_left norm_right equal");
    let opts = lemma_opts(cfg, moments);
    for (i, pair) in pairs.iter().enumerate() {
        let d = draw(cfg, &mut suite_rng(cfg.seed, i), pair.gs.len(), count, degree)?;
        let nr = verify_norm_equality(pair, &d.scheme, &d.polys, &opts)?;
        note_check(&mut rep, pair, &nr.check.warning);
        for r in &nr.records {
            rep.record("norm-equality", &pair.name, r.tsv(), r.equal());
        }
        if let (Some(radius), Some(p)) = (cfg.radius, d.polys.first()) {
            let y = p.eval(&d.scheme.build(&pair.g, &pair.gs)?)?;
            let z = p.eval(&d.scheme.build(&pair.h, &pair.hs)?)?;
            let (by, bz) = (norm_bounds(&y, moments, radius, opts.cap)?, norm_bounds(&z, moments, radius, opts.cap)?);
            let ok = by.lower <= bz.upper * (1.0 + 1e-9) && bz.lower <= by.upper * (1.0 + 1e-9);
            let payload = format!("0\t{:.12e}\t{:.12e}\t{:.12e}\t{:.12e}\t{ok}", by.lower, by.upper, bz.lower, bz.upper);
            rep.record("norm-bounds", &pair.name, payload, ok);
        }
    }
    Ok(rep)
}

/// Crossed-product trace equality, plus moments when `moments` is set.
/// With `M = scalars` the instances and trace records coincide with those
/// of [`cmd_lemma32`].
pub fn cmd_crossed(cfg: &SuiteConfig) -> Result<Report> {
    let pairs = suite_pairs(cfg, &["finite-relabel"])?;
    let (degree, count) = (cfg.degree.unwrap_or(6), cfg.count.unwrap_or(50));
    let moments = cfg.moments.unwrap_or(0);
    let alg_text = cfg.algebra.clone().unwrap_or_else(|| "mm(2:1)".into());
    let alg = std::sync::Arc::new(MultiMatrixAlgebra::parse(&alg_text)?);
    let mut rep = Report::new("crossed");
    echo_suite(&mut rep, cfg, &pairs, degree, count);
    rep.echo("algebra", &alg);
    rep.echo("moments", moments);
    rep.note("columns: tag recipe poly_index trace_left trace_right equal");
    let opts = lemma_opts(cfg, moments);
    let scalar = alg.dim() == 1;
    for (i, pair) in pairs.iter().enumerate() {
        let mut rng = suite_rng(cfg.seed, i);
        let d = draw(cfg, &mut rng, pair.gs.len(), count, degree)?;
        let scheme = if scalar {
            CrossedScheme::from_scalar(&d.scheme, &alg)
        } else {
            CrossedScheme::random(&mut rng, &alg, pair.gs.len(), d.scheme.arity(), cfg.terms.unwrap_or(3))
        };
        let cr = verify_crossed_trace_equality(pair, &scheme, &d.polys, &opts)?;
        note_check(&mut rep, pair, &cr.trace.check.warning);
        for r in &cr.trace.records {
            rep.record("crossed-trace", &pair.name, r.tsv(), r.equal());
        }
        for r in &cr.moments {
            rep.record("crossed-moments", &pair.name, r.tsv(), r.equal());
        }
    }
    Ok(rep)
}

fn fd_side(desc: &Option<String>, tuple: &Option<String>, side: &str) -> Result<(FdAlgebra, Vec<FdElement>)> {
    let desc = desc.as_deref().ok_or_else(|| HarnessError::Input(format!("missing `{side}` algebra")))?;
    let alg = FdAlgebra::parse(desc)?;
    let xs = alg.parse_tuple(tuple.as_deref().unwrap_or(""))?;
    Ok((alg, xs))
}

const RBOUND_COLUMNS: &str =
    "columns: tag subject alpha value exact exact_zero degree formulas pool_left pool_right meshes net_points correction modulus";

/// `r_0` lower bounds: for an explicit pair, or for lifts of finite
/// recipes through seeded coefficient schemes, where exact zero is expected.
pub fn cmd_r0(cfg: &SuiteConfig) -> Result<Report> {
    let degree = cfg.degree.unwrap_or(3);
    let mut rep = Report::new("r0");
    rep.echo("degree", degree);
    if cfg.has_custom_pair() {
        let (a_alg, a) = fd_side(&cfg.left, &cfg.left_tuple, "left")?;
        let (b_alg, b) = fd_side(&cfg.right, &cfg.right_tuple, "right")?;
        rep.echo("left", format!("{a_alg} [{}]", cfg.left_tuple.as_deref().unwrap_or("")));
        rep.echo("right", format!("{b_alg} [{}]", cfg.right_tuple.as_deref().unwrap_or("")));
        rep.note(RBOUND_COLUMNS);
        let r = r0_lower(&a_alg, &a, &b_alg, &b, degree)?;
        rep.record("r0-base", "pair", r.tsv(), true);
        return Ok(rep);
    }
    let names: Vec<String> =
        if cfg.recipes.is_empty() { vec!["finite-relabel".into(), "finite-subgroup".into()] } else { cfg.recipes.clone() };
    let count = cfg.count.unwrap_or(10);
    rep.echo("seed", cfg.seed);
    rep.echo("recipes", names.join(","));
    rep.echo("count", count);
    rep.note(RBOUND_COLUMNS);
    for (i, name) in names.iter().enumerate() {
        let pair = recipe_build(name)?;
        let (ga, gb) = (FdAlgebra::group(&pair.g)?, FdAlgebra::group(&pair.h)?);
        let mut rng = suite_rng(cfg.seed, i);
        for k in 0..count {
            let m = rng.random_range(1..=cfg.vars.unwrap_or(2));
            let scheme = CoeffScheme::random(&mut rng, pair.gs.len(), m, cfg.terms.unwrap_or(2));
            let lift = |g: &Group, t| -> Result<Vec<FdElement>> {
                Ok(scheme.build(g, t)?.into_iter().map(FdElement::Group).collect())
            };
            let r = r0_lower(&ga, &lift(&pair.g, &pair.gs)?, &gb, &lift(&pair.h, &pair.hs)?, degree)?;
            rep.record("r0-base", &format!("{name}#{k}"), r.tsv(), r.exact_zero);
        }
    }
    Ok(rep)
}

/// `r_α` lower bound for an explicit pair with Spoiler pools.
pub fn cmd_ralpha(cfg: &SuiteConfig) -> Result<Report> {
    let (a_alg, a) = fd_side(&cfg.left, &cfg.left_tuple, "left")?;
    let (b_alg, b) = fd_side(&cfg.right, &cfg.right_tuple, "right")?;
    let pool_a = cfg.left_pool.iter().map(|t| a_alg.parse_tuple(t)).collect::<std::result::Result<Vec<_>, _>>()?;
    let pool_b = cfg.right_pool.iter().map(|t| b_alg.parse_tuple(t)).collect::<std::result::Result<Vec<_>, _>>()?;
    let defaults = RAlphaParams::default();
    let params = RAlphaParams {
        alpha: cfg.alpha.unwrap_or(defaults.alpha),
        degree: cfg.degree.unwrap_or(defaults.degree),
        eps: cfg.eps.unwrap_or(defaults.eps),
        omega: match &cfg.modulus {
            Some(m) => WeakModulus::parse(m)?,
            None => defaults.omega.clone(),
        },
        net_cap: cfg.cap.unwrap_or(defaults.net_cap),
        ..defaults
    };
    let mut rep = Report::new("ralpha");
    rep.echo("left", format!("{a_alg} [{}]", cfg.left_tuple.as_deref().unwrap_or("")));
    rep.echo("right", format!("{b_alg} [{}]", cfg.right_tuple.as_deref().unwrap_or("")));
    rep.echo("alpha", params.alpha);
    rep.echo("degree", params.degree);
    rep.echo("eps", params.eps);
    rep.echo("modulus", &params.omega);
    rep.echo("net_cap", params.net_cap);
    rep.echo("refine", format!("depth {} budget {}", params.max_depth, params.refine_budget));
    rep.note(RBOUND_COLUMNS);
    let r: RBound = r_alpha_lower(&a_alg, &a, &b_alg, &b, &pool_a, &pool_b, &params)?;
    rep.record("r-alpha", "pair", r.tsv(), true);
    Ok(rep)
}

/// Fast end-to-end checks over every module.
pub fn cmd_selftest(cfg: &SuiteConfig) -> Result<Report> {
    let mut rep = Report::new("selftest");
    rep.echo("seed", cfg.seed);
    rep.note("columns: tag check detail");

    let mut small = cfg.clone();
    small.count = Some(cfg.count.unwrap_or(8));
    small.degree = Some(cfg.degree.unwrap_or(4));
    small.recipes = vec!["free-embed".into(), "finite-relabel".into()];
    let l32 = cmd_lemma32(&small)?;
    rep.record("trace-equality", "lemma32", format!("{}/{} equal", l32.passed, l32.passed + l32.failed), l32.failed == 0);

    small.moments = Some(3);
    small.recipes = vec!["finite-relabel".into(), "finite-subgroup".into()];
    let l33 = cmd_lemma33(&small)?;
    rep.record("norm-equality", "lemma33", format!("{}/{} equal", l33.passed, l33.passed + l33.failed), l33.failed == 0);

    small.recipes = vec!["finite-relabel".into()];
    small.algebra = Some("scalars".into());
    let lhs = cmd_lemma32(&small)?;
    let rhs = cmd_crossed(&small)?;
    let shared = lhs.payloads("trace-equality");
    let same = !shared.is_empty() && shared == rhs.payloads("crossed-trace");
    rep.record("crossed-trace", "scalar-reduction", format!("{} shared records", shared.len()), same);
    small.algebra = Some("mm(2:1)".into());
    let cr = cmd_crossed(&small)?;
    rep.record("crossed-trace", "mm(2:1)", format!("{}/{} equal", cr.passed, cr.passed + cr.failed), cr.failed == 0);

    let (c2, c3) = (FdAlgebra::parse("cyclic(2)")?, FdAlgebra::parse("cyclic(3)")?);
    let r = r0_lower(&c2, &c2.parse_tuple("u[t]")?, &c3, &c3.parse_tuple("u[t]")?, 3)?;
    rep.record("r0-base", "c2-vs-c3", format!("{}", r.value), r.value >= 0.4);

    let z = parse_group("Z")?;
    let y = AlgebraElement::parse(&z, "u[1] + u[-1]")?;
    let b = norm_bounds(&y, 16, cfg.radius.unwrap_or(8), DEFAULT_CAP)?;
    let m12 = b.moments[..2] == [GaussScalar::from_ints(2, 0), GaussScalar::from_ints(6, 0)];
    rep.record("norm-bounds", "u1+u-1", format!("lower {:.6} upper {}", b.lower, b.upper), b.lower >= 1.9 && b.upper == 2.0 && m12);

    let c4 = Group::cyclic(4)?.to_fin_structure()?;
    let v4 = parse_group("prod(cyclic(2),cyclic(2))")?.to_fin_structure()?;
    let rank = bf_rank(&c4, &v4, 3)?;
    let self_rank = bf_rank(&c4, &c4, 3)?;
    let ok = matches!(rank, crate::games::Rank::Finite(_)) && self_rank == crate::games::Rank::Stabilized;
    rep.record("bf-rank", "c4-vs-klein", format!("{rank} / self {self_rank}"), ok);

    let corpus = all_binary_relation_structures(2);
    let mut mismatches = 0;
    for s in &corpus {
        for t in &corpus {
            let holds = bf_sym(s, &SortedTuple::empty(), t, &SortedTuple::empty(), 2)?.0;
            if holds != iso_search(s, t)?.is_some() {
                mismatches += 1;
            }
        }
    }
    rep.record("scott-finite", "binary-relation-2", format!("{} pairs, {mismatches} mismatches", corpus.len().pow(2)), mismatches == 0);

    let mut violations = 0;
    for s in &corpus {
        for t in &corpus {
            violations += relation_consistency(s, t, 2)?.violations.len();
        }
    }
    rep.record("inter-simulation", "binary-relation-2", format!("{violations} violations"), violations == 0);
    Ok(rep)
}
