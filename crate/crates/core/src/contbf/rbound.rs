use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::formula::{lipschitz, max_gap, max_gap_f64, to_f64, word_traces, word_traces_f64, words};
use super::{Cell, ContError, FdAlgebra, FdElement, FloatElement, Net, Result, WeakModulus};

/// Coarsest mesh in the ladder of nets.
pub const TOP_MESH_EXP: i32 = 0;
pub const DEFAULT_NET_CAP: usize = 200_000;
pub const DEFAULT_REFINE_BUDGET: usize = 20_000;

/// Rounding allowance for floating-point traces of norm at most 1.
const FLOAT_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Resolution {
    pub degree: u32,
    pub formulas: usize,
    pub pools: (usize, usize),
    /// Meshes of the nets used, finest last.
    pub meshes: Vec<f64>,
    pub net_points: usize,
    /// Largest modulus correction subtracted for a Duplicator response.
    pub correction: f64,
    pub modulus: String,
}

/// A certified lower bound on `r_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct RBound {
    pub alpha: u32,
    pub value: f64,
    /// The exact value, for rank 0.
    pub exact: Option<BigRational>,
    pub exact_zero: bool,
    pub resolution: Resolution,
}

impl RBound {
    pub const TSV_HEADER: &'static str =
        "alpha\tvalue\texact\texact_zero\tdegree\tformulas\tpool_left\tpool_right\tmeshes\tnet_points\tcorrection\tmodulus";

    pub fn tsv(&self) -> String {
        let r = &self.resolution;
        let meshes = if r.meshes.is_empty() { "-".into() } else { r.meshes.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",") };
        format!(
            "{}\t{:.12e}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.6e}\t{}",
            self.alpha,
            self.value,
            self.exact.as_ref().map_or("-".into(), |x| x.to_string()),
            self.exact_zero,
            r.degree,
            r.formulas,
            r.pools.0,
            r.pools.1,
            meshes,
            r.net_points,
            r.correction,
            r.modulus
        )
    }
}

fn check_tuple(alg: &FdAlgebra, xs: &[FdElement]) -> Result<Vec<u32>> {
    for x in xs {
        if !alg.owns(x) {
            return Err(ContError::Sort(format!("element {x} is not in {alg}")));
        }
    }
    Ok(xs.iter().map(FdElement::radius).collect())
}

fn matched_radii(a_alg: &FdAlgebra, a: &[FdElement], b_alg: &FdAlgebra, b: &[FdElement]) -> Result<Vec<u32>> {
    if a.len() != b.len() {
        return Err(ContError::Sort(format!("tuples of lengths {} and {}", a.len(), b.len())));
    }
    let (ra, rb) = (check_tuple(a_alg, a)?, check_tuple(b_alg, b)?);
    if ra != rb {
        return Err(ContError::Sort(format!("operator-norm sorts {ra:?} and {rb:?} differ")));
    }
    Ok(ra)
}

/// `(value, exact value)` of the rank-0 bound for tuples of the given radii.
fn r0_gap(a: &[FdElement], b: &[FdElement], radii: &[u32], degree: u32) -> Result<BigRational> {
    let ws = words(radii.len(), degree)?;
    let lips: Vec<u64> = ws.iter().map(|w| lipschitz(w, radii)).collect();
    Ok(max_gap(&word_traces(a, degree)?, &word_traces(b, degree)?, &lips))
}

/// `max_φ |φ(a) − φ(b)|` over the normalized monomial-trace formulas of
/// degree `≤ degree`. Every such `φ` respects `Ω_L`, so this is a lower
/// bound on `r_0` for any weak modulus dominating `Ω_L`.
pub fn r0_lower(a_alg: &FdAlgebra, a: &[FdElement], b_alg: &FdAlgebra, b: &[FdElement], degree: u32) -> Result<RBound> {
    let radii = matched_radii(a_alg, a, b_alg, b)?;
    let gap = r0_gap(a, b, &radii, degree)?;
    Ok(RBound {
        alpha: 0,
        value: to_f64(&gap),
        exact_zero: gap.is_zero(),
        exact: Some(gap),
        resolution: Resolution {
            degree,
            formulas: 2 * words(radii.len(), degree)?.len(),
            pools: (0, 0),
            meshes: Vec::new(),
            net_points: 0,
            correction: 0.0,
            modulus: WeakModulus::Lipschitz.to_string(),
        },
    })
}

#[derive(Debug, Clone)]
pub struct RAlphaParams {
    pub alpha: u32,
    pub degree: u32,
    /// Mesh of the starting grid.
    pub eps: f64,
    pub omega: WeakModulus,
    /// Most cells in a starting grid.
    pub net_cap: usize,
    /// Most extra Duplicator replies examined while refining one Spoiler move.
    pub refine_budget: usize,
    /// Most halvings of a starting cube.
    pub max_depth: u32,
}

impl Default for RAlphaParams {
    fn default() -> Self {
        RAlphaParams {
            alpha: 1,
            degree: 3,
            eps: 0.25,
            omega: WeakModulus::Lipschitz,
            net_cap: DEFAULT_NET_CAP,
            refine_budget: DEFAULT_REFINE_BUDGET,
            max_depth: 4,
        }
    }
}

/// Powers of two from the largest one `≤ eps` up to `2^TOP_MESH_EXP`.
/// Shrinking `eps` only adds meshes, so bounds cannot decrease.
pub fn mesh_ladder(eps: f64) -> Result<Vec<i32>> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(ContError::Descriptor(format!("eps {eps} must be positive")));
    }
    let fine = eps.log2().floor() as i32;
    Ok((fine.min(TOP_MESH_EXP)..=TOP_MESH_EXP).rev().collect())
}

fn mesh_of(exp: i32) -> BigRational {
    let p = BigRational::from_integer(BigInt::from(2).pow(exp.unsigned_abs()));
    if exp >= 0 { p } else { p.recip() }
}

/// A Duplicator reply: one cell per Spoiler entry, and its charged value.
struct Reply {
    cells: Vec<Cell>,
    sub: f64,
    exact: bool,
    corr: f64,
}

impl Reply {
    fn value(&self) -> f64 {
        self.sub - self.corr
    }
}

#[derive(PartialEq)]
struct Key(f64, usize);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Key {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0).then(self.1.cmp(&o.1))
    }
}

struct Ctx<'a> {
    algs: [&'a FdAlgebra; 2],
    pools: [&'a [Vec<FdElement>]; 2],
    params: &'a RAlphaParams,
    mesh: BigRational,
    nets: Mutex<HashMap<(usize, u32), Arc<Net>>>,
    stats: Mutex<(usize, f64)>,
}

impl Ctx<'_> {
    fn net(&self, side: usize, radius: u32) -> Result<Arc<Net>> {
        if let Some(n) = self.nets.lock().expect("net cache").get(&(side, radius)) {
            return Ok(n.clone());
        }
        let n = Arc::new(self.algs[side].net(radius, &self.mesh, self.params.net_cap)?);
        self.nets.lock().expect("net cache").insert((side, radius), n.clone());
        Ok(n)
    }

    /// Lower bound on `r_α(a, b)` and whether it rests on exact zeros only.
    fn level(&self, alpha: u32, tuples: [&[FdElement]; 2]) -> Result<(f64, bool)> {
        let radii = matched_radii(self.algs[0], tuples[0], self.algs[1], tuples[1])?;
        if alpha == 0 {
            return self.leaf(tuples, &radii);
        }
        let (mut best, mut exact) = (0.0f64, true);
        for side in 0..2 {
            for c in self.pools[side] {
                let (v, ex) = self.spoiler_move(alpha, side, tuples, c)?;
                best = best.max(v);
                exact &= ex;
            }
        }
        Ok((best, exact))
    }

    /// The rank-0 bound in floating point, less a rounding margin; gaps
    /// inside the margin are settled exactly.
    fn leaf(&self, tuples: [&[FdElement]; 2], radii: &[u32]) -> Result<(f64, bool)> {
        let degree = self.params.degree;
        let ws = words(radii.len(), degree)?;
        let lips: Vec<u64> = ws.iter().map(|w| lipschitz(w, radii)).collect();
        let float = |xs: &[FdElement]| xs.iter().map(FloatElement::from_exact).collect::<Result<Vec<_>>>();
        let (fa, fb) = (float(tuples[0])?, float(tuples[1])?);
        let gap = max_gap_f64(&word_traces_f64(&fa, degree), &word_traces_f64(&fb, degree), &lips);
        let top = radii.iter().map(|&r| r as f64).fold(1.0, f64::max).powi(degree as i32);
        let margin = FLOAT_MARGIN * top;
        if gap > margin {
            return Ok((gap - margin, false));
        }
        let exact = r0_gap(tuples[0], tuples[1], radii, degree)?;
        Ok((to_f64(&exact), exact.is_zero()))
    }

    fn reply(&self, alpha: u32, side: usize, ext: &[FdElement], base: &[FdElement], cells: Vec<Cell>) -> Result<Reply> {
        let mut resp = base.to_vec();
        let mut deltas = vec![0.0; base.len()];
        for cell in &cells {
            resp.push(cell.point.clone());
            deltas.push(cell.rho);
        }
        let pair: [&[FdElement]; 2] = if side == 0 { [ext, &resp] } else { [&resp, ext] };
        let (sub, exact) = self.level(alpha - 1, pair)?;
        let corr = self.params.omega.trunc(&deltas)?;
        Ok(Reply { cells, sub, exact, corr })
    }

    fn replies(&self, alpha: u32, side: usize, ext: &[FdElement], base: &[FdElement], batch: Vec<Vec<Cell>>) -> Result<Vec<Reply>> {
        let out: Vec<Result<Reply>> = batch.into_par_iter().map(|cells| self.reply(alpha, side, ext, base, cells)).collect();
        out.into_iter().collect()
    }

    /// `inf` over Duplicator replies of the charged level-`(α−1)` bound for
    /// Spoiler playing `c` on `side`, refining the worst cell first.
    fn spoiler_move(&self, alpha: u32, side: usize, tuples: [&[FdElement]; 2], c: &[FdElement]) -> Result<(f64, bool)> {
        check_tuple(self.algs[side], c)?;
        let other = 1 - side;
        let radii: Vec<u32> = c.iter().map(FdElement::radius).collect();
        let nets: Vec<Arc<Net>> = radii.iter().map(|&r| self.net(other, r)).collect::<Result<_>>()?;
        let cap = self.params.net_cap;
        let total = nets
            .iter()
            .try_fold(1usize, |acc, nt| acc.checked_mul(nt.cells.len()).filter(|&t| t <= cap))
            .ok_or(ContError::Cap { what: "Duplicator replies".into(), cap })?;
        let mut ext = tuples[side].to_vec();
        ext.extend(c.iter().cloned());
        let base = tuples[other];
        let batch: Vec<Vec<Cell>> = (0..total)
            .map(|mut idx| {
                nets.iter()
                    .map(|nt| {
                        let cell = nt.cells[idx % nt.cells.len()].clone();
                        idx /= nt.cells.len();
                        cell
                    })
                    .collect()
            })
            .collect();
        let mut store: Vec<Option<Reply>> = Vec::new();
        let mut heap = BinaryHeap::new();
        let push = |store: &mut Vec<Option<Reply>>, heap: &mut BinaryHeap<Reverse<Key>>, r: Reply| {
            heap.push(Reverse(Key(r.value(), store.len())));
            store.push(Some(r));
        };
        for r in self.replies(alpha, side, &ext, base, batch)? {
            push(&mut store, &mut heap, r);
        }
        let mut spent = 0usize;
        while let Some(Reverse(Key(_, i))) = heap.peek() {
            let worst = store[*i].as_ref().expect("live reply");
            let (k, cell) = worst
                .cells
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.rho.total_cmp(&b.1.rho))
                .expect("Spoiler plays at least one element");
            if worst.exact || worst.sub <= 0.0 || cell.depth >= self.params.max_depth {
                break;
            }
            let children = self.algs[other].refine(radii[k], cell);
            if spent + children.len() > self.params.refine_budget {
                break;
            }
            spent += children.len();
            let cells = worst.cells.clone();
            let i = *i;
            heap.pop();
            store[i] = None;
            let batch = children
                .into_iter()
                .map(|ch| {
                    let mut cs = cells.clone();
                    cs[k] = ch;
                    cs
                })
                .collect();
            for r in self.replies(alpha, side, &ext, base, batch)? {
                push(&mut store, &mut heap, r);
            }
        }
        let (mut worst, mut exact, mut max_corr) = (f64::INFINITY, false, 0.0f64);
        for r in store.iter().flatten() {
            worst = worst.min(r.value());
            exact |= r.exact;
            max_corr = max_corr.max(r.corr);
        }
        let mut s = self.stats.lock().expect("stats");
        s.0 += total + spent;
        s.1 = s.1.max(max_corr);
        Ok((worst.max(0.0), exact))
    }
}

/// Lower bound on `r_α(a, b)` with Spoiler restricted to the pooled tuples
/// and Duplicator's replies taken from grid nets. Each reply is charged
/// `Ω↾(0, …, 0, ρ)` for the covering radius `ρ` of its net point, since
/// `r_β` obeys the truncated modulus in each argument.
pub fn r_alpha_lower(
    a_alg: &FdAlgebra,
    a: &[FdElement],
    b_alg: &FdAlgebra,
    b: &[FdElement],
    pool_a: &[Vec<FdElement>],
    pool_b: &[Vec<FdElement>],
    params: &RAlphaParams,
) -> Result<RBound> {
    if params.alpha == 0 {
        let mut r = r0_lower(a_alg, a, b_alg, b, params.degree)?;
        r.resolution.modulus = params.omega.to_string();
        return Ok(r);
    }
    params.omega.check_truncations(&super::sample_grid(2))?;
    let radii = matched_radii(a_alg, a, b_alg, b)?;
    let longest = pool_a.iter().chain(pool_b).map(Vec::len).max().unwrap_or(0);
    let vars = radii.len() + longest * params.alpha as usize;
    let formulas = 2 * words(vars, params.degree)?.len();
    let (mut value, mut exact_any) = (0.0f64, false);
    let (mut meshes, mut net_points, mut correction) = (Vec::new(), 0, 0.0f64);
    for exp in mesh_ladder(params.eps)? {
        let ctx = Ctx {
            algs: [a_alg, b_alg],
            pools: [pool_a, pool_b],
            params,
            mesh: mesh_of(exp),
            nets: Mutex::new(HashMap::new()),
            stats: Mutex::new((0, 0.0)),
        };
        let (v, ex) = ctx.level(params.alpha, [a, b])?;
        value = value.max(v);
        let s = ctx.stats.into_inner().expect("stats");
        exact_any |= ex;
        net_points += s.0;
        correction = correction.max(s.1);
        meshes.push(2f64.powi(exp));
    }
    Ok(RBound {
        alpha: params.alpha,
        value,
        exact: None,
        exact_zero: exact_any && value == 0.0,
        resolution: Resolution {
            degree: params.degree,
            formulas,
            pools: (pool_a.len(), pool_b.len()),
            meshes,
            net_points,
            correction,
            modulus: params.omega.to_string(),
        },
    })
}
