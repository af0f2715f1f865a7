use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{ContError, Result};
use crate::algebra::{regular_matrix, AlgebraElement, GaussScalar};
use crate::crossed::{MatElement, MultiMatrixAlgebra};
use crate::groups::{parse_group, Group, Word};

/// Largest finite group accepted as a tracial algebra.
pub const MAX_GROUP_ORDER: usize = 64;

/// Slack used when rounding operator norms to integer sort radii.
const RADIUS_SLACK: f64 = 1e-9;

/// A finite-dimensional tracial algebra: `ℂ[G]` for a finite group, or a
/// multi-matrix algebra with weighted trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FdAlgebra {
    Group { group: Group, elements: Vec<Word> },
    Matrix(Arc<MultiMatrixAlgebra>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FdElement {
    Group(AlgebraElement),
    Matrix(MatElement),
}

impl FdAlgebra {
    pub fn group(group: &Group) -> Result<Self> {
        if !group.is_finite() {
            return Err(ContError::Descriptor(format!("{group} is not finite")));
        }
        let elements = group.elements(MAX_GROUP_ORDER)?;
        Ok(FdAlgebra::Group { group: group.clone(), elements })
    }

    pub fn matrix(alg: MultiMatrixAlgebra) -> Self {
        FdAlgebra::Matrix(Arc::new(alg))
    }

    /// `mm(...)` and `scalars` give multi-matrix algebras; anything else is
    /// read as a group expression.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "scalars" || s.starts_with("mm(") {
            return Ok(Self::matrix(MultiMatrixAlgebra::parse(s)?));
        }
        Self::group(&parse_group(s)?)
    }

    /// Elements are group-algebra literals such as `(1/2)*u[a] + u[e]`, or
    /// matrix literals such as `[[0,1],[1,0]]`.
    pub fn parse_element(&self, s: &str) -> Result<FdElement> {
        Ok(match self {
            FdAlgebra::Group { group, .. } => FdElement::Group(AlgebraElement::parse(group, s)?),
            FdAlgebra::Matrix(alg) => FdElement::Matrix(MatElement::parse(alg, s)?),
        })
    }

    /// A `;`-separated tuple; the empty string is the empty tuple.
    pub fn parse_tuple(&self, s: &str) -> Result<Vec<FdElement>> {
        s.split(';').map(str::trim).filter(|t| !t.is_empty()).map(|t| self.parse_element(t)).collect()
    }

    pub fn one(&self) -> FdElement {
        match self {
            FdAlgebra::Group { group, .. } => FdElement::Group(AlgebraElement::one(group)),
            FdAlgebra::Matrix(alg) => FdElement::Matrix(MatElement::one(alg)),
        }
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        match self {
            FdAlgebra::Group { elements, .. } => elements.len(),
            FdAlgebra::Matrix(alg) => alg.dim(),
        }
    }

    /// `‖e_k‖₂²` for each complex coordinate `e_k`; real and imaginary
    /// directions share it.
    pub fn coord_weights(&self) -> Vec<f64> {
        match self {
            FdAlgebra::Group { elements, .. } => vec![1.0; elements.len()],
            FdAlgebra::Matrix(alg) => alg
                .blocks()
                .iter()
                .zip(alg.weights())
                .flat_map(|(&n, w)| {
                    let v = w.to_f64().unwrap_or(0.0) / n as f64;
                    std::iter::repeat_n(v, n * n)
                })
                .collect(),
        }
    }

    /// The element with the given complex coordinates.
    pub fn from_coords(&self, coords: &[GaussScalar]) -> FdElement {
        match self {
            FdAlgebra::Group { group, elements } => {
                FdElement::Group(AlgebraElement::from_terms(group, elements.iter().cloned().zip(coords.iter().cloned())))
            }
            FdAlgebra::Matrix(alg) => {
                let mut it = coords.iter().cloned();
                let blocks = alg.blocks().iter().map(|n| it.by_ref().take(n * n).collect()).collect();
                FdElement::Matrix(MatElement::from_blocks(alg, blocks).expect("coordinate count matches"))
            }
        }
    }

    pub fn coords(&self, x: &FdElement) -> Vec<GaussScalar> {
        match (self, x) {
            (FdAlgebra::Group { elements, .. }, FdElement::Group(y)) => elements.iter().map(|g| y.coeff(g)).collect(),
            (_, FdElement::Matrix(m)) => m.blocks().iter().flatten().cloned().collect(),
            _ => Vec::new(),
        }
    }

    /// `‖x − y‖₂`.
    pub fn l2_dist(&self, x: &FdElement, y: &FdElement) -> f64 {
        let (cx, cy) = (self.coords(x), self.coords(y));
        cx.iter()
            .zip(&cy)
            .zip(self.coord_weights())
            .map(|((a, b), w)| w * (a - b).to_complex().norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `κ` with `‖x‖_op ≤ κ‖x‖₂` for all `x`.
    pub fn norm_ratio(&self) -> f64 {
        match self {
            // ‖x‖_op ≤ ‖x‖₁ ≤ √|G| ‖x‖₂.
            FdAlgebra::Group { elements, .. } => (elements.len() as f64).sqrt(),
            // ‖x_i‖_op² ≤ tr(x_i*x_i) ≤ (n_i/w_i)‖x‖₂².
            FdAlgebra::Matrix(alg) => alg
                .blocks()
                .iter()
                .zip(alg.weights())
                .map(|(&n, w)| (n as f64 / w.to_f64().unwrap_or(f64::MIN_POSITIVE)).sqrt())
                .fold(0.0, f64::max),
        }
    }

    pub fn owns(&self, x: &FdElement) -> bool {
        match (self, x) {
            (FdAlgebra::Group { group, .. }, FdElement::Group(y)) => y.group() == group,
            (FdAlgebra::Matrix(alg), FdElement::Matrix(m)) => m.algebra() == alg,
            _ => false,
        }
    }
}

impl fmt::Display for FdAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FdAlgebra::Group { group, .. } => write!(f, "{group}"),
            FdAlgebra::Matrix(alg) => write!(f, "{alg}"),
        }
    }
}

impl FdElement {
    pub fn mul(&self, o: &Self) -> Result<Self> {
        Ok(match (self, o) {
            (FdElement::Group(a), FdElement::Group(b)) => FdElement::Group(a.conv_mul(b)?),
            (FdElement::Matrix(a), FdElement::Matrix(b)) => FdElement::Matrix(a.mul(b)?),
            _ => return Err(ContError::Sort("product across algebras".into())),
        })
    }

    pub fn adjoint(&self) -> Self {
        match self {
            FdElement::Group(a) => FdElement::Group(a.adjoint()),
            FdElement::Matrix(a) => FdElement::Matrix(a.adjoint()),
        }
    }

    pub fn scale(&self, c: &GaussScalar) -> Self {
        match self {
            FdElement::Group(a) => FdElement::Group(a.scale(c)),
            FdElement::Matrix(a) => FdElement::Matrix(a.scale(c)),
        }
    }

    pub fn trace(&self) -> GaussScalar {
        match self {
            FdElement::Group(a) => a.trace(),
            FdElement::Matrix(a) => a.trace(),
        }
    }

    /// Operator norm from singular values in floating point.
    pub fn op_norm(&self) -> f64 {
        match self {
            FdElement::Group(a) => regular_matrix(a).map(|m| top_singular(&m)).unwrap_or(f64::INFINITY),
            FdElement::Matrix(a) => a
                .blocks()
                .iter()
                .zip(a.algebra().blocks())
                .map(|(b, &n)| top_singular(&DMatrix::from_fn(n, n, |i, j| b[i * n + j].to_complex())))
                .fold(0.0, f64::max),
        }
    }

    /// The smallest integer `R ≥ 1` with `‖x‖_op ≤ R`, up to rounding slack.
    pub fn radius(&self) -> u32 {
        let r = (self.op_norm() - RADIUS_SLACK).ceil();
        r.max(1.0) as u32
    }
}

impl fmt::Display for FdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FdElement::Group(a) => write!(f, "{}", a.to_literal()),
            FdElement::Matrix(a) => write!(f, "{a}"),
        }
    }
}

fn top_singular(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.iter().cloned().fold(0.0, f64::max)
}

/// A cube of the grid on the real coordinates, with a legal move standing
/// for it: every element of the ball inside the cube lies within `rho`
/// (in `‖·‖₂`) of `point`.
#[derive(Debug, Clone)]
pub struct Cell {
    pub center: Vec<BigRational>,
    pub half: BigRational,
    pub depth: u32,
    pub point: FdElement,
    pub rho: f64,
}

/// The initial cells for the ball of radius `radius`.
#[derive(Debug, Clone)]
pub struct Net {
    pub radius: u32,
    pub mesh: f64,
    pub cells: Vec<Cell>,
}

impl FdAlgebra {
    fn axis_weights(&self) -> Vec<f64> {
        self.coord_weights().into_iter().flat_map(|w| [w, w]).collect()
    }

    /// Half-diagonal of a cube of half-width `half`, in `‖·‖₂`.
    fn cube_radius(&self, half: f64) -> f64 {
        half * self.axis_weights().iter().sum::<f64>().sqrt()
    }

    /// The cell of a cube, or `None` when the cube misses the ball. A center
    /// outside the ball is pulled in by scaling, and the covering radius
    /// grows by the distance moved.
    fn cell(&self, radius: u32, center: Vec<BigRational>, half: BigRational, depth: u32) -> Option<Cell> {
        let r = radius as f64;
        let cube = self.cube_radius(half.to_f64().unwrap_or(f64::INFINITY));
        let w = self.axis_weights();
        let norm2: f64 = center.iter().zip(&w).map(|(c, w)| w * c.to_f64().unwrap_or(0.0).powi(2)).sum();
        if norm2.sqrt() > r + cube + 1e-12 {
            return None;
        }
        let coords: Vec<GaussScalar> =
            center.chunks(2).map(|c| GaussScalar::new(c[0].clone(), c[1].clone())).collect();
        let p = self.from_coords(&coords);
        let op = p.op_norm();
        // Points of the cube are within κ·cube of the center in operator norm.
        if op - self.norm_ratio() * cube > r + 1e-12 {
            return None;
        }
        // Same tolerance as sort radii, so points on the sphere stay exact.
        if op <= r * (1.0 + RADIUS_SLACK) {
            return Some(Cell { center, half, depth, point: p, rho: cube });
        }
        let den = 1i64 << 20;
        let t = (r / op * (1.0 - RADIUS_SLACK) * den as f64).floor() as i64;
        let q = p.scale(&GaussScalar::new(BigRational::new(t.into(), den.into()), BigRational::zero()));
        let moved = self.l2_dist(&p, &q);
        Some(Cell { center, half, depth, point: q, rho: cube + moved })
    }

    /// Grid cubes of side `mesh` centered at multiples of `mesh`, covering
    /// the ball of radius `radius`.
    pub fn net(&self, radius: u32, mesh: &BigRational, cap: usize) -> Result<Net> {
        let mesh_f = mesh.to_f64().unwrap_or(f64::NAN);
        if mesh_f.is_nan() || mesh_f <= 0.0 {
            return Err(ContError::Descriptor(format!("mesh {mesh} must be positive")));
        }
        let r = radius as f64;
        let half = mesh / BigRational::from_integer(2.into());
        let rho = self.cube_radius(mesh_f / 2.0);
        let steps = (r / mesh_f).ceil() as i64;
        let levels: Vec<BigRational> = (-steps..=steps).map(|k| mesh * BigRational::from_integer(k.into())).collect();
        let axis_w = self.axis_weights();
        let mut raw = Vec::new();
        let mut cur = Vec::with_capacity(axis_w.len());
        grid_walk(&levels, &axis_w, (r + rho) * (r + rho), 0.0, &mut cur, &mut raw, cap)?;
        let cells = raw
            .into_iter()
            .filter_map(|idx| self.cell(radius, idx.iter().map(|&i| levels[i].clone()).collect(), half.clone(), 0))
            .collect();
        Ok(Net { radius, mesh: mesh_f, cells })
    }

    /// The `2^axes` half-size cubes of `cell` that meet the ball.
    pub fn refine(&self, radius: u32, cell: &Cell) -> Vec<Cell> {
        let half = &cell.half / BigRational::from_integer(2.into());
        let axes = cell.center.len();
        (0..1usize << axes)
            .filter_map(|mask| {
                let center = (0..axes)
                    .map(|a| if mask >> a & 1 == 1 { &cell.center[a] + &half } else { &cell.center[a] - &half })
                    .collect();
                self.cell(radius, center, half.clone(), cell.depth + 1)
            })
            .collect()
    }
}

fn grid_walk(
    levels: &[BigRational],
    axis_w: &[f64],
    bound: f64,
    acc: f64,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<()> {
    if cur.len() == axis_w.len() {
        if out.len() >= cap {
            return Err(ContError::Cap { what: "net size".into(), cap });
        }
        out.push(cur.clone());
        return Ok(());
    }
    let w = axis_w[cur.len()];
    for (i, v) in levels.iter().enumerate() {
        let v = v.to_f64().unwrap_or(0.0);
        let next = acc + w * v * v;
        if next > bound + 1e-12 {
            continue;
        }
        cur.push(i);
        grid_walk(levels, axis_w, bound, next, cur, out, cap)?;
        cur.pop();
    }
    Ok(())
}

/// A floating-point copy for fast trace evaluation: matrix blocks with
/// `τ(x) = Σ w_b · Tr(x_b)/n_b`. Group algebras use the regular
/// representation as a single block.
#[derive(Debug, Clone)]
pub struct FloatElement {
    pub blocks: Vec<DMatrix<Complex64>>,
    pub weights: Vec<f64>,
}

impl FloatElement {
    pub fn from_exact(x: &FdElement) -> Result<Self> {
        Ok(match x {
            FdElement::Group(a) => FloatElement { blocks: vec![regular_matrix(a)?], weights: vec![1.0] },
            FdElement::Matrix(a) => FloatElement {
                blocks: a
                    .blocks()
                    .iter()
                    .zip(a.algebra().blocks())
                    .map(|(b, &n)| DMatrix::from_fn(n, n, |i, j| b[i * n + j].to_complex()))
                    .collect(),
                weights: a.algebra().weights().iter().map(|w| w.to_f64().unwrap_or(0.0)).collect(),
            },
        })
    }

    pub fn mul(&self, o: &Self) -> Self {
        FloatElement { blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| a * b).collect(), weights: self.weights.clone() }
    }

    pub fn adjoint(&self) -> Self {
        FloatElement { blocks: self.blocks.iter().map(|a| a.adjoint()).collect(), weights: self.weights.clone() }
    }

    pub fn trace(&self) -> Complex64 {
        self.blocks.iter().zip(&self.weights).map(|(a, w)| a.trace() * (*w / a.nrows() as f64)).sum()
    }
}
