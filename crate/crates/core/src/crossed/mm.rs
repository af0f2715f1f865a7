use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use super::{CrossedError, Result};
use crate::algebra::{palette, GaussScalar};

/// `⊕ M_{n_i}(ℂ)` with trace `τ(x) = Σ w_i · tr(x_i)/n_i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiMatrixAlgebra {
    blocks: Vec<usize>,
    weights: Vec<BigRational>,
}

impl MultiMatrixAlgebra {
    pub fn new(blocks: Vec<usize>, weights: Vec<BigRational>) -> Result<Self> {
        if blocks.is_empty() || blocks.len() != weights.len() {
            return Err(CrossedError::Descriptor("need one weight per block".into()));
        }
        if blocks.contains(&0) {
            return Err(CrossedError::Descriptor("block sizes must be at least 1".into()));
        }
        if weights.iter().any(|w| *w <= BigRational::zero()) {
            return Err(CrossedError::Descriptor("weights must be positive".into()));
        }
        if weights.iter().fold(BigRational::zero(), |a, w| a + w) != BigRational::one() {
            return Err(CrossedError::Descriptor("weights must sum to 1".into()));
        }
        Ok(MultiMatrixAlgebra { blocks, weights })
    }

    /// `ℂ`, as `mm(1:1)`.
    pub fn scalars() -> Self {
        MultiMatrixAlgebra { blocks: vec![1], weights: vec![BigRational::one()] }
    }

    /// A single `n × n` block.
    pub fn matrices(n: usize) -> Result<Self> {
        Self::new(vec![n], vec![BigRational::one()])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|n| n * n).sum()
    }

    /// Parses `mm(2:1/2, 1:1/2)`; `mm(2)` is shorthand for `mm(2:1)`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "scalars" {
            return Ok(Self::scalars());
        }
        let body = s
            .strip_prefix("mm(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| CrossedError::Descriptor(format!("expected mm(n:w, ...), got `{s}`")))?;
        let mut blocks = Vec::new();
        let mut weights = Vec::new();
        for part in body.split(',') {
            let (n, w) = part.split_once(':').unwrap_or((part, "1"));
            let n: usize = n.trim().parse().map_err(|_| CrossedError::Descriptor(format!("bad block size `{n}`")))?;
            let w = GaussScalar::parse(w).map_err(|_| CrossedError::Descriptor(format!("bad weight `{w}`")))?;
            if !w.is_real() {
                return Err(CrossedError::Descriptor("weights must be real".into()));
            }
            blocks.push(n);
            weights.push(w.re);
        }
        Self::new(blocks, weights)
    }
}

impl fmt::Display for MultiMatrixAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().zip(&self.weights).map(|(n, w)| format!("{n}:{w}")).collect();
        write!(f, "mm({})", parts.join(", "))
    }
}

/// An element of a multi-matrix algebra, as row-major blocks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatElement {
    alg: Arc<MultiMatrixAlgebra>,
    blocks: Vec<Vec<GaussScalar>>,
}

impl MatElement {
    pub fn zero(alg: &Arc<MultiMatrixAlgebra>) -> Self {
        let blocks = alg.blocks.iter().map(|n| vec![GaussScalar::zero(); n * n]).collect();
        MatElement { alg: alg.clone(), blocks }
    }

    pub fn scalar(alg: &Arc<MultiMatrixAlgebra>, c: &GaussScalar) -> Self {
        let mut x = Self::zero(alg);
        for (b, &n) in alg.blocks.iter().enumerate() {
            for i in 0..n {
                x.blocks[b][i * n + i] = c.clone();
            }
        }
        x
    }

    pub fn one(alg: &Arc<MultiMatrixAlgebra>) -> Self {
        Self::scalar(alg, &GaussScalar::one())
    }

    /// The matrix unit `e_{ij}` in block `b`.
    pub fn unit(alg: &Arc<MultiMatrixAlgebra>, b: usize, i: usize, j: usize) -> Result<Self> {
        let n = *alg.blocks.get(b).ok_or(CrossedError::Dimension(format!("no block {b}")))?;
        if i >= n || j >= n {
            return Err(CrossedError::Dimension(format!("unit ({i},{j}) outside a {n}x{n} block")));
        }
        let mut x = Self::zero(alg);
        x.blocks[b][i * n + j] = GaussScalar::one();
        Ok(x)
    }

    pub fn from_blocks(alg: &Arc<MultiMatrixAlgebra>, blocks: Vec<Vec<GaussScalar>>) -> Result<Self> {
        if blocks.len() != alg.blocks.len() || blocks.iter().zip(&alg.blocks).any(|(b, n)| b.len() != n * n) {
            return Err(CrossedError::Dimension(format!("blocks do not fit {alg}")));
        }
        Ok(MatElement { alg: alg.clone(), blocks })
    }

    pub fn algebra(&self) -> &Arc<MultiMatrixAlgebra> {
        &self.alg
    }

    pub fn blocks(&self) -> &[Vec<GaussScalar>] {
        &self.blocks
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.alg == o.alg {
            Ok(())
        } else {
            Err(CrossedError::Dimension(format!("{} vs {}", self.alg, o.alg)))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(GaussScalar::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(&self.alg)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let blocks = self.blocks.iter().zip(&o.blocks).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        Ok(MatElement { alg: self.alg.clone(), blocks })
    }

    pub fn scale(&self, c: &GaussScalar) -> Self {
        let blocks = self.blocks.iter().map(|b| b.iter().map(|x| c * x).collect()).collect();
        MatElement { alg: self.alg.clone(), blocks }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&o.blocks)
            .zip(&self.alg.blocks)
            .map(|((a, b), &n)| {
                let mut c = vec![GaussScalar::zero(); n * n];
                for i in 0..n {
                    for k in 0..n {
                        let x = &a[i * n + k];
                        if x.is_zero() {
                            continue;
                        }
                        for j in 0..n {
                            if !b[k * n + j].is_zero() {
                                c[i * n + j] += &(x * &b[k * n + j]);
                            }
                        }
                    }
                }
                c
            })
            .collect();
        Ok(MatElement { alg: self.alg.clone(), blocks })
    }

    /// Conjugate transpose in every block.
    pub fn adjoint(&self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .zip(&self.alg.blocks)
            .map(|(a, &n)| (0..n * n).map(|k| a[(k % n) * n + k / n].conj()).collect())
            .collect();
        MatElement { alg: self.alg.clone(), blocks }
    }

    /// `τ(x) = Σ w_i · tr(x_i)/n_i`.
    pub fn trace(&self) -> GaussScalar {
        let mut t = GaussScalar::zero();
        for ((a, &n), w) in self.blocks.iter().zip(&self.alg.blocks).zip(&self.alg.weights) {
            let mut s = GaussScalar::zero();
            for i in 0..n {
                s += &a[i * n + i];
            }
            let f = GaussScalar::new(w / BigRational::from_integer(n.into()), BigRational::zero());
            t += &(&s * &f);
        }
        t
    }

    /// The first nonzero entry in block and row-major order.
    pub(crate) fn leading(&self) -> Option<&GaussScalar> {
        self.blocks.iter().flatten().find(|x| !x.is_zero())
    }

    /// Nonzero entries as `(block, row, col, value)`.
    pub(crate) fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &GaussScalar)> {
        self.blocks.iter().zip(&self.alg.blocks).enumerate().flat_map(|(b, (a, &n))| {
            a.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(move |(k, x)| (b, k / n, k % n, x))
        })
    }

    /// Random element with palette entries; `density` is the chance an entry
    /// is drawn at all.
    pub fn random(rng: &mut impl Rng, alg: &Arc<MultiMatrixAlgebra>, density: f64) -> Self {
        let blocks = alg
            .blocks
            .iter()
            .map(|n| (0..n * n).map(|_| if rng.random_bool(density) { palette(rng) } else { GaussScalar::zero() }).collect())
            .collect();
        MatElement { alg: alg.clone(), blocks }
    }

    /// Parses `[[1,0],[0,i]]|[[2]]`, one bracketed matrix per block. A bare
    /// scalar `c` means `c·1`.
    pub fn parse(alg: &Arc<MultiMatrixAlgebra>, s: &str) -> Result<Self> {
        let s = s.trim();
        if !s.starts_with('[') {
            let c = GaussScalar::parse(s).map_err(|e| CrossedError::Parse(e.to_string()))?;
            return Ok(Self::scalar(alg, &c));
        }
        let parts: Vec<&str> = s.split('|').collect();
        if parts.len() != alg.blocks.len() {
            return Err(CrossedError::Dimension(format!("`{s}` has {} blocks, {alg} has {}", parts.len(), alg.blocks.len())));
        }
        let mut blocks = Vec::new();
        for (part, &n) in parts.iter().zip(&alg.blocks) {
            let inner = part
                .trim()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| CrossedError::Parse(format!("bad matrix `{part}`")))?;
            let mut entries = Vec::new();
            for row in inner.split("],") {
                let row = row.trim().trim_start_matches('[').trim_end_matches(']');
                for x in row.split(',') {
                    entries.push(GaussScalar::parse(x).map_err(|e| CrossedError::Parse(e.to_string()))?);
                }
            }
            if entries.len() != n * n {
                return Err(CrossedError::Dimension(format!("`{part}` is not {n}x{n}")));
            }
            blocks.push(entries);
        }
        Ok(MatElement { alg: alg.clone(), blocks })
    }
}

impl fmt::Display for MatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (b, (a, &n)) in self.blocks.iter().zip(&self.alg.blocks).enumerate() {
            if b > 0 {
                write!(f, "|")?;
            }
            let rows: Vec<String> = (0..n)
                .map(|i| format!("[{}]", (0..n).map(|j| a[i * n + j].to_literal()).collect::<Vec<_>>().join(",")))
                .collect();
            write!(f, "[{}]", rows.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn descriptors() {
        let a = MultiMatrixAlgebra::parse("mm(2:1/2, 1:1/2)").unwrap();
        assert_eq!(a.blocks(), &[2, 1]);
        assert_eq!(a.to_string(), "mm(2:1/2, 1:1/2)");
        assert_eq!(MultiMatrixAlgebra::parse("mm(2)").unwrap(), MultiMatrixAlgebra::matrices(2).unwrap());
        assert!(MultiMatrixAlgebra::parse("mm(2:1/2)").is_err());
        assert!(MultiMatrixAlgebra::parse("mm(0:1)").is_err());
        assert!(MultiMatrixAlgebra::parse("mm(1:3/2, 1:-1/2)").is_err());
    }

    #[test]
    fn traces() {
        let a = Arc::new(MultiMatrixAlgebra::matrices(2).unwrap());
        assert_eq!(MatElement::one(&a).trace(), GaussScalar::one());
        assert_eq!(MatElement::unit(&a, 0, 0, 0).unwrap().trace(), GaussScalar::from_ratio(1, 2));
        let b = Arc::new(MultiMatrixAlgebra::parse("mm(2:1/3, 1:2/3)").unwrap());
        assert_eq!(MatElement::one(&b).trace(), GaussScalar::one());
        assert_eq!(MatElement::unit(&b, 1, 0, 0).unwrap().trace(), GaussScalar::from_ratio(2, 3));
    }

    #[test]
    fn star_algebra_on_random_elements() {
        let a = Arc::new(MultiMatrixAlgebra::parse("mm(2:1/2, 1:1/2)").unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x = MatElement::random(&mut rng, &a, 0.7);
            let y = MatElement::random(&mut rng, &a, 0.7);
            let z = MatElement::random(&mut rng, &a, 0.7);
            assert_eq!(x.mul(&y).unwrap().trace(), y.mul(&x).unwrap().trace());
            assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
            assert_eq!(x.mul(&y).unwrap().adjoint(), y.adjoint().mul(&x.adjoint()).unwrap());
            assert_eq!(x.adjoint().adjoint(), x);
            let xx = x.adjoint().mul(&x).unwrap().trace();
            assert!(xx.is_real() && (xx.re > BigRational::zero()) == !x.is_zero());
        }
    }

    #[test]
    fn literals() {
        let a = Arc::new(MultiMatrixAlgebra::parse("mm(2:1/2, 1:1/2)").unwrap());
        let x = MatElement::parse(&a, "[[1,0],[0,i]]|[[2]]").unwrap();
        assert_eq!(x.to_string(), "[[1,0],[0,i]]|[[2]]");
        assert_eq!(MatElement::parse(&a, &x.to_string()).unwrap(), x);
        assert_eq!(MatElement::parse(&a, "3").unwrap(), MatElement::scalar(&a, &GaussScalar::from_ints(3, 0)));
        assert!(MatElement::parse(&a, "[[1,0],[0,1]]").is_err());
        assert!(MatElement::parse(&a, "[[1,0]]|[[2]]").is_err());
    }
}
