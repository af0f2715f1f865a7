use std::fmt;
use std::sync::Arc;

use super::{ContError, Result};

type Eval = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A modulus of fixed arity: nondecreasing, subadditive, vanishing at zero.
#[derive(Clone)]
pub struct Modulus {
    name: String,
    arity: usize,
    eval: Eval,
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Modulus({}, arity {})", self.name, self.arity)
    }
}

impl Modulus {
    pub fn new(name: &str, arity: usize, eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Modulus { name: name.to_string(), arity, eval: Arc::new(eval) }
    }

    /// `sup_i δ_i`.
    pub fn sup(arity: usize) -> Self {
        Self::new("sup", arity, |d| d.iter().cloned().fold(0.0, f64::max))
    }

    /// `Σ_i δ_i`, the modulus of a metric in its two arguments when `arity = 2`.
    pub fn sum(arity: usize) -> Self {
        Self::new("sum", arity, |d| d.iter().sum())
    }

    /// `c · Σ_i δ_i`.
    pub fn scaled_sum(arity: usize, c: f64) -> Self {
        Self::new(&format!("{c}*sum"), arity, move |d| c * d.iter().sum::<f64>())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, deltas: &[f64]) -> f64 {
        (self.eval)(deltas)
    }

    /// Spot-checks the modulus axioms on every pair from `samples`, each a
    /// vector of `arity` nonnegative reals.
    pub fn spot_check(&self, samples: &[Vec<f64>]) -> Result<()> {
        let tol = 1e-12;
        let zero = vec![0.0; self.arity];
        if self.eval(&zero).abs() > tol {
            return Err(ContError::Modulus(format!("{} does not vanish at zero", self.name)));
        }
        for x in samples {
            for y in samples {
                let (fx, fy) = (self.eval(x), self.eval(y));
                let sum: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
                if self.eval(&sum) > fx + fy + tol * (1.0 + fx + fy) {
                    return Err(ContError::Modulus(format!("{} is not subadditive at {x:?}, {y:?}", self.name)));
                }
                if x.iter().zip(y).all(|(a, b)| a <= b) && fx > fy + tol * (1.0 + fy) {
                    return Err(ContError::Modulus(format!("{} decreases from {x:?} to {y:?}", self.name)));
                }
            }
        }
        Ok(())
    }
}

/// `Ω_L(δ) = sup_i δ_i`, and `0` on the empty list.
pub fn omega_l(deltas: &[f64]) -> f64 {
    deltas.iter().cloned().fold(0.0, f64::max)
}

/// `Σ_{i ≤ n} i · sup_{k ≤ i} Δ_k(δ_i, ..., δ_i)`: the universal modulus with
/// entries past `n` set to zero and `(Δ_k)` the given atomic moduli.
pub fn omega_u_trunc(n: usize, deltas: &[f64], atomic: &[Modulus]) -> f64 {
    (1..=n.min(deltas.len()))
        .map(|i| {
            let d = deltas[i - 1];
            let best = atomic.iter().take(i).map(|m| m.eval(&vec![d; m.arity()])).fold(0.0, f64::max);
            i as f64 * best
        })
        .sum()
}

#[derive(Debug, Clone)]
pub enum WeakModulus {
    Lipschitz,
    /// The universal modulus over an enumeration of atomic moduli.
    Universal(Vec<Modulus>),
    /// `Ω↾_n` given directly for `n = 1..=len`.
    CustomTruncations(Vec<Modulus>),
}

impl WeakModulus {
    /// The universal modulus with one atomic formula, the metric of the
    /// sort, whose modulus is `δ₁ + δ₂`.
    pub fn universal_default() -> Self {
        WeakModulus::Universal(vec![Modulus::sum(2)])
    }

    /// Custom truncations, spot-checked for consistency, the modulus axioms
    /// and domination of `Ω_L`.
    pub fn custom(truncations: Vec<Modulus>) -> Result<Self> {
        for (i, m) in truncations.iter().enumerate() {
            if m.arity() != i + 1 {
                return Err(ContError::Modulus(format!("truncation {} has arity {}", i + 1, m.arity())));
            }
        }
        let w = WeakModulus::CustomTruncations(truncations);
        w.check_truncations(&sample_grid(w.max_arity().unwrap_or(1)))?;
        Ok(w)
    }

    pub fn max_arity(&self) -> Option<usize> {
        match self {
            WeakModulus::CustomTruncations(ts) => Some(ts.len()),
            _ => None,
        }
    }

    /// `Ω↾_n(δ₁, ..., δ_n)`.
    pub fn trunc(&self, deltas: &[f64]) -> Result<f64> {
        let n = deltas.len();
        Ok(match self {
            WeakModulus::Lipschitz => omega_l(deltas),
            WeakModulus::Universal(atomic) => omega_u_trunc(n, deltas, atomic),
            WeakModulus::CustomTruncations(ts) => match n {
                0 => 0.0,
                _ => ts
                    .get(n - 1)
                    .ok_or_else(|| ContError::Modulus(format!("no truncation of arity {n}")))?
                    .eval(deltas),
            },
        })
    }

    /// The truncation `Ω↾_n` as a modulus.
    pub fn truncation(&self, n: usize) -> Result<Modulus> {
        self.trunc(&vec![0.0; n])?;
        let w = self.clone();
        Ok(Modulus::new(&format!("{self}|{n}"), n, move |d| w.trunc(d).unwrap_or(f64::INFINITY)))
    }

    /// Checks `Ω↾_n(δ) = Ω↾_{n+1}(δ, 0)`, the modulus axioms for each
    /// truncation, and `Ω↾_n ≥ Ω_L` on `samples` (vectors of the largest
    /// arity, cut to each `n`).
    pub fn check_truncations(&self, samples: &[Vec<f64>]) -> Result<()> {
        let top = samples.iter().map(Vec::len).max().unwrap_or(0);
        let top = self.max_arity().map_or(top, |m| m.min(top));
        for n in 1..=top {
            let cut: Vec<Vec<f64>> = samples.iter().map(|s| s[..n].to_vec()).collect();
            self.truncation(n)?.spot_check(&cut)?;
            for d in &cut {
                let v = self.trunc(d)?;
                if v + 1e-12 < omega_l(d) {
                    return Err(ContError::Modulus(format!("{self} is below the Lipschitz modulus at {d:?}")));
                }
                if n < top {
                    let mut padded = d.clone();
                    padded.push(0.0);
                    if (self.trunc(&padded)? - v).abs() > 1e-12 * (1.0 + v) {
                        return Err(ContError::Modulus(format!("truncations {n} and {} disagree at {d:?}", n + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses `lipschitz`, `universal`, or `universal(c1,c2,...)` for atomic
    /// moduli `c_k·(δ₁+δ₂)`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "lipschitz" | "L" => return Ok(WeakModulus::Lipschitz),
            "universal" | "U" => return Ok(Self::universal_default()),
            _ => {}
        }
        let inner = s
            .strip_prefix("universal(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| ContError::Modulus(format!("unknown weak modulus `{s}`")))?;
        let atomic = inner
            .split(',')
            .map(|c| {
                let c: f64 = c.trim().parse().map_err(|_| ContError::Modulus(format!("bad constant `{c}`")))?;
                if c >= 1.0 && c.is_finite() {
                    Ok(Modulus::scaled_sum(2, c))
                } else {
                    Err(ContError::Modulus(format!("atomic constant {c} must be at least 1")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WeakModulus::Universal(atomic))
    }
}

impl fmt::Display for WeakModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeakModulus::Lipschitz => write!(f, "lipschitz"),
            WeakModulus::Universal(atomic) => {
                let names: Vec<&str> = atomic.iter().map(Modulus::name).collect();
                write!(f, "universal[{}]", names.join(","))
            }
            WeakModulus::CustomTruncations(ts) => write!(f, "custom[{}]", ts.len()),
        }
    }
}

/// Nonnegative sample vectors of length `n` from `{0, 0.1, 0.5, 2}`, cycled.
pub fn sample_grid(n: usize) -> Vec<Vec<f64>> {
    const V: [f64; 4] = [0.0, 0.1, 0.5, 2.0];
    (0..24).map(|s| (0..n).map(|i| V[(s * (i + 1) + s / 4 + i) % 4]).collect()).collect()
}
