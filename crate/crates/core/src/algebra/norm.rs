use std::collections::HashMap;

use num_complex::Complex64;

use super::scalar::ratio_f64;
use super::{AlgebraElement, AlgebraError, GaussScalar, Result};
use crate::groups::{ball, Word};

/// Power iteration settings shared by the norm estimators.
pub const POWER_TOL: f64 = 1e-12;
pub const POWER_MAX_ITERS: usize = 10_000;

/// Exact moments `tr((y*y)^k)` for `k = 1..=k_max`. Only powers up to
/// `ceil(k_max / 2)` are formed: `tr(A^{2j}) = ‖A^j‖₂²` and
/// `tr(A^{2j+1}) = tr(A^j A^{j+1})` for self-adjoint `A = y*y`.
pub fn moments(y: &AlgebraElement, k_max: u32, cap: usize) -> Result<Vec<GaussScalar>> {
    if k_max == 0 {
        return Err(AlgebraError::Parse("moments need K >= 1".into()));
    }
    let a = y.adjoint().conv_mul_capped(y, cap)?;
    let mut powers = vec![AlgebraElement::one(y.group()), a.clone()];
    let needed = k_max.div_ceil(2) as usize;
    while powers.len() <= needed {
        let next = powers.last().unwrap().conv_mul_capped(&a, cap)?;
        powers.push(next);
    }
    (1..=k_max as usize)
        .map(|k| {
            let j = k / 2;
            if k % 2 == 0 {
                Ok(GaussScalar::new(powers[j].l2_norm_sqr(), num_rational::BigRational::default()))
            } else {
                powers[j].trace_of_product(&powers[j + 1])
            }
        })
        .collect()
}

/// `tr((y*y)^k)^{1/2k}` for each moment.
pub fn moment_roots(ms: &[GaussScalar]) -> Vec<f64> {
    ms.iter()
        .enumerate()
        .map(|(i, m)| ratio_f64(&m.re).max(0.0).powf(1.0 / (2.0 * (i + 1) as f64)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormBounds {
    pub lower: f64,
    pub upper: f64,
    pub moment_lower: f64,
    pub rayleigh_lower: f64,
    pub moments: Vec<GaussScalar>,
    pub ball_size: usize,
}

/// Bounds `lower ≤ ‖y‖ ≤ upper` for the operator norm on `ℓ²(G)`. The lower
/// bound is the best of the moment roots and a Rayleigh quotient over
/// vectors supported on the ball of radius `radius` in the generators
/// `supp(y)`. The upper bound is the `ℓ¹` norm.
pub fn norm_bounds(y: &AlgebraElement, k_max: u32, radius: usize, cap: usize) -> Result<NormBounds> {
    let ms = moments(y, k_max, cap)?;
    let moment_lower = moment_roots(&ms).into_iter().fold(0.0, f64::max);
    let g = y.group();
    let gens: Vec<Word> = y.terms().keys().cloned().collect();
    let basis = ball(g, &gens, radius, cap)?;
    let rayleigh_lower = rayleigh(y, &basis)?;
    Ok(NormBounds {
        lower: moment_lower.max(rayleigh_lower),
        upper: y.l1_norm(),
        moment_lower,
        rayleigh_lower,
        moments: ms,
        ball_size: basis.len(),
    })
}

/// Sparse matrix of `y` acting from `span{δ_t : t ∈ basis}` into `ℓ²(G)`,
/// as rows indexed by the image words.
fn regular_columns(y: &AlgebraElement, basis: &[Word]) -> Vec<Vec<(usize, Complex64)>> {
    let g = y.group();
    let mut rows: HashMap<Word, usize> = HashMap::new();
    let terms: Vec<(&Word, Complex64)> = y.terms().iter().map(|(w, c)| (w, c.to_complex())).collect();
    basis
        .iter()
        .map(|t| {
            terms
                .iter()
                .map(|&(w, c)| {
                    let n = rows.len();
                    (*rows.entry(g.mul(w, t)).or_insert(n), c)
                })
                .collect()
        })
        .collect()
}

/// Largest singular value of the sparse column matrix by power iteration
/// on `Y*Y`, from `δ_{start}` with a perturbed restart.
fn power_norm(cols: &[Vec<(usize, Complex64)>], start: usize, tol: f64) -> f64 {
    let n_rows = cols.iter().flatten().map(|(r, _)| r + 1).max().unwrap_or(0);
    let apply = |v: &[Complex64]| -> Vec<Complex64> {
        let mut w = vec![Complex64::new(0.0, 0.0); n_rows];
        for (j, col) in cols.iter().enumerate() {
            for &(r, c) in col {
                w[r] += c * v[j];
            }
        }
        cols.iter().map(|col| col.iter().map(|&(r, c)| c.conj() * w[r]).sum()).collect()
    };
    let run = |mut v: Vec<Complex64>| -> (f64, bool) {
        let mut prev = f64::NAN;
        for _ in 0..POWER_MAX_ITERS {
            let nv: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nv == 0.0 {
                return (0.0, false);
            }
            v.iter_mut().for_each(|z| *z /= nv);
            let w = apply(&v);
            let lambda: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
            if (lambda - prev).abs() <= tol * lambda.abs().max(1.0) {
                return (lambda.max(0.0), true);
            }
            prev = lambda;
            v = w;
        }
        (prev.max(0.0), false)
    };
    let n = cols.len();
    if n == 0 {
        return 0.0;
    }
    let mut seed = vec![Complex64::new(0.0, 0.0); n];
    seed[start] = Complex64::new(1.0, 0.0);
    let (mut best, converged) = run(seed);
    if !converged || best == 0.0 {
        let perturbed: Vec<Complex64> = (0..n)
            .map(|k| Complex64::new(if k == start { 1.0 } else { 1e-3 / (k + 1) as f64 }, 1e-4 / (k + 2) as f64))
            .collect();
        best = best.max(run(perturbed).0);
    }
    best.sqrt()
}

fn rayleigh(y: &AlgebraElement, basis: &[Word]) -> Result<f64> {
    if y.is_zero() {
        return Ok(0.0);
    }
    let e = y.group().identity();
    let start = basis.iter().position(|w| *w == e).unwrap_or(0);
    Ok(power_norm(&regular_columns(y, basis), start, POWER_TOL))
}

/// The operator norm of `y` in a finite group, as the largest singular value
/// of its left regular representation.
pub fn norm_exact_finite(y: &AlgebraElement, tol: f64) -> Result<f64> {
    let g = y.group();
    if !g.is_finite() {
        return Err(AlgebraError::NotFinite(g.to_string()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(AlgebraError::Parse("tolerance must be positive".into()));
    }
    let elems = g.elements(super::DEFAULT_SUPPORT_CAP).map_err(AlgebraError::Group)?;
    let start = elems.iter().position(|w| *w == g.identity()).unwrap_or(0);
    Ok(power_norm(&regular_columns(y, &elems), start, tol))
}

/// Dense regular-representation matrix `M[gh, h] = c_g` of `y` over a
/// finite group, rows and columns in sorted element order.
pub fn regular_matrix(y: &AlgebraElement) -> Result<nalgebra::DMatrix<Complex64>> {
    let g = y.group();
    let elems = g.elements(4096).map_err(AlgebraError::Group)?;
    let index: HashMap<&Word, usize> = elems.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let n = elems.len();
    let mut m = nalgebra::DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (j, h) in elems.iter().enumerate() {
        for (w, c) in y.terms() {
            m[(index[&g.mul(w, h)], j)] += c.to_complex();
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Group, DEFAULT_CAP};

    fn el(g: &Group, s: &str) -> AlgebraElement {
        AlgebraElement::parse(g, s).unwrap()
    }

    #[test]
    fn moment_examples() {
        let z = Group::z();
        let y = el(&z, "u[1] + u[-1]");
        let ms = moments(&y, 6, DEFAULT_CAP).unwrap();
        // Central binomial coefficients.
        let expect = [2, 6, 20, 70, 252, 924];
        assert_eq!(ms, expect.map(|k| GaussScalar::from_ints(k, 0)).to_vec());
        let u = el(&z, "u[5]");
        assert!(moments(&u, 4, DEFAULT_CAP).unwrap().iter().all(|m| *m == GaussScalar::one()));
    }

    #[test]
    fn bounds_on_z() {
        let z = Group::z();
        let y = el(&z, "u[1] + u[-1]");
        let b = norm_bounds(&y, 16, 8, DEFAULT_CAP).unwrap();
        assert!(b.moment_lower < 1.9);
        assert!(b.lower >= 1.9, "{b:?}");
        assert!(b.lower <= 2.0 + 1e-12);
        assert_eq!(b.upper, 2.0);
        let one = norm_bounds(&AlgebraElement::one(&z), 4, 2, DEFAULT_CAP).unwrap();
        assert!((one.lower - 1.0).abs() < 1e-12 && one.upper == 1.0);
    }

    #[test]
    fn finite_norms() {
        let c2 = Group::cyclic(2).unwrap();
        assert!((norm_exact_finite(&el(&c2, "u[e]"), 1e-12).unwrap() - 1.0).abs() < 1e-9);
        assert!((norm_exact_finite(&el(&c2, "2*u[t]"), 1e-12).unwrap() - 2.0).abs() < 1e-9);
        assert!((norm_exact_finite(&el(&c2, "u[e] + u[t]"), 1e-12).unwrap() - 2.0).abs() < 1e-9);
        // δ_e is orthogonal to nothing here, but u[e] - u[t] needs the odd vector.
        assert!((norm_exact_finite(&el(&c2, "u[e] - u[t]"), 1e-12).unwrap() - 2.0).abs() < 1e-9);
        assert!(norm_exact_finite(&el(&Group::z(), "u[1]"), 1e-9).is_err());
    }

    #[test]
    fn finite_norm_matches_svd() {
        let s3 = crate::groups::parse_group("prod(cyclic(3),cyclic(2))").unwrap();
        let y = el(&s3, "(1+i)*u[1:t] + 2*u[2:t] - u[1:t2*2:t] + (1/2)*u[e]");
        let m = regular_matrix(&y).unwrap();
        let svd = m.singular_values().max();
        assert!((norm_exact_finite(&y, 1e-13).unwrap() - svd).abs() < 1e-9 * svd);
    }
}
