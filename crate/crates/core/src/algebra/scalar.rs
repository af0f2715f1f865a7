use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

/// Exact complex number with rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GaussScalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussScalar { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussScalar::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussScalar::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    pub fn zero() -> Self {
        GaussScalar::default()
    }

    pub fn one() -> Self {
        GaussScalar::from_ints(1, 0)
    }

    pub fn i() -> Self {
        GaussScalar::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `1/z`, or `None` at zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussScalar::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn conj(&self) -> Self {
        GaussScalar::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, exactly.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(ratio_f64(&self.re), ratio_f64(&self.im))
    }

    /// `|z|` as a float.
    pub fn abs_f64(&self) -> f64 {
        self.to_complex().norm()
    }

    /// Human-readable literal such as `1`, `-1/3`, `2i` or `1/2-3i`, as
    /// accepted by [`GaussScalar::parse`].
    pub fn to_literal(&self) -> String {
        let part = |r: &BigRational| {
            if r.is_integer() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => part(&self.re),
            (true, false) => format!("{}i", imag(&self.im, part)),
            (false, false) => {
                let sign = if self.im.is_negative() { "" } else { "+" };
                format!("{}{sign}{}i", part(&self.re), imag(&self.im, part))
            }
        }
    }

    /// Parses `3`, `-1/3`, `i`, `-2i`, `1+2i`, `1/2-3/4i`, optionally
    /// wrapped in parentheses.
    pub fn parse(s: &str) -> Result<Self, AlgebraError> {
        let err = || AlgebraError::Parse(format!("bad scalar `{s}`"));
        let mut t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        while t.starts_with('(') && t.ends_with(')') {
            t = t[1..t.len() - 1].to_string();
        }
        if t.is_empty() {
            return Err(err());
        }
        let split = t
            .char_indices()
            .skip(1)
            .filter(|&(k, c)| (c == '+' || c == '-') && !t[..k].ends_with('/'))
            .map(|(k, _)| k)
            .last();
        let (a, b) = match split {
            Some(k) => (&t[..k], &t[k..]),
            None => (t.as_str(), ""),
        };
        let mut out = GaussScalar::zero();
        for piece in [a, b] {
            if piece.is_empty() {
                continue;
            }
            if let Some(body) = piece.strip_suffix('i') {
                let v = match body {
                    "" | "+" => BigRational::one(),
                    "-" => -BigRational::one(),
                    _ => ratio(body).ok_or_else(err)?,
                };
                out.im += v;
            } else {
                out.re += ratio(piece).ok_or_else(err)?;
            }
        }
        Ok(out)
    }
}

fn imag(r: &BigRational, part: impl Fn(&BigRational) -> String) -> String {
    if r.is_one() {
        String::new()
    } else if *r == -BigRational::one() {
        "-".into()
    } else {
        part(r)
    }
}

fn ratio(s: &str) -> Option<BigRational> {
    let s = s.strip_prefix('+').unwrap_or(s);
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

pub(crate) fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN))
}

/// Report format `p/q+r/s i`, with the sign of the imaginary part in place
/// of `+` when negative.
impl fmt::Display for GaussScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}/{}{sign}{}/{} i", self.re.numer(), self.re.denom(), self.im.numer().abs(), self.im.denom())
    }
}

impl Add<&GaussScalar> for &GaussScalar {
    type Output = GaussScalar;
    fn add(self, o: &GaussScalar) -> GaussScalar {
        GaussScalar::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub<&GaussScalar> for &GaussScalar {
    type Output = GaussScalar;
    fn sub(self, o: &GaussScalar) -> GaussScalar {
        GaussScalar::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul<&GaussScalar> for &GaussScalar {
    type Output = GaussScalar;
    fn mul(self, o: &GaussScalar) -> GaussScalar {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussScalar::new(&self.re * &o.re, BigRational::zero());
        }
        GaussScalar::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Neg for &GaussScalar {
    type Output = GaussScalar;
    fn neg(self) -> GaussScalar {
        GaussScalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for GaussScalar {
    type Output = GaussScalar;
    fn neg(self) -> GaussScalar {
        GaussScalar::new(-self.re, -self.im)
    }
}

impl AddAssign<&GaussScalar> for GaussScalar {
    fn add_assign(&mut self, o: &GaussScalar) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl Add for GaussScalar {
    type Output = GaussScalar;
    fn add(mut self, o: GaussScalar) -> GaussScalar {
        self += &o;
        self
    }
}

impl Mul for GaussScalar {
    type Output = GaussScalar;
    fn mul(self, o: GaussScalar) -> GaussScalar {
        &self * &o
    }
}
