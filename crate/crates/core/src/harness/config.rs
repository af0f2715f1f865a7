use std::path::PathBuf;

use super::{HarnessError, Result};

/// Settings shared by the suite commands. Unset caps fall back to
/// per-command defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: Option<String>,
    pub recipes: Vec<String>,
    pub seed: u64,
    pub degree: Option<u32>,
    pub moments: Option<u32>,
    pub radius: Option<usize>,
    pub wordlen: Option<usize>,
    pub eps: Option<f64>,
    pub alpha: Option<u32>,
    pub cap: Option<usize>,
    pub count: Option<usize>,
    pub vars: Option<usize>,
    pub terms: Option<usize>,
    /// Coefficient algebra for crossed products.
    pub algebra: Option<String>,
    /// Group or algebra descriptor and tuple for each side of a custom pair.
    pub left: Option<String>,
    pub left_tuple: Option<String>,
    pub right: Option<String>,
    pub right_tuple: Option<String>,
    pub left_pool: Vec<String>,
    pub right_pool: Vec<String>,
    pub modulus: Option<String>,
    /// Explicit polynomials replacing the random ones.
    pub polys: Vec<String>,
    pub out: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: None,
            recipes: Vec::new(),
            seed: 1,
            degree: None,
            moments: None,
            radius: None,
            wordlen: None,
            eps: None,
            alpha: None,
            cap: None,
            count: None,
            vars: None,
            terms: None,
            algebra: None,
            left: None,
            left_tuple: None,
            right: None,
            right_tuple: None,
            left_pool: Vec::new(),
            right_pool: Vec::new(),
            modulus: None,
            polys: Vec::new(),
            out: None,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| HarnessError::Input(format!("{key}: cannot parse `{v}`")))
}

fn positive<T: std::str::FromStr + PartialOrd + Default + Copy>(key: &str, v: &str) -> Result<T> {
    let x: T = num(key, v)?;
    if x > T::default() {
        Ok(x)
    } else {
        Err(HarnessError::Input(format!("{key} must be positive, got `{v}`")))
    }
}

impl SuiteConfig {
    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = SuiteConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Input(format!("config line {}: expected key = value", i + 1)))?;
            cfg.set(k.trim(), v.trim()).map_err(|e| HarnessError::Input(format!("config line {}: {e}", i + 1)))?;
        }
        Ok(cfg)
    }

    /// Sets one key. List keys (`recipe`, pools, `poly`) accumulate, except
    /// that `recipe` also splits on commas.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('_', "-");
        let s = || Some(value.to_string());
        match key.as_str() {
            "suite" => self.suite = s(),
            "recipe" | "recipes" => {
                self.recipes.extend(value.split(',').map(str::trim).filter(|r| !r.is_empty()).map(String::from))
            }
            "seed" => self.seed = num(&key, value)?,
            "degree" => self.degree = Some(positive(&key, value)?),
            "moments" => self.moments = Some(positive(&key, value)?),
            "radius" => self.radius = Some(positive(&key, value)?),
            "wordlen" => self.wordlen = Some(positive(&key, value)?),
            "eps" => {
                let e: f64 = positive(&key, value)?;
                if !e.is_finite() {
                    return Err(HarnessError::Input(format!("eps must be finite, got `{value}`")));
                }
                self.eps = Some(e)
            }
            "alpha" => self.alpha = Some(num(&key, value)?),
            "cap" => self.cap = Some(positive(&key, value)?),
            "count" => self.count = Some(num(&key, value)?),
            "vars" => self.vars = Some(positive(&key, value)?),
            "terms" => self.terms = Some(positive(&key, value)?),
            "algebra" => self.algebra = s(),
            "left" => self.left = s(),
            "left-tuple" => self.left_tuple = s(),
            "right" => self.right = s(),
            "right-tuple" => self.right_tuple = s(),
            "left-pool" => self.left_pool.push(value.to_string()),
            "right-pool" => self.right_pool.push(value.to_string()),
            "modulus" => self.modulus = s(),
            "poly" => self.polys.push(value.to_string()),
            "out" => self.out = Some(PathBuf::from(value)),
            _ => return Err(HarnessError::Input(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    /// True when a custom pair replaces the recipe catalog.
    pub fn has_custom_pair(&self) -> bool {
        self.left.is_some() || self.right.is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let mut cfg = SuiteConfig::from_text("# suite\nseed = 7\ndegree=4\nrecipe = free-embed, graph-product\n").unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.degree, Some(4));
        assert_eq!(cfg.recipes, vec!["free-embed", "graph-product"]);
        cfg.set("degree", "2").unwrap();
        assert_eq!(cfg.degree, Some(2));
        cfg.set("left_pool", "1").unwrap();
        cfg.set("left-pool", "2").unwrap();
        assert_eq!(cfg.left_pool.len(), 2);
    }

    #[test]
    fn rejects_bad_values() {
        let mut cfg = SuiteConfig::default();
        assert!(cfg.set("degree", "0").is_err());
        assert!(cfg.set("eps", "-1").is_err());
        assert!(cfg.set("eps", "inf").is_err());
        assert!(cfg.set("colour", "blue").is_err());
        assert!(SuiteConfig::from_text("seed 3").is_err());
        assert!(SuiteConfig::from_text("seed = x").is_err());
    }
}
