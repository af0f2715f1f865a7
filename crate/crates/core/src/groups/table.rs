use super::{GroupError, Result};
use crate::structures::{parse_structure, FinStructure, Signature, StructureBuilder};

/// A finite group given by its Cayley table. Element 0 need not be the
/// identity; the identity and inverses are located on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TableGroup {
    label: String,
    names: Vec<String>,
    table: Vec<Vec<u32>>,
    identity: u32,
    inverse: Vec<u32>,
}

impl TableGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(names: Vec<String>, table: Vec<Vec<u32>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty carrier".into()));
        }
        for name in &names {
            if name.is_empty() || name.contains(|c: char| c.is_whitespace() || "*^:,()[]".contains(c)) {
                return Err(GroupError::NotAGroup(format!("element name `{name}` is not usable in words")));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(dup) = names.iter().find(|x| !seen.insert(*x)) {
            return Err(GroupError::NotAGroup(format!("duplicate element `{dup}`")));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&v| v as usize >= n)) {
            return Err(GroupError::NotAGroup("table is not square over the carrier".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] as usize == x && table[x][e] as usize == x))
            .ok_or_else(|| GroupError::NotAGroup("no identity element".into()))? as u32;
        let mut inverse = vec![0u32; n];
        for x in 0..n {
            inverse[x] = (0..n as u32)
                .find(|&y| table[x][y as usize] == identity && table[y as usize][x] == identity)
                .ok_or_else(|| GroupError::NotAGroup(format!("`{}` has no inverse", names[x])))?;
        }
        for x in 0..n {
            for y in 0..n {
                let xy = table[x][y] as usize;
                for z in 0..n {
                    if table[xy][z] != table[x][table[y][z] as usize] {
                        return Err(GroupError::NotAGroup(format!(
                            "not associative at ({}, {}, {})",
                            names[x], names[y], names[z]
                        )));
                    }
                }
            }
        }
        Ok(TableGroup { label: format!("table[{n}]"), names, table, identity, inverse })
    }

    /// The cyclic group of order `n` with elements `e, t, t2, ..., t{n-1}`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GroupError::NotAGroup("cyclic group of order 0".into()));
        }
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "t".to_string(),
                k => format!("t{k}"),
            })
            .collect();
        let table = (0..n).map(|x| (0..n).map(|y| ((x + y) % n) as u32).collect()).collect();
        Ok(TableGroup::new(names, table)?.with_label(&format!("cyclic({n})")))
    }

    /// Label used when the group is displayed as an expression.
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    /// Reads a group from a structure with a binary function `mul` and a
    /// constant `e`. Other symbols are ignored.
    pub fn from_structure(s: &FinStructure) -> Result<Self> {
        let sig = s.signature();
        let mul = sig
            .function_index("mul")
            .ok_or_else(|| GroupError::NotAGroup("structure has no `mul` function".into()))?;
        let sym = &sig.functions[mul];
        if sym.args.len() != 2 || sym.args[0] != sym.result || sym.args[1] != sym.result {
            return Err(GroupError::NotAGroup("`mul` must be a binary operation on one sort".into()));
        }
        let sort = sym.result;
        let n = s.carrier_size(sort);
        let table = (0..n).map(|x| (0..n).map(|y| s.apply(mul, &[x, y]) as u32).collect()).collect();
        let g = TableGroup::new(s.carrier(sort).to_vec(), table)?;
        if let Some(c) = sig.constant_index("e") {
            if s.constant(c).index as u32 != g.identity {
                return Err(GroupError::NotAGroup("constant `e` is not the identity".into()));
            }
        }
        Ok(g)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let s = parse_structure(text).map_err(|e| GroupError::Parse(e.to_string()))?;
        Self::from_structure(&s)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.table[x as usize][y as usize]
    }

    pub fn inv(&self, x: u32) -> u32 {
        self.inverse[x as usize]
    }

    pub fn name(&self, x: u32) -> &str {
        &self.names[x as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    /// Relabels element `i` as `names[perm[i]]`, keeping the group law.
    pub fn relabel(&self, perm: &[usize], new_names: Vec<String>) -> Result<Self> {
        let n = self.order();
        if perm.len() != n || new_names.len() != n {
            return Err(GroupError::NotAGroup("relabelling has the wrong size".into()));
        }
        let mut inv_perm = vec![0usize; n];
        for (i, &p) in perm.iter().enumerate() {
            inv_perm[p] = i;
        }
        let table = (0..n)
            .map(|x| (0..n).map(|y| perm[self.table[inv_perm[x]][inv_perm[y]] as usize] as u32).collect())
            .collect();
        TableGroup::new(new_names, table)
    }

    /// One-sorted structure with `mul/2`, `inv/1` and constant `e`.
    pub fn to_fin_structure(&self, name: &str) -> FinStructure {
        let mut sig = Signature::new();
        let g = sig.add_sort("G").unwrap();
        let mul = sig.add_function("mul", vec![g, g], g).unwrap();
        let inv = sig.add_function("inv", vec![g], g).unwrap();
        let e = sig.add_constant("e", g).unwrap();
        let mut b = StructureBuilder::new(name, sig);
        b.set_carrier(g, &self.names).unwrap();
        let n = self.order();
        for x in 0..n {
            for y in 0..n {
                b.set_value(mul, &[x, y], self.table[x][y] as usize).unwrap();
            }
            b.set_value(inv, &[x], self.inverse[x] as usize).unwrap();
        }
        b.set_constant(e, self.identity as usize).unwrap();
        b.build().unwrap()
    }
}
