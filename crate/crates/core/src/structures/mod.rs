//! Finite multi-sorted first-order structures.
//!
//! Carrier elements are opaque names; all semantics live in the relation,
//! function and constant tables. Quantifier-free types are compared through
//! [`PartialIso`], which closes a set of element pairs under the function
//! symbols and constants and then checks that the result is an isomorphism
//! between the generated substructures.

mod iso;
mod parse;
mod partial;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use iso::iso_search;
pub use parse::parse_structure;
pub use partial::{Discrepancy, PartialIso};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{}profile mismatch: {msg}", line_prefix(*.line))]
    ProfileMismatch { line: Option<usize>, msg: String },
    #[error("function `{fun}` is not total: no value for ({args})")]
    NonTotal { fun: String, args: String },
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("signatures differ")]
    SignatureMismatch,
    #[error("tuple mismatch: {0}")]
    TupleMismatch(String),
}

fn line_prefix(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

pub type Result<T, E = StructureError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelSymbol {
    pub name: String,
    pub profile: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunSymbol {
    pub name: String,
    pub args: Vec<usize>,
    pub result: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstSymbol {
    pub name: String,
    pub sort: usize,
}

/// A many-sorted first-order language. Sorts are referenced by index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    pub sorts: Vec<String>,
    pub relations: Vec<RelSymbol>,
    pub functions: Vec<FunSymbol>,
    pub constants: Vec<ConstSymbol>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// One-sorted signature with a single binary relation `R` over sort `S`.
    pub fn one_binary_relation() -> Self {
        let mut sig = Signature::new();
        let s = sig.add_sort("S").unwrap();
        sig.add_relation("R", vec![s, s]).unwrap();
        sig
    }

    pub fn add_sort(&mut self, name: &str) -> Result<usize> {
        if self.sort_index(name).is_some() {
            return Err(StructureError::Duplicate { kind: "sort", name: name.into() });
        }
        self.sorts.push(name.into());
        Ok(self.sorts.len() - 1)
    }

    pub fn add_relation(&mut self, name: &str, profile: Vec<usize>) -> Result<usize> {
        if self.relation_index(name).is_some() {
            return Err(StructureError::Duplicate { kind: "relation", name: name.into() });
        }
        self.check_sorts(&profile)?;
        self.relations.push(RelSymbol { name: name.into(), profile });
        Ok(self.relations.len() - 1)
    }

    pub fn add_function(&mut self, name: &str, args: Vec<usize>, result: usize) -> Result<usize> {
        if self.function_index(name).is_some() {
            return Err(StructureError::Duplicate { kind: "function", name: name.into() });
        }
        self.check_sorts(&args)?;
        self.check_sorts(&[result])?;
        self.functions.push(FunSymbol { name: name.into(), args, result });
        Ok(self.functions.len() - 1)
    }

    pub fn add_constant(&mut self, name: &str, sort: usize) -> Result<usize> {
        if self.constant_index(name).is_some() {
            return Err(StructureError::Duplicate { kind: "constant", name: name.into() });
        }
        self.check_sorts(&[sort])?;
        self.constants.push(ConstSymbol { name: name.into(), sort });
        Ok(self.constants.len() - 1)
    }

    fn check_sorts(&self, sorts: &[usize]) -> Result<()> {
        match sorts.iter().find(|&&s| s >= self.sorts.len()) {
            Some(s) => Err(StructureError::Unknown { kind: "sort", name: format!("#{s}") }),
            None => Ok(()),
        }
    }

    pub fn sort_index(&self, name: &str) -> Option<usize> {
        self.sorts.iter().position(|s| s == name)
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|f| f.name == name)
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|c| c.name == name)
    }
}

/// An element of a structure: a sort index plus a position in that sort's
/// carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem {
    pub sort: usize,
    pub index: usize,
}

impl Elem {
    pub fn new(sort: usize, index: usize) -> Self {
        Self { sort, index }
    }
}

/// A finite tuple of elements, each tagged with its sort.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortedTuple(pub Vec<Elem>);

impl SortedTuple {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn profile(&self) -> Vec<usize> {
        self.0.iter().map(|e| e.sort).collect()
    }

    /// Entries at the given positions, in the given order.
    pub fn select(&self, positions: &[usize]) -> SortedTuple {
        SortedTuple(positions.iter().map(|&i| self.0[i]).collect())
    }

    pub fn concat(&self, other: &SortedTuple) -> SortedTuple {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        SortedTuple(v)
    }
}

/// A finite structure over a [`Signature`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinStructure {
    name: String,
    sig: Signature,
    carriers: Vec<Vec<String>>,
    relations: Vec<BTreeSet<Vec<usize>>>,
    /// Dense tables indexed in mixed radix over the argument carriers,
    /// first argument most significant.
    functions: Vec<Vec<usize>>,
    constants: Vec<usize>,
}

impl FinStructure {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn carrier(&self, sort: usize) -> &[String] {
        &self.carriers[sort]
    }

    pub fn carrier_size(&self, sort: usize) -> usize {
        self.carriers[sort].len()
    }

    pub fn total_size(&self) -> usize {
        self.carriers.iter().map(Vec::len).sum()
    }

    /// Every element, sort by sort, in carrier order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.carriers
            .iter()
            .enumerate()
            .flat_map(|(s, c)| (0..c.len()).map(move |i| Elem::new(s, i)))
    }

    pub fn element(&self, sort: usize, name: &str) -> Option<Elem> {
        self.carriers.get(sort)?.iter().position(|e| e == name).map(|i| Elem::new(sort, i))
    }

    pub fn element_name(&self, e: Elem) -> &str {
        &self.carriers[e.sort][e.index]
    }

    /// Looks up an element by name in the (unique) sort containing it.
    pub fn find(&self, name: &str) -> Option<Elem> {
        (0..self.carriers.len()).find_map(|s| self.element(s, name))
    }

    pub fn tuple(&self, names: &[&str]) -> Result<SortedTuple> {
        names
            .iter()
            .map(|n| {
                self.find(n).ok_or_else(|| StructureError::Unknown { kind: "element", name: (*n).into() })
            })
            .collect::<Result<Vec<_>>>()
            .map(SortedTuple)
    }

    pub fn holds(&self, rel: usize, args: &[usize]) -> bool {
        self.relations[rel].contains(args)
    }

    pub fn relation_tuples(&self, rel: usize) -> &BTreeSet<Vec<usize>> {
        &self.relations[rel]
    }

    pub fn apply(&self, fun: usize, args: &[usize]) -> usize {
        let sym = &self.sig.functions[fun];
        let mut idx = 0;
        for (&s, &a) in sym.args.iter().zip(args) {
            idx = idx * self.carriers[s].len() + a;
        }
        self.functions[fun][idx]
    }

    pub fn constant(&self, c: usize) -> Elem {
        Elem::new(self.sig.constants[c].sort, self.constants[c])
    }

    pub fn check_tuple(&self, t: &SortedTuple) -> Result<()> {
        for e in &t.0 {
            if e.sort >= self.carriers.len() || e.index >= self.carriers[e.sort].len() {
                return Err(StructureError::TupleMismatch(format!(
                    "element {e:?} is not in structure `{}`",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// Full enumeration of the carrier, sort by sort.
    pub fn enumeration(&self) -> SortedTuple {
        SortedTuple(self.elements().collect())
    }

    /// Renders the structure in the line-oriented file format.
    pub fn to_text(&self) -> String {
        use fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "structure {}", self.name);
        for (s, name) in self.sig.sorts.iter().enumerate() {
            let _ = writeln!(out, "sort {name} = {}", self.carriers[s].join(" "));
        }
        for (r, sym) in self.sig.relations.iter().enumerate() {
            let sorts: Vec<&str> = sym.profile.iter().map(|&s| self.sig.sorts[s].as_str()).collect();
            let tuples: Vec<String> = self.relations[r]
                .iter()
                .map(|t| {
                    let names: Vec<&str> =
                        t.iter().zip(&sym.profile).map(|(&i, &s)| self.carriers[s][i].as_str()).collect();
                    format!("({})", names.join(" "))
                })
                .collect();
            let _ = writeln!(
                out,
                "rel {}/{} : {} = {}",
                sym.name,
                sym.profile.len(),
                sorts.join(" "),
                tuples.join(" ")
            );
        }
        for (f, sym) in self.sig.functions.iter().enumerate() {
            let sorts: Vec<&str> = sym.args.iter().map(|&s| self.sig.sorts[s].as_str()).collect();
            let entries: Vec<String> = arg_tuples(&sym.args, &self.carriers)
                .map(|args| {
                    let names: Vec<&str> =
                        args.iter().zip(&sym.args).map(|(&i, &s)| self.carriers[s][i].as_str()).collect();
                    let v = self.apply(f, &args);
                    format!("{} -> {}", names.join(" "), self.carriers[sym.result][v])
                })
                .collect();
            let _ = writeln!(
                out,
                "fun {}/{} : {} -> {} = {}",
                sym.name,
                sym.args.len(),
                sorts.join(" "),
                self.sig.sorts[sym.result],
                entries.join(" ; ")
            );
        }
        for (c, sym) in self.sig.constants.iter().enumerate() {
            let _ = writeln!(
                out,
                "const {} : {} = {}",
                sym.name,
                self.sig.sorts[sym.sort],
                self.carriers[sym.sort][self.constants[c]]
            );
        }
        out
    }

    /// The quantifier-free type of `t`: its generated substructure together
    /// with the positional generator labelling.
    pub fn generated_substructure(&self, t: &SortedTuple) -> Result<QfType> {
        self.check_tuple(t)?;
        let mut members: BTreeSet<Elem> = t.0.iter().copied().collect();
        members.extend((0..self.sig.constants.len()).map(|c| self.constant(c)));
        loop {
            let mut added = Vec::new();
            for (f, sym) in self.sig.functions.iter().enumerate() {
                let pools: Vec<Vec<usize>> = sym
                    .args
                    .iter()
                    .map(|&s| members.iter().filter(|e| e.sort == s).map(|e| e.index).collect())
                    .collect();
                for args in product_indices(&pools) {
                    let v = Elem::new(sym.result, self.apply(f, &args));
                    if !members.contains(&v) {
                        added.push(v);
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            members.extend(added);
        }
        let relations = self
            .sig
            .relations
            .iter()
            .enumerate()
            .map(|(r, sym)| {
                self.relations[r]
                    .iter()
                    .filter(|tup| tup.iter().zip(&sym.profile).all(|(&i, &s)| members.contains(&Elem::new(s, i))))
                    .cloned()
                    .collect()
            })
            .collect();
        Ok(QfType { generators: t.clone(), elements: members, relations })
    }
}

/// Quantifier-free type of a tuple, represented by the generated
/// substructure with its generators labelled by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QfType {
    pub generators: SortedTuple,
    pub elements: BTreeSet<Elem>,
    pub relations: Vec<BTreeSet<Vec<usize>>>,
}

impl QfType {
    /// Pairs of positions `(i, j)`, `i < j`, carrying the same element.
    pub fn equalities(&self) -> Vec<(usize, usize)> {
        let g = &self.generators.0;
        let mut out = Vec::new();
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                if g[i] == g[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Decides whether `a` in `s` and `b` in `t` have the same quantifier-free
/// type (constants included).
pub fn qf_equal(s: &FinStructure, a: &SortedTuple, t: &FinStructure, b: &SortedTuple) -> Result<bool> {
    check_profiles(s, a, t, b)?;
    Ok(PartialIso::from_pairs(s, t, a.0.iter().copied().zip(b.0.iter().copied())).is_ok())
}

pub(crate) fn check_profiles(s: &FinStructure, a: &SortedTuple, t: &FinStructure, b: &SortedTuple) -> Result<()> {
    if s.signature() != t.signature() {
        return Err(StructureError::SignatureMismatch);
    }
    s.check_tuple(a)?;
    t.check_tuple(b)?;
    if a.profile() != b.profile() {
        return Err(StructureError::TupleMismatch(format!(
            "profiles differ: {} entries vs {} entries",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Builder for [`FinStructure`] values assembled in code.
#[derive(Debug, Clone)]
pub struct StructureBuilder {
    name: String,
    sig: Signature,
    carriers: Vec<Vec<String>>,
    relations: Vec<BTreeSet<Vec<usize>>>,
    functions: Vec<Vec<Option<usize>>>,
    constants: Vec<Option<usize>>,
}

impl StructureBuilder {
    pub fn new(name: &str, sig: Signature) -> Self {
        let n = sig.sorts.len();
        Self {
            name: name.into(),
            relations: vec![BTreeSet::new(); sig.relations.len()],
            functions: vec![Vec::new(); sig.functions.len()],
            constants: vec![None; sig.constants.len()],
            carriers: vec![Vec::new(); n],
            sig,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn set_carrier<S: AsRef<str>>(&mut self, sort: usize, names: &[S]) -> Result<&mut Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(StructureError::Duplicate { kind: "element", name: n.clone() });
            }
        }
        self.carriers[sort] = names;
        Ok(self)
    }

    pub fn carrier(&self, sort: usize) -> &[String] {
        &self.carriers[sort]
    }

    fn table_size(&self, args: &[usize]) -> usize {
        args.iter().map(|&s| self.carriers[s].len()).product()
    }

    pub fn add_tuple(&mut self, rel: usize, tuple: Vec<usize>) -> Result<&mut Self> {
        let profile = &self.sig.relations[rel].profile;
        if tuple.len() != profile.len() || tuple.iter().zip(profile).any(|(&i, &s)| i >= self.carriers[s].len()) {
            return Err(StructureError::ProfileMismatch {
                line: None,
                msg: format!("tuple {tuple:?} does not fit relation `{}`", self.sig.relations[rel].name),
            });
        }
        self.relations[rel].insert(tuple);
        Ok(self)
    }

    pub fn set_value(&mut self, fun: usize, args: &[usize], value: usize) -> Result<&mut Self> {
        let sym = self.sig.functions[fun].clone();
        if args.len() != sym.args.len()
            || args.iter().zip(&sym.args).any(|(&i, &s)| i >= self.carriers[s].len())
            || value >= self.carriers[sym.result].len()
        {
            return Err(StructureError::ProfileMismatch {
                line: None,
                msg: format!("entry {args:?} -> {value} does not fit function `{}`", sym.name),
            });
        }
        let size = self.table_size(&sym.args);
        let table = &mut self.functions[fun];
        if table.len() != size {
            table.resize(size, None);
        }
        let mut idx = 0;
        for (&s, &a) in sym.args.iter().zip(args) {
            idx = idx * self.carriers[s].len() + a;
        }
        table[idx] = Some(value);
        Ok(self)
    }

    pub fn set_constant(&mut self, c: usize, value: usize) -> Result<&mut Self> {
        let s = self.sig.constants[c].sort;
        if value >= self.carriers[s].len() {
            return Err(StructureError::ProfileMismatch {
                line: None,
                msg: format!("constant `{}` outside its carrier", self.sig.constants[c].name),
            });
        }
        self.constants[c] = Some(value);
        Ok(self)
    }

    pub fn build(self) -> Result<FinStructure> {
        let mut functions = Vec::with_capacity(self.functions.len());
        for (f, table) in self.functions.into_iter().enumerate() {
            let sym = &self.sig.functions[f];
            let size: usize = sym.args.iter().map(|&s| self.carriers[s].len()).product();
            let mut dense = Vec::with_capacity(size);
            for (i, args) in arg_tuples(&sym.args, &self.carriers).enumerate() {
                match table.get(i).copied().flatten() {
                    Some(v) => dense.push(v),
                    None => {
                        let names: Vec<&str> =
                            args.iter().zip(&sym.args).map(|(&a, &s)| self.carriers[s][a].as_str()).collect();
                        return Err(StructureError::NonTotal { fun: sym.name.clone(), args: names.join(" ") });
                    }
                }
            }
            functions.push(dense);
        }
        let mut constants = Vec::with_capacity(self.constants.len());
        for (c, v) in self.constants.into_iter().enumerate() {
            match v {
                Some(v) => constants.push(v),
                None => {
                    return Err(StructureError::NonTotal {
                        fun: self.sig.constants[c].name.clone(),
                        args: String::new(),
                    })
                }
            }
        }
        let used: BTreeSet<usize> = self
            .sig
            .relations
            .iter()
            .flat_map(|r| r.profile.iter().copied())
            .chain(self.sig.functions.iter().flat_map(|f| f.args.iter().copied().chain([f.result])))
            .chain(self.sig.constants.iter().map(|c| c.sort))
            .collect();
        if let Some(&s) = used.iter().find(|&&s| self.carriers[s].is_empty()) {
            return Err(StructureError::ProfileMismatch {
                line: None,
                msg: format!("sort `{}` is used but has an empty carrier", self.sig.sorts[s]),
            });
        }
        Ok(FinStructure {
            name: self.name,
            sig: self.sig,
            carriers: self.carriers,
            relations: self.relations,
            functions,
            constants,
        })
    }
}

/// Iterates over all argument tuples for a function profile, in mixed-radix
/// order with the first argument most significant.
pub(crate) fn arg_tuples<'a>(args: &'a [usize], carriers: &'a [Vec<String>]) -> impl Iterator<Item = Vec<usize>> + 'a {
    let pools: Vec<Vec<usize>> = args.iter().map(|&s| (0..carriers[s].len()).collect()).collect();
    product_indices(&pools).collect::<Vec<_>>().into_iter()
}

/// Cartesian product of index pools, last pool varying fastest.
pub(crate) fn product_indices(pools: &[Vec<usize>]) -> impl Iterator<Item = Vec<usize>> {
    let pools = pools.to_vec();
    let empty = pools.iter().any(Vec::is_empty);
    let mut cursor: Option<Vec<usize>> = if empty { None } else { Some(vec![0; pools.len()]) };
    std::iter::from_fn(move || {
        let cur = cursor.as_mut()?;
        let out: Vec<usize> = cur.iter().zip(&pools).map(|(&i, p)| p[i]).collect();
        let mut k = pools.len();
        loop {
            if k == 0 {
                cursor = None;
                break;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < pools[k].len() {
                break;
            }
            cur[k] = 0;
        }
        Some(out)
    })
}

impl fmt::Display for FinStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Pure set with `n` elements named `0..n` in a one-sorted empty language.
pub fn pure_set(n: usize) -> FinStructure {
    let mut sig = Signature::new();
    let s = sig.add_sort("S").unwrap();
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut b = StructureBuilder::new(&format!("set{n}"), sig);
    b.set_carrier(s, &names).unwrap();
    b.build().unwrap()
}

/// All structures on `n` elements in the signature with one binary
/// relation, indexed by the bitmask of the relation.
pub fn all_binary_relation_structures(n: usize) -> Vec<FinStructure> {
    let sig = Signature::one_binary_relation();
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let cells = n * n;
    (0u64..(1u64 << cells))
        .map(|mask| {
            let mut b = StructureBuilder::new(&format!("r{n}_{mask}"), sig.clone());
            b.set_carrier(0, &names).unwrap();
            for c in 0..cells {
                if mask >> c & 1 == 1 {
                    b.add_tuple(0, vec![c / n, c % n]).unwrap();
                }
            }
            b.build().unwrap()
        })
        .collect()
}
