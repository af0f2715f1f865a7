//! Finitary Σ_n/Π_n formulas in prefix notation.
//!
//! ```text
//! sigma1 (exists (y) (atom R x1 y))
//! pi2 (forall (y:S) (exists (z) (or (eq y z) (not (atom R z y)))))
//! ```
//!
//! Free variables are `x1, x2, ...`; position `k` of an evaluation tuple
//! binds `xk`. Quantifiers bind finite lists of variables. Identifiers that
//! name a constant symbol denote it unless shadowed by a bound variable.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GameError, Result};
use crate::structures::{Elem, FinStructure, Signature, SortedTuple};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    Const(usize),
    App(usize, Vec<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    True,
    False,
    Atom(usize, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Exists(Vec<usize>, Box<Node>),
    Forall(Vec<usize>, Box<Node>),
}

/// Complexity tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Class {
    Sigma(u32),
    Pi(u32),
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Class::Sigma(n) => write!(f, "sigma{n}"),
            Class::Pi(n) => write!(f, "pi{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Var {
    pub name: String,
    pub sort: usize,
}

/// A formula in negation normal form together with its variable table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    sig: Signature,
    pub vars: Vec<Var>,
    /// `free[k]` is the variable id bound by tuple position `k`, if used.
    pub free: Vec<Option<usize>>,
    pub root: Node,
    pub class: Class,
}

impl Formula {
    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Number of tuple positions the formula reads (largest `k` in `xk`).
    pub fn arity(&self) -> usize {
        self.free.len()
    }

    pub fn free_sort(&self, k: usize) -> Option<usize> {
        self.free.get(k).copied().flatten().map(|v| self.vars[v].sort)
    }

    /// Least `n` with the formula in Σ_n.
    pub fn sigma_level(&self) -> u32 {
        levels(&self.root).0
    }

    /// Least `n` with the formula in Π_n.
    pub fn pi_level(&self) -> u32 {
        levels(&self.root).1
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self.root, Node::Atom(..) | Node::Eq(..) | Node::True | Node::False)
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.sigma_level() == 0
    }

    /// True if the formula belongs to Σ_n (resp. Π_n) for the given class.
    pub fn in_class(&self, class: Class) -> bool {
        match class {
            Class::Sigma(n) => self.sigma_level() <= n,
            Class::Pi(n) => self.pi_level() <= n,
        }
    }

    /// Builds a formula from an AST; negations are pushed to atoms.
    pub fn from_parts(sig: Signature, vars: Vec<Var>, free: Vec<Option<usize>>, root: Node, class: Option<Class>) -> Result<Self> {
        let root = nnf(root, false);
        let (s, p) = levels(&root);
        let class = class.unwrap_or(Class::Sigma(s));
        let ok = match class {
            Class::Sigma(n) => s <= n,
            Class::Pi(n) => p <= n,
        };
        if !ok {
            return Err(GameError::Formula {
                line: 0,
                msg: format!("tag {class} is below the formula's complexity (sigma{s}, pi{p})"),
            });
        }
        Ok(Formula { sig, vars, free, root, class })
    }

    fn term_text(&self, t: &Term) -> String {
        match t {
            Term::Var(v) => self.vars[*v].name.clone(),
            Term::Const(c) => self.sig.constants[*c].name.clone(),
            Term::App(f, args) => {
                let a: Vec<String> = args.iter().map(|t| self.term_text(t)).collect();
                format!("({} {})", self.sig.functions[*f].name, a.join(" "))
            }
        }
    }

    fn node_text(&self, n: &Node) -> String {
        let binders = |vs: &[usize]| {
            vs.iter()
                .map(|&v| format!("{}:{}", self.vars[v].name, self.sig.sorts[self.vars[v].sort]))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let list = |ns: &[Node]| ns.iter().map(|n| self.node_text(n)).collect::<Vec<_>>().join(" ");
        match n {
            Node::True => "true".into(),
            Node::False => "false".into(),
            Node::Atom(r, args) => {
                let mut s = format!("(atom {}", self.sig.relations[*r].name);
                for a in args {
                    s.push(' ');
                    s.push_str(&self.term_text(a));
                }
                s.push(')');
                s
            }
            Node::Eq(a, b) => format!("(eq {} {})", self.term_text(a), self.term_text(b)),
            Node::Not(c) => format!("(not {})", self.node_text(c)),
            Node::And(cs) => format!("(and {})", list(cs)),
            Node::Or(cs) => format!("(or {})", list(cs)),
            Node::Exists(vs, c) => format!("(exists ({}) {})", binders(vs), self.node_text(c)),
            Node::Forall(vs, c) => format!("(forall ({}) {})", binders(vs), self.node_text(c)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.class, self.node_text(&self.root))
    }
}

fn nnf(n: Node, neg: bool) -> Node {
    match (n, neg) {
        (Node::Not(c), _) => nnf(*c, !neg),
        (Node::True, true) => Node::False,
        (Node::False, true) => Node::True,
        (Node::And(cs), true) => Node::Or(cs.into_iter().map(|c| nnf(c, true)).collect()),
        (Node::Or(cs), true) => Node::And(cs.into_iter().map(|c| nnf(c, true)).collect()),
        (Node::And(cs), false) => Node::And(cs.into_iter().map(|c| nnf(c, false)).collect()),
        (Node::Or(cs), false) => Node::Or(cs.into_iter().map(|c| nnf(c, false)).collect()),
        (Node::Exists(vs, c), true) => Node::Forall(vs, Box::new(nnf(*c, true))),
        (Node::Forall(vs, c), true) => Node::Exists(vs, Box::new(nnf(*c, true))),
        (Node::Exists(vs, c), false) => Node::Exists(vs, Box::new(nnf(*c, false))),
        (Node::Forall(vs, c), false) => Node::Forall(vs, Box::new(nnf(*c, false))),
        (atom, true) => Node::Not(Box::new(atom)),
        (atom, false) => atom,
    }
}

/// (least Σ level, least Π level) of a negation-normal-form node, up to
/// the finitary normal-form manipulations: merging adjacent quantifiers of
/// one kind and distributing finite conjunctions and disjunctions.
fn levels(n: &Node) -> (u32, u32) {
    match n {
        Node::True | Node::False | Node::Atom(..) | Node::Eq(..) | Node::Not(_) => (0, 0),
        Node::Exists(_, c) => {
            let s = levels(c).0.max(1);
            (s, s + 1)
        }
        Node::Forall(_, c) => {
            let p = levels(c).1.max(1);
            (p + 1, p)
        }
        Node::Or(cs) | Node::And(cs) => cs
            .iter()
            .map(levels)
            .fold((0, 0), |(s, p), (cs, cp)| (s.max(cs), p.max(cp))),
    }
}

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn read_sexp(tokens: &[String], pos: &mut usize) -> std::result::Result<Sexp, String> {
    let tok = tokens.get(*pos).ok_or("unexpected end of input")?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    None => return Err("unclosed `(`".into()),
                    Some(")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read_sexp(tokens, pos)?),
                }
            }
        }
        ")" => Err("unexpected `)`".into()),
        s => Ok(Sexp::Atom(s.to_string())),
    }
}

struct Builder<'a> {
    sig: &'a Signature,
    vars: Vec<Var>,
    sorts: Vec<Option<usize>>,
    scope: Vec<(String, usize)>,
    free: HashMap<usize, usize>,
}

fn free_index(name: &str) -> Option<usize> {
    let k: usize = name.strip_prefix('x')?.parse().ok()?;
    (k >= 1 && !name[1..].starts_with('0')).then_some(k)
}

impl<'a> Builder<'a> {
    fn new_var(&mut self, name: &str, sort: Option<usize>) -> usize {
        self.vars.push(Var { name: name.into(), sort: 0 });
        self.sorts.push(sort);
        self.vars.len() - 1
    }

    fn term(&mut self, e: &Sexp) -> std::result::Result<Term, String> {
        match e {
            Sexp::Atom(name) => {
                if let Some(&(_, v)) = self.scope.iter().rev().find(|(n, _)| n == name) {
                    return Ok(Term::Var(v));
                }
                if let Some(c) = self.sig.constant_index(name) {
                    return Ok(Term::Const(c));
                }
                if let Some(k) = free_index(name) {
                    if let Some(&v) = self.free.get(&k) {
                        return Ok(Term::Var(v));
                    }
                    let v = self.new_var(name, None);
                    self.free.insert(k, v);
                    return Ok(Term::Var(v));
                }
                Err(format!("unknown identifier `{name}`"))
            }
            Sexp::List(items) => {
                let Some(Sexp::Atom(f)) = items.first() else {
                    return Err("function application needs a symbol".into());
                };
                let fi = self.sig.function_index(f).ok_or_else(|| format!("unknown function `{f}`"))?;
                let arity = self.sig.functions[fi].args.len();
                if items.len() - 1 != arity {
                    return Err(format!("`{f}` takes {arity} arguments"));
                }
                let args = items[1..].iter().map(|a| self.term(a)).collect::<std::result::Result<Vec<_>, _>>()?;
                Ok(Term::App(fi, args))
            }
        }
    }

    fn binders(&mut self, e: &Sexp) -> std::result::Result<Vec<usize>, String> {
        let Sexp::List(items) = e else {
            return Err("quantifier needs a variable list".into());
        };
        let mut out = Vec::new();
        for it in items {
            let Sexp::Atom(spec) = it else {
                return Err("bad variable in binder list".into());
            };
            let (name, sort) = match spec.split_once(':') {
                Some((n, s)) => {
                    let si = self.sig.sort_index(s).ok_or_else(|| format!("unknown sort `{s}`"))?;
                    (n, Some(si))
                }
                None => (spec.as_str(), None),
            };
            if name.is_empty() {
                return Err("empty variable name".into());
            }
            out.push(self.new_var(name, sort));
        }
        Ok(out)
    }

    fn node(&mut self, e: &Sexp) -> std::result::Result<Node, String> {
        match e {
            Sexp::Atom(a) if a == "true" => Ok(Node::True),
            Sexp::Atom(a) if a == "false" => Ok(Node::False),
            Sexp::Atom(a) => Err(format!("expected a formula, got `{a}`")),
            Sexp::List(items) => {
                let Some(Sexp::Atom(head)) = items.first() else {
                    return Err("formula must start with a keyword".into());
                };
                let rest = &items[1..];
                match head.as_str() {
                    "atom" => {
                        let Some(Sexp::Atom(r)) = rest.first() else {
                            return Err("atom needs a relation symbol".into());
                        };
                        let ri = self.sig.relation_index(r).ok_or_else(|| format!("unknown relation `{r}`"))?;
                        let arity = self.sig.relations[ri].profile.len();
                        if rest.len() - 1 != arity {
                            return Err(format!("`{r}` takes {arity} arguments"));
                        }
                        let args = rest[1..].iter().map(|a| self.term(a)).collect::<std::result::Result<Vec<_>, _>>()?;
                        Ok(Node::Atom(ri, args))
                    }
                    "eq" => {
                        if rest.len() != 2 {
                            return Err("eq takes two terms".into());
                        }
                        Ok(Node::Eq(self.term(&rest[0])?, self.term(&rest[1])?))
                    }
                    "not" => {
                        if rest.len() != 1 {
                            return Err("not takes one formula".into());
                        }
                        Ok(Node::Not(Box::new(self.node(&rest[0])?)))
                    }
                    "and" | "or" => {
                        let cs = rest.iter().map(|c| self.node(c)).collect::<std::result::Result<Vec<_>, _>>()?;
                        Ok(if head == "and" { Node::And(cs) } else { Node::Or(cs) })
                    }
                    "exists" | "forall" => {
                        if rest.len() != 2 {
                            return Err(format!("{head} takes a variable list and a formula"));
                        }
                        let vs = self.binders(&rest[0])?;
                        let depth = self.scope.len();
                        for &v in &vs {
                            self.scope.push((self.vars[v].name.clone(), v));
                        }
                        let body = self.node(&rest[1]);
                        self.scope.truncate(depth);
                        let body = Box::new(body?);
                        Ok(if head == "exists" { Node::Exists(vs, body) } else { Node::Forall(vs, body) })
                    }
                    other => Err(format!("unknown keyword `{other}`")),
                }
            }
        }
    }

    fn term_sort(&self, t: &Term) -> Option<usize> {
        match t {
            Term::Var(v) => self.sorts[*v],
            Term::Const(c) => Some(self.sig.constants[*c].sort),
            Term::App(f, _) => Some(self.sig.functions[*f].result),
        }
    }

    /// Records that `t` has sort `s`; returns whether anything changed.
    fn expect(&mut self, t: &Term, s: usize) -> std::result::Result<bool, String> {
        match t {
            Term::Var(v) => match self.sorts[*v] {
                None => {
                    self.sorts[*v] = Some(s);
                    Ok(true)
                }
                Some(k) if k == s => Ok(false),
                Some(k) => Err(format!(
                    "variable `{}` used at sorts `{}` and `{}`",
                    self.vars[*v].name, self.sig.sorts[k], self.sig.sorts[s]
                )),
            },
            Term::Const(c) if self.sig.constants[*c].sort == s => Ok(false),
            Term::App(f, _) if self.sig.functions[*f].result == s => Ok(false),
            _ => Err("term used at the wrong sort".into()),
        }
    }

    fn infer_term(&mut self, t: &Term) -> std::result::Result<bool, String> {
        let mut changed = false;
        if let Term::App(f, args) = t {
            let profile = self.sig.functions[*f].args.clone();
            for (a, s) in args.iter().zip(profile) {
                changed |= self.expect(a, s)?;
                changed |= self.infer_term(a)?;
            }
        }
        Ok(changed)
    }

    fn infer(&mut self, n: &Node) -> std::result::Result<bool, String> {
        let mut changed = false;
        match n {
            Node::True | Node::False => {}
            Node::Atom(r, args) => {
                let profile = self.sig.relations[*r].profile.clone();
                for (a, s) in args.iter().zip(profile) {
                    changed |= self.expect(a, s)?;
                    changed |= self.infer_term(a)?;
                }
            }
            Node::Eq(a, b) => {
                changed |= self.infer_term(a)?;
                changed |= self.infer_term(b)?;
                match (self.term_sort(a), self.term_sort(b)) {
                    (Some(s), _) => changed |= self.expect(b, s)?,
                    (None, Some(s)) => changed |= self.expect(a, s)?,
                    (None, None) => {}
                }
            }
            Node::Not(c) | Node::Exists(_, c) | Node::Forall(_, c) => changed |= self.infer(c)?,
            Node::And(cs) | Node::Or(cs) => {
                for c in cs {
                    changed |= self.infer(c)?;
                }
            }
        }
        Ok(changed)
    }
}

fn parse_class(tok: &str) -> Option<Class> {
    if let Some(n) = tok.strip_prefix("sigma") {
        return n.parse().ok().map(Class::Sigma);
    }
    if let Some(n) = tok.strip_prefix("pi") {
        return n.parse().ok().map(Class::Pi);
    }
    (tok == "qf").then_some(Class::Sigma(0))
}

/// Parses one formula line: an optional class tag (`sigmaN`, `piN`, `qf`)
/// followed by a formula. Without a tag the least Σ level is used.
pub fn parse_formula(sig: &Signature, text: &str) -> Result<Formula> {
    parse_at(sig, text, 1)
}

fn parse_at(sig: &Signature, text: &str, line: usize) -> Result<Formula> {
    let err = |msg: String| GameError::Formula { line, msg };
    let tokens = tokenize(text);
    let (class, start) = match tokens.first().and_then(|t| parse_class(t)) {
        Some(c) => (Some(c), 1),
        None => (None, 0),
    };
    let mut pos = start;
    let sexp = read_sexp(&tokens, &mut pos).map_err(err)?;
    if pos != tokens.len() {
        return Err(err("trailing input after formula".into()));
    }
    let mut b = Builder { sig, vars: Vec::new(), sorts: Vec::new(), scope: Vec::new(), free: HashMap::new() };
    let root = b.node(&sexp).map_err(err)?;
    while b.infer(&root).map_err(err)? {}
    for (v, s) in b.vars.iter_mut().zip(&b.sorts) {
        v.sort = s.unwrap_or(0);
    }
    let arity = b.free.keys().copied().max().unwrap_or(0);
    let mut free = vec![None; arity];
    for (&k, &v) in &b.free {
        free[k - 1] = Some(v);
    }
    Formula::from_parts(sig.clone(), b.vars, free, root, class).map_err(|e| match e {
        GameError::Formula { msg, .. } => GameError::Formula { line, msg },
        other => other,
    })
}

/// Parses a pool file: one formula per line, `#` comments.
pub fn parse_pool(sig: &Signature, text: &str) -> Result<Vec<Formula>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("").trim();
            (!l.is_empty()).then(|| parse_at(sig, l, i + 1))
        })
        .collect()
}

fn eval_term(s: &FinStructure, f: &Formula, t: &Term, env: &[usize]) -> Elem {
    match t {
        Term::Var(v) => Elem::new(f.vars[*v].sort, env[*v]),
        Term::Const(c) => s.constant(*c),
        Term::App(fi, args) => {
            let idx: Vec<usize> = args.iter().map(|a| eval_term(s, f, a, env).index).collect();
            Elem::new(s.signature().functions[*fi].result, s.apply(*fi, &idx))
        }
    }
}

fn eval_node(s: &FinStructure, f: &Formula, n: &Node, env: &mut Vec<usize>) -> bool {
    match n {
        Node::True => true,
        Node::False => false,
        Node::Atom(r, args) => {
            let idx: Vec<usize> = args.iter().map(|a| eval_term(s, f, a, env).index).collect();
            s.holds(*r, &idx)
        }
        Node::Eq(a, b) => eval_term(s, f, a, env) == eval_term(s, f, b, env),
        Node::Not(c) => !eval_node(s, f, c, env),
        Node::And(cs) => cs.iter().all(|c| eval_node(s, f, c, env)),
        Node::Or(cs) => cs.iter().any(|c| eval_node(s, f, c, env)),
        Node::Exists(vs, c) => assignments(s, f, vs, env, &mut |env| eval_node(s, f, c, env)),
        Node::Forall(vs, c) => !assignments(s, f, vs, env, &mut |env| !eval_node(s, f, c, env)),
    }
}

/// Tries every assignment of `vs`, stopping when `body` returns true.
fn assignments(s: &FinStructure, f: &Formula, vs: &[usize], env: &mut Vec<usize>, body: &mut dyn FnMut(&mut Vec<usize>) -> bool) -> bool {
    let Some((&v, rest)) = vs.split_first() else {
        return body(env);
    };
    for i in 0..s.carrier_size(f.vars[v].sort) {
        env[v] = i;
        if assignments(s, f, rest, env, body) {
            return true;
        }
    }
    false
}

/// Satisfaction of `phi` in `s` with `xk` bound to `t[k-1]`. Extra tuple
/// entries beyond the formula's arity are ignored.
pub fn eval_formula(s: &FinStructure, phi: &Formula, t: &SortedTuple) -> Result<bool> {
    if s.signature() != phi.signature() {
        return Err(crate::structures::StructureError::SignatureMismatch.into());
    }
    s.check_tuple(t)?;
    if t.len() < phi.arity() {
        return Err(GameError::Profile(format!("formula reads {} positions, tuple has {}", phi.arity(), t.len())));
    }
    let mut env = vec![0; phi.vars.len()];
    for (k, slot) in phi.free.iter().enumerate() {
        if let Some(v) = slot {
            let e = t.0[k];
            if e.sort != phi.vars[*v].sort {
                return Err(GameError::Profile(format!("position {} has the wrong sort", k + 1)));
            }
            env[*v] = e.index;
        }
    }
    Ok(eval_node(s, phi, &phi.root, &mut env))
}

struct PoolGen<'a> {
    sig: &'a Signature,
    rng: ChaCha8Rng,
    fresh: usize,
}

impl PoolGen<'_> {
    fn literal(&mut self, vars: &[String]) -> String {
        let use_eq = self.sig.relations.is_empty() || self.rng.random_bool(0.3);
        let body = if use_eq {
            let a = &vars[self.rng.random_range(0..vars.len())];
            let b = &vars[self.rng.random_range(0..vars.len())];
            format!("(eq {a} {b})")
        } else {
            let r = &self.sig.relations[self.rng.random_range(0..self.sig.relations.len())];
            let args: Vec<&str> =
                (0..r.profile.len()).map(|_| vars[self.rng.random_range(0..vars.len())].as_str()).collect();
            format!("(atom {} {})", r.name, args.join(" ")).replace(" )", ")")
        };
        if self.rng.random_bool(0.4) {
            format!("(not {body})")
        } else {
            body
        }
    }

    fn qf(&mut self, vars: &[String]) -> String {
        let n = self.rng.random_range(1..=3);
        if n == 1 {
            return self.literal(vars);
        }
        let parts: Vec<String> = (0..n).map(|_| self.literal(vars)).collect();
        let op = if self.rng.random_bool(0.5) { "and" } else { "or" };
        format!("({op} {})", parts.join(" "))
    }

    fn binders(&mut self, vars: &mut Vec<String>) -> String {
        let k = self.rng.random_range(1..=2);
        let names: Vec<String> = (0..k)
            .map(|_| {
                self.fresh += 1;
                format!("y{}", self.fresh)
            })
            .collect();
        vars.extend(names.iter().cloned());
        names.join(" ")
    }

    fn sigma(&mut self, level: u32, vars: &[String]) -> String {
        if level == 0 {
            return self.qf(vars);
        }
        let mut inner = vars.to_vec();
        let b = self.binders(&mut inner);
        let body = self.pi(level - 1, &inner);
        let main = format!("(exists ({b}) {body})");
        if self.rng.random_bool(0.25) {
            let other = self.sigma(level, vars);
            format!("(or {main} {other})")
        } else {
            main
        }
    }

    fn pi(&mut self, level: u32, vars: &[String]) -> String {
        if level == 0 {
            return self.qf(vars);
        }
        let mut inner = vars.to_vec();
        let b = self.binders(&mut inner);
        let body = self.sigma(level - 1, &inner);
        format!("(forall ({b}) {body})")
    }
}

/// Seeded pool of Σ_n and Π_n formulas (`1 ≤ n ≤ max_level`) in free
/// variables `x1..x{free}` for a one-sorted signature. Classes cycle
/// Σ1, Π1, Σ2, Π2, ...
pub fn random_pool(sig: &Signature, free: usize, count: usize, max_level: u32, seed: u64) -> Result<Vec<Formula>> {
    if sig.sorts.len() != 1 || !sig.functions.is_empty() {
        return Err(GameError::Profile("pool generation needs a one-sorted relational signature".into()));
    }
    let max_level = max_level.max(1);
    let mut g = PoolGen { sig, rng: ChaCha8Rng::seed_from_u64(seed), fresh: 0 };
    let vars: Vec<String> = (1..=free).map(|k| format!("x{k}")).collect();
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let level = (i as u32 / 2) % max_level + 1;
        g.fresh = 0;
        let (tag, text) = if i % 2 == 0 {
            (Class::Sigma(level), g.sigma(level, &vars))
        } else {
            (Class::Pi(level), g.pi(level, &vars))
        };
        out.push(parse_formula(sig, &format!("{tag} {text}"))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::parse_structure;

    const Z4: &str = "structure Z4
sort G = 0 1 2 3
fun mul/2 : G G -> G = 0 0 -> 0 ; 0 1 -> 1 ; 0 2 -> 2 ; 0 3 -> 3 ; 1 0 -> 1 ; 1 1 -> 2 ; 1 2 -> 3 ; 1 3 -> 0
fun mul/2 : G G -> G = 2 0 -> 2 ; 2 1 -> 3 ; 2 2 -> 0 ; 2 3 -> 1 ; 3 0 -> 3 ; 3 1 -> 0 ; 3 2 -> 1 ; 3 3 -> 2
const e : G = 0
";

    #[test]
    fn reflexive_equality_holds() {
        let s = parse_structure("sort S = a b\nrel R/2 : S S = (a b)\n").unwrap();
        let f = parse_formula(s.signature(), "qf (eq x1 x1)").unwrap();
        for n in ["a", "b"] {
            assert!(eval_formula(&s, &f, &s.tuple(&[n]).unwrap()).unwrap());
        }
    }

    #[test]
    fn square_root_of_identity_exists_in_z4() {
        let s = parse_structure(Z4).unwrap();
        let f = parse_formula(s.signature(), "sigma1 (exists (y) (and (eq (mul y y) e) (not (eq y e))))").unwrap();
        assert!(eval_formula(&s, &f, &SortedTuple::empty()).unwrap());
        let g = parse_formula(s.signature(), "sigma1 (exists (y) (eq (mul (mul y y) (mul y y)) y))").unwrap();
        assert!(eval_formula(&s, &g, &SortedTuple::empty()).unwrap());
    }

    #[test]
    fn disjunction_with_one_true_disjunct() {
        let s = parse_structure("sort S = a b\nrel R/2 : S S = (a b)\n").unwrap();
        let f = parse_formula(s.signature(), "sigma1 (or (exists (y) (atom R y y)) (exists (y) (atom R x1 y)))").unwrap();
        assert!(eval_formula(&s, &f, &s.tuple(&["a"]).unwrap()).unwrap());
        assert!(!eval_formula(&s, &f, &s.tuple(&["b"]).unwrap()).unwrap());
    }

    #[test]
    fn complexity_levels() {
        let sig = Signature::one_binary_relation();
        let lv = |t: &str| {
            let f = parse_formula(&sig, t).unwrap();
            (f.sigma_level(), f.pi_level())
        };
        assert_eq!(lv("(atom R x1 x2)"), (0, 0));
        assert_eq!(lv("(exists (y) (atom R x1 y))"), (1, 2));
        assert_eq!(lv("(forall (y) (atom R x1 y))"), (2, 1));
        assert_eq!(lv("(forall (y) (exists (z) (atom R y z)))"), (3, 2));
        assert_eq!(lv("(not (exists (y) (atom R x1 y)))"), (2, 1));
        assert_eq!(lv("(or (exists (y) (atom R y y)) (atom R x1 x1))"), (1, 2));
        assert_eq!(lv("(exists (y) (exists (z) (atom R y z)))"), (1, 2));
        assert_eq!(lv("(and (exists (y) (atom R y y)) (forall (z) (atom R z x1)))"), (2, 2));
        assert!(parse_formula(&sig, "sigma1 (forall (y) (exists (z) (atom R y z)))").is_err());
        assert!(parse_formula(&sig, "pi2 (forall (y) (exists (z) (atom R y z)))").is_ok());
    }

    #[test]
    fn negations_are_pushed_to_atoms() {
        let sig = Signature::one_binary_relation();
        let f = parse_formula(&sig, "(not (and (atom R x1 x1) (exists (y) (eq y x1))))").unwrap();
        assert_eq!(f.to_string(), "sigma2 (or (not (atom R x1 x1)) (forall (y:S) (not (eq y x1))))");
    }

    #[test]
    fn parse_errors() {
        let sig = Signature::one_binary_relation();
        for bad in ["(atom R x1)", "(atom Q x1 x1)", "(exists y (atom R y y))", "(atom R x1 x1", "(atom R z x1)", "(foo)"] {
            assert!(parse_formula(&sig, bad).is_err(), "{bad}");
        }
        let err = parse_pool(&sig, "# c\nsigma1 (exists (y) (atom R y y))\n(atom R x1)\n").unwrap_err();
        assert!(matches!(err, GameError::Formula { line: 3, .. }));
    }

    #[test]
    fn sort_inference_and_annotations() {
        let s = parse_structure("sort A = p q\nsort B = u\nrel H/2 : A B = (p u)\n").unwrap();
        let f = parse_formula(s.signature(), "(exists (y) (atom H x1 y))").unwrap();
        assert_eq!(f.free_sort(0), Some(0));
        assert_eq!(f.vars.iter().find(|v| v.name == "y").unwrap().sort, 1);
        assert!(eval_formula(&s, &f, &s.tuple(&["p"]).unwrap()).unwrap());
        assert!(!eval_formula(&s, &f, &s.tuple(&["q"]).unwrap()).unwrap());
        assert!(parse_formula(s.signature(), "(exists (y:A) (atom H x1 y))").is_err());
        assert!(eval_formula(&s, &f, &s.tuple(&["u"]).unwrap()).is_err());
    }

    #[test]
    fn pools_are_seeded_and_well_tagged() {
        let sig = Signature::one_binary_relation();
        let a = random_pool(&sig, 1, 40, 2, 7).unwrap();
        let b = random_pool(&sig, 1, 40, 2, 7).unwrap();
        assert_eq!(a, b);
        for f in &a {
            assert!(f.in_class(f.class));
        }
        assert!(a.iter().any(|f| f.class == Class::Sigma(2)));
    }
}
