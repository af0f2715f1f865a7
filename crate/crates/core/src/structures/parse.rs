use super::{FinStructure, Result, Signature, StructureBuilder, StructureError};

enum Decl {
    Sort { name: String, elems: Vec<String> },
    Rel { name: String, sorts: Vec<String>, tuples: Vec<Vec<String>> },
    Fun { name: String, args: Vec<String>, result: String, entries: Vec<(Vec<String>, String)> },
    Const { name: String, sort: String, value: String },
}

fn syntax(line: usize, msg: impl Into<String>) -> StructureError {
    StructureError::Syntax { line, msg: msg.into() }
}

fn mismatch(line: usize, msg: impl Into<String>) -> StructureError {
    StructureError::ProfileMismatch { line: Some(line), msg: msg.into() }
}

/// Splits `name/k` and checks `k` against the declared sort list.
fn name_arity(line: usize, head: &str) -> Result<(String, usize)> {
    let (name, k) = head.split_once('/').ok_or_else(|| syntax(line, format!("expected `name/arity`, got `{head}`")))?;
    let k: usize = k.parse().map_err(|_| syntax(line, format!("bad arity `{k}`")))?;
    if name.is_empty() {
        return Err(syntax(line, "empty symbol name"));
    }
    Ok((name.to_string(), k))
}

fn parse_line(line: usize, text: &str) -> Result<Option<Decl>> {
    let text = text.split('#').next().unwrap_or("").trim();
    if text.is_empty() {
        return Ok(None);
    }
    let (kw, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    match kw {
        "structure" => Ok(None),
        "sort" => {
            let (name, elems) = rest.split_once('=').ok_or_else(|| syntax(line, "expected `sort S = ...`"))?;
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(syntax(line, "bad sort name"));
            }
            Ok(Some(Decl::Sort { name: name.into(), elems: elems.split_whitespace().map(String::from).collect() }))
        }
        "rel" => {
            let (head, body) = rest.split_once(':').ok_or_else(|| syntax(line, "expected `rel R/k : ...`"))?;
            let (name, k) = name_arity(line, head.trim())?;
            let (sorts, tuples) = body.split_once('=').ok_or_else(|| syntax(line, "expected `=` in rel"))?;
            let sorts: Vec<String> = sorts.split_whitespace().map(String::from).collect();
            if sorts.len() != k {
                return Err(mismatch(line, format!("`{name}` declares arity {k} but lists {} sorts", sorts.len())));
            }
            let mut out = Vec::new();
            let mut s = tuples.trim();
            while !s.is_empty() {
                let s2 = s.strip_prefix('(').ok_or_else(|| syntax(line, "expected `(` to open a tuple"))?;
                let close = s2.find(')').ok_or_else(|| syntax(line, "unclosed tuple"))?;
                let tuple: Vec<String> = s2[..close].split_whitespace().map(String::from).collect();
                if tuple.len() != k {
                    return Err(mismatch(line, format!("tuple of length {} in `{name}`/{k}", tuple.len())));
                }
                out.push(tuple);
                s = s2[close + 1..].trim_start();
            }
            Ok(Some(Decl::Rel { name, sorts, tuples: out }))
        }
        "fun" => {
            let (head, body) = rest.split_once(':').ok_or_else(|| syntax(line, "expected `fun f/k : ...`"))?;
            let (name, k) = name_arity(line, head.trim())?;
            if k == 0 {
                return Err(syntax(line, "nullary functions are declared with `const`"));
            }
            let (profile, entries) = body.split_once('=').ok_or_else(|| syntax(line, "expected `=` in fun"))?;
            let (args, result) =
                profile.split_once("->").ok_or_else(|| syntax(line, "expected `->` in function profile"))?;
            let args: Vec<String> = args.split_whitespace().map(String::from).collect();
            let result = result.trim();
            if args.len() != k {
                return Err(mismatch(line, format!("`{name}` declares arity {k} but lists {} sorts", args.len())));
            }
            if result.is_empty() || result.contains(char::is_whitespace) {
                return Err(syntax(line, "bad result sort"));
            }
            let mut out = Vec::new();
            for entry in entries.split(';').map(str::trim).filter(|e| !e.is_empty()) {
                let (xs, y) = entry.split_once("->").ok_or_else(|| syntax(line, format!("entry `{entry}` lacks `->`")))?;
                let xs: Vec<String> = xs.split_whitespace().map(String::from).collect();
                let y = y.trim();
                if xs.len() != k || y.is_empty() || y.contains(char::is_whitespace) {
                    return Err(mismatch(line, format!("entry `{entry}` does not fit `{name}`/{k}")));
                }
                out.push((xs, y.to_string()));
            }
            Ok(Some(Decl::Fun { name, args, result: result.into(), entries: out }))
        }
        "const" => {
            let (name, body) = rest.split_once(':').ok_or_else(|| syntax(line, "expected `const c : S = e`"))?;
            let (sort, value) = body.split_once('=').ok_or_else(|| syntax(line, "expected `=` in const"))?;
            let (name, sort, value) = (name.trim(), sort.trim(), value.trim());
            if [name, sort, value].iter().any(|x| x.is_empty() || x.contains(char::is_whitespace)) {
                return Err(syntax(line, "malformed const declaration"));
            }
            Ok(Some(Decl::Const { name: name.into(), sort: sort.into(), value: value.into() }))
        }
        other => Err(syntax(line, format!("unknown keyword `{other}`"))),
    }
}

/// Parses the line-oriented structure format. Repeated `rel`/`fun` lines for
/// the same symbol append to its table.
pub fn parse_structure(text: &str) -> Result<FinStructure> {
    let mut name = String::from("unnamed");
    let mut decls = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.split('#').next().unwrap_or("").trim();
        if let Some(n) = trimmed.strip_prefix("structure") {
            if n.is_empty() || n.starts_with(char::is_whitespace) {
                let n = n.trim();
                if n.is_empty() {
                    return Err(syntax(line, "missing structure name"));
                }
                name = n.to_string();
                continue;
            }
        }
        if let Some(d) = parse_line(line, raw)? {
            decls.push((line, d));
        }
    }

    let mut sig = Signature::new();
    let mut carriers: Vec<Vec<String>> = Vec::new();
    let sort_of = |sig: &Signature, line: usize, s: &str| {
        sig.sort_index(s).ok_or_else(|| mismatch(line, format!("undeclared sort `{s}`")))
    };
    for (line, d) in &decls {
        match d {
            Decl::Sort { name, elems } => {
                let idx = sig.add_sort(name).map_err(|_| syntax(*line, format!("duplicate sort `{name}`")))?;
                carriers.push(elems.clone());
                debug_assert_eq!(idx + 1, carriers.len());
            }
            Decl::Rel { name, sorts, .. } => {
                let profile = sorts.iter().map(|s| sort_of(&sig, *line, s)).collect::<Result<Vec<_>>>()?;
                match sig.relation_index(name) {
                    Some(r) if sig.relations[r].profile != profile => {
                        return Err(mismatch(*line, format!("`{name}` redeclared with a different profile")))
                    }
                    Some(_) => {}
                    None => {
                        sig.add_relation(name, profile)?;
                    }
                }
            }
            Decl::Fun { name, args, result, .. } => {
                let args = args.iter().map(|s| sort_of(&sig, *line, s)).collect::<Result<Vec<_>>>()?;
                let result = sort_of(&sig, *line, result)?;
                match sig.function_index(name) {
                    Some(f) if sig.functions[f].args != args || sig.functions[f].result != result => {
                        return Err(mismatch(*line, format!("`{name}` redeclared with a different profile")))
                    }
                    Some(_) => {}
                    None => {
                        sig.add_function(name, args, result)?;
                    }
                }
            }
            Decl::Const { name, sort, .. } => {
                let s = sort_of(&sig, *line, sort)?;
                sig.add_constant(name, s).map_err(|_| syntax(*line, format!("duplicate constant `{name}`")))?;
            }
        }
    }

    let mut b = StructureBuilder::new(&name, sig.clone());
    for (s, c) in carriers.iter().enumerate() {
        b.set_carrier(s, c)?;
    }
    let elem = |line: usize, sort: usize, n: &str| {
        carriers[sort]
            .iter()
            .position(|x| x == n)
            .ok_or_else(|| mismatch(line, format!("`{n}` is not in sort `{}`", sig.sorts[sort])))
    };
    let mut seen_entries: Vec<std::collections::BTreeSet<Vec<usize>>> = vec![Default::default(); sig.functions.len()];
    for (line, d) in &decls {
        match d {
            Decl::Rel { name, tuples, .. } => {
                let r = sig.relation_index(name).unwrap();
                let profile = &sig.relations[r].profile;
                for t in tuples {
                    let idx = t.iter().zip(profile).map(|(n, &s)| elem(*line, s, n)).collect::<Result<Vec<_>>>()?;
                    b.add_tuple(r, idx)?;
                }
            }
            Decl::Fun { name, entries, .. } => {
                let f = sig.function_index(name).unwrap();
                let sym = &sig.functions[f];
                for (xs, y) in entries {
                    let args = xs.iter().zip(&sym.args).map(|(n, &s)| elem(*line, s, n)).collect::<Result<Vec<_>>>()?;
                    let v = elem(*line, sym.result, y)?;
                    if !seen_entries[f].insert(args.clone()) {
                        return Err(mismatch(*line, format!("`{name}` defined twice at ({})", xs.join(" "))));
                    }
                    b.set_value(f, &args, v)?;
                }
            }
            Decl::Const { name, value, .. } => {
                let c = sig.constant_index(name).unwrap();
                let v = elem(*line, sig.constants[c].sort, value)?;
                b.set_constant(c, v)?;
            }
            Decl::Sort { .. } => {}
        }
    }
    b.build()
}
