use std::path::Path;

use super::{Graph, Group, GroupError, Result, TableGroup, Word};

/// Name of free generator `l`: `a, b, c, d, f, ...` (skipping `e`), then
/// `x26, x27, ...`.
fn letter(l: u32) -> String {
    const LETTERS: &[u8] = b"abcdfghijklmnopqrsuvwyz";
    match LETTERS.get(l as usize) {
        Some(&c) => (c as char).to_string(),
        None => format!("x{}", l + 1),
    }
}

fn letter_index(name: &str) -> Option<u32> {
    (0..).take(23).find(|&l| letter(l) == name).or_else(|| {
        let k: u32 = name.strip_prefix('x')?.parse().ok()?;
        (k > 23).then_some(k - 1)
    })
}

fn atom(name: &str, e: i64) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

fn qualify(k: usize, inner: String, out: &mut Vec<String>) {
    for a in inner.split('*') {
        out.push(format!("{}:{a}", k + 1));
    }
}

pub(super) fn display_word(g: &Group, w: &Word) -> String {
    let mut atoms: Vec<String> = Vec::new();
    match (g, w) {
        (Group::FiniteTable(t), Word::Table(i)) => return t.name(*i).to_string(),
        (Group::Free { .. }, Word::Free(v)) => atoms.extend(v.iter().map(|&(l, e)| atom(&letter(l), e))),
        (Group::FgAbelian { .. }, Word::Abelian(v)) => {
            if v.len() == 1 {
                return v[0].to_string();
            }
            atoms.extend(v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| atom(&format!("e{}", i + 1), c)));
        }
        (Group::DirectProduct(fs), Word::Tuple(v)) => {
            for (k, (f, x)) in fs.iter().zip(v).enumerate() {
                if !f.is_identity(x) {
                    qualify(k, display_word(f, x), &mut atoms);
                }
            }
        }
        (Group::FreeProduct(f0, f1), Word::Alt(v)) => {
            for (k, x) in v {
                qualify(*k as usize, display_word(if *k == 0 { f0 } else { f1 }, x), &mut atoms);
            }
        }
        (Group::GraphProduct(gp), Word::Graph(v)) => {
            for (k, x) in v {
                qualify(*k as usize, display_word(&gp.vertices[*k as usize], x), &mut atoms);
            }
        }
        _ => return format!("<invalid word {w:?}>"),
    }
    if atoms.is_empty() {
        "e".to_string()
    } else {
        atoms.join("*")
    }
}

/// Parses `atom*atom*...` where an atom is `k:...:name` optionally followed
/// by `^n`; `k` selects a factor (1-based) of a product.
pub(super) fn parse_word(g: &Group, s: &str) -> Result<Word> {
    let s = s.trim();
    if s.is_empty() {
        return Err(GroupError::MalformedWord("empty word".into()));
    }
    let mut acc = g.identity();
    for a in s.split('*') {
        let a = a.trim();
        let (base, exp) = match a.rsplit_once('^') {
            Some((b, e)) => (
                b.trim(),
                e.trim().parse::<i64>().map_err(|_| GroupError::MalformedWord(format!("bad exponent in `{a}`")))?,
            ),
            None => (a, 1),
        };
        let parts: Vec<&str> = base.split(':').map(str::trim).collect();
        let (name, quals) = parts.split_last().expect("split yields one part");
        let quals = quals
            .iter()
            .map(|q| match q.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(GroupError::MalformedWord(format!("bad factor index `{q}` in `{a}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let x = parse_atom(g, &quals, name)?;
        acc = g.mul(&acc, &g.pow(&x, exp));
    }
    Ok(acc)
}

fn factors(g: &Group) -> Vec<&Group> {
    match g {
        Group::DirectProduct(fs) => fs.iter().collect(),
        Group::FreeProduct(a, b) => vec![a, b],
        Group::GraphProduct(gp) => gp.vertices.iter().collect(),
        _ => vec![],
    }
}

fn parse_atom(g: &Group, quals: &[usize], name: &str) -> Result<Word> {
    let unknown = || GroupError::MalformedWord(format!("`{name}` is not an element of {g}"));
    if let Some((&k, rest)) = quals.split_first() {
        let fs = factors(g);
        let f = fs
            .get(k)
            .ok_or_else(|| GroupError::MalformedWord(format!("{g} has no factor {}", k + 1)))?;
        let w = parse_atom(f, rest, name)?;
        return Ok(g.embed(k, w));
    }
    match g {
        Group::FiniteTable(t) => t.index_of(name).map(Word::Table).ok_or_else(unknown),
        _ if name == "e" => Ok(g.identity()),
        Group::Free { rank } => match letter_index(name) {
            Some(l) if l < *rank => Ok(Word::Free(vec![(l, 1)])),
            _ => Err(unknown()),
        },
        Group::FgAbelian { free_rank, torsion } => {
            let m = *free_rank as usize + torsion.len();
            let mut v = vec![0i64; m];
            if let Ok(c) = name.parse::<i64>() {
                if m != 1 {
                    return Err(GroupError::MalformedWord(format!("integer `{name}` needs a cyclic group, not {g}")));
                }
                v[0] = c;
            } else {
                let i: usize = name.strip_prefix('e').and_then(|d| d.parse().ok()).ok_or_else(unknown)?;
                if i == 0 || i > m {
                    return Err(unknown());
                }
                v[i - 1] = 1;
            }
            Ok(Word::Abelian(super::abelian::reduce(*free_rank, torsion, v)))
        }
        _ => {
            let hits: Vec<(usize, Word)> = factors(g)
                .iter()
                .enumerate()
                .filter_map(|(k, f)| parse_atom(f, &[], name).ok().map(|w| (k, w)))
                .collect();
            match hits.len() {
                0 => Err(unknown()),
                1 => {
                    let (k, w) = hits.into_iter().next().unwrap();
                    Ok(g.embed(k, w))
                }
                _ => Err(GroupError::MalformedWord(format!(
                    "`{name}` is ambiguous in {g}; qualify it with a factor index like `1:{name}`"
                ))),
            }
        }
    }
}

/// Parses a comma-separated tuple of words.
pub fn parse_tuple(g: &Group, s: &str) -> Result<Vec<Word>> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(|w| parse_word(g, w)).collect()
}

/// Parses a group expression; `table(...)` and graph files are resolved
/// against the working directory.
pub fn parse_group(expr: &str) -> Result<Group> {
    parse_expr(expr, None)
}

/// Like [`parse_group`], resolving file names against `dir`.
pub fn parse_group_in(expr: &str, dir: &Path) -> Result<Group> {
    parse_expr(expr, Some(dir))
}

fn split_args(s: &str) -> Result<Vec<&str>> {
    let mut depth = 0i32;
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(GroupError::Parse(format!("unbalanced parentheses in `{s}`")));
        }
    }
    if depth != 0 {
        return Err(GroupError::Parse(format!("unbalanced parentheses in `{s}`")));
    }
    out.push(s[start..].trim());
    Ok(out)
}

fn call(s: &str) -> Option<(&str, &str)> {
    let open = s.find('(')?;
    let inner = s.strip_suffix(')')?;
    Some((s[..open].trim(), &inner[open + 1..]))
}

fn read(path: &str, dir: Option<&Path>) -> Result<String> {
    let p = match dir {
        Some(d) => d.join(path),
        None => Path::new(path).to_path_buf(),
    };
    std::fs::read_to_string(&p).map_err(|e| GroupError::Io(format!("{}: {e}", p.display())))
}

fn int<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| GroupError::Parse(format!("{what}: expected a number, got `{s}`")))
}

fn parse_graph(s: &str, dir: Option<&Path>) -> Result<Graph> {
    if let Some((head, inner)) = call(s) {
        match head {
            "path" => return Ok(Graph::path(int(inner, "path")?)),
            "cycle" => return Graph::cycle(int(inner, "cycle")?),
            "complete" => return Ok(Graph::complete(int(inner, "complete")?)),
            "empty" => return Ok(Graph::empty(int(inner, "empty")?)),
            "edges" => {
                let (n, rest) = inner.split_once(':').unwrap_or((inner, ""));
                let n: usize = int(n, "edges")?;
                let mut edges = Vec::new();
                for e in rest.split_whitespace() {
                    let (i, j) = e.split_once('-').ok_or_else(|| GroupError::Parse(format!("bad edge `{e}`")))?;
                    let (i, j): (usize, usize) = (int(i, "edge")?, int(j, "edge")?);
                    if i == 0 || j == 0 {
                        return Err(GroupError::Graph("vertices are numbered from 1".into()));
                    }
                    edges.push((i - 1, j - 1));
                }
                return Graph::new(n, &edges);
            }
            _ => {}
        }
    }
    Graph::parse(&read(s, dir)?)
}

fn parse_expr(s: &str, dir: Option<&Path>) -> Result<Group> {
    let s = s.trim();
    if s == "Z" {
        return Ok(Group::z());
    }
    if let Some(r) = s.strip_prefix("Z^") {
        return Ok(Group::zn(int(r, "Z^")?));
    }
    let (head, inner) = call(s).ok_or_else(|| GroupError::Parse(format!("unrecognized group expression `{s}`")))?;
    let args = split_args(inner)?;
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(GroupError::Parse(format!("`{head}` takes {n} argument(s), got {}", args.len())))
        }
    };
    match head {
        "free" => {
            arity(1)?;
            Ok(Group::free(int(args[0], "free")?))
        }
        "cyclic" => {
            arity(1)?;
            Group::cyclic(int(args[0], "cyclic")?)
        }
        "abelian" => {
            let r = int(args[0], "abelian")?;
            let torsion = args[1..].iter().map(|a| int(a, "abelian")).collect::<Result<Vec<u64>>>()?;
            Group::abelian(r, torsion)
        }
        "table" => {
            arity(1)?;
            Ok(Group::table(TableGroup::parse(&read(args[0], dir)?)?.with_label(s)))
        }
        "prod" => Ok(Group::direct(args.iter().map(|a| parse_expr(a, dir)).collect::<Result<_>>()?)),
        "freeprod" => {
            arity(2)?;
            Ok(Group::free_product(parse_expr(args[0], dir)?, parse_expr(args[1], dir)?))
        }
        "graphprod" => {
            if args.len() < 2 {
                return Err(GroupError::Parse("`graphprod` needs a graph and vertex groups".into()));
            }
            let graph = parse_graph(args[0], dir)?;
            let vertices = args[1..].iter().map(|a| parse_expr(a, dir)).collect::<Result<_>>()?;
            Group::graph_product(graph, vertices)
        }
        _ => Err(GroupError::Parse(format!("unknown group constructor `{head}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters() {
        assert_eq!(letter(0), "a");
        assert_eq!(letter(4), "f");
        assert_eq!(letter_index("f"), Some(4));
        assert_eq!(letter_index("e"), None);
        assert_eq!(letter(23), "x24");
        assert_eq!(letter_index("x24"), Some(23));
    }

    #[test]
    fn expressions_round_trip() {
        for e in ["free(2)", "Z", "Z^3", "cyclic(4)", "abelian(1,2,4)", "prod(free(2),Z)", "freeprod(free(1),cyclic(2))"] {
            assert_eq!(parse_group(e).unwrap().to_string(), e);
        }
        let g = parse_group("graphprod(path(3), Z, cyclic(2), free(2))").unwrap();
        assert_eq!(g.to_string(), "graphprod(edges(3: 1-2 2-3),Z,cyclic(2),free(2))");
        assert_eq!(parse_group(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn expression_errors() {
        assert!(parse_group("free(2").is_err());
        assert!(parse_group("freeprod(Z)").is_err());
        assert!(parse_group("graphprod(path(2), Z)").is_err());
        assert!(parse_group("lie(3)").is_err());
        assert!(matches!(parse_group("table(/nonexistent.struct)"), Err(GroupError::Io(_))));
    }

    #[test]
    fn word_syntax() {
        let g = parse_group("free(2)").unwrap();
        let w = g.parse_word("a*b^-1*b*b").unwrap();
        assert_eq!(g.display_word(&w), "a*b");
        assert_eq!(g.display_word(&g.parse_word("a^2*a^-2").unwrap()), "e");
        assert!(g.parse_word("c").is_err());
        assert!(g.parse_word("a^x").is_err());
        let z = Group::z();
        assert_eq!(z.display_word(&z.parse_word("2*3").unwrap()), "5");
        assert_eq!(z.display_word(&z.parse_word("-1^3").unwrap()), "-3");
        let z3 = Group::zn(3);
        assert_eq!(z3.display_word(&z3.parse_word("e1*e3^2*e1").unwrap()), "e1^2*e3^2");
    }

    #[test]
    fn qualified_atoms() {
        let g = parse_group("prod(free(2),Z)").unwrap();
        let w = g.parse_word("a*2:3*b").unwrap();
        assert_eq!(g.display_word(&w), "1:a*1:b*2:3");
        let fp = parse_group("freeprod(free(1),free(1))").unwrap();
        assert!(fp.parse_word("a").is_err());
        let w = fp.parse_word("1:a*2:a^2*1:a").unwrap();
        assert_eq!(fp.display_word(&w), "1:a*2:a^2*1:a");
        let nested = parse_group("prod(prod(Z,Z),Z)").unwrap();
        assert_eq!(nested.display_word(&nested.parse_word("1:2:4").unwrap()), "1:2:4");
    }

    #[test]
    fn tuples() {
        let g = parse_group("free(2)").unwrap();
        let t = parse_tuple(&g, "a*b^-1, b").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(g.display_word(&t[0]), "a*b^-1");
        assert!(parse_tuple(&g, "").unwrap().is_empty());
    }
}
