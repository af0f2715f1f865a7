use std::fmt;

use super::{GraphProduct, GroupError, Result, Word};

/// A finite simple graph on vertices `0..n` (written `1..n` in text).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<bool>>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![vec![false; n]; n];
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(GroupError::Graph(format!("edge {}-{} outside {n} vertices", i + 1, j + 1)));
            }
            if i == j {
                return Err(GroupError::Graph(format!("self-loop at vertex {}", i + 1)));
            }
            adj[i][j] = true;
            adj[j][i] = true;
        }
        Ok(Graph { adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![vec![false; n]; n] }
    }

    pub fn complete(n: usize) -> Self {
        Graph { adj: (0..n).map(|i| (0..n).map(|j| i != j).collect()).collect() }
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &edges).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(GroupError::Graph("a cycle needs at least 3 vertices".into()));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges)
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| self.adj[i][j]).collect()
    }

    /// Reads `vertices n` and `edge i j` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| GroupError::Graph(format!("line {}: {msg}", k + 1));
            let parts: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| err(&format!("bad number `{s}`")));
            match parts.as_slice() {
                ["vertices", m] => {
                    if n.is_some() {
                        return Err(err("vertex count given twice"));
                    }
                    n = Some(num(m)?);
                }
                ["edge", i, j] => {
                    let (i, j) = (num(i)?, num(j)?);
                    if i == 0 || j == 0 {
                        return Err(err("vertices are numbered from 1"));
                    }
                    edges.push((i - 1, j - 1));
                }
                _ => return Err(err("expected `vertices n` or `edge i j`")),
            }
        }
        let n = n.ok_or_else(|| GroupError::Graph("missing `vertices` line".into()))?;
        Graph::new(n, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("vertices {}\n", self.len());
        for (i, j) in self.edges() {
            s.push_str(&format!("edge {} {}\n", i + 1, j + 1));
        }
        s
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "edges({}:", self.len())?;
        for (i, j) in self.edges() {
            write!(f, " {}-{}", i + 1, j + 1)?;
        }
        write!(f, ")")
    }
}

/// Reduces a syllable sequence and puts it in the lexicographically least
/// shuffle order.
pub(super) fn normalize(gp: &GraphProduct, mut s: Vec<(u32, Word)>) -> Vec<(u32, Word)> {
    let g = &gp.graph;
    s.retain(|(v, w)| !gp.vertices[*v as usize].is_identity(w));
    // Merge two syllables at the same vertex whenever everything between
    // them commutes with that vertex.
    'merge: loop {
        for j in 1..s.len() {
            let v = s[j].0 as usize;
            for i in (0..j).rev() {
                let u = s[i].0 as usize;
                if u == v {
                    let vg = &gp.vertices[v];
                    let w = vg.mul(&s[i].1, &s[j].1);
                    s.remove(j);
                    if vg.is_identity(&w) {
                        s.remove(i);
                    } else {
                        s[i].1 = w;
                    }
                    continue 'merge;
                }
                if !g.adjacent(u, v) {
                    break;
                }
            }
        }
        break;
    }
    let mut out = Vec::with_capacity(s.len());
    while !s.is_empty() {
        let mut best = 0;
        for k in 1..s.len() {
            let v = s[k].0 as usize;
            if s[k].0 < s[best].0 && s[..k].iter().all(|(u, _)| g.adjacent(*u as usize, v)) {
                best = k;
            }
        }
        out.push(s.remove(best));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_text_round_trip() {
        let g = Graph::parse("# path\nvertices 3\nedge 1 2\nedge 2 3\n").unwrap();
        assert_eq!(g, Graph::path(3));
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
        assert_eq!(g.to_string(), "edges(3: 1-2 2-3)");
    }

    #[test]
    fn self_loops_are_rejected() {
        assert!(Graph::parse("vertices 2\nedge 1 1\n").is_err());
        assert!(Graph::parse("vertices 2\nedge 1 3\n").is_err());
        assert!(Graph::parse("edge 1 2\n").is_err());
    }
}
