//! Undirected, unweighted simple graphs, random generation and the
//! tab-separated edge-list format.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Canonical `(u, v)` with `u < v`, sorted, no duplicates.
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a simple graph. Pairs are canonicalized and deduplicated;
    /// self-loops and out-of-range ids are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop on node {u}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self {
            n,
            edges: set.into_iter().collect(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Sorted neighbour lists.
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Writes the edge list: a `# nodes: n` header, then `u<TAB>v` lines.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        let mut buf = String::new();
        writeln!(buf, "# nodes: {}", self.n).unwrap();
        for &(u, v) in &self.edges {
            writeln!(buf, "{u}\t{v}").unwrap();
        }
        w.write_all(buf.as_bytes())?;
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_edge_list(std::io::BufWriter::new(f))
    }

    /// Reads an edge list. The node count comes from a `# nodes: n` comment
    /// when present, otherwise from the largest id plus one.
    pub fn read_edge_list<R: Read>(r: R) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut pairs = Vec::new();
        for (lineno, line) in BufReader::new(r).lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some(rest) = comment.trim().strip_prefix("nodes:") {
                    let n = rest.trim().parse().map_err(|_| {
                        Error::Format(format!("line {}: bad node count '{}'", lineno + 1, rest.trim()))
                    })?;
                    declared = Some(n);
                }
                continue;
            }
            let mut fields = trimmed.split('\t');
            let parse = |s: Option<&str>| -> Result<usize> {
                s.and_then(|t| t.trim().parse().ok())
                    .ok_or_else(|| Error::Format(format!("line {}: expected 'u<TAB>v', got '{}'", lineno + 1, trimmed)))
            };
            let u = parse(fields.next())?;
            let v = parse(fields.next())?;
            if fields.next().is_some() {
                return Err(Error::Format(format!("line {}: too many fields", lineno + 1)));
            }
            pairs.push((u, v));
        }
        let inferred = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let n = declared.unwrap_or(inferred);
        if n < inferred {
            return Err(Error::Format(format!(
                "declared node count {n} is smaller than the largest id + 1 ({inferred})"
            )));
        }
        Graph::new(n, pairs).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_edge_list(std::fs::File::open(path)?)
    }
}

/// G(n, p): every unordered pair is an edge independently with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidProbability(p));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("graph needs at least one node".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph { n, edges })
}
