//! Undirected weighted similarity graphs.
//!
//! Nodes are `0..n`. Edges are stored twice: as a canonical sorted edge list
//! (for cost sums) and as per-node neighbor lists (for cut solvers). A graph
//! is immutable once constructed, so it can be shared freely across threads.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("node {node} out of range for a graph on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({u}, {v}) has non-positive weight {w}")]
    BadWeight { u: usize, v: usize, w: f64 },
    #[error("complement constant {c} is below the maximum edge weight {max}")]
    ComplementConstant { c: f64, max: f64 },
    #[error("node subset is empty")]
    EmptySubset,
}

/// An undirected graph with strictly positive edge weights. An absent edge
/// behaves as weight zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl Graph {
    /// Builds a graph from an edge list. Endpoints may appear in either
    /// order; they are stored canonically with `u < v` and sorted.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, GraphError> {
        let mut canon: Vec<(usize, usize, f64)> = Vec::new();
        let mut seen = HashSet::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if v >= n {
                return Err(GraphError::NodeOutOfRange { node: v, n });
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(GraphError::BadWeight { u, v, w });
            }
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            canon.push((u, v, w));
        }
        canon.sort_by_key(|&(u, v, _)| (u, v));
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in &canon {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        Ok(Graph { n, edges: canon, adj })
    }

    /// Unit-weight convenience constructor.
    pub fn unit(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        Self::new(n, pairs.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order: `u < v`, sorted by `(u, v)`.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adj[u]
    }

    /// Weight of the edge between `u` and `v`, or 0 if absent.
    pub fn edge_weight(&self, u: usize, v: usize) -> f64 {
        self.adj[u]
            .iter()
            .find(|&&(x, _)| x == v)
            .map_or(0.0, |&(_, w)| w)
    }

    pub fn weighted_degree(&self, u: usize) -> f64 {
        self.adj[u].iter().map(|&(_, w)| w).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|&(_, _, w)| w).sum()
    }

    pub fn is_unit_weight(&self) -> bool {
        self.edges.iter().all(|&(_, _, w)| w == 1.0)
    }

    /// Total weight crossing the bipartition given by `in_a` (one flag per node).
    pub fn cut_weight(&self, in_a: &[bool]) -> f64 {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| in_a[u] != in_a[v])
            .map(|&(_, _, w)| w)
            .sum()
    }

    /// Connected components over positive-weight edges, each sorted, ordered
    /// by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &(v, _) in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Serializes to the edge-list text format accepted by [`load_graph`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for &(u, v, w) in &self.edges {
            let _ = writeln!(out, "{} {} {}", u, v, w);
        }
        out
    }
}

/// Parses the edge-list format: first line the node count, then one
/// `u v w` line per edge (`w` optional, default 1). Blank lines are ignored.
pub fn load_graph(text: &str) -> Result<Graph, GraphError> {
    let err = |line: usize, msg: String| GraphError::Parse { line, msg };
    let mut n: Option<usize> = None;
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let Some(n) = n else {
            if fields.len() != 1 {
                return Err(err(line, "expected a single node count".into()));
            }
            n = Some(
                fields[0]
                    .parse()
                    .map_err(|_| err(line, format!("invalid node count '{}'", fields[0])))?,
            );
            continue;
        };
        if fields.len() < 2 || fields.len() > 3 {
            return Err(err(line, "expected 'u v' or 'u v w'".into()));
        }
        let u: usize = fields[0]
            .parse()
            .map_err(|_| err(line, format!("invalid node id '{}'", fields[0])))?;
        let v: usize = fields[1]
            .parse()
            .map_err(|_| err(line, format!("invalid node id '{}'", fields[1])))?;
        let w: f64 = match fields.get(2) {
            Some(s) => s
                .parse()
                .map_err(|_| err(line, format!("invalid weight '{}'", s)))?,
            None => 1.0,
        };
        if u == v {
            return Err(err(line, format!("self-loop at node {}", u)));
        }
        if u >= n || v >= n {
            return Err(err(line, format!("node {} out of range (n = {})", u.max(v), n)));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(err(line, format!("non-positive weight {}", w)));
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(err(line, format!("duplicate edge ({}, {})", key.0, key.1)));
        }
        edges.push((u, v, w));
    }
    let n = n.ok_or_else(|| err(1, "missing node count".into()))?;
    Graph::new(n, edges)
}

/// Complement of `g` under the constant `c`: every unordered pair `{i, j}`
/// satisfies `w(i,j) + w_c(i,j) = c`. Pairs whose complement weight is zero
/// are omitted.
pub fn complement(g: &Graph, c: f64) -> Result<Graph, GraphError> {
    let max = g
        .edges
        .iter()
        .map(|&(_, _, w)| w)
        .fold(0.0_f64, f64::max);
    if c < max {
        return Err(GraphError::ComplementConstant { c, max });
    }
    let weights: HashMap<(usize, usize), f64> = g
        .edges
        .iter()
        .map(|&(u, v, w)| ((u, v), w))
        .collect();
    let mut edges = Vec::new();
    for u in 0..g.n {
        for v in (u + 1)..g.n {
            let w = weights.get(&(u, v)).copied().unwrap_or(0.0);
            let wc = c - w;
            if wc > 0.0 {
                edges.push((u, v, wc));
            }
        }
    }
    Graph::new(g.n, edges)
}

/// Subgraph induced by `s`, with nodes relabeled to `0..|s|` in ascending id
/// order. Returns the new graph and the old→new id map as a sorted pair list.
pub fn induced_subgraph(g: &Graph, s: &[usize]) -> Result<(Graph, Vec<(usize, usize)>), GraphError> {
    let mut nodes: Vec<usize> = s.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    if nodes.is_empty() {
        return Err(GraphError::EmptySubset);
    }
    if let Some(&node) = nodes.iter().find(|&&x| x >= g.n) {
        return Err(GraphError::NodeOutOfRange { node, n: g.n });
    }
    let mut new_id = vec![usize::MAX; g.n];
    for (i, &old) in nodes.iter().enumerate() {
        new_id[old] = i;
    }
    let edges = g
        .edges
        .iter()
        .filter(|&&(u, v, _)| new_id[u] != usize::MAX && new_id[v] != usize::MAX)
        .map(|&(u, v, w)| (new_id[u], new_id[v], w))
        .collect::<Vec<_>>();
    let map = nodes.iter().enumerate().map(|(i, &old)| (old, i)).collect();
    Ok((Graph::new(nodes.len(), edges)?, map))
}
