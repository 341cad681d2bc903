//! Undirected simple graphs with one designated root per component.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};

/// Seed for every random generator in the crate.
///
/// All sampling goes through ChaCha8, so a given seed reproduces the same
/// graphs and functions on every platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Independent stream `index` derived from this seed. Used to give each
    /// Monte-Carlo trial its own generator regardless of scheduling.
    pub fn stream(self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(index);
        rng
    }
}

/// Immutable undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    roots: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an edge list. Edges are normalised to `(min, max)`
    /// and sorted; self-loops, duplicates and out-of-range ids are rejected.
    /// Roots default to the lowest-index vertex of each component.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return invalid(format!("edge ({u}, {v}) out of range for n = {n}"));
            }
            if u == v {
                return invalid(format!("self-loop at vertex {u}"));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return invalid(format!("duplicate edge ({}, {})", w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let mut g = Graph {
            n,
            edges: list,
            adj,
            roots: Vec::new(),
        };
        g.roots = components(&g).roots();
        Ok(g)
    }

    /// Graph with no edges.
    pub fn empty(n: usize) -> Self {
        Graph::new(n, []).expect("edgeless graph is always valid")
    }

    /// Same graph with a different choice of roots. Exactly one root per
    /// component is required.
    pub fn with_roots(&self, roots: &[usize]) -> Result<Self> {
        let comps = components(self);
        let mut seen = vec![false; comps.count()];
        for &r in roots {
            if r >= self.n {
                return invalid(format!("root {r} out of range"));
            }
            let c = comps.label(r);
            if seen[c] {
                return invalid(format!("component {c} has more than one root"));
            }
            seen[c] = true;
        }
        if seen.iter().any(|s| !s) {
            return invalid("some component has no root");
        }
        let mut roots = roots.to_vec();
        roots.sort_unstable_by_key(|&r| comps.label(r));
        Ok(Graph {
            roots,
            ..self.clone()
        })
    }

    /// New graph with edge `{u, v}` added. Roots are recomputed canonically.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.push((u, v));
        Graph::new(self.n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted edges with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// One root per component, ordered by component.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    /// Number of connected components `k`.
    pub fn component_count(&self) -> usize {
        self.roots.len()
    }

    /// `n - k`: the degree of the counting polynomial.
    pub fn free_dimension(&self) -> usize {
        self.n - self.roots.len()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// Short content hash of the canonical edge list (roots included).
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_edge_list().as_bytes());
        for r in &self.roots {
            hasher.update(r.to_le_bytes());
        }
        let digest = hasher.finalize();
        digest[..8].iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    /// Plain-text edge list: header `n k` (vertex and component counts) and
    /// one sorted `u v` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.component_count());
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the format written by [`Graph::to_edge_list`].
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let [n, k] = parse_pair(hline, header)?;
        let mut edges = Vec::new();
        let mut prev: Option<(usize, usize)> = None;
        for (line, l) in lines {
            let [u, v] = parse_pair(line, l)?;
            if u >= n || v >= n {
                return Err(Error::Parse {
                    line,
                    message: format!("vertex id out of range 0..{n}"),
                });
            }
            let e = (u.min(v), u.max(v));
            if let Some(p) = prev {
                if e == p {
                    return Err(Error::Parse {
                        line,
                        message: format!("duplicate edge {u} {v}"),
                    });
                }
                if e < p {
                    return Err(Error::Parse {
                        line,
                        message: "edges are not sorted".into(),
                    });
                }
            }
            prev = Some(e);
            edges.push((u, v));
        }
        let g = Graph::new(n, edges)?;
        if g.component_count() != k {
            return Err(Error::Parse {
                line: hline,
                message: format!("header says {k} components, graph has {}", g.component_count()),
            });
        }
        Ok(g)
    }
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2]> {
    let mut it = text.split_whitespace().map(|t| t.parse::<usize>());
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok([a, b]),
        _ => Err(Error::Parse {
            line,
            message: format!("expected two non-negative integers, got {text:?}"),
        }),
    }
}

/// The `rows x cols` grid graph, vertices numbered row-major. Root is the
/// top-left corner (vertex 0).
pub fn make_grid(rows: usize, cols: usize) -> Result<Graph> {
    if rows == 0 || cols == 0 {
        return invalid("grid dimensions must be positive");
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::with_capacity(rows * (cols - 1) + cols * (rows - 1));
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::new(rows * cols, edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Path,
    Cycle,
    Complete,
    /// Vertex 0 joined to every other vertex.
    Star,
}

pub fn make_family(kind: FamilyKind, n: usize) -> Result<Graph> {
    if n == 0 {
        return invalid("graph needs at least one vertex");
    }
    let edges: Vec<(usize, usize)> = match kind {
        FamilyKind::Path => (1..n).map(|v| (v - 1, v)).collect(),
        FamilyKind::Cycle => {
            if n < 3 {
                return invalid("cycle needs at least three vertices");
            }
            (1..n).map(|v| (v - 1, v)).chain([(0, n - 1)]).collect()
        }
        FamilyKind::Complete => (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect(),
        FamilyKind::Star => (1..n).map(|v| (0, v)).collect(),
    };
    Graph::new(n, edges)
}

/// Random recursive tree: vertex `i > 0` attaches to a uniform earlier vertex.
pub fn make_random_tree(n: usize, seed: RngSeed) -> Result<Graph> {
    if n == 0 {
        return invalid("tree needs at least one vertex");
    }
    let mut rng = seed.rng();
    let edges: Vec<_> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    Graph::new(n, edges)
}

/// Erdős–Rényi graph `G(n, d/n)`. Pairs are visited in lexicographic order
/// with exactly one uniform draw each, so the result depends only on
/// `(n, d, seed)`.
pub fn sample_er(n: usize, d: f64, seed: RngSeed) -> Result<Graph> {
    if n == 0 {
        return invalid("graph needs at least one vertex");
    }
    if !(d.is_finite() && d >= 0.0) {
        return invalid(format!("expected degree must be finite and non-negative, got {d}"));
    }
    let p = d / n as f64;
    if p > 1.0 {
        return invalid(format!("edge probability d/n = {p} exceeds 1"));
    }
    let mut rng = seed.rng();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Connected-component partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    labels: Vec<usize>,
    sizes: Vec<usize>,
    lowest: Vec<usize>,
}

impl Components {
    /// Component index of `v`; components are numbered by their lowest vertex.
    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Size of the largest component (0 for the empty graph).
    pub fn giant_size(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    /// Lowest-index vertex of each component.
    pub fn roots(&self) -> Vec<usize> {
        self.lowest.clone()
    }

    pub fn members(&self, c: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&v| self.labels[v] == c).collect()
    }
}

pub fn components(g: &Graph) -> Components {
    let mut labels = vec![usize::MAX; g.n];
    let mut sizes = Vec::new();
    let mut lowest = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..g.n {
        if labels[s] != usize::MAX {
            continue;
        }
        let c = sizes.len();
        labels[s] = c;
        lowest.push(s);
        let mut size = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &w in &g.adj[u] {
                if labels[w] == usize::MAX {
                    labels[w] = c;
                    queue.push_back(w);
                }
            }
        }
        sizes.push(size);
    }
    Components {
        labels,
        sizes,
        lowest,
    }
}
