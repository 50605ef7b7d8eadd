//! Labeled simple graphs and the combinatorial queries used by the rest of
//! the crate.

mod catalog;
mod iso;
mod lcf;

pub use catalog::{catalog, CATALOG_NAMES};
pub use iso::isomorphic;
pub use lcf::{graph_from_lcf, parse_lcf, LcfSpec};

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("edge endpoint index {index} out of range for {n} vertices")]
    EndpointOutOfRange { index: usize, n: usize },
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("no vertex labeled `{0}`")]
    MissingVertex(String),
    #[error("no edge between `{0}` and `{1}`")]
    MissingEdge(String, String),
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("difference set must contain at least one residue")]
    EmptyResidues,
    #[error("residue {residue} outside [0, {modulus})")]
    ResidueOutOfRange { residue: i64, modulus: i64 },
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(i64),
    #[error("unknown catalog graph `{0}`")]
    UnknownCatalog(String),
    #[error("LCF syntax error at byte {pos}: {msg}")]
    LcfSyntax { pos: usize, msg: String },
    #[error("invalid LCF spec: {0}")]
    LcfInvalid(String),
    #[error("edge list line {line}: {msg}")]
    EdgeListSyntax { line: usize, msg: String },
}

/// Undirected simple graph with string vertex labels.
///
/// Edges are stored as `(min, max)` index pairs in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, dropping duplicate edges. Self-loops, repeated labels
    /// and out-of-range endpoints are rejected.
    pub fn new<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut seen_labels = HashSet::new();
        for l in &labels {
            if !seen_labels.insert(l.as_str()) {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
        }
        let n = labels.len();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (u, v) in edges {
            for index in [u, v] {
                if index >= n {
                    return Err(GraphError::EndpointOutOfRange { index, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(labels[u].clone()));
            }
            let e = (u.min(v), u.max(v));
            if seen.insert(e) {
                out.push(e);
            }
        }
        Ok(Graph { labels, edges: out })
    }

    /// Builds a graph from label pairs; vertices are created in order of first
    /// appearance.
    pub fn from_labeled_edges<'a>(
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, GraphError> {
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut edges = Vec::new();
        for (a, b) in pairs {
            let mut idx = |s: &str| {
                *index.entry(s.to_string()).or_insert_with(|| {
                    labels.push(s.to_string());
                    labels.len() - 1
                })
            };
            let (u, v) = (idx(a), idx(b));
            edges.push((u, v));
        }
        Graph::new(labels, edges)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn require(&self, label: &str) -> Result<usize, GraphError> {
        self.index_of(label)
            .ok_or_else(|| GraphError::MissingVertex(label.to_string()))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let e = (u.min(v), u.max(v));
        self.edges.contains(&e)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Removes a vertex and its incident edges; remaining vertices keep their
    /// relative order.
    pub fn delete_vertex(&self, label: &str) -> Result<Graph, GraphError> {
        let del = self.require(label)?;
        if self.n() == 1 {
            return Err(GraphError::Empty);
        }
        let remap = |i: usize| if i > del { i - 1 } else { i };
        let labels = self
            .labels
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != del)
            .map(|(_, l)| l.clone())
            .collect::<Vec<_>>();
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| u != del && v != del)
            .map(|&(u, v)| (remap(u), remap(v)))
            .collect::<Vec<_>>();
        Ok(Graph { labels, edges })
    }

    pub fn delete_edge(&self, u: &str, v: &str) -> Result<Graph, GraphError> {
        let (a, b) = (self.require(u)?, self.require(v)?);
        let e = (a.min(b), a.max(b));
        if !self.edges.contains(&e) {
            return Err(GraphError::MissingEdge(u.to_string(), v.to_string()));
        }
        let edges = self.edges.iter().copied().filter(|&x| x != e).collect();
        Ok(Graph { labels: self.labels.clone(), edges })
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adjacency().iter().map(Vec::len).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    pub fn is_regular(&self, k: usize) -> bool {
        self.adjacency().iter().all(|a| a.len() == k)
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n()
    }

    /// Connected components as sorted vertex-index lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                i += 1;
                for &w in &adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_bipartite(&self) -> bool {
        let adj = self.adjacency();
        let mut side = vec![None; self.n()];
        for s in 0..self.n() {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let su = side[u].unwrap();
                for &w in &adj[u] {
                    match side[w] {
                        None => {
                            side[w] = Some(!su);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Length of the shortest cycle, `None` for a forest.
    ///
    /// BFS from every vertex; a non-tree edge (u, w) closes a cycle of length
    /// at most dist(u) + dist(w) + 1, and the minimum over all roots is exact.
    pub fn girth(&self) -> Option<usize> {
        let adj = self.adjacency();
        let n = self.n();
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Point–block incidence graph of a cyclic difference set: point `p_i` is
    /// joined to block `B_j` iff `(i - j) mod m` is one of the residues.
    pub fn from_difference_set(residues: &[i64], modulus: i64) -> Result<Graph, GraphError> {
        if modulus < 2 {
            return Err(GraphError::BadModulus(modulus));
        }
        if residues.is_empty() {
            return Err(GraphError::EmptyResidues);
        }
        for &r in residues {
            if !(0..modulus).contains(&r) {
                return Err(GraphError::ResidueOutOfRange { residue: r, modulus });
            }
        }
        let set: HashSet<i64> = residues.iter().copied().collect();
        let m = modulus as usize;
        let mut labels: Vec<String> = (0..m).map(|i| format!("p{i}")).collect();
        labels.extend((0..m).map(|j| format!("B{j}")));
        let mut edges = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if set.contains(&(((i as i64 - j as i64) % modulus + modulus) % modulus)) {
                    edges.push((i, m + j));
                }
            }
        }
        Graph::new(labels, edges)
    }

    /// Parses the edge-list text format: one `u v` pair per line, `#` starts a
    /// comment, blank lines ignored.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(GraphError::EdgeListSyntax {
                    line: i + 1,
                    msg: format!("expected two labels, found {}", toks.len()),
                });
            }
            pairs.push((toks[0], toks[1]));
        }
        if pairs.is_empty() {
            return Err(GraphError::Empty);
        }
        Graph::from_labeled_edges(pairs)
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for &(u, v) in &self.edges {
            s.push_str(&self.labels[u]);
            s.push(' ');
            s.push_str(&self.labels[v]);
            s.push('\n');
        }
        s
    }

    /// SHA-256 over the labels and edge list, hex encoded.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for l in &self.labels {
            h.update(l.as_bytes());
            h.update([0u8]);
        }
        h.update(b"\n");
        h.update(self.to_edge_list().as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Same graph with labels permuted: vertex `i` moves to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut labels = vec![String::new(); self.n()];
        for (i, l) in self.labels.iter().enumerate() {
            labels[perm[i]] = l.clone();
        }
        let edges = self.edges.iter().map(|&(u, v)| {
            let (a, b) = (perm[u], perm[v]);
            (a.min(b), a.max(b))
        });
        Graph { labels, edges: edges.collect() }
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vertices, {} edges", self.n(), self.edge_count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_labeled_edges([("a", "b"), ("b", "c")]).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            Graph::new(["a", "a"], []).unwrap_err(),
            GraphError::DuplicateLabel("a".into())
        );
        assert!(matches!(Graph::new(["a"], [(0, 0)]), Err(GraphError::SelfLoop(_))));
        assert!(matches!(
            Graph::new(["a", "b"], [(0, 2)]),
            Err(GraphError::EndpointOutOfRange { index: 2, n: 2 })
        ));
    }

    #[test]
    fn dedups_edges() {
        let g = Graph::new(["a", "b"], [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn forest_has_no_girth() {
        assert_eq!(path3().girth(), None);
        assert!(path3().is_bipartite());
        assert!(path3().is_connected());
    }

    #[test]
    fn delete_vertex_reindexes() {
        let g = path3().delete_vertex("b").unwrap();
        assert_eq!(g.labels(), &["a".to_string(), "c".to_string()]);
        assert_eq!(g.edge_count(), 0);
        assert!(!g.is_connected());
        assert!(matches!(path3().delete_vertex("z"), Err(GraphError::MissingVertex(_))));
    }

    #[test]
    fn delete_missing_edge_fails() {
        assert!(matches!(
            path3().delete_edge("a", "c"),
            Err(GraphError::MissingEdge(..))
        ));
    }

    #[test]
    fn edge_list_parsing() {
        let g = Graph::parse_edge_list("# triangle\n1 2\n2 3 # side\n\n3 1\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.girth(), Some(3));
        let err = Graph::parse_edge_list("1 2\n3\n").unwrap_err();
        assert!(matches!(err, GraphError::EdgeListSyntax { line: 2, .. }));
        let back = Graph::parse_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn difference_set_single_residue_is_matching() {
        let g = Graph::from_difference_set(&[0], 2).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 2);
        assert!(g.is_regular(1));
        assert!(matches!(
            Graph::from_difference_set(&[], 7),
            Err(GraphError::EmptyResidues)
        ));
        assert!(matches!(
            Graph::from_difference_set(&[7], 7),
            Err(GraphError::ResidueOutOfRange { .. })
        ));
    }
}
