//! k-uniform hypergraphs, degrees, matchings and the plain-text instance format.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::Serialize;

use crate::vertex_set::{VertexSet, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HypergraphError {
    #[error("uniformity k = {0} is not supported (need k >= 2)")]
    BadUniformity(usize),
    #[error("{n} vertices exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices { n: usize },
    #[error("edge {index} has {found} vertices, expected {expected}")]
    WrongArity { index: usize, expected: usize, found: usize },
    #[error("edge {index} uses vertex {vertex}, outside 0..{n}")]
    VertexOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("edge {index} repeats vertex {vertex}")]
    RepeatedVertex { index: usize, vertex: usize },
    #[error("vertex set of size {size} exceeds the uniformity {k}")]
    SetTooLarge { size: usize, k: usize },
    #[error("minimum codegree needs n >= k-1 (n = {n}, k = {k})")]
    TooFewVertices { n: usize, k: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("construction parameters invalid: {0}")]
    BadParameters(String),
    #[error("random generator could not reach codegree {target} within {attempts} attempts")]
    GeneratorBudget { target: usize, attempts: usize },
}

pub type Result<T, E = HypergraphError> = std::result::Result<T, E>;

/// An immutable k-uniform hypergraph on the vertices `0..n`.
///
/// Edges are kept sorted lexicographically (by their sorted vertex lists) and
/// deduplicated. The per-`(k-1)`-set link table used by codegree queries is
/// built on first use.
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<VertexSet>,
    edge_lookup: HashSet<VertexSet>,
    incidence: Vec<Vec<usize>>,
    links: OnceLock<HashMap<VertexSet, VertexSet>>,
}

impl Clone for Hypergraph {
    fn clone(&self) -> Self {
        Hypergraph::from_canonical(self.n, self.k, self.edges.clone())
    }
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl std::fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Hypergraph")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("edges", &self.edges)
            .finish()
    }
}

fn lex_key(e: VertexSet) -> Vec<usize> {
    e.to_vec()
}

impl Hypergraph {
    /// Builds a hypergraph from explicit vertex lists.
    pub fn build<E, I>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        if k < 2 {
            return Err(HypergraphError::BadUniformity(k));
        }
        if n > MAX_VERTICES {
            return Err(HypergraphError::TooManyVertices { n });
        }
        let mut sets = Vec::new();
        for (index, edge) in edges.into_iter().enumerate() {
            let edge = edge.as_ref();
            if edge.len() != k {
                return Err(HypergraphError::WrongArity {
                    index,
                    expected: k,
                    found: edge.len(),
                });
            }
            let mut set = VertexSet::EMPTY;
            for &vertex in edge {
                if vertex >= n {
                    return Err(HypergraphError::VertexOutOfRange { index, vertex, n });
                }
                if set.contains(vertex) {
                    return Err(HypergraphError::RepeatedVertex { index, vertex });
                }
                set.insert(vertex);
            }
            sets.push(set);
        }
        Self::from_edge_sets(n, k, sets)
    }

    /// Builds a hypergraph from edges given as vertex sets.
    pub fn from_edge_sets<I: IntoIterator<Item = VertexSet>>(
        n: usize,
        k: usize,
        edges: I,
    ) -> Result<Self> {
        if k < 2 {
            return Err(HypergraphError::BadUniformity(k));
        }
        if n > MAX_VERTICES {
            return Err(HypergraphError::TooManyVertices { n });
        }
        let universe = VertexSet::full(n);
        let mut list = Vec::new();
        for (index, e) in edges.into_iter().enumerate() {
            if e.len() != k {
                return Err(HypergraphError::WrongArity {
                    index,
                    expected: k,
                    found: e.len(),
                });
            }
            if !e.is_subset(universe) {
                let vertex = e.difference(universe).first().unwrap_or(n);
                return Err(HypergraphError::VertexOutOfRange { index, vertex, n });
            }
            list.push(e);
        }
        list.sort_by_cached_key(|&e| lex_key(e));
        list.dedup();
        Ok(Self::from_canonical(n, k, list))
    }

    fn from_canonical(n: usize, k: usize, edges: Vec<VertexSet>) -> Self {
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            for v in e.iter() {
                incidence[v].push(i);
            }
        }
        Hypergraph {
            edge_lookup: edges.iter().copied().collect(),
            n,
            k,
            edges,
            incidence,
            links: OnceLock::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Edges in canonical (lexicographic) order.
    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, e: VertexSet) -> bool {
        self.edge_lookup.contains(&e)
    }

    /// Indices (into [`Hypergraph::edges`]) of the edges containing `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    /// The link table: each `(k-1)`-set contained in an edge mapped to the
    /// vertices completing it to an edge.
    fn links(&self) -> &HashMap<VertexSet, VertexSet> {
        self.links.get_or_init(|| {
            let mut map: HashMap<VertexSet, VertexSet> = HashMap::new();
            for &e in &self.edges {
                for v in e.iter() {
                    let entry = map.entry(e.without(v)).or_default();
                    entry.insert(v);
                }
            }
            map
        })
    }

    /// Vertices `v` with `s + v` an edge, for a `(k-1)`-set `s`.
    pub fn link(&self, s: VertexSet) -> VertexSet {
        debug_assert_eq!(s.len() + 1, self.k);
        self.links().get(&s).copied().unwrap_or_default()
    }

    /// Number of edges containing `s`.
    pub fn degree_of_set(&self, s: VertexSet) -> Result<usize> {
        if s.len() > self.k {
            return Err(HypergraphError::SetTooLarge {
                size: s.len(),
                k: self.k,
            });
        }
        if s.len() + 1 == self.k {
            return Ok(self.link(s).len());
        }
        Ok(match s.first() {
            Some(v) => self.incidence[v]
                .iter()
                .filter(|&&i| s.is_subset(self.edges[i]))
                .count(),
            None => self.edges.len(),
        })
    }

    /// Minimum number of edges containing a `(k-1)`-set, over all such sets.
    pub fn min_codegree(&self) -> Result<usize> {
        if self.n + 1 < self.k {
            return Err(HypergraphError::TooFewVertices {
                n: self.n,
                k: self.k,
            });
        }
        let links = self.links();
        let total = crate::vertex_set::binomial(self.n as u64, self.k as u64 - 1);
        if (links.len() as u128) < total {
            return Ok(0);
        }
        Ok(links.values().map(|l| l.len()).min().unwrap_or(0))
    }

    /// The sub-hypergraph induced on `w`, with vertices renumbered by rank.
    pub fn induced(&self, w: VertexSet) -> Induced {
        let w = w.intersection(self.vertices());
        let original: Vec<usize> = w.to_vec();
        let mut rank = [usize::MAX; MAX_VERTICES];
        for (i, &v) in original.iter().enumerate() {
            rank[v] = i;
        }
        let edges: Vec<VertexSet> = self
            .edges
            .iter()
            .filter(|e| e.is_subset(w))
            .map(|e| e.iter().map(|v| rank[v]).collect())
            .collect();
        // relabelling by rank preserves the lexicographic order
        let graph = Hypergraph::from_canonical(original.len(), self.k, edges);
        Induced { graph, original }
    }

    /// Edges lying entirely inside `w`, in canonical order.
    pub fn edges_within(&self, w: VertexSet) -> impl Iterator<Item = VertexSet> + '_ {
        self.edges.iter().copied().filter(move |e| e.is_subset(w))
    }

    /// Canonical text form: header `n k`, then one edge per line.
    pub fn serialize(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for e in &self.edges {
            let mut first = true;
            for v in e.iter() {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text format. `#` starts a comment; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges: Vec<Vec<usize>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<usize> = content
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| HypergraphError::Parse {
                        line,
                        message: format!("'{tok}' is not a vertex index"),
                    })
                })
                .collect::<Result<_>>()?;
            match header {
                None => {
                    if fields.len() != 2 {
                        return Err(HypergraphError::Parse {
                            line,
                            message: "header must be 'n k'".into(),
                        });
                    }
                    header = Some((fields[0], fields[1]));
                }
                Some((n, k)) => {
                    if fields.len() != k {
                        return Err(HypergraphError::Parse {
                            line,
                            message: format!("edge has {} vertices, expected {k}", fields.len()),
                        });
                    }
                    if let Some(&bad) = fields.iter().find(|&&v| v >= n) {
                        return Err(HypergraphError::Parse {
                            line,
                            message: format!("vertex {bad} out of range 0..{n}"),
                        });
                    }
                    edges.push(fields);
                }
            }
        }
        let (n, k) = header.ok_or(HypergraphError::Parse {
            line: 1,
            message: "missing 'n k' header".into(),
        })?;
        Hypergraph::build(n, k, edges)
    }

    /// Returns a new hypergraph with `extra` added to the edge set.
    pub fn with_edges<I: IntoIterator<Item = VertexSet>>(&self, extra: I) -> Result<Self> {
        Hypergraph::from_edge_sets(self.n, self.k, self.edges.iter().copied().chain(extra))
    }
}

/// A hypergraph induced on a vertex subset, with the map back to the host.
#[derive(Debug, Clone)]
pub struct Induced {
    pub graph: Hypergraph,
    /// `original[i]` is the host vertex renumbered to `i`.
    pub original: Vec<usize>,
}

impl Induced {
    pub fn lift(&self, s: VertexSet) -> VertexSet {
        s.iter().map(|v| self.original[v]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatchingError {
    #[error("edge {0:?} is not an edge of the host hypergraph")]
    NotAnEdge(VertexSet),
    #[error("edges {0:?} and {1:?} share a vertex")]
    Overlap(VertexSet, VertexSet),
}

/// A set of pairwise-disjoint edges.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Matching {
    pub edges: Vec<VertexSet>,
}

impl Matching {
    pub fn new(edges: Vec<VertexSet>) -> Self {
        Matching { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Union of the matched edges.
    pub fn covered(&self) -> VertexSet {
        self.edges
            .iter()
            .fold(VertexSet::EMPTY, |acc, &e| acc.union(e))
    }

    /// Checks that every edge belongs to `host` and no two edges meet.
    pub fn validate(&self, host: &Hypergraph) -> Result<(), MatchingError> {
        let mut seen = VertexSet::EMPTY;
        for (i, &e) in self.edges.iter().enumerate() {
            if !host.has_edge(e) {
                return Err(MatchingError::NotAnEdge(e));
            }
            if e.intersects(seen) {
                let other = self.edges[..i]
                    .iter()
                    .copied()
                    .find(|f| f.intersects(e))
                    .unwrap_or_default();
                return Err(MatchingError::Overlap(other, e));
            }
            seen = seen.union(e);
        }
        Ok(())
    }

    pub fn is_perfect_in(&self, host: &Hypergraph) -> bool {
        self.validate(host).is_ok() && self.covered() == host.vertices()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn build_canonicalizes() {
        let h = Hypergraph::build(4, 3, [[0, 1, 2], [2, 1, 0]]).unwrap();
        assert_eq!(h.edge_count(), 1);
        let h = Hypergraph::build(3, 3, [[0, 1, 2]]).unwrap();
        assert_eq!(h.edges(), &[set(&[0, 1, 2])]);
    }

    #[test]
    fn build_rejects_bad_edges() {
        assert_eq!(
            Hypergraph::build(4, 3, [vec![0, 1]]).unwrap_err(),
            HypergraphError::WrongArity {
                index: 0,
                expected: 3,
                found: 2
            }
        );
        assert!(matches!(
            Hypergraph::build(4, 3, [[0, 1, 4]]),
            Err(HypergraphError::VertexOutOfRange { vertex: 4, .. })
        ));
        assert!(matches!(
            Hypergraph::build(4, 3, [[0, 1, 1]]),
            Err(HypergraphError::RepeatedVertex { vertex: 1, .. })
        ));
        assert_eq!(
            Hypergraph::build(4, 1, Vec::<Vec<usize>>::new()).unwrap_err(),
            HypergraphError::BadUniformity(1)
        );
    }

    #[test]
    fn vacuous_hypergraph_with_k_above_n() {
        let h = Hypergraph::build(2, 3, Vec::<Vec<usize>>::new()).unwrap();
        assert_eq!(h.edge_count(), 0);
        assert_eq!(h.n(), 2);
    }

    #[test]
    fn degrees_of_small_sets() {
        let h = Hypergraph::build(4, 3, [[0, 1, 2]]).unwrap();
        assert_eq!(h.degree_of_set(set(&[0, 3])).unwrap(), 0);
        assert_eq!(h.degree_of_set(set(&[0])).unwrap(), 1);
        assert_eq!(h.degree_of_set(VertexSet::EMPTY).unwrap(), 1);
        assert!(matches!(
            h.degree_of_set(set(&[0, 1, 2, 3])),
            Err(HypergraphError::SetTooLarge { size: 4, k: 3 })
        ));
        assert_eq!(h.min_codegree().unwrap(), 0);
    }

    #[test]
    fn parse_and_serialize() {
        let h = Hypergraph::parse("3 3\n0 1 2\n").unwrap();
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.serialize(), "3 3\n0 1 2\n");

        let h = Hypergraph::parse("# comment\n4 3\n\n2 3 1 # trailing\n0 1 2\n").unwrap();
        assert_eq!(h.serialize(), "4 3\n0 1 2\n1 2 3\n");

        assert!(matches!(
            Hypergraph::parse("3 3\n0 1\n"),
            Err(HypergraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Hypergraph::parse("3\n"),
            Err(HypergraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Hypergraph::parse("3 3\n0 1 3\n"),
            Err(HypergraphError::Parse { line: 2, .. })
        ));
        assert!(Hypergraph::parse("").is_err());
        assert!(Hypergraph::parse("3 3\n0 x 1\n").is_err());
    }

    #[test]
    fn induced_relabels_and_keeps_inner_edges() {
        let h = Hypergraph::build(5, 3, [[0, 1, 2], [1, 3, 4], [2, 3, 4]]).unwrap();
        let ind = h.induced(set(&[1, 2, 3, 4]));
        assert_eq!(ind.graph.n(), 4);
        assert_eq!(ind.graph.edges(), &[set(&[0, 2, 3]), set(&[1, 2, 3])]);
        assert_eq!(ind.lift(set(&[0, 2, 3])), set(&[1, 3, 4]));
        assert_eq!(h.induced(h.vertices()).graph, h);
    }

    #[test]
    fn matching_validation() {
        let h = Hypergraph::build(6, 3, [[0, 1, 2], [3, 4, 5], [2, 3, 4]]).unwrap();
        let m = Matching::new(vec![set(&[0, 1, 2]), set(&[3, 4, 5])]);
        assert!(m.is_perfect_in(&h));
        let bad = Matching::new(vec![set(&[0, 1, 2]), set(&[2, 3, 4])]);
        assert!(matches!(bad.validate(&h), Err(MatchingError::Overlap(..))));
        let missing = Matching::new(vec![set(&[0, 1, 5])]);
        assert!(matches!(missing.validate(&h), Err(MatchingError::NotAnEdge(_))));
    }
}
