//! Exact exponential-time matching search.
//!
//! Branching always takes the lowest-index uncovered vertex and tries the
//! edges through it, so the search is deterministic and its fan-out is the
//! vertex degree. Failed states (sets of still-uncovered vertices) are
//! memoized in a bounded table.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use serde::Serialize;

use crate::hypergraph::{Hypergraph, Matching};
use crate::vertex_set::VertexSet;

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const DEFAULT_MEMO_CAPACITY: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleConfig {
    /// Search nodes allowed per top-level query.
    pub node_budget: u64,
    /// Maximum number of memoized states kept.
    pub memo_capacity: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            memo_capacity: DEFAULT_MEMO_CAPACITY,
        }
    }
}

/// The search ran out of nodes before reaching an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("search budget of {budget} nodes exhausted")]
pub struct BudgetExhausted {
    pub budget: u64,
}

/// Three-way search result; `Unknown` is never folded into `No`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<T> {
    Yes(T),
    No,
    Unknown(BudgetExhausted),
}

impl<T> Outcome<T> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Outcome::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Outcome::No)
    }

    /// `Some(true)` / `Some(false)` for a definite answer.
    pub fn known(&self) -> Option<bool> {
        match self {
            Outcome::Yes(_) => Some(true),
            Outcome::No => Some(false),
            Outcome::Unknown(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("vertex {0} already lies in the base set")]
    VertexInSet(usize),
    #[error("|S| + 1 = {size} is not divisible by k = {k}")]
    Divisibility { size: usize, k: usize },
    #[error(transparent)]
    Budget(#[from] BudgetExhausted),
}

/// Size-bounded memo that keeps the most recently touched entries.
///
/// Two generations: inserts go to the young table; when it fills, the old
/// table is dropped and the young one takes its place. Hits in the old table
/// are promoted, so live entries survive rotation.
#[derive(Debug)]
pub(crate) struct BoundedMemo<K, V> {
    young: HashMap<K, V>,
    old: HashMap<K, V>,
    half: usize,
}

impl<K: Hash + Eq + Copy, V: Copy> BoundedMemo<K, V> {
    pub(crate) fn new(capacity: usize) -> Self {
        BoundedMemo {
            young: HashMap::new(),
            old: HashMap::new(),
            half: (capacity / 2).max(1),
        }
    }

    pub(crate) fn get(&mut self, key: &K) -> Option<V> {
        if let Some(v) = self.young.get(key) {
            return Some(*v);
        }
        let v = self.old.remove(key)?;
        self.insert(*key, v);
        Some(v)
    }

    pub(crate) fn insert(&mut self, key: K, value: V) {
        if self.young.len() >= self.half {
            self.old = std::mem::take(&mut self.young);
        }
        self.young.insert(key, value);
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.young.len() + self.old.len()
    }
}

/// Matching search over one host hypergraph, with memo tables that persist
/// across queries on the same host.
pub struct MatchingOracle<'h> {
    graph: &'h Hypergraph,
    config: OracleConfig,
    dead: BoundedMemo<VertexSet, ()>,
    pm_cache: BoundedMemo<VertexSet, bool>,
    max_cache: HashMap<VertexSet, usize>,
    nodes: u64,
    total_nodes: u64,
}

impl<'h> MatchingOracle<'h> {
    pub fn new(graph: &'h Hypergraph) -> Self {
        Self::with_config(graph, OracleConfig::default())
    }

    pub fn with_config(graph: &'h Hypergraph, config: OracleConfig) -> Self {
        MatchingOracle {
            graph,
            config,
            dead: BoundedMemo::new(config.memo_capacity),
            pm_cache: BoundedMemo::new(config.memo_capacity),
            max_cache: HashMap::new(),
            nodes: 0,
            total_nodes: 0,
        }
    }

    pub fn graph(&self) -> &'h Hypergraph {
        self.graph
    }

    /// Search nodes spent over the oracle's lifetime.
    pub fn total_nodes(&self) -> u64 {
        self.total_nodes
    }

    fn tick(&mut self) -> Result<(), BudgetExhausted> {
        self.nodes += 1;
        self.total_nodes += 1;
        if self.nodes > self.config.node_budget {
            Err(BudgetExhausted {
                budget: self.config.node_budget,
            })
        } else {
            Ok(())
        }
    }

    /// Perfect matching of the sub-hypergraph induced on `within`.
    pub fn perfect_matching_within(&mut self, within: VertexSet) -> Outcome<Matching> {
        let k = self.graph.k();
        if !within.len().is_multiple_of(k) {
            return Outcome::No;
        }
        self.nodes = 0;
        let mut stack = Vec::with_capacity(within.len() / k);
        match self.cover(within, &mut stack) {
            Ok(true) => Outcome::Yes(Matching::new(stack)),
            Ok(false) => Outcome::No,
            Err(e) => Outcome::Unknown(e),
        }
    }

    fn cover(&mut self, uncovered: VertexSet, stack: &mut Vec<VertexSet>) -> Result<bool, BudgetExhausted> {
        let Some(v) = uncovered.first() else {
            return Ok(true);
        };
        if self.dead.get(&uncovered).is_some() {
            return Ok(false);
        }
        self.tick()?;
        let graph = self.graph;
        for &i in graph.incident(v) {
            let e = graph.edges()[i];
            if !e.is_subset(uncovered) {
                continue;
            }
            stack.push(e);
            if self.cover(uncovered.difference(e), stack)? {
                return Ok(true);
            }
            stack.pop();
        }
        self.dead.insert(uncovered, ());
        Ok(false)
    }

    /// Whether `H[within]` has a perfect matching, cached per vertex set.
    pub fn has_pm_within(&mut self, within: VertexSet) -> Result<bool, BudgetExhausted> {
        if !within.len().is_multiple_of(self.graph.k()) {
            return Ok(false);
        }
        if let Some(hit) = self.pm_cache.get(&within) {
            return Ok(hit);
        }
        let answer = match self.perfect_matching_within(within) {
            Outcome::Yes(_) => true,
            Outcome::No => false,
            Outcome::Unknown(e) => return Err(e),
        };
        self.pm_cache.insert(within, answer);
        Ok(answer)
    }

    /// Whether `H[S + v]` has a perfect matching.
    pub fn pm_on_union(&mut self, s: VertexSet, v: usize) -> Result<bool, OracleError> {
        if s.contains(v) {
            return Err(OracleError::VertexInSet(v));
        }
        let k = self.graph.k();
        if !(s.len() + 1).is_multiple_of(k) {
            return Err(OracleError::Divisibility {
                size: s.len() + 1,
                k,
            });
        }
        Ok(self.has_pm_within(s.with(v))?)
    }

    /// Size of a maximum matching inside `within`.
    pub fn max_matching_within(&mut self, within: VertexSet) -> Result<usize, BudgetExhausted> {
        self.nodes = 0;
        self.max_rec(within)
    }

    fn max_rec(&mut self, avail: VertexSet) -> Result<usize, BudgetExhausted> {
        let k = self.graph.k();
        if avail.len() < k {
            return Ok(0);
        }
        if let Some(&hit) = self.max_cache.get(&avail) {
            return Ok(hit);
        }
        self.tick()?;
        let v = avail.first().expect("non-empty");
        // either v stays unmatched ...
        let mut best = self.max_rec(avail.without(v))?;
        let ceiling = avail.len() / k;
        // ... or it is matched by one of its edges
        let graph = self.graph;
        for &i in graph.incident(v) {
            if best == ceiling {
                break;
            }
            let e = graph.edges()[i];
            if e.is_subset(avail) {
                best = best.max(1 + self.max_rec(avail.difference(e))?);
            }
        }
        if self.max_cache.len() >= self.config.memo_capacity {
            self.max_cache.clear();
        }
        self.max_cache.insert(avail, best);
        Ok(best)
    }
}

/// Perfect matching of `h` (with witness) under the default budget.
pub fn has_perfect_matching(h: &Hypergraph) -> Outcome<Matching> {
    has_perfect_matching_with(h, OracleConfig::default())
}

pub fn has_perfect_matching_with(h: &Hypergraph, config: OracleConfig) -> Outcome<Matching> {
    if !h.n().is_multiple_of(h.k()) {
        return Outcome::No;
    }
    MatchingOracle::with_config(h, config).perfect_matching_within(h.vertices())
}

/// Maximum matching size of `h` under the default budget.
pub fn max_matching_size(h: &Hypergraph) -> Result<usize, BudgetExhausted> {
    max_matching_size_with(h, OracleConfig::default())
}

pub fn max_matching_size_with(h: &Hypergraph, config: OracleConfig) -> Result<usize, BudgetExhausted> {
    MatchingOracle::with_config(h, config).max_matching_within(h.vertices())
}

/// All vertex sets `V(M)` over matchings `M` of `h`, each with one witness.
///
/// Breadth-first over covered sets, so witnesses are of minimum size. Feasible
/// only for small hosts (the table can hold up to `2^n` entries).
pub fn matchable_sets(h: &Hypergraph, budget: u64) -> Result<HashMap<VertexSet, Matching>, BudgetExhausted> {
    let mut seen: HashMap<VertexSet, Matching> = HashMap::new();
    seen.insert(VertexSet::EMPTY, Matching::default());
    let mut frontier = vec![VertexSet::EMPTY];
    let mut visited: HashSet<VertexSet> = HashSet::new();
    visited.insert(VertexSet::EMPTY);
    let mut nodes = 0u64;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for covered in frontier {
            let base = seen[&covered].clone();
            for &e in h.edges() {
                nodes += 1;
                if nodes > budget {
                    return Err(BudgetExhausted { budget });
                }
                if e.intersects(covered) {
                    continue;
                }
                let grown = covered.union(e);
                if visited.insert(grown) {
                    let mut m = base.clone();
                    m.edges.push(e);
                    seen.insert(grown, m);
                    next.push(grown);
                }
            }
        }
        frontier = next;
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, space_barrier};

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn complete_graph_has_pm() {
        let h = complete(9, 3).unwrap();
        match has_perfect_matching(&h) {
            Outcome::Yes(m) => assert!(m.is_perfect_in(&h)),
            other => panic!("expected a perfect matching, got {other:?}"),
        }
        assert_eq!(max_matching_size(&h).unwrap(), 3);
    }

    #[test]
    fn empty_and_indivisible() {
        let h = Hypergraph::build(6, 3, Vec::<Vec<usize>>::new()).unwrap();
        assert_eq!(max_matching_size(&h).unwrap(), 0);
        assert!(has_perfect_matching(&h).is_no());
        let h = complete(7, 3).unwrap();
        assert!(has_perfect_matching(&h).is_no());
        assert_eq!(max_matching_size(&h).unwrap(), 2);
    }

    #[test]
    fn space_barrier_caps_matchings() {
        let h = space_barrier(9, 3, 2).unwrap();
        assert_eq!(max_matching_size(&h).unwrap(), 2);
        assert!(has_perfect_matching(&h).is_no());
    }

    #[test]
    fn budget_surfaces_as_unknown() {
        let h = space_barrier(12, 3, 3).unwrap();
        let cfg = OracleConfig {
            node_budget: 3,
            memo_capacity: 16,
        };
        assert!(matches!(
            has_perfect_matching_with(&h, cfg),
            Outcome::Unknown(BudgetExhausted { budget: 3 })
        ));
        assert!(max_matching_size_with(&h, cfg).is_err());
    }

    #[test]
    fn pm_on_union_cases() {
        let k5 = complete(5, 3).unwrap();
        let mut o = MatchingOracle::new(&k5);
        assert!(o.pm_on_union(set(&[1, 2]), 0).unwrap());
        assert_eq!(o.pm_on_union(set(&[1, 2]), 1), Err(OracleError::VertexInSet(1)));
        assert!(matches!(
            o.pm_on_union(set(&[1]), 0),
            Err(OracleError::Divisibility { size: 2, k: 3 })
        ));

        let single = Hypergraph::build(4, 3, [[0, 1, 2]]).unwrap();
        let mut o = MatchingOracle::new(&single);
        assert!(!o.pm_on_union(set(&[1, 3]), 0).unwrap());

        let sb = space_barrier(9, 3, 2).unwrap();
        let mut o = MatchingOracle::new(&sb);
        assert!(!o.pm_on_union(set(&[3, 4]), 5).unwrap());
    }

    #[test]
    fn memo_stays_bounded() {
        let mut memo: BoundedMemo<u32, u32> = BoundedMemo::new(8);
        for i in 0..100 {
            memo.insert(i, i);
            assert!(memo.len() <= 8);
        }
        assert_eq!(memo.get(&99), Some(99));
        assert_eq!(memo.get(&0), None);
    }

    #[test]
    fn matchable_sets_of_two_edges() {
        let h = Hypergraph::build(6, 3, [[0, 1, 2], [3, 4, 5], [0, 3, 4]]).unwrap();
        let sets = matchable_sets(&h, 1_000).unwrap();
        assert_eq!(sets.len(), 5);
        assert!(sets.contains_key(&VertexSet::full(6)));
        assert_eq!(sets[&VertexSet::full(6)].len(), 2);
    }
}
