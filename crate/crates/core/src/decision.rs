//! Solubility, parity bipartitions, partition listing, certificates and the
//! two decision procedures.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::hypergraph::{Hypergraph, HypergraphError, Matching};
use crate::lattice::{
    is_full_lattice, r_vectors, CosetTable, EdgeLattice, FullPair, IndexVector, LatticeError, Partition,
};
use crate::oracle::{matchable_sets, BudgetExhausted, OracleConfig, Outcome};
use crate::reachability::{run_pipeline, PartitionPipelineResult, PipelineConfig, PipelineError, Validity};
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecisionError {
    #[error("codegree hypothesis fails: min codegree {codegree} < n/k = {n}/{k}")]
    Hypothesis { codegree: usize, n: usize, k: usize },
    #[error("k = {k} does not divide n = {n}")]
    Divisibility { n: usize, k: usize },
    #[error("{0} parts requested but uniformity is {1}")]
    TooManyParts(usize, usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Graph(#[from] HypergraphError),
    #[error(transparent)]
    Budget(#[from] BudgetExhausted),
}

fn check_dims(p: &Partition, l: &EdgeLattice) -> Result<(), DecisionError> {
    if p.len() != l.dim() {
        return Err(LatticeError::Dimension {
            expected: p.len(),
            found: l.dim(),
        }
        .into());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Solubility
// ---------------------------------------------------------------------------

/// A matching `M` with `|M| <= |P| - 1` and `i_P(V \ V(M))` in `L`, if any.
///
/// Edges are grouped by index vector; multisets of classes are filtered by
/// residue before looking for disjoint representatives.
pub fn is_soluble(h: &Hypergraph, p: &Partition, l: &EdgeLattice) -> Result<Option<Matching>, DecisionError> {
    check_dims(p, l)?;
    let target = l.residue(&p.index_vector(h.vertices()))?;
    let mut classes: BTreeMap<IndexVector, Vec<VertexSet>> = BTreeMap::new();
    for &e in h.edges() {
        classes.entry(p.index_vector(e)).or_default().push(e);
    }
    let classes: Vec<(IndexVector, Vec<VertexSet>)> = classes.into_iter().collect();
    let max_size = p.len().saturating_sub(1);
    let mut chosen = Vec::new();
    Ok(soluble_rec(l, &target, &classes, 0, max_size, &IndexVector::zero(p.len()), &mut chosen))
}

fn soluble_rec(
    l: &EdgeLattice,
    target: &IndexVector,
    classes: &[(IndexVector, Vec<VertexSet>)],
    start: usize,
    left: usize,
    acc: &IndexVector,
    chosen: &mut Vec<usize>,
) -> Option<Matching> {
    if l.residue(acc).expect("dimensions agree") == *target {
        if let Some(m) = realize(classes, chosen) {
            return Some(m);
        }
    }
    if left == 0 {
        return None;
    }
    for c in start..classes.len() {
        chosen.push(c);
        let next = acc + &classes[c].0;
        if let Some(m) = soluble_rec(l, target, classes, c, left - 1, &next, chosen) {
            return Some(m);
        }
        chosen.pop();
    }
    None
}

/// Disjoint edges, one per entry of `chosen`, from the named classes.
fn realize(classes: &[(IndexVector, Vec<VertexSet>)], chosen: &[usize]) -> Option<Matching> {
    fn rec(
        classes: &[(IndexVector, Vec<VertexSet>)],
        chosen: &[usize],
        i: usize,
        min_edge: usize,
        used: VertexSet,
        out: &mut Vec<VertexSet>,
    ) -> bool {
        if i == chosen.len() {
            return true;
        }
        let c = chosen[i];
        // repeated classes pick edges in increasing order
        let from = if i > 0 && chosen[i - 1] == c { min_edge } else { 0 };
        for (j, &e) in classes[c].1.iter().enumerate().skip(from) {
            if e.intersects(used) {
                continue;
            }
            out.push(e);
            if rec(classes, chosen, i + 1, j + 1, used.union(e), out) {
                return true;
            }
            out.pop();
        }
        false
    }
    let mut out = Vec::new();
    rec(classes, chosen, 0, 0, VertexSet::EMPTY, &mut out).then(|| Matching::new(out))
}

/// Any matching `M` (no size bound) with `i_P(V \ V(M))` in `L`.
///
/// Exponential; intended for small test instances.
pub fn is_soluble_unbounded(
    h: &Hypergraph,
    p: &Partition,
    l: &EdgeLattice,
    budget: u64,
) -> Result<Option<Matching>, DecisionError> {
    check_dims(p, l)?;
    let all = h.vertices();
    let sets = matchable_sets(h, budget)?;
    let mut best: Option<(usize, VertexSet)> = None;
    for &covered in sets.keys() {
        if l.contains(&p.index_vector(all.difference(covered)))? {
            let key = (covered.len(), covered);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
    }
    Ok(best.map(|(_, s)| sets[&s].clone()))
}

// ---------------------------------------------------------------------------
// Partition listing
// ---------------------------------------------------------------------------

pub const DEFAULT_LISTING_BUDGET: u64 = 10_000_000;
const UNASSIGNED: u8 = u8::MAX;

/// Result of [`list_partitions`]; `complete` is false when the node budget
/// ran out and `partitions` holds only what was found so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionListing {
    pub partitions: Vec<Partition>,
    pub complete: bool,
    pub nodes: u64,
}

struct Lister<'a> {
    lattice: &'a EdgeLattice,
    d: usize,
    within: VertexSet,
    edges: Vec<VertexSet>,
    by_vertex: Vec<Vec<usize>>,
    allow_empty: bool,
    budget: u64,
    nodes: u64,
    out: Vec<Vec<u8>>,
}

impl<'a> Lister<'a> {
    fn new(h: &Hypergraph, within: VertexSet, d: usize, lattice: &'a EdgeLattice, allow_empty: bool, budget: u64) -> Self {
        let edges: Vec<VertexSet> = h.edges_within(within).collect();
        let mut by_vertex = vec![Vec::new(); h.n()];
        for (i, e) in edges.iter().enumerate() {
            for v in e.iter() {
                by_vertex[v].push(i);
            }
        }
        Lister {
            lattice,
            d,
            within,
            edges,
            by_vertex,
            allow_empty,
            budget,
            nodes: 0,
            out: Vec::new(),
        }
    }

    fn run(&mut self, n: usize) -> bool {
        let domain = vec![(1u32 << self.d) - 1; n];
        let assign = vec![UNASSIGNED; n];
        self.search(assign, domain).is_ok()
    }

    fn search(&mut self, assign: Vec<u8>, domain: Vec<u32>) -> Result<(), ()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(());
        }
        let next = self
            .within
            .iter()
            .filter(|&v| assign[v] == UNASSIGNED)
            .min_by_key(|&v| (domain[v].count_ones(), v));
        let Some(v) = next else {
            if self.allow_empty || (0..self.d).all(|j| assign.contains(&(j as u8))) {
                self.out.push(assign);
            }
            return Ok(());
        };
        let mut bits = domain[v];
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let mut a = assign.clone();
            let mut dm = domain.clone();
            if self.propagate(&mut a, &mut dm, v, j) {
                self.search(a, dm)?;
            }
        }
        Ok(())
    }

    fn propagate(&self, assign: &mut [u8], domain: &mut [u32], v: usize, part: usize) -> bool {
        let mut queue = vec![(v, part)];
        let mut vec = vec![0i64; self.d];
        while let Some((x, p)) = queue.pop() {
            if assign[x] != UNASSIGNED {
                if assign[x] as usize != p {
                    return false;
                }
                continue;
            }
            assign[x] = p as u8;
            domain[x] = 1 << p;
            for &ei in &self.by_vertex[x] {
                let e = self.edges[ei];
                vec.iter_mut().for_each(|c| *c = 0);
                let mut free = None;
                let mut free_count = 0;
                for w in e.iter() {
                    match assign[w] {
                        UNASSIGNED => {
                            free = Some(w);
                            free_count += 1;
                        }
                        q => vec[q as usize] += 1,
                    }
                }
                match (free_count, free) {
                    (0, _) => {
                        if !self.lattice.contains_slice(&vec) {
                            return false;
                        }
                    }
                    (1, Some(w)) => {
                        let mut allowed = 0u32;
                        let mut bits = domain[w];
                        while bits != 0 {
                            let j = bits.trailing_zeros() as usize;
                            bits &= bits - 1;
                            vec[j] += 1;
                            if self.lattice.contains_slice(&vec) {
                                allowed |= 1 << j;
                            }
                            vec[j] -= 1;
                        }
                        if allowed == 0 {
                            return false;
                        }
                        if allowed != domain[w] {
                            domain[w] = allowed;
                            if allowed.count_ones() == 1 {
                                queue.push((w, allowed.trailing_zeros() as usize));
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }
}

fn assignments_within(
    h: &Hypergraph,
    within: VertexSet,
    d: usize,
    l: &EdgeLattice,
    allow_empty: bool,
    budget: u64,
) -> (Vec<Vec<u8>>, bool, u64) {
    let mut lister = Lister::new(h, within, d, l, allow_empty, budget);
    let complete = lister.run(h.n());
    let mut out = lister.out;
    out.sort();
    (out, complete, lister.nodes)
}

fn to_partition(assign: &[u8], d: usize) -> Partition {
    let a: Vec<usize> = assign.iter().map(|&x| x as usize).collect();
    Partition::from_assignment(&a, d).expect("complete assignment with non-empty parts")
}

/// All ordered partitions of `V` into `d` non-empty parts with every edge's
/// index vector in `l`.
///
/// Vertices are assigned one at a time, most constrained first; an edge with
/// a single unassigned vertex restricts that vertex to the parts that keep
/// the edge in the lattice.
pub fn list_partitions(h: &Hypergraph, d: usize, l: &EdgeLattice) -> Result<PartitionListing, DecisionError> {
    list_partitions_with_budget(h, d, l, DEFAULT_LISTING_BUDGET)
}

pub fn list_partitions_with_budget(
    h: &Hypergraph,
    d: usize,
    l: &EdgeLattice,
    budget: u64,
) -> Result<PartitionListing, DecisionError> {
    if l.dim() != d {
        return Err(LatticeError::Dimension {
            expected: d,
            found: l.dim(),
        }
        .into());
    }
    if d == 0 || d > 31 {
        return Err(DecisionError::TooManyParts(d, h.k()));
    }
    let (assignments, complete, nodes) = assignments_within(h, h.vertices(), d, l, false, budget);
    Ok(PartitionListing {
        partitions: assignments.iter().map(|a| to_partition(a, d)).collect(),
        complete,
        nodes,
    })
}

/// Reference listing by trying all `d^n` assignments.
pub fn list_partitions_exhaustive(h: &Hypergraph, d: usize, l: &EdgeLattice) -> Vec<Partition> {
    let n = h.n();
    let mut assign = vec![0usize; n];
    let mut out = Vec::new();
    loop {
        let used: HashSet<usize> = assign.iter().copied().collect();
        if used.len() == d {
            let p = Partition::from_assignment(&assign, d).expect("all parts used");
            if h.edges().iter().all(|&e| l.contains_slice(&p.index_vector(e).0)) {
                out.push(p);
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                out.sort_by_key(|p| p.assignment());
                return out;
            }
            assign[i] += 1;
            if assign[i] < d {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Parity bipartitions
// ---------------------------------------------------------------------------

/// A bipartition `(X, Y)` with every edge meeting `X` oddly and `n/k - |X|`
/// odd, if one exists.
pub fn in_hnk(h: &Hypergraph) -> Result<Option<Partition>, DecisionError> {
    let (n, k) = (h.n(), h.k());
    if n % k != 0 {
        return Err(DecisionError::Divisibility { n, k });
    }
    let listing = list_partitions(h, 2, &EdgeLattice::odd(k))?;
    if !listing.complete {
        return Err(BudgetExhausted {
            budget: DEFAULT_LISTING_BUDGET,
        }
        .into());
    }
    Ok(listing
        .partitions
        .into_iter()
        .find(|p| (n / k).abs_diff(p.parts()[0].len()) % 2 == 1))
}

// ---------------------------------------------------------------------------
// Full lattices
// ---------------------------------------------------------------------------

pub const DEFAULT_LATTICE_STATE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FullLattices {
    pub lattices: Vec<EdgeLattice>,
    /// False when the state cap stopped the closure search early.
    pub complete: bool,
}

/// Every full lattice in `Z^d` for uniformity `k`, as generated by its
/// k-vector content.
///
/// Searches closed sets of k-vectors: each step adds one k-vector and takes
/// the k-vector content of the generated lattice. Lattices with a transferral
/// are dropped since every larger lattice keeps it.
pub fn enumerate_full_lattices(d: usize, k: usize) -> FullLattices {
    enumerate_full_lattices_capped(d, k, DEFAULT_LATTICE_STATE_CAP)
}

pub fn enumerate_full_lattices_capped(d: usize, k: usize, cap: usize) -> FullLattices {
    if d == 0 || k == 0 {
        return FullLattices {
            lattices: Vec::new(),
            complete: true,
        };
    }
    let vectors = r_vectors(d, k);
    let content = |l: &EdgeLattice| -> Vec<usize> {
        (0..vectors.len()).filter(|&i| l.contains_slice(&vectors[i].0)).collect()
    };
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue: Vec<Vec<usize>> = vec![Vec::new()];
    seen.insert(Vec::new());
    let mut complete = true;
    let mut found = Vec::new();
    while let Some(state) = queue.pop() {
        for i in 0..vectors.len() {
            if state.binary_search(&i).is_ok() {
                continue;
            }
            let gens = state.iter().chain(std::iter::once(&i)).map(|&j| vectors[j].clone());
            let l = EdgeLattice::from_generators(d, gens).expect("dimensions agree");
            if !l.is_transferral_free() {
                continue;
            }
            let c = content(&l);
            if seen.contains(&c) {
                continue;
            }
            if seen.len() >= cap {
                complete = false;
                continue;
            }
            seen.insert(c.clone());
            queue.push(c);
        }
    }
    let mut states: Vec<Vec<usize>> = seen.into_iter().filter(|s| !s.is_empty()).collect();
    states.sort();
    for s in states {
        let l = EdgeLattice::from_generators(d, s.iter().map(|&j| vectors[j].clone())).expect("dimensions agree");
        if is_full_lattice(&l, k) {
            found.push(l);
        }
    }
    FullLattices {
        lattices: found,
        complete,
    }
}

type LatticeTables = Arc<Vec<(EdgeLattice, CosetTable)>>;

fn cached_full_lattices(d: usize, k: usize) -> LatticeTables {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), LatticeTables>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&(d, k)) {
        return hit.clone();
    }
    let full = enumerate_full_lattices(d, k);
    if !full.complete {
        log::warn!("full lattice enumeration for d = {d}, k = {k} hit its state cap");
    }
    let tables: Vec<(EdgeLattice, CosetTable)> = full
        .lattices
        .into_iter()
        .filter_map(|l| match CosetTable::new(&l) {
            Some(t) => Some((l, t)),
            None => {
                log::warn!("full lattice {:?} is not of full rank; skipped", l.basis());
                None
            }
        })
        .collect();
    let computed = Arc::new(tables);
    cache.lock().expect("cache lock").entry((d, k)).or_insert(computed).clone()
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

/// Summary of the exhaustive solubility search behind a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InsolubilityRecord {
    /// Canonical residue of `i_P(V)` modulo `L`.
    pub target_residue: IndexVector,
    /// Largest matching size searched, `|P| - 1`.
    pub max_matching_size: usize,
    /// Distinct edge index vectors under `P`.
    pub edge_classes: usize,
}

/// An insoluble full pair and an `s`-set meeting every off-lattice edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub pair: FullPair,
    pub cover_set: VertexSet,
    pub s: usize,
    pub insolubility: InsolubilityRecord,
}

/// `2k(k-2)`.
pub fn default_certificate_size(k: usize) -> usize {
    2 * k * k.saturating_sub(2)
}

pub const DEFAULT_CERTIFICATE_BUDGET: u64 = 2_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CertificateConfig {
    /// Cover size; `None` means `2k(k-2)`. Clamped to `n`.
    pub s: Option<usize>,
    /// Search nodes shared by all workers.
    pub node_budget: u64,
}

impl Default for CertificateConfig {
    fn default() -> Self {
        CertificateConfig {
            s: None,
            node_budget: DEFAULT_CERTIFICATE_BUDGET,
        }
    }
}

/// Counters from a certificate search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub struct CertificateSearchStats {
    pub cover_sets: u64,
    pub nodes: u64,
}

struct CertSearch<'a> {
    h: &'a Hypergraph,
    k: usize,
    budget: u64,
    nodes: &'a AtomicU64,
    stop: &'a AtomicBool,
}

/// Edges whose vertices are all assigned, bucketed by coset.
struct Completed {
    by_coset: Vec<Vec<VertexSet>>,
    all: Vec<(VertexSet, u32)>,
}

impl Completed {
    fn new(order: usize) -> Self {
        Completed {
            by_coset: vec![Vec::new(); order],
            all: Vec::new(),
        }
    }

    fn push(&mut self, e: VertexSet, c: u32) {
        self.by_coset[c as usize].push(e);
        self.all.push((e, c));
    }

    fn truncate(&mut self, len: usize) {
        while self.all.len() > len {
            let (_, c) = self.all.pop().expect("non-empty");
            self.by_coset[c as usize].pop();
        }
    }
}

/// Whether `e` (coset `c`) plus at most `more` disjoint completed edges
/// lands in the coset `target`.
fn hits(t: &CosetTable, target: u32, used: VertexSet, c: u32, done: &Completed, more: usize) -> bool {
    if c == target {
        return true;
    }
    match more {
        0 => false,
        1 => done.by_coset[t.sub(target, c) as usize]
            .iter()
            .any(|f| !f.intersects(used)),
        _ => done.all.iter().any(|&(f, cf)| {
            !f.intersects(used) && hits(t, target, used.union(f), t.add(c, cf), done, more - 1)
        }),
    }
}

impl CertSearch<'_> {
    fn tick(&self, amount: u64) -> Result<(), BudgetExhausted> {
        let used = self.nodes.fetch_add(amount, Ordering::Relaxed) + amount;
        if used > self.budget {
            self.stop.store(true, Ordering::Relaxed);
            return Err(BudgetExhausted { budget: self.budget });
        }
        Ok(())
    }

    fn for_cover(&self, s: VertexSet) -> Result<Option<Certificate>, BudgetExhausted> {
        let n = self.h.n();
        let w = self.h.vertices().difference(s);
        for d in 1..=self.k.min(n) {
            let lattices = cached_full_lattices(d, self.k);
            for (l, table) in lattices.iter() {
                if self.stop.load(Ordering::Relaxed) {
                    return Err(BudgetExhausted { budget: self.budget });
                }
                let (qs, complete, nodes) = assignments_within(self.h, w, d, l, true, self.budget);
                self.tick(nodes)?;
                if !complete {
                    return Err(BudgetExhausted { budget: self.budget });
                }
                for q in qs {
                    if let Some(assign) = self.extend(s, w, d, l, table, q)? {
                        let p = to_partition(&assign, d);
                        let target = l.residue(&p.index_vector(self.h.vertices())).expect("dimensions agree");
                        let classes: HashSet<IndexVector> = self.h.edges().iter().map(|&e| p.index_vector(e)).collect();
                        return Ok(Some(Certificate {
                            pair: FullPair {
                                partition: p,
                                lattice: l.clone(),
                            },
                            cover_set: s,
                            s: s.len(),
                            insolubility: InsolubilityRecord {
                                target_residue: target,
                                max_matching_size: d - 1,
                                edge_classes: classes.len(),
                            },
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Tries every assignment of the cover set on top of `q`; returns a
    /// complete assignment whose pair is insoluble.
    fn extend(
        &self,
        s: VertexSet,
        w: VertexSet,
        d: usize,
        l: &EdgeLattice,
        t: &CosetTable,
        q: Vec<u8>,
    ) -> Result<Option<Vec<u8>>, BudgetExhausted> {
        let h = self.h;
        let mut base = vec![0i64; d];
        for v in w.iter() {
            base[q[v] as usize] += 1;
        }
        let coset_of = |e: VertexSet, assign: &[u8]| e.iter().fold(0u32, |c, v| t.add(c, t.unit(assign[v] as usize)));
        let inner: Vec<(VertexSet, u32)> = h.edges_within(w).map(|e| (e, coset_of(e, &q))).collect();
        let cover: Vec<usize> = s.to_vec();
        let more = d.saturating_sub(2);
        'counts: for c in r_vectors(d, s.len()) {
            let total: Vec<i64> = base.iter().zip(&c.0).map(|(a, b)| a + b).collect();
            if total.contains(&0) {
                continue;
            }
            let target = t.id(l, &total);
            if target == 0 {
                continue;
            }
            let mut done = Completed::new(t.order());
            for &(e, ce) in &inner {
                if hits(t, target, e, ce, &done, more) {
                    continue 'counts;
                }
                done.push(e, ce);
            }
            let mut assign = q.clone();
            let mut remaining: Vec<usize> = c.0.iter().map(|&x| x as usize).collect();
            self.tick(1)?;
            let mut dfs = CoverDfs {
                h,
                t,
                target,
                cover: &cover,
                more,
                d,
            };
            if dfs.run(self, 0, w, &mut assign, &mut remaining, &mut done)? {
                return Ok(Some(assign));
            }
        }
        Ok(None)
    }
}

struct CoverDfs<'a> {
    h: &'a Hypergraph,
    t: &'a CosetTable,
    target: u32,
    cover: &'a [usize],
    more: usize,
    d: usize,
}

impl CoverDfs<'_> {
    fn run(
        &mut self,
        search: &CertSearch<'_>,
        idx: usize,
        assigned: VertexSet,
        assign: &mut [u8],
        remaining: &mut [usize],
        done: &mut Completed,
    ) -> Result<bool, BudgetExhausted> {
        if idx == self.cover.len() {
            return Ok(true);
        }
        if idx.is_multiple_of(2) && search.stop.load(Ordering::Relaxed) {
            return Err(BudgetExhausted { budget: search.budget });
        }
        let v = self.cover[idx];
        let now = assigned.with(v);
        let h = self.h;
        let t = self.t;
        for j in 0..self.d {
            if remaining[j] == 0 {
                continue;
            }
            search.tick(1)?;
            assign[v] = j as u8;
            remaining[j] -= 1;
            let mark = done.all.len();
            let mut soluble = false;
            for &ei in h.incident(v) {
                let e = h.edges()[ei];
                if !e.is_subset(now) {
                    continue;
                }
                let ce = e.iter().fold(0u32, |c, x| t.add(c, t.unit(assign[x] as usize)));
                if hits(t, self.target, e, ce, done, self.more) {
                    soluble = true;
                    break;
                }
                done.push(e, ce);
            }
            if !soluble && self.run(search, idx + 1, now, assign, remaining, done)? {
                return Ok(true);
            }
            done.truncate(mark);
            remaining[j] += 1;
            assign[v] = UNASSIGNED;
        }
        Ok(false)
    }
}

/// First `s`-certificate in lexicographic order of the cover set.
pub fn has_certificate(h: &Hypergraph, cfg: &CertificateConfig) -> Outcome<Certificate> {
    has_certificate_traced(h, cfg).0
}

pub fn has_certificate_traced(h: &Hypergraph, cfg: &CertificateConfig) -> (Outcome<Certificate>, CertificateSearchStats) {
    let n = h.n();
    let s = cfg.s.unwrap_or_else(|| default_certificate_size(h.k())).min(n);
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let sets_checked = AtomicU64::new(0);
    let search = CertSearch {
        h,
        k: h.k(),
        budget: cfg.node_budget,
        nodes: &nodes,
        stop: &stop,
    };
    let covers: Vec<VertexSet> = h.vertices().subsets_of_size(s).collect();
    let found = covers.par_iter().find_map_first(|&cover| {
        sets_checked.fetch_add(1, Ordering::Relaxed);
        match search.for_cover(cover) {
            Ok(None) => None,
            other => Some(other),
        }
    });
    let stats = CertificateSearchStats {
        cover_sets: sets_checked.load(Ordering::Relaxed),
        nodes: nodes.load(Ordering::Relaxed),
    };
    let outcome = match found {
        None => Outcome::No,
        Some(Ok(Some(c))) => Outcome::Yes(c),
        Some(Ok(None)) => unreachable!("filtered above"),
        Some(Err(e)) => Outcome::Unknown(e),
    };
    (outcome, stats)
}

/// Independent re-check of every certificate condition.
pub fn verify_certificate(h: &Hypergraph, cert: &Certificate) -> bool {
    let p = &cert.pair.partition;
    let l = &cert.pair.lattice;
    let k = h.k();
    if p.n() != h.n() || p.len() != l.dim() || p.len() > k || cert.cover_set.len() != cert.s {
        return false;
    }
    if !cert.cover_set.is_subset(h.vertices()) || !is_full_lattice(l, k) {
        return false;
    }
    let covered = h
        .edges()
        .iter()
        .all(|&e| l.contains_slice(&p.index_vector(e).0) || e.intersects(cert.cover_set));
    covered && matches!(is_soluble(h, p, l), Ok(None))
}

// ---------------------------------------------------------------------------
// Decisions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Slow,
    Fast,
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "brute" => Ok(Method::Brute),
            "slow" => Ok(Method::Slow),
            "fast" => Ok(Method::Fast),
            _ => Err(format!("unknown method '{s}'")),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Slow => "slow",
            Method::Fast => "fast",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    PerfectMatching { matching: Matching },
    Certificate { certificate: Certificate },
    ParityBipartition { partition: Partition },
    InsolublePair { partition: Partition, lattice: EdgeLattice },
    SolublePair { partition: Partition, lattice: EdgeLattice, solution: Matching },
    NoCertificate { s: usize, cover_sets: u64 },
    NoPerfectMatching,
    BudgetExhausted { budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub method: Method,
    pub evidence: Evidence,
    pub validity: Validity,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<PartitionPipelineResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[derive(Default)]
pub struct DecideConfig {
    pub pipeline: PipelineConfig,
    pub certificate: CertificateConfig,
}


impl DecideConfig {
    pub fn oracle(&self) -> OracleConfig {
        self.pipeline.oracle
    }

    fn validity(&self, n: usize) -> Validity {
        if n >= self.pipeline.validity_floor {
            Validity::Valid
        } else {
            Validity::Asymptotic
        }
    }
}

/// Checks `min codegree >= n/k`.
pub fn check_codegree(h: &Hypergraph) -> Result<usize, DecisionError> {
    let codegree = h.min_codegree()?;
    if codegree * h.k() < h.n() {
        return Err(DecisionError::Hypothesis {
            codegree,
            n: h.n(),
            k: h.k(),
        });
    }
    Ok(codegree)
}

/// Exhaustive search.
pub fn decide_brute(h: &Hypergraph, cfg: &DecideConfig) -> Decision {
    let mut oracle = crate::oracle::MatchingOracle::with_config(h, cfg.oracle());
    let outcome = if h.n().is_multiple_of(h.k()) {
        oracle.perfect_matching_within(h.vertices())
    } else {
        Outcome::No
    };
    let (verdict, evidence) = match outcome {
        Outcome::Yes(m) => (Verdict::Yes, Evidence::PerfectMatching { matching: m }),
        Outcome::No => (Verdict::No, Evidence::NoPerfectMatching),
        Outcome::Unknown(e) => (Verdict::Unknown, Evidence::BudgetExhausted { budget: e.budget }),
    };
    Decision {
        verdict,
        method: Method::Brute,
        evidence,
        validity: Validity::Valid,
        nodes: oracle.total_nodes(),
        pipeline: None,
    }
}

/// Pipeline, then solubility of `(P0', L^mu)`, then the parity family.
pub fn decide_slow(h: &Hypergraph, cfg: &DecideConfig) -> Result<Decision, DecisionError> {
    check_codegree(h)?;
    let result = run_pipeline(h, &cfg.pipeline)?;
    let p = result.p0_prime.clone();
    let l = result.lattice.clone();
    let (verdict, evidence) = match is_soluble(h, &p, &l)? {
        None => (Verdict::No, Evidence::InsolublePair { partition: p, lattice: l }),
        Some(solution) => {
            let parity = if h.n().is_multiple_of(h.k()) { in_hnk(h)? } else { None };
            match parity {
                Some(bip) => (Verdict::No, Evidence::ParityBipartition { partition: bip }),
                None => (
                    Verdict::Yes,
                    Evidence::SolublePair {
                        partition: p,
                        lattice: l,
                        solution,
                    },
                ),
            }
        }
    };
    Ok(Decision {
        verdict,
        method: Method::Slow,
        evidence,
        validity: cfg.validity(h.n()),
        nodes: 0,
        pipeline: Some(result),
    })
}

/// No perfect matching exactly when an `s`-certificate exists.
pub fn decide_fast(h: &Hypergraph, cfg: &DecideConfig) -> Result<Decision, DecisionError> {
    check_codegree(h)?;
    let s = cfg.certificate.s.unwrap_or_else(|| default_certificate_size(h.k())).min(h.n());
    let (outcome, stats) = has_certificate_traced(h, &cfg.certificate);
    let (verdict, evidence) = match outcome {
        Outcome::Yes(c) => (Verdict::No, Evidence::Certificate { certificate: c }),
        Outcome::No => (
            Verdict::Yes,
            Evidence::NoCertificate {
                s,
                cover_sets: stats.cover_sets,
            },
        ),
        Outcome::Unknown(e) => (Verdict::Unknown, Evidence::BudgetExhausted { budget: e.budget }),
    };
    Ok(Decision {
        verdict,
        method: Method::Fast,
        evidence,
        validity: cfg.validity(h.n()),
        nodes: stats.nodes,
        pipeline: None,
    })
}

pub fn decide(h: &Hypergraph, method: Method, cfg: &DecideConfig) -> Result<Decision, DecisionError> {
    match method {
        Method::Brute => Ok(decide_brute(h, cfg)),
        Method::Slow => decide_slow(h, cfg),
        Method::Fast => decide_fast(h, cfg),
    }
}
