//! Reachability between vertices and the partition pipeline that turns a
//! dense k-graph into a full pair `(P0', L^mu)`.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::fraction::{power, Fraction};
use crate::hypergraph::{Hypergraph, HypergraphError};
use crate::lattice::{
    edge_index_counts, is_full_lattice, robust_from_counts, EdgeLattice, IndexVector, Partition,
};
use crate::oracle::{BudgetExhausted, MatchingOracle, OracleConfig};
use crate::vertex_set::{binomial, VertexSet};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(
        "codegree hypothesis fails: min codegree {codegree} < (1/k - gamma) n with n = {n}, k = {k}"
    )]
    Hypothesis { codegree: usize, n: usize, k: usize },
    #[error(transparent)]
    Graph(#[from] HypergraphError),
    #[error(transparent)]
    Budget(#[from] BudgetExhausted),
}

/// Constants of the partition pipeline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub gamma: Fraction,
    pub alpha: Fraction,
    /// `beta_ladder[i]` is the density threshold for order `2^i`.
    pub beta_ladder: Vec<Fraction>,
    pub mu0: Fraction,
    /// Largest reachability order computed; levels with `2^i > t_cap` are skipped.
    pub t_cap: usize,
    /// Below this many vertices, structural guarantees are reported as
    /// asymptotic rather than asserted.
    pub validity_floor: usize,
    /// Reject inputs below the pipeline's codegree hypothesis.
    pub check_hypothesis: bool,
    /// Random sets `D` drawn for the lattice-lifting check.
    pub lift_samples: usize,
    pub oracle: OracleConfig,
}

pub const DEFAULT_LADDER_LEN: usize = 8;

/// `0.05 * 4^-i` for `i < len`.
pub fn default_ladder(len: usize) -> Vec<Fraction> {
    (0..len)
        .map(|i| Fraction::new(1, 20).div_int(4u64.pow(i as u32)))
        .collect()
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            gamma: Fraction::new(1, 20),
            alpha: Fraction::new(1, 100),
            beta_ladder: default_ladder(DEFAULT_LADDER_LEN),
            mu0: Fraction::new(1, 100),
            t_cap: 2,
            validity_floor: 0,
            check_hypothesis: true,
            lift_samples: 64,
            oracle: OracleConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::Config(m));
        for (name, f) in [("gamma", &self.gamma), ("alpha", &self.alpha), ("mu0", &self.mu0)] {
            if !f.in_open_unit_interval() {
                return bad(format!("{name} = {f} must lie in (0, 1)"));
            }
        }
        if self.beta_ladder.is_empty() {
            return bad("beta ladder is empty".into());
        }
        for (i, b) in self.beta_ladder.iter().enumerate() {
            if !b.in_open_unit_interval() {
                return bad(format!("beta_{i} = {b} must lie in (0, 1)"));
            }
            if i > 0 && *b >= self.beta_ladder[i - 1] {
                return bad("beta ladder must be strictly decreasing".into());
            }
        }
        if self.t_cap == 0 {
            return bad("t_cap must be at least 1".into());
        }
        Ok(())
    }

    /// Number of reachability levels computed for uniformity `k`.
    pub fn levels(&self, k: usize) -> usize {
        let mut levels = 0;
        while levels < levels_wanted(k) && levels < self.beta_ladder.len() && (1usize << levels) <= self.t_cap {
            levels += 1;
        }
        levels.max(1)
    }

    pub fn epsilon(&self, k: usize) -> Fraction {
        self.alpha.div_int(k as u64)
    }
}

/// Levels wanted before the cap; with `gamma` small this is `k`.
fn levels_wanted(k: usize) -> usize {
    k
}

/// Sets `S` of size `k-1` with both `S + u` and `S + v` edges.
pub fn common_neighborhood_count(h: &Hypergraph, u: usize, v: usize) -> u128 {
    assert_ne!(u, v, "common neighbourhood needs distinct vertices");
    let mut count = 0;
    for &i in h.incident(u) {
        let s = h.edges()[i].without(u);
        if !s.contains(v) && h.has_edge(s.with(v)) {
            count += 1;
        }
    }
    count
}

/// Exact number of `(ik-1)`-sets reachable for `u` and `v` at order `i`.
pub fn reachable_set_count(
    oracle: &mut MatchingOracle<'_>,
    u: usize,
    v: usize,
    order: usize,
) -> Result<u128, BudgetExhausted> {
    let h = oracle.graph();
    let m = order * h.k() - 1;
    if order == 1 {
        return Ok(common_neighborhood_count(h, u, v));
    }
    let rest = h.vertices().without(u).without(v);
    let mut count = 0;
    for s in rest.subsets_of_size(m) {
        if oracle.has_pm_within(s.with(u))? && oracle.has_pm_within(s.with(v))? {
            count += 1;
        }
    }
    Ok(count)
}

/// `(beta, order)`-reachability of `u` and `v`.
pub fn reachable_pair(
    h: &Hypergraph,
    u: usize,
    v: usize,
    order: usize,
    beta: &Fraction,
) -> Result<bool, PipelineError> {
    if u == v || order == 0 || order * h.k() > h.n().saturating_sub(1) {
        return Err(PipelineError::Config(format!(
            "reachability of order {order} undefined for u = {u}, v = {v}, n = {}",
            h.n()
        )));
    }
    let mut oracle = MatchingOracle::new(h);
    let count = reachable_set_count(&mut oracle, u, v, order)?;
    Ok(beta.is_met_by(count, &power(h.n(), order * h.k() - 1)))
}

/// Reachability relations at orders `1, 2, 4, ...`, closed upward so that a
/// pair reachable at one level is reachable at every later level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reachability {
    n: usize,
    /// `raw[i][u]`: vertices meeting the level-`i` threshold with `u`.
    raw: Vec<Vec<VertexSet>>,
    closed: Vec<Vec<VertexSet>>,
    /// Levels whose threshold exceeds the number of candidate sets.
    pub unattainable: Vec<bool>,
}

impl Reachability {
    pub fn levels(&self) -> usize {
        self.raw.len()
    }

    /// Vertices reachable from `v` at `level` after closure.
    pub fn neighbours(&self, level: usize, v: usize) -> VertexSet {
        self.closed[level][v]
    }

    pub fn raw_neighbours(&self, level: usize, v: usize) -> VertexSet {
        self.raw[level][v]
    }

    pub fn reachable(&self, level: usize, u: usize, v: usize) -> bool {
        self.closed[level][u].contains(v)
    }
}

pub fn compute_reachability(
    h: &Hypergraph,
    cfg: &PipelineConfig,
) -> Result<Reachability, PipelineError> {
    let n = h.n();
    let k = h.k();
    let levels = cfg.levels(k);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut raw = Vec::with_capacity(levels);
    let mut unattainable = Vec::with_capacity(levels);
    for level in 0..levels {
        let order = 1usize << level;
        let m = order * k - 1;
        let mut rows = vec![VertexSet::EMPTY; n];
        let beta = &cfg.beta_ladder[level];
        let scale = power(n, m);
        // threshold above the number of candidate sets: nothing can qualify
        let impossible = m + 2 > n || !beta.is_met_by(binomial((n - 2) as u64, m as u64), &scale);
        unattainable.push(impossible);
        if !impossible {
            let hits: Vec<(usize, usize)> = pairs
                .par_iter()
                .map_init(
                    || MatchingOracle::with_config(h, cfg.oracle),
                    |oracle, &(u, v)| {
                        reachable_set_count(oracle, u, v, order)
                            .map(|c| beta.is_met_by(c, &scale).then_some((u, v)))
                    },
                )
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .flatten()
                .collect();
            for (u, v) in hits {
                rows[u].insert(v);
                rows[v].insert(u);
            }
        }
        raw.push(rows);
    }
    let mut closed = raw.clone();
    for level in 1..levels {
        let (lower, upper) = closed.split_at_mut(level);
        for (row, below) in upper[0].iter_mut().zip(&lower[level - 1]) {
            *row = row.union(*below);
        }
    }
    Ok(Reachability {
        n,
        raw,
        closed,
        unattainable,
    })
}

fn hypothesis_holds(h: &Hypergraph, gamma: &Fraction) -> Result<(bool, usize), PipelineError> {
    let codegree = h.min_codegree()?;
    // codegree >= (1/k - gamma) n  <=>  k * codegree + gamma k n >= n
    let lhs = Fraction::new((h.k() * codegree) as u64, 1);
    let rhs = Fraction::new(h.n() as u64, 1).saturating_sub(&gamma.mul_int((h.k() * h.n()) as u64));
    Ok((lhs >= rhs, codegree))
}

/// Diagnostics from building `P0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedPartition {
    pub partition: Partition,
    /// Witness vertices `v_1 < ... < v_d`; empty for the trivial partition.
    pub witnesses: Vec<usize>,
    pub check_level: Option<usize>,
    pub part_level: Option<usize>,
    /// Vertices of `U_0` and the part each was moved to.
    pub reassigned: Vec<(usize, usize)>,
    /// Reassignments that found no part meeting the `epsilon n` bound.
    pub fallback_reassignments: usize,
}

/// Builds `P0` from the reachability relation.
pub fn closed_partition(h: &Hypergraph, cfg: &PipelineConfig) -> Result<Partition, PipelineError> {
    let reach = compute_reachability(h, cfg)?;
    Ok(closed_partition_from(h, cfg, &reach)?.partition)
}

pub fn closed_partition_from(
    h: &Hypergraph,
    cfg: &PipelineConfig,
    reach: &Reachability,
) -> Result<ClosedPartition, PipelineError> {
    cfg.validate()?;
    let n = h.n();
    let k = h.k();
    if cfg.check_hypothesis {
        let (ok, codegree) = hypothesis_holds(h, &cfg.gamma)?;
        if !ok {
            return Err(PipelineError::Hypothesis { codegree, n, k });
        }
    }
    let trivial = ClosedPartition {
        partition: Partition::trivial(n),
        witnesses: Vec::new(),
        check_level: None,
        part_level: None,
        reassigned: Vec::new(),
        fallback_reassignments: 0,
    };
    let top = reach.levels() - 1;
    let all = VertexSet::full(n);
    if (0..n).all(|v| reach.neighbours(top, v).with(v) == all) {
        return Ok(trivial);
    }
    let c = levels_wanted(k);
    let clamp = |l: usize| l.min(top);

    let mut found = None;
    for d in (2..=k.min(n)).rev() {
        let level = clamp(c + 1 - d);
        if let Some(w) = independent_tuple(reach, level, d) {
            found = Some((d, w));
            break;
        }
    }
    let Some((d, witnesses)) = found else {
        return Ok(trivial);
    };
    let part_level = clamp(c - d);
    let hoods: Vec<VertexSet> = witnesses
        .iter()
        .map(|&v| reach.neighbours(part_level, v).with(v))
        .collect();
    let mut parts: Vec<VertexSet> = (0..d)
        .map(|i| {
            let others = (0..d)
                .filter(|&j| j != i)
                .fold(VertexSet::EMPTY, |acc, j| acc.union(reach.neighbours(part_level, witnesses[j])));
            hoods[i].difference(others)
        })
        .collect();
    let placed = parts.iter().fold(VertexSet::EMPTY, |a, &p| a.union(p));
    let u0 = all.difference(placed);
    let eps_n = cfg.epsilon(k).mul_int(n as u64);
    let base = parts.clone();
    let mut reassigned = Vec::new();
    let mut fallback = 0;
    for v in u0.iter() {
        let counts: Vec<usize> = base
            .iter()
            .map(|p| reach.neighbours(0, v).intersection(*p).len())
            .collect();
        let target = match counts.iter().position(|&c| eps_n.le_int(c as u128)) {
            Some(i) => i,
            None => {
                fallback += 1;
                let best = *counts.iter().max().expect("d >= 2");
                counts.iter().position(|&c| c == best).expect("max exists")
            }
        };
        parts[target].insert(v);
        reassigned.push((v, target));
    }
    let partition = Partition::new(n, parts).expect("parts are disjoint, covering and non-empty");
    Ok(ClosedPartition {
        partition,
        witnesses,
        check_level: Some(clamp(c + 1 - d)),
        part_level: Some(part_level),
        reassigned,
        fallback_reassignments: fallback,
    })
}

/// Lexicographically least `d` vertices, pairwise non-reachable at `level`.
fn independent_tuple(reach: &Reachability, level: usize, d: usize) -> Option<Vec<usize>> {
    fn rec(reach: &Reachability, level: usize, d: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == d {
            return true;
        }
        for v in start..reach.n {
            if chosen.iter().all(|&u| !reach.reachable(level, u, v)) {
                chosen.push(v);
                if rec(reach, level, d, v + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(d);
    rec(reach, level, d, 0, &mut chosen).then_some(chosen)
}

/// Outcome of the robustness search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuSelection {
    pub mu: Fraction,
    pub iterations: usize,
    pub factor: u64,
}

pub fn select_mu(h: &Hypergraph, p0: &Partition, mu0: &Fraction) -> Fraction {
    select_mu_traced(h, p0, mu0).mu
}

pub fn select_mu_traced(h: &Hypergraph, p0: &Partition, mu0: &Fraction) -> MuSelection {
    let k = h.k();
    let d = p0.len();
    let factor = ((k + 1) as u64).pow(d as u32 - 1);
    let counts = edge_index_counts(h, p0);
    let scale = power(h.n(), k);
    let limit = binomial((k + d - 1) as u64, k as u64) as usize;
    let mut mu = mu0.clone();
    let mut iterations = 0;
    while iterations < limit {
        let loose = mu.div_int(factor);
        if robust_from_counts(&counts, &mu, &scale) == robust_from_counts(&counts, &loose, &scale) {
            break;
        }
        mu = loose;
        iterations += 1;
    }
    MuSelection {
        mu,
        iterations,
        factor,
    }
}

/// `L^mu_P(H)` together with its generating robust set.
pub fn robust_lattice(h: &Hypergraph, p: &Partition, mu: &Fraction) -> (BTreeSet<IndexVector>, EdgeLattice) {
    let set = crate::lattice::robust_index_set(h, p, mu);
    let lattice = EdgeLattice::from_generators(p.len(), set.iter().cloned()).expect("dimensions agree");
    (set, lattice)
}

/// Merges parts along transferrals of the robust lattice until none remain.
pub fn merge_transferrals(h: &Hypergraph, p0: &Partition, mu: &Fraction) -> (Partition, Vec<(usize, usize)>) {
    let mut current = p0.clone();
    let mut trace = Vec::new();
    loop {
        let (_, lattice) = robust_lattice(h, &current, mu);
        match lattice.find_transferral() {
            Some((i, j)) if current.len() > 1 => {
                trace.push((i, j));
                current = current.merge(i, j);
            }
            _ => return (current, trace),
        }
    }
}

/// Minimum 1-reachable neighbourhood against its asymptotic lower bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeighbourhoodStatistic {
    pub min_size: usize,
    /// `(1/k - gamma - 2 k! alpha) n`, clamped at zero.
    pub bound: Fraction,
    pub holds: bool,
}

fn neighbourhood_statistic(h: &Hypergraph, cfg: &PipelineConfig) -> NeighbourhoodStatistic {
    let n = h.n();
    let k = h.k();
    let scale = power(n, k - 1);
    let min_size = (0..n)
        .map(|u| {
            (0..n)
                .filter(|&v| v != u && cfg.alpha.is_met_by(common_neighborhood_count(h, u, v), &scale))
                .count()
        })
        .min()
        .unwrap_or(0);
    let fact: u64 = (1..=k as u64).product();
    let bound = Fraction::new(1, k as u64)
        .saturating_sub(&cfg.gamma)
        .saturating_sub(&cfg.alpha.mul_int(2 * fact))
        .mul_int(n as u64);
    let holds = bound.le_int(min_size as u128);
    NeighbourhoodStatistic {
        min_size,
        bound,
        holds,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    /// `n` is at least the validity floor.
    Valid,
    /// Below the floor; structural guarantees are asymptotic only.
    Asymptotic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionPipelineResult {
    pub p0: Partition,
    pub p0_prime: Partition,
    pub mu: Fraction,
    pub mu_iterations: usize,
    pub robust_set: BTreeSet<IndexVector>,
    pub lattice: EdgeLattice,
    pub merge_trace: Vec<(usize, usize)>,
    pub witnesses: Vec<usize>,
    pub fallback_reassignments: usize,
    pub levels: usize,
    pub t_cap: usize,
    pub unattainable_levels: Vec<bool>,
    pub neighbourhood: NeighbourhoodStatistic,
    pub lift_checks: usize,
    /// Structural postconditions that failed on this input.
    pub violations: Vec<String>,
    pub validity: Validity,
}

impl PartitionPipelineResult {
    pub fn is_full_pair(&self, k: usize) -> bool {
        self.p0_prime.len() == self.lattice.dim() && is_full_lattice(&self.lattice, k)
    }
}

pub fn run_pipeline(h: &Hypergraph, cfg: &PipelineConfig) -> Result<PartitionPipelineResult, PipelineError> {
    cfg.validate()?;
    let n = h.n();
    let k = h.k();
    let reach = compute_reachability(h, cfg)?;
    let closed = closed_partition_from(h, cfg, &reach)?;
    let p0 = closed.partition;
    let selection = select_mu_traced(h, &p0, &cfg.mu0);
    let mu = selection.mu;
    let (p0_prime, merge_trace) = merge_transferrals(h, &p0, &mu);
    let (robust_set, lattice) = robust_lattice(h, &p0_prime, &mu);

    let mut violations = Vec::new();
    if !p0.refines(&p0_prime) {
        violations.push("P0 does not refine P0'".to_string());
    }
    if !is_full_lattice(&lattice, k) {
        violations.push(format!("robust lattice of P0' is not full: {:?}", lattice.basis()));
    }
    let floor = Fraction::new(1, k as u64)
        .saturating_sub(&cfg.gamma.mul_int(2))
        .mul_int(n as u64);
    for (name, p) in [("P0", &p0), ("P0'", &p0_prime)] {
        for (i, part) in p.parts().iter().enumerate() {
            if !floor.le_int(part.len() as u128) {
                violations.push(format!("part {i} of {name} has {} < {floor} vertices", part.len()));
            }
        }
    }
    let lift_checks = lift_violations(h, &p0, &p0_prime, &mu, &lattice, cfg.lift_samples, &mut violations);
    let neighbourhood = neighbourhood_statistic(h, cfg);
    if !neighbourhood.holds {
        log::info!(
            "1-reachable neighbourhood {} below bound {}",
            neighbourhood.min_size,
            neighbourhood.bound
        );
    }
    let validity = if n >= cfg.validity_floor {
        Validity::Valid
    } else {
        Validity::Asymptotic
    };
    for v in &violations {
        match validity {
            Validity::Valid => log::warn!("pipeline postcondition violated: {v}"),
            Validity::Asymptotic => log::info!("pipeline postcondition violated below floor: {v}"),
        }
    }
    Ok(PartitionPipelineResult {
        p0,
        p0_prime,
        mu,
        mu_iterations: selection.iterations,
        robust_set,
        lattice,
        merge_trace,
        witnesses: closed.witnesses,
        fallback_reassignments: closed.fallback_reassignments,
        levels: reach.levels(),
        t_cap: cfg.t_cap,
        unattainable_levels: reach.unattainable.clone(),
        neighbourhood,
        lift_checks,
        violations,
        validity,
    })
}

/// Samples sets `D` whose `P0'` index vector is in the robust lattice and
/// checks that the `P0` index vector lies in the `P0` robust lattice.
fn lift_violations(
    h: &Hypergraph,
    p0: &Partition,
    p0_prime: &Partition,
    mu: &Fraction,
    lattice_prime: &EdgeLattice,
    samples: usize,
    violations: &mut Vec<String>,
) -> usize {
    if p0.len() == p0_prime.len() {
        return 0;
    }
    let (_, lattice0) = robust_lattice(h, p0, mu);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checked = 0;
    let mut failures = BTreeMap::new();
    for _ in 0..samples * 8 {
        if checked == samples {
            break;
        }
        let d: VertexSet = (0..h.n()).filter(|_| rng.random_bool(0.5)).collect();
        if !lattice_prime.contains_slice(&p0_prime.index_vector(d).0) {
            continue;
        }
        checked += 1;
        let lifted = p0.index_vector(d);
        if !lattice0.contains_slice(&lifted.0) {
            failures.entry(lifted).or_insert(d);
        }
    }
    for (v, d) in failures {
        violations.push(format!("D = {:?} lifts to {v:?} outside the P0 robust lattice", d.to_vec()));
    }
    checked
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, parity_barrier_even};

    fn two_cliques(half: usize, k: usize) -> Hypergraph {
        let a = VertexSet::full(half);
        let b = VertexSet::range(half, 2 * half);
        let edges = a.subsets_of_size(k).chain(b.subsets_of_size(k));
        Hypergraph::from_edge_sets(2 * half, k, edges).unwrap()
    }

    #[test]
    fn common_neighbourhoods() {
        let h = complete(8, 3).unwrap();
        assert_eq!(common_neighborhood_count(&h, 0, 5), binomial(6, 2));
        let single = Hypergraph::build(5, 3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(common_neighborhood_count(&single, 0, 3), 0);
        assert_eq!(common_neighborhood_count(&single, 0, 1), 0);

        let even = parity_barrier_even(6, 3, 2).unwrap();
        let brute = VertexSet::full(6)
            .without(0)
            .without(1)
            .subsets_of_size(2)
            .filter(|s| even.has_edge(s.with(0)) && even.has_edge(s.with(1)))
            .count() as u128;
        assert_eq!(common_neighborhood_count(&even, 0, 1), brute);
    }

    #[test]
    fn order_one_equals_common_neighbourhood() {
        let h = parity_barrier_even(8, 3, 3).unwrap();
        let mut oracle = MatchingOracle::new(&h);
        for (u, v) in [(0, 1), (0, 5), (4, 7)] {
            let by_pm = VertexSet::full(8)
                .without(u)
                .without(v)
                .subsets_of_size(2)
                .filter(|s| oracle.pm_on_union(*s, u).unwrap() && oracle.pm_on_union(*s, v).unwrap())
                .count() as u128;
            assert_eq!(by_pm, common_neighborhood_count(&h, u, v));
        }
    }

    #[test]
    fn reachable_pairs_basic() {
        let h = complete(9, 3).unwrap();
        let small = Fraction::new(1, 100_000);
        assert!(reachable_pair(&h, 0, 1, 1, &small).unwrap());
        assert!(reachable_pair(&h, 0, 1, 2, &small).unwrap());
        let empty = Hypergraph::build(9, 3, Vec::<Vec<usize>>::new()).unwrap();
        assert!(!reachable_pair(&empty, 0, 1, 1, &small).unwrap());
        assert!(reachable_pair(&h, 0, 0, 1, &small).is_err());
    }

    #[test]
    fn complete_graph_gives_trivial_partition() {
        let h = complete(9, 3).unwrap();
        let cfg = PipelineConfig::default();
        assert_eq!(closed_partition(&h, &cfg).unwrap(), Partition::trivial(9));
        let r = run_pipeline(&h, &cfg).unwrap();
        assert_eq!(r.p0_prime.len(), 1);
        assert_eq!(r.robust_set, [IndexVector::from([3])].into_iter().collect());
        assert!(r.is_full_pair(3));
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }

    #[test]
    fn two_components_split() {
        let h = two_cliques(10, 3);
        let cfg = PipelineConfig {
            check_hypothesis: false,
            ..PipelineConfig::default()
        };
        assert!(closed_partition(&h, &PipelineConfig::default()).is_err());
        let p = closed_partition(&h, &cfg).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.parts()[0], VertexSet::full(10));
        assert_eq!(p.parts()[1], VertexSet::range(10, 20));
    }

    #[test]
    fn parity_even_recovers_bipartition() {
        let h = parity_barrier_even(12, 3, 6).unwrap();
        let p = closed_partition(&h, &PipelineConfig::default()).unwrap();
        assert_eq!(p.len(), 2);
        let x = VertexSet::full(6);
        assert!(p.parts().contains(&x));
    }

    #[test]
    fn mu_selection_bounds() {
        let h = parity_barrier_even(12, 3, 5).unwrap();
        let p = Partition::new(12, vec![VertexSet::full(5), VertexSet::range(5, 12)]).unwrap();
        let mu0 = Fraction::new(1, 100);
        let sel = select_mu_traced(&h, &p, &mu0);
        assert!(sel.iterations <= binomial(4, 3) as usize);
        let floor = (0..binomial(4, 3)).fold(mu0.clone(), |m, _| m.div_int(sel.factor));
        assert!(sel.mu >= floor && sel.mu <= mu0);

        // every class has multiplicity 0 or far above mu0 n^k
        let k = complete(9, 3).unwrap();
        assert_eq!(select_mu(&k, &Partition::trivial(9), &mu0), mu0);
    }

    #[test]
    fn merging() {
        let h = complete(9, 3).unwrap();
        let p = Partition::new(9, vec![VertexSet::full(4), VertexSet::range(4, 9)]).unwrap();
        let (merged, trace) = merge_transferrals(&h, &p, &Fraction::new(1, 100));
        assert_eq!(merged, Partition::trivial(9));
        assert_eq!(trace, vec![(0, 1)]);

        let even = parity_barrier_even(12, 3, 5).unwrap();
        let p = Partition::new(12, vec![VertexSet::full(5), VertexSet::range(5, 12)]).unwrap();
        let (same, trace) = merge_transferrals(&even, &p, &Fraction::new(1, 1000));
        assert_eq!(same, p);
        assert!(trace.is_empty());
    }

    #[test]
    fn parity_even_pipeline() {
        let h = parity_barrier_even(12, 3, 5).unwrap();
        let r = run_pipeline(&h, &PipelineConfig::default()).unwrap();
        assert_eq!(r.p0_prime.len(), 2);
        // robust vectors are (even, odd) splits of an edge with the X side even
        let xside = r.p0_prime.parts().iter().position(|p| *p == VertexSet::full(5)).unwrap();
        assert!(r.robust_set.iter().all(|v| v.0[xside] % 2 == 0));
        assert!(r.p0.refines(&r.p0_prime));
    }

    #[test]
    fn config_validation() {
        let mut cfg = PipelineConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.beta_ladder = vec![Fraction::new(1, 10), Fraction::new(1, 5)];
        assert!(cfg.validate().is_err());
        let cfg = PipelineConfig {
            gamma: Fraction::new(0, 1),
            ..PipelineConfig::default()
        };
        assert!(cfg.validate().is_err());
        assert_eq!(PipelineConfig::default().levels(3), 2);
        let wide = PipelineConfig {
            t_cap: 4,
            ..PipelineConfig::default()
        };
        assert_eq!(wide.levels(3), 3);
        assert_eq!(wide.levels(4), 3);
    }
}
