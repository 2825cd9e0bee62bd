#![allow(dead_code)]

use hypermatch::generators::{
    complete, parity_barrier_even, parity_barrier_odd, random_dense_with_density, space_barrier,
};
use hypermatch::{Hypergraph, VertexSet};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Instance {
    pub name: String,
    pub graph: Hypergraph,
}

impl Instance {
    fn new(name: String, graph: Hypergraph) -> Self {
        Instance { name, graph }
    }
}

// Plain reference implementations, sharing nothing with the library search.

fn naive_pm_rec(h: &Hypergraph, left: VertexSet) -> bool {
    let Some(v) = left.iter().next() else {
        return true;
    };
    h.edges()
        .iter()
        .filter(|e| e.contains(v) && e.is_subset(left))
        .any(|&e| naive_pm_rec(h, left.difference(e)))
}

pub fn naive_has_pm_within(h: &Hypergraph, within: VertexSet) -> bool {
    within.len().is_multiple_of(h.k()) && naive_pm_rec(h, within)
}

pub fn naive_has_pm(h: &Hypergraph) -> bool {
    naive_has_pm_within(h, h.vertices())
}

fn naive_max_rec(h: &Hypergraph, from: usize, used: VertexSet) -> usize {
    let mut best = 0;
    for (i, &e) in h.edges().iter().enumerate().skip(from) {
        if !e.intersects(used) {
            best = best.max(1 + naive_max_rec(h, i + 1, used.union(e)));
        }
    }
    best
}

pub fn naive_max_matching(h: &Hypergraph) -> usize {
    naive_max_rec(h, 0, VertexSet::EMPTY)
}

pub fn naive_min_codegree(h: &Hypergraph) -> usize {
    h.vertices()
        .subsets_of_size(h.k() - 1)
        .map(|s| {
            h.vertices()
                .difference(s)
                .iter()
                .filter(|&v| h.has_edge(s.with(v)))
                .count()
        })
        .min()
        .unwrap_or(0)
}

/// Extremal constructions for k = 3 and 9 <= n <= 12.
pub fn constructions() -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 9..=12 {
        out.push(Instance::new(format!("complete({n})"), complete(n, 3).unwrap()));
        for s in 0..n.div_ceil(3) {
            out.push(Instance::new(
                format!("space({n},{s})"),
                space_barrier(n, 3, s).unwrap(),
            ));
        }
        for x in 0..=n {
            out.push(Instance::new(
                format!("parity_even({n},{x})"),
                parity_barrier_even(n, 3, x).unwrap(),
            ));
            out.push(Instance::new(
                format!("parity_odd({n},{x})"),
                parity_barrier_odd(n, 3, x).unwrap(),
            ));
        }
    }
    out
}

/// `count` seeded random 3-graphs on 9..=12 vertices with codegree at least
/// `ceil(n/3)`.
pub fn random_suite(count: usize) -> Vec<Instance> {
    const DENSITIES: [f64; 5] = [0.0, 0.05, 0.1, 0.2, 0.3];
    (0..count)
        .map(|i| {
            let n = 9 + i % 4;
            let density = DENSITIES[(i / 4) % DENSITIES.len()];
            let seed = i as u64;
            Instance::new(
                format!("random(n={n},p={density},seed={seed})"),
                random_dense_with_density(n, 3, n.div_ceil(3), density, seed).unwrap(),
            )
        })
        .collect()
}

/// Parity barriers with a few edges of the wrong parity added and a few
/// edges removed, keeping codegree at least n/3.
pub fn perturbed_barriers() -> Vec<Instance> {
    let mut out = Vec::new();
    for (n, x, even) in [(12usize, 5usize, true), (12, 7, false), (12, 6, true), (9, 3, true)] {
        let base = if even {
            parity_barrier_even(n, 3, x).unwrap()
        } else {
            parity_barrier_odd(n, 3, x).unwrap()
        };
        let off: Vec<VertexSet> = VertexSet::full(n)
            .subsets_of_size(3)
            .filter(|e| !base.has_edge(*e))
            .collect();
        for extra in [0usize, 1, 2, 3, 4, 6, 10] {
            for seed in 0..10u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut o = off.clone();
                o.shuffle(&mut rng);
                let h0 = base.with_edges(o.into_iter().take(extra)).unwrap();
                let mut es: Vec<VertexSet> = h0.edges().to_vec();
                es.shuffle(&mut rng);
                let mut h = h0;
                for e in es.into_iter().take(seed as usize * 3) {
                    let cand = Hypergraph::from_edge_sets(
                        n,
                        3,
                        h.edges().iter().copied().filter(|f| *f != e),
                    )
                    .unwrap();
                    if cand.min_codegree().unwrap() * 3 >= n {
                        h = cand;
                    }
                }
                if h.min_codegree().unwrap() * 3 < n {
                    continue;
                }
                let kind = if even { "even" } else { "odd" };
                out.push(Instance::new(
                    format!("perturbed_{kind}({n},{x},+{extra},seed={seed})"),
                    h,
                ));
            }
        }
    }
    out
}

pub fn meets_hypothesis(h: &Hypergraph) -> bool {
    h.min_codegree().unwrap() * h.k() >= h.n()
}
