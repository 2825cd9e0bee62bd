//! Extremal constructions and seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hypergraph::{Hypergraph, HypergraphError, Result};
use crate::vertex_set::VertexSet;

/// Bumped whenever `random_dense` would produce different output for the
/// same arguments.
pub const GENERATOR_VERSION: u32 = 1;

/// Edge probability used by [`random_dense`] before codegree repair.
pub const DEFAULT_DENSITY: f64 = 0.25;

fn all_k_sets(n: usize, k: usize) -> impl Iterator<Item = VertexSet> {
    VertexSet::full(n).subsets_of_size(k)
}

/// The complete k-graph on `n` vertices.
pub fn complete(n: usize, k: usize) -> Result<Hypergraph> {
    Hypergraph::from_edge_sets(n, k, all_k_sets(n, k))
}

/// All k-sets meeting the barrier set `{0, ..., s-1}`.
///
/// Matchings are capped at `s` edges. With `s >= n/k` the construction no
/// longer blocks perfect matchings; that is logged, not rejected.
pub fn space_barrier(n: usize, k: usize, s: usize) -> Result<Hypergraph> {
    if s > n {
        return Err(HypergraphError::BadParameters(format!(
            "barrier size {s} exceeds n = {n}"
        )));
    }
    if s * k >= n {
        log::warn!("space barrier with s = {s} >= n/k = {n}/{k}; perfect matchings are not excluded");
    }
    let barrier = VertexSet::full(s);
    Hypergraph::from_edge_sets(n, k, all_k_sets(n, k).filter(|e| e.intersects(barrier)))
}

fn parity_barrier(n: usize, k: usize, x: usize, odd: bool) -> Result<Hypergraph> {
    if x > n {
        return Err(HypergraphError::BadParameters(format!(
            "|X| = {x} exceeds n = {n}"
        )));
    }
    let xs = VertexSet::full(x);
    Hypergraph::from_edge_sets(
        n,
        k,
        all_k_sets(n, k).filter(|e| (e.intersection(xs).len() % 2 == 1) == odd),
    )
}

/// All k-sets meeting `X = {0, ..., x-1}` in an even number of vertices.
pub fn parity_barrier_even(n: usize, k: usize, x: usize) -> Result<Hypergraph> {
    parity_barrier(n, k, x, false)
}

/// All k-sets meeting `X = {0, ..., x-1}` in an odd number of vertices.
pub fn parity_barrier_odd(n: usize, k: usize, x: usize) -> Result<Hypergraph> {
    parity_barrier(n, k, x, true)
}

/// Part layout of [`kkm_construction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KkmLayout {
    pub parts: [VertexSet; 3],
    /// The distinguished vertex of the second part.
    pub x: usize,
}

/// Parts of sizes `n/3 - 2`, `n/3`, `n/3 + 2` laid out consecutively.
pub fn kkm_layout(n: usize) -> Result<KkmLayout> {
    if n == 0 || !n.is_multiple_of(12) {
        return Err(HypergraphError::BadParameters(format!(
            "n = {n} must be a positive multiple of 12"
        )));
    }
    let a = n / 3 - 2;
    let b = a + n / 3;
    Ok(KkmLayout {
        parts: [VertexSet::range(0, a), VertexSet::range(a, b), VertexSet::range(b, n)],
        x: a,
    })
}

/// The 4-graph whose edges have index vector (3,0,1), (0,3,1), (0,0,4),
/// (2,2,0) or (1,1,2) over the three parts of [`kkm_layout`], plus the
/// (0,1,3) edges through the distinguished vertex.
///
/// It has `i(V)` in its edge lattice yet no perfect matching.
pub fn kkm_construction(n: usize) -> Result<Hypergraph> {
    let layout = kkm_layout(n)?;
    let [p1, p2, p3] = layout.parts;
    let allowed = [[3, 0, 1], [0, 3, 1], [0, 0, 4], [2, 2, 0], [1, 1, 2]];
    let edges = all_k_sets(n, 4).filter(|e| {
        let idx = [
            e.intersection(p1).len(),
            e.intersection(p2).len(),
            e.intersection(p3).len(),
        ];
        allowed.contains(&idx) || (idx == [0, 1, 3] && e.contains(layout.x))
    });
    Hypergraph::from_edge_sets(n, 4, edges)
}

/// Seeded random k-graph with minimum codegree at least `target_codegree`.
///
/// Uses [`DEFAULT_DENSITY`] for the initial edge probability; see
/// [`random_dense_with_density`].
pub fn random_dense(n: usize, k: usize, target_codegree: usize, seed: u64) -> Result<Hypergraph> {
    random_dense_with_density(n, k, target_codegree, DEFAULT_DENSITY, seed)
}

/// Each k-set is first kept with probability `density`; then every
/// `(k-1)`-set below the target codegree gets random extra completions until
/// it reaches the target. Output depends only on the arguments and
/// [`GENERATOR_VERSION`].
pub fn random_dense_with_density(
    n: usize,
    k: usize,
    target_codegree: usize,
    density: f64,
    seed: u64,
) -> Result<Hypergraph> {
    if k < 2 {
        return Err(HypergraphError::BadUniformity(k));
    }
    if k > n || target_codegree > n - k + 1 {
        return Err(HypergraphError::BadParameters(format!(
            "target codegree {target_codegree} unreachable with n = {n}, k = {k}"
        )));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(HypergraphError::BadParameters(format!(
            "density {density} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<VertexSet> = all_k_sets(n, k)
        .filter(|_| rng.random_bool(density))
        .collect();
    let mut graph = Hypergraph::from_edge_sets(n, k, edges.iter().copied())?;

    const MAX_PASSES: usize = 4;
    for _ in 0..MAX_PASSES {
        if graph.min_codegree()? >= target_codegree {
            return Ok(graph);
        }
        for s in VertexSet::full(n).subsets_of_size(k - 1) {
            let link = graph.link(s);
            if link.len() >= target_codegree {
                continue;
            }
            let mut candidates: Vec<usize> = VertexSet::full(n)
                .difference(s)
                .difference(link)
                .to_vec();
            candidates.shuffle(&mut rng);
            let missing = target_codegree - link.len();
            edges.extend(candidates.into_iter().take(missing).map(|v| s.with(v)));
        }
        graph = Hypergraph::from_edge_sets(n, k, edges.iter().copied())?;
    }
    if graph.min_codegree()? >= target_codegree {
        Ok(graph)
    } else {
        Err(HypergraphError::GeneratorBudget {
            target: target_codegree,
            attempts: MAX_PASSES,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn complete_graph_codegree() {
        for n in 3..=10 {
            for k in 3..=n {
                let h = complete(n, k).unwrap();
                assert_eq!(h.min_codegree().unwrap(), n - k + 1, "n={n} k={k}");
            }
        }
        assert_eq!(complete(9, 3).unwrap().edge_count(), 84);
        let k5 = complete(5, 3).unwrap();
        assert_eq!(k5.degree_of_set(set(&[0, 1])).unwrap(), 3);
    }

    #[test]
    fn space_barrier_shape() {
        assert_eq!(space_barrier(6, 3, 1).unwrap().edge_count(), 10);
        assert_eq!(space_barrier(9, 3, 0).unwrap().edge_count(), 0);
        let h = space_barrier(9, 3, 2).unwrap();
        assert_eq!(h.min_codegree().unwrap(), 2);
        // two vertices outside the barrier extend only through barrier vertices
        assert_eq!(h.degree_of_set(set(&[4, 7])).unwrap(), 2);
        assert_eq!(h.induced(VertexSet::range(2, 9)).graph.edge_count(), 0);
    }

    #[test]
    fn parity_barriers() {
        assert_eq!(parity_barrier_even(7, 3, 0).unwrap(), complete(7, 3).unwrap());
        let odd = parity_barrier_odd(9, 3, 2).unwrap();
        let x = VertexSet::full(2);
        assert!(odd.edges().iter().all(|e| e.intersection(x).len() == 1));
        assert_eq!(odd.edge_count(), 2 * 21);
    }

    #[test]
    fn kkm_layout_sizes() {
        let layout = kkm_layout(12).unwrap();
        let sizes: Vec<usize> = layout.parts.iter().map(|p| p.len()).collect();
        assert_eq!(sizes, vec![2, 4, 6]);
        assert!(layout.parts[1].contains(layout.x));
        assert!(kkm_construction(10).is_err());
        let h = kkm_construction(12).unwrap();
        assert_eq!(h.k(), 4);
        assert_eq!(h.min_codegree().unwrap(), 0);
    }

    #[test]
    fn kkm_codegree_formula_at_24() {
        // n/3 - 4 for the construction
        assert_eq!(kkm_construction(24).unwrap().min_codegree().unwrap(), 4);
    }

    #[test]
    fn random_dense_is_reproducible() {
        let a = random_dense(9, 3, 3, 1).unwrap();
        let b = random_dense(9, 3, 3, 1).unwrap();
        assert_eq!(a, b);
        assert!(a.min_codegree().unwrap() >= 3);
        let c = random_dense(9, 3, 3, 2).unwrap();
        assert_ne!(a, c);
        let free = random_dense(8, 3, 0, 5).unwrap();
        assert!(free.edge_count() > 0);
        assert!(random_dense(5, 3, 4, 0).is_err());
    }
}
