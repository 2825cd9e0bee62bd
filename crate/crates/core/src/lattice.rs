//! Ordered partitions, index vectors and integer edge-lattices.
//!
//! Lattices are stored in Hermite normal form: an echelon basis with positive
//! pivots and every entry above a pivot reduced into `[0, pivot)`. The form is
//! unique for a given subgroup of `Z^d`, so lattice equality is basis equality
//! and membership is exact back-substitution. All arithmetic is integral.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::fraction::{power, Fraction};
use crate::hypergraph::Hypergraph;
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("parts {0} and {1} overlap")]
    OverlappingParts(usize, usize),
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("parts do not cover the {0} vertices")]
    NotCovering(usize),
    #[error("lattice is not contained in L_max for k = {0}")]
    NotInMaxLattice(usize),
    #[error("not a full pair: {0}")]
    NotFullPair(String),
    #[error("coefficient search space of {0} combinations is too large")]
    SearchTooLarge(u128),
}

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

/// An ordered partition of `0..n` into non-empty parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    parts: Vec<VertexSet>,
}

impl Partition {
    pub fn new(n: usize, parts: Vec<VertexSet>) -> Result<Self, LatticeError> {
        let mut seen = VertexSet::EMPTY;
        for (i, &p) in parts.iter().enumerate() {
            if p.is_empty() {
                return Err(LatticeError::EmptyPart(i));
            }
            if p.intersects(seen) {
                let j = parts[..i].iter().position(|q| q.intersects(p)).unwrap_or(0);
                return Err(LatticeError::OverlappingParts(j, i));
            }
            seen = seen.union(p);
        }
        if seen != VertexSet::full(n) {
            return Err(LatticeError::NotCovering(n));
        }
        Ok(Partition { n, parts })
    }

    /// The single-part partition `{V}`.
    pub fn trivial(n: usize) -> Self {
        assert!(n > 0, "cannot partition an empty vertex set");
        Partition {
            n,
            parts: vec![VertexSet::full(n)],
        }
    }

    /// Builds a partition from `assignment[v]` = part of `v`; every part in
    /// `0..d` must be used.
    pub fn from_assignment(assignment: &[usize], d: usize) -> Result<Self, LatticeError> {
        let mut parts = vec![VertexSet::EMPTY; d];
        for (v, &p) in assignment.iter().enumerate() {
            if p >= d {
                return Err(LatticeError::Dimension {
                    expected: d,
                    found: p + 1,
                });
            }
            parts[p].insert(v);
        }
        Partition::new(assignment.len(), parts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn part_of(&self, v: usize) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(v))
    }

    pub fn assignment(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (i, p) in self.parts.iter().enumerate() {
            for v in p.iter() {
                out[v] = i;
            }
        }
        out
    }

    /// `i_P(S)`: the number of elements of `s` in each part.
    pub fn index_vector(&self, s: VertexSet) -> IndexVector {
        IndexVector(
            self.parts
                .iter()
                .map(|p| p.intersection(s).len() as i64)
                .collect(),
        )
    }

    /// Merges part `j` into part `i` (`i < j`); later parts shift down.
    pub fn merge(&self, i: usize, j: usize) -> Partition {
        let (i, j) = (i.min(j), i.max(j));
        let mut parts = self.parts.clone();
        let absorbed = parts.remove(j);
        parts[i] = parts[i].union(absorbed);
        Partition { n: self.n, parts }
    }

    /// Whether every part of `self` lies inside a part of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.n == coarser.n
            && self
                .parts
                .iter()
                .all(|p| coarser.parts.iter().any(|q| p.is_subset(*q)))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.parts.iter())
    }
}

// ---------------------------------------------------------------------------
// Index vectors
// ---------------------------------------------------------------------------

/// An integer vector in `Z^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct IndexVector(pub Vec<i64>);

impl IndexVector {
    pub fn zero(d: usize) -> Self {
        IndexVector(vec![0; d])
    }

    /// The unit vector `u_j`.
    pub fn unit(d: usize, j: usize) -> Self {
        let mut v = vec![0; d];
        v[j] = 1;
        IndexVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Non-negative with coordinates summing to `r`.
    pub fn is_r_vector(&self, r: usize) -> bool {
        self.0.iter().all(|&x| x >= 0) && self.sum() == r as i64
    }

    pub fn scaled(&self, c: i64) -> Self {
        IndexVector(self.0.iter().map(|x| x * c).collect())
    }
}

impl fmt::Debug for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for IndexVector {
    fn from(v: Vec<i64>) -> Self {
        IndexVector(v)
    }
}

impl<const N: usize> From<[i64; N]> for IndexVector {
    fn from(v: [i64; N]) -> Self {
        IndexVector(v.to_vec())
    }
}

impl Add for &IndexVector {
    type Output = IndexVector;
    fn add(self, rhs: &IndexVector) -> IndexVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IndexVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IndexVector {
    type Output = IndexVector;
    fn sub(self, rhs: &IndexVector) -> IndexVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IndexVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IndexVector {
    type Output = IndexVector;
    fn neg(self) -> IndexVector {
        IndexVector(self.0.iter().map(|a| -a).collect())
    }
}

/// All non-negative vectors in `Z^d` with coordinate sum `r`, ordered with
/// the first coordinate descending, then the second, and so on.
pub fn r_vectors(d: usize, r: usize) -> Vec<IndexVector> {
    fn rec(d: usize, r: usize, prefix: &mut Vec<i64>, out: &mut Vec<IndexVector>) {
        if d == 1 {
            prefix.push(r as i64);
            out.push(IndexVector(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in (0..=r).rev() {
            prefix.push(first as i64);
            rec(d - 1, r - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d > 0 {
        rec(d, r, &mut Vec::with_capacity(d), &mut out);
    }
    out
}

// ---------------------------------------------------------------------------
// Index sets of hypergraphs
// ---------------------------------------------------------------------------

/// Number of edges of `h` per index vector under `p`.
pub fn edge_index_counts(h: &Hypergraph, p: &Partition) -> BTreeMap<IndexVector, u128> {
    let mut out = BTreeMap::new();
    for &e in h.edges() {
        *out.entry(p.index_vector(e)).or_insert(0) += 1;
    }
    out
}

/// `I_P(H)`: index vectors realized by at least one edge.
pub fn edge_index_set(h: &Hypergraph, p: &Partition) -> BTreeSet<IndexVector> {
    edge_index_counts(h, p).into_keys().collect()
}

/// `I_P^mu(H)`: index vectors realized by at least `mu * n^k` edges.
pub fn robust_index_set(h: &Hypergraph, p: &Partition, mu: &Fraction) -> BTreeSet<IndexVector> {
    robust_from_counts(&edge_index_counts(h, p), mu, &power(h.n(), h.k()))
}

pub(crate) fn robust_from_counts(
    counts: &BTreeMap<IndexVector, u128>,
    mu: &Fraction,
    scale: &BigUint,
) -> BTreeSet<IndexVector> {
    counts
        .iter()
        .filter(|(_, &c)| mu.is_met_by(c, scale))
        .map(|(v, _)| v.clone())
        .collect()
}

// ---------------------------------------------------------------------------
// Lattices
// ---------------------------------------------------------------------------

/// A subgroup of `Z^d` given by generators and its Hermite normal form.
#[derive(Clone)]
pub struct EdgeLattice {
    dim: usize,
    generators: Vec<IndexVector>,
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl PartialEq for EdgeLattice {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.basis == other.basis
    }
}

impl Eq for EdgeLattice {}

impl std::hash::Hash for EdgeLattice {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.basis.hash(state);
    }
}

impl fmt::Debug for EdgeLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EdgeLattice")
            .field("dim", &self.dim)
            .field("basis", &self.basis)
            .finish()
    }
}

impl Serialize for EdgeLattice {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("EdgeLattice", 3)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("generators", &self.generators)?;
        st.serialize_field("basis", &self.basis)?;
        st.end()
    }
}

fn hermite_normal_form(dim: usize, mut rows: Vec<Vec<i64>>) -> (Vec<Vec<i64>>, Vec<usize>) {
    rows.retain(|r| r.iter().any(|&x| x != 0));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        if r == rows.len() {
            break;
        }
        // Euclid down column c until a single non-zero entry remains in rows r..
        loop {
            let pick = (r..rows.len())
                .filter(|&i| rows[i][c] != 0)
                .min_by_key(|&i| rows[i][c].abs());
            let Some(p) = pick else { break };
            rows.swap(r, p);
            let mut clean = true;
            for i in r + 1..rows.len() {
                let q = rows[i][c] / rows[r][c];
                if q != 0 {
                    let (head, tail) = rows.split_at_mut(i);
                    for (x, y) in tail[0].iter_mut().zip(&head[r]) {
                        *x -= q * y;
                    }
                }
                if rows[i][c] != 0 {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if rows[r][c] == 0 {
            continue;
        }
        if rows[r][c] < 0 {
            rows[r].iter_mut().for_each(|x| *x = -*x);
        }
        let a = rows[r][c];
        for i in 0..r {
            let q = rows[i][c].div_euclid(a);
            if q != 0 {
                let (head, tail) = rows.split_at_mut(r);
                for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                    *x -= q * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

impl EdgeLattice {
    /// The lattice generated by `generators` in `Z^dim`.
    pub fn from_generators<I>(dim: usize, generators: I) -> Result<Self, LatticeError>
    where
        I: IntoIterator<Item = IndexVector>,
    {
        let mut gens: Vec<IndexVector> = Vec::new();
        for g in generators {
            if g.dim() != dim {
                return Err(LatticeError::Dimension {
                    expected: dim,
                    found: g.dim(),
                });
            }
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        let (basis, pivots) = hermite_normal_form(dim, gens.iter().map(|g| g.0.clone()).collect());
        Ok(EdgeLattice {
            dim,
            generators: gens,
            basis,
            pivots,
        })
    }

    pub fn zero(dim: usize) -> Self {
        EdgeLattice {
            dim,
            generators: Vec::new(),
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// `L_max^d`: all vectors whose coordinate sum is divisible by `k`.
    pub fn max(dim: usize, k: usize) -> Self {
        EdgeLattice::from_generators(dim, r_vectors(dim, k)).expect("dimensions agree")
    }

    /// The lattice generated by the 2-dimensional k-vectors with odd first
    /// coordinate.
    pub fn odd(k: usize) -> Self {
        let gens = (1..=k)
            .step_by(2)
            .map(|a| IndexVector(vec![a as i64, (k - a) as i64]));
        EdgeLattice::from_generators(2, gens).expect("dimensions agree")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn generators(&self) -> &[IndexVector] {
        &self.generators
    }

    /// Hermite normal form rows.
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// The lattice generated by `self` and `extra`.
    pub fn extended(&self, extra: &IndexVector) -> Self {
        let gens = self.generators.iter().cloned().chain(std::iter::once(extra.clone()));
        EdgeLattice::from_generators(self.dim, gens).expect("dimensions agree")
    }

    fn check_dim(&self, v: &IndexVector) -> Result<(), LatticeError> {
        if v.dim() != self.dim {
            return Err(LatticeError::Dimension {
                expected: self.dim,
                found: v.dim(),
            });
        }
        Ok(())
    }

    /// Reduces `v` in place to its canonical coset representative.
    pub(crate) fn reduce_in_place(&self, v: &mut [i64]) {
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let q = v[p].div_euclid(row[p]);
            if q != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= q * y;
                }
            }
        }
    }

    pub(crate) fn contains_slice(&self, v: &[i64]) -> bool {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Exact membership test.
    pub fn contains(&self, v: &IndexVector) -> Result<bool, LatticeError> {
        self.check_dim(v)?;
        Ok(self.contains_slice(&v.0))
    }

    /// Canonical representative of `v + L`; `residue(v) == residue(w)`
    /// exactly when `v - w` lies in the lattice.
    pub fn residue(&self, v: &IndexVector) -> Result<IndexVector, LatticeError> {
        self.check_dim(v)?;
        let mut w = v.0.clone();
        self.reduce_in_place(&mut w);
        Ok(IndexVector(w))
    }

    pub fn is_sublattice_of(&self, other: &EdgeLattice) -> bool {
        self.dim == other.dim && self.basis.iter().all(|r| other.contains_slice(r))
    }

    /// The first transferral `u_i - u_j` (`i < j`) in the lattice.
    pub fn find_transferral(&self) -> Option<(usize, usize)> {
        let d = self.dim;
        for i in 0..d {
            for j in i + 1..d {
                let mut t = vec![0; d];
                t[i] = 1;
                t[j] = -1;
                if self.contains_slice(&t) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_transferral_free(&self) -> bool {
        self.find_transferral().is_none()
    }

    /// All k-vectors of `Z^d` that lie in the lattice.
    pub fn k_vector_content(&self, k: usize) -> Vec<IndexVector> {
        r_vectors(self.dim, k)
            .into_iter()
            .filter(|v| self.contains_slice(&v.0))
            .collect()
    }

    /// Index of the lattice in `Z^d` (product of pivots), if of full rank.
    fn determinant(&self) -> Option<u128> {
        if self.rank() < self.dim {
            return None;
        }
        Some(
            self.basis
                .iter()
                .zip(&self.pivots)
                .map(|(r, &p)| r[p] as u128)
                .product(),
        )
    }

    /// Order of the coset group `L_max^d / L`.
    pub fn coset_group_order(&self, k: usize) -> Result<CosetOrder, LatticeError> {
        if !self.basis.iter().all(|r| r.iter().sum::<i64>().rem_euclid(k as i64) == 0) {
            return Err(LatticeError::NotInMaxLattice(k));
        }
        let max = EdgeLattice::max(self.dim, k);
        Ok(match (self.determinant(), max.determinant()) {
            (Some(a), Some(b)) => CosetOrder::Finite((a / b) as u64),
            _ => CosetOrder::Infinite,
        })
    }
}

/// Cosets of a full-rank lattice numbered `0..order`, with an addition table.
#[derive(Debug, Clone)]
pub struct CosetTable {
    strides: Vec<usize>,
    order: usize,
    add: Vec<u32>,
    units: Vec<u32>,
}

impl CosetTable {
    /// `None` unless the lattice has full rank.
    pub fn new(l: &EdgeLattice) -> Option<Self> {
        let order = l.determinant()? as usize;
        let d = l.dim;
        let radix: Vec<usize> = (0..d).map(|c| l.basis[c][c] as usize).collect();
        let mut strides = vec![1; d];
        for c in (0..d.saturating_sub(1)).rev() {
            strides[c] = strides[c + 1] * radix[c + 1];
        }
        let decode = |mut id: usize| -> Vec<i64> {
            let mut v = vec![0; d];
            for c in 0..d {
                v[c] = (id / strides[c]) as i64;
                id %= strides[c];
            }
            v
        };
        let reps: Vec<Vec<i64>> = (0..order).map(decode).collect();
        let mut table = CosetTable {
            strides,
            order,
            add: Vec::new(),
            units: Vec::new(),
        };
        let mut add = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                let sum: Vec<i64> = reps[a].iter().zip(&reps[b]).map(|(x, y)| x + y).collect();
                add[a * order + b] = table.id_of(l, sum) as u32;
            }
        }
        table.add = add;
        table.units = (0..d)
            .map(|j| table.id_of(l, IndexVector::unit(d, j).0) as u32)
            .collect();
        Some(table)
    }

    fn id_of(&self, l: &EdgeLattice, mut v: Vec<i64>) -> usize {
        l.reduce_in_place(&mut v);
        v.iter().zip(&self.strides).map(|(&x, &s)| x as usize * s).sum()
    }

    /// Number of cosets of the lattice in `Z^d`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn id(&self, l: &EdgeLattice, v: &[i64]) -> u32 {
        self.id_of(l, v.to_vec()) as u32
    }

    pub fn unit(&self, j: usize) -> u32 {
        self.units[j]
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.order + b as usize]
    }

    /// The coset `c` with `a + c = b`.
    pub fn sub(&self, b: u32, a: u32) -> u32 {
        let row = &self.add[a as usize * self.order..(a as usize + 1) * self.order];
        row.iter().position(|&x| x == b).expect("group has inverses") as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CosetOrder {
    Finite(u64),
    Infinite,
}

// ---------------------------------------------------------------------------
// Fullness
// ---------------------------------------------------------------------------

/// Whether every `(k-1)`-vector extends by some unit vector into `set`.
pub fn is_full_index_set<'a, I>(set: I, d: usize, k: usize) -> bool
where
    I: IntoIterator<Item = &'a IndexVector>,
{
    let set: BTreeSet<&IndexVector> = set.into_iter().collect();
    if d == 0 || k == 0 {
        return false;
    }
    r_vectors(d, k - 1).into_iter().all(|v| {
        (0..d).any(|i| {
            let mut w = v.clone();
            w.0[i] += 1;
            set.contains(&w)
        })
    })
}

/// Full lattice: transferral-free with a full set of k-vectors.
pub fn is_full_lattice(lattice: &EdgeLattice, k: usize) -> bool {
    lattice.dim() >= 1
        && lattice.dim() <= k
        && lattice.is_transferral_free()
        && is_full_index_set(&lattice.k_vector_content(k), lattice.dim(), k)
}

pub fn is_full_pair(partition: &Partition, lattice: &EdgeLattice, k: usize) -> bool {
    partition.len() == lattice.dim() && is_full_lattice(lattice, k)
}

/// A partition with a full edge-lattice of matching dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FullPair {
    pub partition: Partition,
    pub lattice: EdgeLattice,
}

impl FullPair {
    pub fn new(partition: Partition, lattice: EdgeLattice, k: usize) -> Result<Self, LatticeError> {
        if partition.len() != lattice.dim() {
            return Err(LatticeError::Dimension {
                expected: partition.len(),
                found: lattice.dim(),
            });
        }
        if !lattice.is_transferral_free() {
            return Err(LatticeError::NotFullPair("lattice contains a transferral".into()));
        }
        if !is_full_lattice(&lattice, k) {
            return Err(LatticeError::NotFullPair("k-vector content is not full".into()));
        }
        Ok(FullPair { partition, lattice })
    }
}

// ---------------------------------------------------------------------------
// Explicit representations
// ---------------------------------------------------------------------------

const MAX_COEFF_HALF_SPACE: u128 = 1 << 22;

/// Integer coefficients `a_v` with `|a_v| <= bound` and
/// `sum a_v v = target`, found by meet-in-the-middle over the generators.
///
/// Returns `Ok(None)` when no such combination exists (in particular when
/// `target` is outside the lattice).
pub fn represent_with_coeffs(
    generators: &BTreeSet<IndexVector>,
    target: &IndexVector,
    bound: u32,
) -> Result<Option<BTreeMap<IndexVector, i64>>, LatticeError> {
    let d = target.dim();
    let lattice = EdgeLattice::from_generators(d, generators.iter().cloned())?;
    if !lattice.contains(target)? {
        return Ok(None);
    }
    let gens: Vec<&IndexVector> = generators.iter().collect();
    let (left, right) = gens.split_at(gens.len().div_ceil(2));
    let width = 2 * bound as u128 + 1;
    let space = width.saturating_pow(left.len() as u32);
    if space > MAX_COEFF_HALF_SPACE {
        return Err(LatticeError::SearchTooLarge(space));
    }

    fn combos(gens: &[&IndexVector], d: usize, bound: i64, mut visit: impl FnMut(&[i64], &[i64])) {
        let mut coeffs = vec![-bound; gens.len()];
        loop {
            let mut sum = vec![0; d];
            for (g, &c) in gens.iter().zip(&coeffs) {
                for (s, x) in sum.iter_mut().zip(&g.0) {
                    *s += c * x;
                }
            }
            visit(&coeffs, &sum);
            let mut i = 0;
            loop {
                if i == coeffs.len() {
                    return;
                }
                if coeffs[i] < bound {
                    coeffs[i] += 1;
                    break;
                }
                coeffs[i] = -bound;
                i += 1;
            }
        }
    }

    let b = bound as i64;
    let mut table: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
    combos(right, d, b, |c, s| {
        table.entry(s.to_vec()).or_insert_with(|| c.to_vec());
    });
    let mut found: Option<(Vec<i64>, Vec<i64>)> = None;
    combos(left, d, b, |c, s| {
        if found.is_some() {
            return;
        }
        let need: Vec<i64> = target.0.iter().zip(s).map(|(t, x)| t - x).collect();
        if let Some(rc) = table.get(&need) {
            found = Some((c.to_vec(), rc.clone()));
        }
    });
    Ok(found.map(|(lc, rc)| {
        left.iter()
            .zip(lc)
            .chain(right.iter().zip(rc))
            .filter(|(_, c)| *c != 0)
            .map(|(g, c)| ((*g).clone(), c))
            .collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv<const N: usize>(v: [i64; N]) -> IndexVector {
        IndexVector::from(v)
    }

    #[test]
    fn index_vectors_count_intersections() {
        let p = Partition::new(5, vec![VertexSet::range(0, 2), VertexSet::range(2, 5)]).unwrap();
        let s: VertexSet = [0, 2, 3].into_iter().collect();
        assert_eq!(p.index_vector(s), iv([1, 2]));
        assert_eq!(p.index_vector(VertexSet::EMPTY), iv([0, 0]));
        assert_eq!(p.index_vector(VertexSet::full(5)), iv([2, 3]));
    }

    #[test]
    fn partition_validation() {
        assert_eq!(
            Partition::new(3, vec![VertexSet::range(0, 2), VertexSet::range(1, 3)]),
            Err(LatticeError::OverlappingParts(0, 1))
        );
        assert_eq!(
            Partition::new(3, vec![VertexSet::range(0, 3), VertexSet::EMPTY]),
            Err(LatticeError::EmptyPart(1))
        );
        assert_eq!(
            Partition::new(3, vec![VertexSet::range(0, 2)]),
            Err(LatticeError::NotCovering(3))
        );
        let p = Partition::from_assignment(&[1, 0, 1], 2).unwrap();
        assert_eq!(p.parts()[1].to_vec(), vec![0, 2]);
        assert_eq!(p.assignment(), vec![1, 0, 1]);
        let merged = Partition::from_assignment(&[0, 1, 2, 1], 3).unwrap().merge(1, 2);
        assert_eq!(merged.assignment(), vec![0, 1, 1, 1]);
        assert!(Partition::from_assignment(&[0, 1, 2, 1], 3).unwrap().refines(&merged));
    }

    #[test]
    fn hermite_form_examples() {
        let l = EdgeLattice::from_generators(2, [iv([1, 2]), iv([3, 0])]).unwrap();
        assert_eq!(l.basis(), &[vec![1, 2], vec![0, 6]]);
        assert!(l.basis().iter().all(|r| r[1] % 2 == 0));
        assert!(l.contains(&iv([4, 2])).unwrap());
        assert!(!l.contains(&iv([1, -1])).unwrap());
        assert_eq!(EdgeLattice::odd(3), l);

        let z = EdgeLattice::from_generators(3, Vec::new()).unwrap();
        assert_eq!(z.rank(), 0);
        assert!(z.contains(&iv([0, 0, 0])).unwrap());
        assert!(!z.contains(&iv([1, 0, 0])).unwrap());

        let max = EdgeLattice::max(2, 3);
        for x in -4..=4i64 {
            for y in -4..=4i64 {
                assert_eq!(max.contains(&iv([x, y])).unwrap(), (x + y).rem_euclid(3) == 0);
            }
        }
        assert!(matches!(
            l.contains(&iv([1, 2, 3])),
            Err(LatticeError::Dimension { expected: 2, found: 3 })
        ));
        assert!(EdgeLattice::from_generators(2, [iv([1, 2, 0])]).is_err());
    }

    #[test]
    fn coset_table_matches_residues() {
        let l = EdgeLattice::from_generators(3, r_vectors(3, 3).into_iter().filter(|v| (v.0[0] - v.0[1]).rem_euclid(3) == 0)).unwrap();
        let t = CosetTable::new(&l).unwrap();
        assert_eq!(t.order() as u128, l.determinant().unwrap());
        let vs = [iv([1, 0, 0]), iv([2, 1, 0]), iv([0, 0, 5]), iv([-1, 2, 2])];
        for a in &vs {
            for b in &vs {
                let sum = a + b;
                assert_eq!(t.add(t.id(&l, &a.0), t.id(&l, &b.0)), t.id(&l, &sum.0));
                assert_eq!(t.sub(t.id(&l, &sum.0), t.id(&l, &a.0)), t.id(&l, &b.0));
            }
        }
        assert!(CosetTable::new(&EdgeLattice::from_generators(2, [iv([3, 0])]).unwrap()).is_none());
    }

    #[test]
    fn hermite_form_is_canonical() {
        let a = EdgeLattice::from_generators(3, [iv([2, 1, 0]), iv([0, 3, 0]), iv([0, 0, 3])]).unwrap();
        let b = EdgeLattice::from_generators(
            3,
            [iv([2, 4, 0]), iv([0, 0, 3]), iv([2, 1, 0]), iv([4, 2, 3])],
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn transferrals() {
        assert_eq!(EdgeLattice::max(3, 3).find_transferral(), Some((0, 1)));
        assert!(EdgeLattice::odd(3).is_transferral_free());
        assert!(EdgeLattice::odd(4).is_transferral_free());
        assert!(EdgeLattice::from_generators(1, [iv([3])]).unwrap().is_transferral_free());
    }

    #[test]
    fn fullness() {
        let all = r_vectors(3, 3);
        assert!(is_full_index_set(&all, 3, 3));
        assert!(!is_full_index_set(&[], 2, 3));
        assert!(is_full_index_set(&[iv([1, 2]), iv([3, 0])], 2, 3));
        assert!(!is_full_index_set(&[iv([3, 0])], 2, 3));

        let p2 = Partition::new(4, vec![VertexSet::range(0, 1), VertexSet::range(1, 4)]).unwrap();
        assert!(is_full_pair(&p2, &EdgeLattice::odd(3), 3));
        assert!(!is_full_pair(&p2, &EdgeLattice::max(2, 3), 3));
        let unit = EdgeLattice::from_generators(1, [iv([3])]).unwrap();
        assert!(is_full_pair(&Partition::trivial(4), &unit, 3));
        assert!(FullPair::new(p2.clone(), EdgeLattice::max(2, 3), 3).is_err());
        assert!(FullPair::new(p2, EdgeLattice::odd(3), 3).is_ok());
    }

    #[test]
    fn coset_orders() {
        assert_eq!(EdgeLattice::odd(3).coset_group_order(3), Ok(CosetOrder::Finite(2)));
        assert_eq!(EdgeLattice::max(3, 4).coset_group_order(4), Ok(CosetOrder::Finite(1)));
        let thin = EdgeLattice::from_generators(2, [iv([3, 0])]).unwrap();
        assert_eq!(thin.coset_group_order(3), Ok(CosetOrder::Infinite));
        let off = EdgeLattice::from_generators(2, [iv([1, 0])]).unwrap();
        assert_eq!(off.coset_group_order(3), Err(LatticeError::NotInMaxLattice(3)));
    }

    #[test]
    fn residues_label_cosets() {
        let l = EdgeLattice::odd(3);
        let a = l.residue(&iv([2, 1])).unwrap();
        let b = l.residue(&iv([0, 3])).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, l.residue(&iv([3, 0])).unwrap());
        assert!(l.residue(&iv([3, 0])).unwrap().is_zero());
    }

    #[test]
    fn explicit_coefficients() {
        let gens: BTreeSet<IndexVector> = [iv([1, 2]), iv([3, 0])].into_iter().collect();
        let one = represent_with_coeffs(&gens, &iv([1, 2]), 1).unwrap().unwrap();
        assert_eq!(one, [(iv([1, 2]), 1)].into_iter().collect());
        let two = represent_with_coeffs(&gens, &iv([4, 2]), 1).unwrap().unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(represent_with_coeffs(&gens, &iv([1, -1]), 5).unwrap(), None);
        // in the lattice but needs a coefficient of 2
        assert_eq!(represent_with_coeffs(&gens, &iv([2, 4]), 1).unwrap(), None);
        assert!(represent_with_coeffs(&gens, &iv([2, 4]), 2).unwrap().is_some());
    }

    #[test]
    fn even_parity_lattice_matches_description() {
        // all 3-vectors (x, 3-x) with x even generate {(x, y): x even, 3 | x + y}
        let gens = [iv([0, 3]), iv([2, 1])];
        let l = EdgeLattice::from_generators(2, gens).unwrap();
        for x in -6..=6i64 {
            for y in -6..=6i64 {
                let expect = x.rem_euclid(2) == 0 && (x + y).rem_euclid(3) == 0;
                assert_eq!(l.contains(&iv([x, y])).unwrap(), expect, "({x},{y})");
            }
        }
    }
}
