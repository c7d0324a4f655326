//! Brute-force reference polynomials.
//!
//! Two independent routes to the characteristic polynomial coefficients live
//! here: sums of principal minors (each minor by permutation expansion) and
//! signed sums over partial cycle covers of the complete digraph `K_n`. The
//! gradient entries additionally have a cycle-cover-and-path enumeration.
//! Everything is exponential and guarded to `n <= 8`.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::polynomial::{PolyMatrix, PolyMonomial, Polynomial, VarIndex};
use crate::ring::RingDescriptor;
use crate::sparse::{self, Monomial, Terms};

pub const ORACLE_MAX_N: usize = 8;

fn guard(n: usize) -> Result<()> {
    if n > ORACLE_MAX_N {
        return Err(Error::OracleSizeLimit(format!(
            "n = {n} exceeds {ORACLE_MAX_N}"
        )));
    }
    Ok(())
}

fn sign_of(perm: &[usize]) -> i64 {
    let inversions = perm
        .iter()
        .tuple_combinations()
        .filter(|(a, b)| a > b)
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `cpc_{n,d}` as the sum of all `d x d` principal minors of `X_n`.
pub fn cpc_minor_sum(n: usize, d: usize, ring: &RingDescriptor) -> Result<Polynomial> {
    guard(n)?;
    let mut terms: Terms<VarIndex> = Terms::new();
    if d > n {
        return Ok(Polynomial::zero(ring, n));
    }
    for subset in (1..=n).combinations(d) {
        for perm in (0..d).permutations(d) {
            let m = Monomial::from_pairs(
                (0..d).map(|k| (VarIndex::new(subset[k], subset[perm[k]]), 1)),
            );
            sparse::add_term(ring, &mut terms, m, ring.from_i64(sign_of(&perm)));
        }
    }
    Ok(Polynomial::from_terms(ring, n, terms))
}

/// A directed cycle in `K_n` through pairwise distinct vertices; a single
/// vertex is a loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    vertices: Vec<usize>,
}

impl Cycle {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() || vertices.contains(&0) || !vertices.iter().all_unique()
        {
            return Err(Error::ParameterOutOfRange(
                "cycle vertices must be distinct and 1-based".into(),
            ));
        }
        Ok(Cycle { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The sign of the path left after deleting one edge: `(-1)^(len-1)`.
    pub fn sign(&self) -> i64 {
        if self.len() % 2 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let l = self.vertices.len();
        (0..l).map(move |k| (self.vertices[k], self.vertices[(k + 1) % l]))
    }

    pub fn weight(&self) -> PolyMonomial {
        Monomial::from_pairs(self.edges().map(|(a, b)| (VarIndex::new(a, b), 1)))
    }
}

/// Pairwise vertex-disjoint cycles.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PartialCycleCover {
    cycles: Vec<Cycle>,
}

impl PartialCycleCover {
    pub fn new(cycles: Vec<Cycle>) -> Result<Self> {
        if !cycles.iter().flat_map(|c| c.vertices.iter()).all_unique() {
            return Err(Error::ParameterOutOfRange(
                "cycles of a cover must be vertex-disjoint".into(),
            ));
        }
        Ok(PartialCycleCover { cycles })
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.iter().map(Cycle::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn sign(&self) -> i64 {
        self.cycles.iter().map(Cycle::sign).product()
    }

    pub fn weight(&self) -> PolyMonomial {
        self.cycles
            .iter()
            .fold(Monomial::one(), |acc, c| acc.mul(&c.weight()))
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.cycles.iter().any(|c| c.vertices.contains(&v))
    }
}

/// Calls `visit` once for every partial cycle cover of `K_n` of total length
/// `d` that avoids the vertices in `excluded` (bit `v` set excludes vertex `v`).
///
/// Recursion decides vertices in increasing order: each undecided vertex is
/// either left uncovered or becomes the smallest vertex of a new cycle.
pub fn for_each_cycle_cover(
    n: usize,
    d: usize,
    excluded: u64,
    visit: &mut dyn FnMut(&PartialCycleCover),
) {
    let mut current = PartialCycleCover::default();
    covers_from(n, 1, excluded, d, &mut current, visit);
}

fn covers_from(
    n: usize,
    v: usize,
    used: u64,
    remaining: usize,
    current: &mut PartialCycleCover,
    visit: &mut dyn FnMut(&PartialCycleCover),
) {
    if remaining == 0 {
        visit(current);
        return;
    }
    if v > n {
        return;
    }
    let free_after = (v..=n).filter(|&w| used & (1 << w) == 0).count();
    if free_after < remaining {
        return;
    }
    if used & (1 << v) != 0 {
        covers_from(n, v + 1, used, remaining, current, visit);
        return;
    }
    covers_from(n, v + 1, used, remaining, current, visit);
    let mut path = vec![v];
    extend_cycle(n, v, used | (1 << v), remaining, &mut path, current, visit);
}

fn extend_cycle(
    n: usize,
    head: usize,
    used: u64,
    remaining: usize,
    path: &mut Vec<usize>,
    current: &mut PartialCycleCover,
    visit: &mut dyn FnMut(&PartialCycleCover),
) {
    // close the cycle here
    current.cycles.push(Cycle {
        vertices: path.clone(),
    });
    covers_from(n, head + 1, used, remaining - path.len(), current, visit);
    current.cycles.pop();
    if path.len() < remaining {
        for w in head + 1..=n {
            if used & (1 << w) == 0 {
                path.push(w);
                extend_cycle(n, head, used | (1 << w), remaining, path, current, visit);
                path.pop();
            }
        }
    }
}

pub fn partial_cycle_covers(n: usize, d: usize) -> Result<Vec<PartialCycleCover>> {
    guard(n)?;
    let mut out = Vec::new();
    for_each_cycle_cover(n, d, 0, &mut |q| out.push(q.clone()));
    Ok(out)
}

/// `cpc_{n,d}` as the signed weighted sum over partial cycle covers of
/// length `d`.
pub fn cpc_cycle_cover(n: usize, d: usize, ring: &RingDescriptor) -> Result<Polynomial> {
    guard(n)?;
    let mut terms: Terms<VarIndex> = Terms::new();
    for_each_cycle_cover(n, d, 0, &mut |q| {
        sparse::add_term(ring, &mut terms, q.weight(), ring.from_i64(q.sign()));
    });
    Ok(Polynomial::from_terms(ring, n, terms))
}

/// A partial cycle cover together with a vertex-disjoint path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CcpPair {
    pub cover: PartialCycleCover,
    pub path: Vec<usize>,
}

impl CcpPair {
    pub fn path_len(&self) -> usize {
        self.path.len() - 1
    }

    pub fn len(&self) -> usize {
        self.path_len() + self.cover.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sign(&self) -> i64 {
        let path_sign = if self.path_len().is_multiple_of(2) { 1 } else { -1 };
        path_sign * self.cover.sign()
    }

    pub fn weight(&self) -> PolyMonomial {
        let path =
            Monomial::from_pairs(self.path.windows(2).map(|w| (VarIndex::new(w[0], w[1]), 1)));
        path.mul(&self.cover.weight())
    }
}

/// Calls `visit` for every pair in `CCP_d(v_a, v_b)`.
pub fn for_each_ccp(n: usize, d: usize, a: usize, b: usize, visit: &mut dyn FnMut(&CcpPair)) {
    let mut path = vec![a];
    ccp_paths(n, d, b, 1 << a, &mut path, visit);
}

fn ccp_paths(
    n: usize,
    d: usize,
    b: usize,
    used: u64,
    path: &mut Vec<usize>,
    visit: &mut dyn FnMut(&CcpPair),
) {
    let len = path.len() - 1;
    if *path.last().unwrap() == b {
        let mut pair = CcpPair {
            cover: PartialCycleCover::default(),
            path: path.clone(),
        };
        for_each_cycle_cover(n, d - len, used, &mut |q| {
            pair.cover = q.clone();
            visit(&pair);
        });
        return;
    }
    if len == d {
        return;
    }
    for w in 1..=n {
        if used & (1 << w) == 0 {
            path.push(w);
            ccp_paths(n, d, b, used | (1 << w), path, visit);
            path.pop();
        }
    }
}

/// Entry `(a, b)` of `(grad cpc_{n,d+1})^T`, summed over `CCP_d(v_a, v_b)`.
pub fn grad_ccp_entry(
    n: usize,
    d: usize,
    a: usize,
    b: usize,
    ring: &RingDescriptor,
) -> Result<Polynomial> {
    guard(n)?;
    if !(1..=n).contains(&a) || !(1..=n).contains(&b) {
        return Err(Error::ParameterOutOfRange(format!(
            "entry ({a},{b}) outside 1..={n}"
        )));
    }
    let mut terms: Terms<VarIndex> = Terms::new();
    for_each_ccp(n, d, a, b, &mut |pair| {
        sparse::add_term(ring, &mut terms, pair.weight(), ring.from_i64(pair.sign()));
    });
    Ok(Polynomial::from_terms(ring, n, terms))
}

/// The full matrix `(grad cpc_{n,d+1})^T` built entrywise from CCP pairs.
pub fn grad_ccp_matrix(n: usize, d: usize, ring: &RingDescriptor) -> Result<PolyMatrix> {
    guard(n)?;
    let mut entries = Vec::with_capacity(n * n);
    for a in 1..=n {
        for b in 1..=n {
            entries.push(grad_ccp_entry(n, d, a, b, ring)?);
        }
    }
    PolyMatrix::new(n, n, entries)
}

/// Determinant by permutation expansion, limited to `size <= 8`.
pub fn det_leibniz(a: &PolyMatrix) -> Result<Polynomial> {
    det_permutation_expansion(a, ORACLE_MAX_N)
}

/// Permutation expansion that only follows nonzero entries, for sparse
/// matrices larger than the Leibniz guard (for example adjacency matrices of
/// branching programs, whose nonzero permutations are few).
pub fn det_permutation_expansion(a: &PolyMatrix, size_limit: usize) -> Result<Polynomial> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(
            "determinant of a non-square matrix".into(),
        ));
    }
    let s = a.rows();
    if s > size_limit {
        return Err(Error::OracleSizeLimit(format!(
            "{s}x{s} matrix exceeds {size_limit}"
        )));
    }
    let support: Vec<Vec<usize>> = (1..=s)
        .map(|i| (1..=s).filter(|&j| !a.get(i, j).is_zero()).collect())
        .collect();
    let mut acc = Polynomial::zero(a.ring(), a.ambient_n());
    let mut perm = Vec::with_capacity(s);
    let one = Polynomial::one(a.ring(), a.ambient_n());
    expand_rows(a, &support, 0, 0u128, &mut perm, &one, &mut acc);
    Ok(acc)
}

fn expand_rows(
    a: &PolyMatrix,
    support: &[Vec<usize>],
    row: usize,
    used: u128,
    perm: &mut Vec<usize>,
    prod: &Polynomial,
    acc: &mut Polynomial,
) {
    if row == support.len() {
        let term = if sign_of(perm) == 1 {
            prod.clone()
        } else {
            -prod
        };
        *acc = &*acc + &term;
        return;
    }
    for &j in &support[row] {
        if used & (1 << j) == 0 {
            let next = prod * a.get(row + 1, j);
            if next.is_zero() {
                continue;
            }
            perm.push(j);
            expand_rows(a, support, row + 1, used | (1 << j), perm, &next, acc);
            perm.pop();
        }
    }
}
