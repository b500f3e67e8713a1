//! Exact perfect-matching counts (hafnians of 0/1 adjacency matrices) and
//! permanents of 0/1 matrices.
//!
//! The main counter recurses on the set `S` of still-unmatched vertices:
//! the lowest vertex of `S` must be matched to one of its neighbors in `S`,
//! so
//!
//! ```text
//! count(S) = sum over neighbors j of min(S) in S of count(S \ {min(S), j})
//! ```
//!
//! which is the row expansion of the hafnian along its first remaining row.
//! Results are memoized per call, keyed by the bitmask of `S`.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{CheckedAdd, Num, One, Signed, Zero};
use rayon::prelude::*;

use crate::bigcount::BigCount;
use crate::error::{Error, Result};
use crate::graph::{bits, BipartiteIncidence, Graph, Matching};

/// Default vertex limit for [`count_perfect_matchings`].
pub const DEFAULT_MAX_VERTICES: usize = 32;
/// Absolute limit: vertex subsets are `u64` masks.
pub const HARD_MAX_VERTICES: usize = 64;
pub const ENUMERATION_MAX_VERTICES: usize = 12;
pub const RYSER_MAX_ORDER: usize = 24;
pub const NAIVE_PERMANENT_MAX_ORDER: usize = 8;
pub const WEIGHTED_HAFNIAN_MAX_ORDER: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    /// Largest vertex count accepted. Memory and time grow with the number
    /// of reachable vertex subsets, which can approach `2^n`.
    pub max_vertices: usize,
    /// Split the branches of the first vertex across the rayon pool.
    pub parallel: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { max_vertices: DEFAULT_MAX_VERTICES, parallel: false }
    }
}

/// Lists every perfect matching of `g`, each with sorted pairs, in
/// lexicographic order. Meant as an oracle; limited to 12 vertices.
pub fn enumerate_matchings(g: &Graph) -> Result<Vec<Matching>> {
    let n = g.n();
    if n > ENUMERATION_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "matching enumeration",
            n,
            limit: ENUMERATION_MAX_VERTICES,
            hint: " (enumeration is an oracle for small graphs; use count_perfect_matchings)",
        });
    }
    let mut out = Vec::new();
    if n % 2 == 1 {
        return Ok(out);
    }
    let masks = g.masks().expect("n <= 12");
    let mut stack = Vec::with_capacity(n / 2);
    enumerate_rec(&masks, full_mask(n), &mut stack, &mut out);
    Ok(out)
}

fn enumerate_rec(masks: &[u64], remaining: u64, stack: &mut Vec<(usize, usize)>, out: &mut Vec<Matching>) {
    if remaining == 0 {
        out.push(Matching::from_sorted(stack.clone()));
        return;
    }
    let i = remaining.trailing_zeros() as usize;
    let rest = remaining & !(1u64 << i);
    for j in bits(masks[i] & rest) {
        stack.push((i, j));
        enumerate_rec(masks, rest & !(1u64 << j), stack, out);
        stack.pop();
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Number of perfect matchings of `g` (the hafnian of its adjacency
/// matrix), with the default 32-vertex limit.
pub fn count_perfect_matchings(g: &Graph) -> Result<BigCount> {
    count_perfect_matchings_with(g, &CountOptions::default())
}

/// Counts each connected component separately and multiplies; the vertex
/// limit applies to the largest component.
pub fn count_perfect_matchings_with(g: &Graph, opts: &CountOptions) -> Result<BigCount> {
    let components = g.components();
    if components.iter().any(|c| c.len() % 2 == 1) {
        return Ok(BigCount::zero());
    }
    let largest = components.iter().map(Vec::len).max().unwrap_or(0);
    let limit = opts.max_vertices.min(HARD_MAX_VERTICES);
    if largest > limit {
        return Err(Error::TooLarge {
            what: "connected component for perfect matching count",
            n: largest,
            limit,
            hint: if limit < HARD_MAX_VERTICES {
                " (raise the limit with --max-vertices / CountOptions::max_vertices)"
            } else {
                ""
            },
        });
    }
    if components.len() == 1 {
        return Ok(count_connected(g, opts));
    }
    Ok(components.iter().map(|c| count_connected(&g.induced(c), opts)).product())
}

fn count_connected(g: &Graph, opts: &CountOptions) -> BigCount {
    let n = g.n();
    if n == 0 {
        return BigCount::one();
    }
    let masks = g.masks().expect("n <= 64");
    let full = full_mask(n);
    if opts.parallel {
        count_parallel(&masks, full)
    } else {
        count_mask(&masks, full)
    }
}

fn count_mask(masks: &[u64], set: u64) -> BigCount {
    count_with_fallback::<u128>(masks, set)
}

/// Counts with a fixed-width accumulator and reruns in arbitrary precision
/// only if an addition overflows.
fn count_with_fallback<F>(masks: &[u64], set: u64) -> BigCount
where
    F: Clone + Zero + One + CheckedAdd + Into<BigUint>,
{
    match SubsetCounter::<F>::new(masks).count(set) {
        Some(c) => BigCount::from(c.into()),
        None => BigCount::from(SubsetCounter::<BigUint>::new(masks).count(set).expect("BigUint never overflows")),
    }
}

fn count_parallel(masks: &[u64], full: u64) -> BigCount {
    let i = full.trailing_zeros() as usize;
    let rest = full & !(1u64 << i);
    let branches: Vec<u64> = bits(masks[i] & rest).map(|j| rest & !(1u64 << j)).collect();
    branches.par_iter().map(|&s| count_mask(masks, s)).collect::<Vec<_>>().into_iter().sum()
}

struct SubsetCounter<'a, C> {
    masks: &'a [u64],
    memo: HashMap<u64, C>,
}

impl<'a, C: Clone + Zero + One + CheckedAdd> SubsetCounter<'a, C> {
    fn new(masks: &'a [u64]) -> Self {
        SubsetCounter { masks, memo: HashMap::new() }
    }

    /// `None` on accumulator overflow.
    fn count(&mut self, set: u64) -> Option<C> {
        if set == 0 {
            return Some(C::one());
        }
        if let Some(c) = self.memo.get(&set) {
            return Some(c.clone());
        }
        let i = set.trailing_zeros() as usize;
        let rest = set & !(1u64 << i);
        let mut total = C::zero();
        for j in bits(self.masks[i] & rest) {
            let sub = self.count(rest & !(1u64 << j))?;
            total = total.checked_add(&sub)?;
        }
        self.memo.insert(set, total.clone());
        Some(total)
    }
}

/// Row expansion: the sum over neighbors `j` of `i` of the count of the
/// minor with `i` and `j` deleted. Equals the full count for every `i`.
pub fn hafnian_expand(g: &Graph, i: usize) -> Result<BigCount> {
    if g.n() % 2 == 1 {
        return Err(Error::OddOrder { what: "row expansion", n: g.n() });
    }
    if i >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: i, n: g.n() });
    }
    g.neighbors(i).map(|j| count_perfect_matchings(&g.minor(i, j)?)).sum()
}

/// Permanent by Ryser's inclusion-exclusion formula over column subsets,
/// visiting subsets in Gray-code order so each step updates the row sums
/// by one column.
pub fn permanent(b: &BipartiteIncidence) -> Result<BigCount> {
    if !b.is_square() {
        return Err(Error::NotSquare { rows: b.rows(), cols: b.cols() });
    }
    let n = b.rows();
    if n > RYSER_MAX_ORDER {
        return Err(Error::TooLarge { what: "permanent order", n, limit: RYSER_MAX_ORDER, hint: "" });
    }
    if n == 0 {
        return Ok(BigCount::one());
    }
    let columns: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| i64::from(b.get(i, j))).collect()).collect();
    let mut row_sums = vec![0i64; n];
    let mut gray: u64 = 0;
    let mut acc: i128 = 0;
    let mut total = BigInt::zero();

    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        gray ^= 1u64 << j;
        let sign_step = if gray >> j & 1 == 1 { 1 } else { -1 };
        for (s, &c) in row_sums.iter_mut().zip(&columns[j]) {
            *s += sign_step * c;
        }
        // Row sums are at most 24, so the product fits in an i128.
        let mut prod: i128 = 1;
        for &s in &row_sums {
            if s == 0 {
                prod = 0;
                break;
            }
            prod *= i128::from(s);
        }
        if prod == 0 {
            continue;
        }
        let size = gray.count_ones() as usize;
        let term = if (n - size).is_multiple_of(2) { prod } else { -prod };
        acc = match acc.checked_add(term) {
            Some(a) => a,
            None => {
                total += BigInt::from(acc);
                term
            }
        };
    }
    total += BigInt::from(acc);
    debug_assert!(!total.is_negative());
    Ok(BigCount::from(total.to_biguint().expect("permanent of a 0/1 matrix is nonnegative")))
}

/// Permanent as the plain sum over permutations. Oracle for `n <= 8`.
pub fn permanent_naive(b: &BipartiteIncidence) -> Result<BigCount> {
    if !b.is_square() {
        return Err(Error::NotSquare { rows: b.rows(), cols: b.cols() });
    }
    let n = b.rows();
    if n > NAIVE_PERMANENT_MAX_ORDER {
        return Err(Error::TooLarge { what: "naive permanent order", n, limit: NAIVE_PERMANENT_MAX_ORDER, hint: "" });
    }
    fn rec(b: &BipartiteIncidence, row: usize, used: u32) -> u64 {
        if row == b.rows() {
            return 1;
        }
        (0..b.cols()).filter(|&j| used >> j & 1 == 0 && b.get(row, j)).map(|j| rec(b, row + 1, used | 1 << j)).sum()
    }
    Ok(BigCount::from(rec(b, 0, 0)))
}

/// Counts perfect matchings of a bipartite graph as the permanent of its
/// incidence matrix under the breadth-first bipartition.
pub fn count_via_permanent(g: &Graph) -> Result<BigCount> {
    let (left, right) = g.bipartition().ok_or(Error::NotBipartite)?;
    if left.len() != right.len() {
        return Err(Error::Unbalanced { left: left.len(), right: right.len() });
    }
    permanent(&g.incidence(&left, &right))
}

/// Hafnian of a symmetric matrix over any numeric type: the sum over all
/// pairings of `{0..2n}` of the product of the paired entries. Evaluated by
/// direct enumeration of pairings; diagonal entries are never read.
pub fn weighted_hafnian<T: Num + Clone>(m: &[Vec<T>]) -> Result<T> {
    let n = m.len();
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare { rows: n, cols: row.len() });
    }
    for (i, row) in m.iter().enumerate() {
        for (j, other) in m.iter().enumerate().skip(i + 1) {
            if row[j] != other[i] {
                return Err(Error::Asymmetric { i, j });
            }
        }
    }
    if n % 2 == 1 {
        return Err(Error::OddOrder { what: "hafnian", n });
    }
    if n > WEIGHTED_HAFNIAN_MAX_ORDER {
        return Err(Error::TooLarge { what: "weighted hafnian order", n, limit: WEIGHTED_HAFNIAN_MAX_ORDER, hint: "" });
    }

    fn rec<T: Num + Clone>(m: &[Vec<T>], remaining: u32, prefix: T, total: &mut T) {
        if remaining == 0 {
            *total = total.clone() + prefix;
            return;
        }
        let i = remaining.trailing_zeros() as usize;
        let rest = remaining & !(1u32 << i);
        let mut r = rest;
        while r != 0 {
            let j = r.trailing_zeros() as usize;
            r &= r - 1;
            rec(m, rest & !(1u32 << j), prefix.clone() * m[i][j].clone(), total);
        }
    }

    let mut total = T::zero();
    rec(m, ((1u64 << n) - 1) as u32, T::one(), &mut total);
    Ok(total)
}
