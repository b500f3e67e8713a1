//! Undirected simple graphs stored as adjacency bitsets.
//!
//! A [`Graph`] is also its own 0/1 symmetric adjacency matrix with zero
//! diagonal; row `i` is the bitset of neighbors of vertex `i`. Vertices are
//! dense indices `0..n`. Graphs are immutable once built.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("edges", &self.edges()).finish()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(WORD).max(1);
        Graph { n, words, adj: vec![0; n * words] }
    }

    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) collapse to one; self-loops and out-of-range endpoints
    /// are rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::SelfLoop { vertex: u });
            }
            g.set(u, v);
            g.set(v, u);
        }
        Ok(g)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.adj[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize) {
        self.adj[i * self.words + j / WORD] |= 1u64 << (j % WORD);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u * self.words + v / WORD] >> (v % WORD) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.degrees().iter().sum::<usize>() / 2
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(w, &bits)| BitIter(bits).map(move |b| w * WORD + b))
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v))).collect()
    }

    /// Adjacency rows as single-word masks, available when `n <= 64`.
    pub fn masks(&self) -> Option<Vec<u64>> {
        (self.n <= WORD).then(|| (0..self.n).map(|i| self.row(i)[0]).collect())
    }

    /// Deletes vertices `i` and `j` (rows and columns of the adjacency
    /// matrix). Surviving vertices keep their relative order.
    pub fn minor(&self, i: usize, j: usize) -> Result<Graph> {
        if i == j || i >= self.n || j >= self.n {
            return Err(Error::InvalidMinor { i, j, n: self.n });
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| v != i && v != j).collect();
        Ok(self.induced(&keep))
    }

    /// Subgraph induced on `vertices`, relabelled `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate() {
                if self.has_edge(u, v) {
                    g.set(a, b);
                }
            }
        }
        g
    }

    /// Connected components, each sorted, ordered by lowest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Two-coloring by breadth-first search, or `None` when the graph has an
    /// odd cycle. The lowest vertex of every component (and hence every
    /// isolated vertex) is colored left. Both sides are sorted.
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        for start in 0..self.n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap_or(false);
                for v in self.neighbors(u) {
                    match color[v] {
                        None => {
                            color[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for (v, c) in color.into_iter().enumerate() {
            if c == Some(true) {
                right.push(v);
            } else {
                left.push(v);
            }
        }
        Some((left, right))
    }

    /// Incidence matrix between two vertex lists: entry `(a, b)` is set iff
    /// `left[a]` is adjacent to `right[b]`.
    pub fn incidence(&self, left: &[usize], right: &[usize]) -> BipartiteIncidence {
        let rows = left.iter().map(|&u| right.iter().map(|&v| self.has_edge(u, v)).collect()).collect();
        BipartiteIncidence { rows: left.len(), cols: right.len(), entries: rows }
    }

    /// True when every component is a complete bipartite graph `K_{r,r}`
    /// with `r >= 1`.
    pub fn is_balanced_complete_bipartite_union(&self) -> bool {
        self.components().iter().all(|comp| {
            let sub = self.induced(comp);
            match sub.bipartition() {
                Some((l, r)) if !l.is_empty() && l.len() == r.len() => sub.edge_count() == l.len() * r.len(),
                _ => false,
            }
        })
    }

    /// 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.n).map(|i| (0..self.n).map(|j| u8::from(self.has_edge(i, j))).collect()).collect()
    }
}

/// Disjoint union; vertices of `b` are shifted by `a.n()`.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let mut g = Graph::empty(a.n + b.n);
    for (u, v) in a.edges() {
        g.set(u, v);
        g.set(v, u);
    }
    for (u, v) in b.edges() {
        g.set(u + a.n, v + a.n);
        g.set(v + a.n, u + a.n);
    }
    g
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let b = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(b)
        }
    }
}

/// Iterates the set bits of a word, lowest first.
pub(crate) fn bits(mask: u64) -> impl Iterator<Item = usize> {
    BitIter(mask)
}

/// Rectangular 0/1 matrix; the biadjacency matrix of a bipartite graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteIncidence {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<bool>>,
}

impl BipartiteIncidence {
    /// Validates a row-major 0/1 matrix. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::NotSquare { rows: rows.len(), cols: row.len() });
            }
            let mut out = Vec::with_capacity(cols);
            for (j, &x) in row.iter().enumerate() {
                match x {
                    0 => out.push(false),
                    1 => out.push(true),
                    _ => return Err(Error::NotBinary { row: i, col: j }),
                }
            }
            entries.push(out);
        }
        Ok(BipartiteIncidence { rows: rows.len(), cols, entries })
    }

    pub fn from_bool_rows(entries: Vec<Vec<bool>>) -> Result<Self> {
        let cols = entries.first().map_or(0, Vec::len);
        if let Some(bad) = entries.iter().find(|r| r.len() != cols) {
            return Err(Error::NotSquare { rows: entries.len(), cols: bad.len() });
        }
        Ok(BipartiteIncidence { rows: entries.len(), cols, entries })
    }

    /// The all-ones `r x r` matrix.
    pub fn all_ones(r: usize) -> Self {
        BipartiteIncidence { rows: r, cols: r, entries: vec![vec![true; r]; r] }
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        BipartiteIncidence { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.entries[i][j]
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.entries.iter().map(|r| r.iter().filter(|&&x| x).count()).collect()
    }

    pub fn transpose(&self) -> Self {
        let entries = (0..self.cols).map(|j| (0..self.rows).map(|i| self.entries[i][j]).collect()).collect();
        BipartiteIncidence { rows: self.cols, cols: self.rows, entries }
    }

    /// Bipartite graph with rows as vertices `0..rows` and columns as
    /// vertices `rows..rows + cols`.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::empty(self.rows + self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.entries[i][j] {
                    g.set(i, self.rows + j);
                    g.set(self.rows + j, i);
                }
            }
        }
        g
    }
}

/// A perfect matching as a list of pairs `(i, j)` with `i < j`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Canonicalizes the pairs. Returns `None` if they are not disjoint or
    /// do not cover `0..n`.
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Option<Self> {
        let mut seen = vec![false; n];
        let mut canon = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if i == j || j >= n || seen[i] || seen[j] {
                return None;
            }
            seen[i] = true;
            seen[j] = true;
            canon.push((i, j));
        }
        if seen.iter().any(|&s| !s) {
            return None;
        }
        canon.sort_unstable();
        Some(Matching { pairs: canon })
    }

    pub(crate) fn from_sorted(pairs: Vec<(usize, usize)>) -> Self {
        Matching { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The matching as a fixed-point-free involution: `partner[v]` is the
    /// vertex matched with `v`.
    pub fn partners(&self) -> Vec<usize> {
        let mut p = vec![0; self.pairs.len() * 2];
        for &(i, j) in &self.pairs {
            p[i] = j;
            p[j] = i;
        }
        p
    }

    pub fn is_in(&self, g: &Graph) -> bool {
        self.pairs.iter().all(|&(i, j)| g.has_edge(i, j))
    }
}
