//! Deterministic graph families and seeded random graphs.
//!
//! # Random generator
//!
//! All randomness comes from SplitMix64 (Steele, Lea & Flood), pinned here
//! so that seeds reproduce the same graphs on every platform:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! output z ^ (z >> 31)
//! ```
//!
//! A uniform draw in `[0, 1)` is `(output >> 11) * 2^-53`; a pair becomes an
//! edge when its draw is `< p`. Pairs are visited in lexicographic order,
//! `(u, v)` with `u < v` for [`random_graph`] and `(left i, right j)` for
//! [`random_bipartite`]. Sample `i` of a campaign with seed `s` uses the
//! `(i + 1)`-th output of a SplitMix64 seeded with `s` as its graph seed.

use serde::{Deserialize, Serialize};

use crate::bigcount::BigCount;
use crate::error::{Error, Result};
use crate::graph::{disjoint_union, BipartiteIncidence, Graph};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// The `(index + 1)`-th output for `seed`, without stepping through the
    /// earlier ones.
    pub fn nth_output(seed: u64, index: u64) -> u64 {
        mix64(seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1))))
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

pub fn complete_graph(m: usize) -> Graph {
    let edges: Vec<_> = (0..m).flat_map(|i| ((i + 1)..m).map(move |j| (i, j))).collect();
    Graph::new(m, &edges).expect("valid by construction")
}

/// `K_{a,b}` with left part `0..a` and right part `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges: Vec<_> = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
    Graph::new(a + b, &edges).expect("valid by construction")
}

/// Disjoint union of `K_{r,r}` blocks in list order.
pub fn bipartite_union(rs: &[usize]) -> Result<Graph> {
    if let Some(&r) = rs.iter().find(|&&r| r == 0) {
        return Err(Error::OutOfDomain { what: "block size", value: r as u64, min: 1 });
    }
    Ok(rs.iter().fold(Graph::empty(0), |g, &r| disjoint_union(&g, &complete_bipartite(r, r))))
}

/// Exact matching count of [`bipartite_union`]: the product of `r!`.
pub fn bipartite_union_count(rs: &[usize]) -> BigCount {
    rs.iter().map(|&r| BigCount::factorial(r as u64)).product()
}

/// Each pair `u < v` is an edge independently with probability `p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.next_f64() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges)
}

/// Left part `0..n`, right part `n..2n`; each cross pair is an edge
/// independently with probability `p`.
pub fn random_bipartite(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.next_f64() < p {
                edges.push((i, n + j));
            }
        }
    }
    Graph::new(2 * n, &edges)
}

/// Random `n x n` 0/1 matrix, entries row-major with probability `p`.
pub fn random_matrix(n: usize, p: f64, seed: u64) -> Result<BipartiteIncidence> {
    check_probability(p)?;
    let mut rng = SplitMix64::new(seed);
    let rows = (0..n).map(|_| (0..n).map(|_| rng.next_f64() < p).collect()).collect();
    BipartiteIncidence::from_bool_rows(rows)
}

/// Number of labeled graphs on `n` vertices, or `None` past `2^63`.
pub fn labeled_graph_count(n: usize) -> Option<u64> {
    let pairs = n * n.saturating_sub(1) / 2;
    (pairs < 64).then(|| 1u64 << pairs)
}

/// The labeled graph whose edge set is encoded by `code`: bit `b` is the
/// `b`-th pair `(u, v)`, `u < v`, in lexicographic order.
pub fn labeled_graph(n: usize, code: u64) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .enumerate()
        .filter(|&(b, _)| b < 64 && code >> b & 1 == 1)
        .map(|(_, e)| e)
        .collect();
    Graph::new(n, &edges).expect("valid by construction")
}

/// Every labeled graph on `n` vertices (`n <= 11`).
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let count = labeled_graph_count(n).expect("at most 63 vertex pairs");
    (0..count).map(move |code| labeled_graph(n, code))
}

/// Graph family of a verification campaign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Complete { n: usize },
    CompleteBipartite { a: usize, b: usize },
    BipartiteUnion { rs: Vec<usize> },
    ErdosRenyi { n: usize, p: f64 },
    RandomBipartite { n: usize, p: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Complete { .. } => "complete",
            Family::CompleteBipartite { .. } => "complete_bipartite",
            Family::BipartiteUnion { .. } => "bipartite_union",
            Family::ErdosRenyi { .. } => "erdos_renyi",
            Family::RandomBipartite { .. } => "random_bipartite",
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, Family::ErdosRenyi { .. } | Family::RandomBipartite { .. })
    }

    /// Exact count of the family when it is known to attain the bound.
    pub fn tight_count(&self) -> Option<BigCount> {
        match self {
            Family::BipartiteUnion { rs } => Some(bipartite_union_count(rs)),
            Family::CompleteBipartite { a, b } if a == b => Some(BigCount::factorial(*a as u64)),
            _ => None,
        }
    }

    fn vertex_count(&self) -> usize {
        match self {
            Family::Complete { n } | Family::ErdosRenyi { n, .. } => *n,
            Family::CompleteBipartite { a, b } => a + b,
            Family::BipartiteUnion { rs } => 2 * rs.iter().sum::<usize>(),
            Family::RandomBipartite { n, .. } => 2 * n,
        }
    }
}

/// A reproducible sequence of graphs. Deterministic families produce the
/// same graph for every sample; random families need a seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub samples: usize,
}

/// Vertex ceiling for campaign graphs: adjacency bitmasks are one word.
pub const CAMPAIGN_MAX_VERTICES: usize = 64;

impl CampaignSpec {
    pub fn validate(&self) -> Result<()> {
        match &self.family {
            Family::ErdosRenyi { p, .. } | Family::RandomBipartite { p, .. } => check_probability(*p)?,
            Family::BipartiteUnion { rs } => {
                if let Some(&r) = rs.iter().find(|&&r| r == 0) {
                    return Err(Error::OutOfDomain { what: "block size", value: r as u64, min: 1 });
                }
            }
            _ => {}
        }
        let n = self.family.vertex_count();
        if n > CAMPAIGN_MAX_VERTICES {
            return Err(Error::TooLarge { what: "campaign graph size", n, limit: CAMPAIGN_MAX_VERTICES, hint: "" });
        }
        if self.family.is_random() && self.seed.is_none() {
            return Err(Error::MissingSeed { family: self.family.name() });
        }
        if self.samples == 0 {
            return Err(Error::OutOfDomain { what: "samples", value: 0, min: 1 });
        }
        Ok(())
    }

    /// Graph for sample `index`.
    pub fn graph(&self, index: usize) -> Result<Graph> {
        let sample_seed = || SplitMix64::nth_output(self.seed.unwrap_or(0), index as u64);
        match &self.family {
            Family::Complete { n } => Ok(complete_graph(*n)),
            Family::CompleteBipartite { a, b } => Ok(complete_bipartite(*a, *b)),
            Family::BipartiteUnion { rs } => bipartite_union(rs),
            Family::ErdosRenyi { n, p } => random_graph(*n, *p, sample_seed()),
            Family::RandomBipartite { n, p } => random_bipartite(*n, *p, sample_seed()),
        }
    }

    /// Human-readable identifier for sample `index`.
    pub fn graph_id(&self, index: usize) -> String {
        let base = match &self.family {
            Family::Complete { n } => format!("complete(n={n})"),
            Family::CompleteBipartite { a, b } => format!("complete_bipartite(a={a},b={b})"),
            Family::BipartiteUnion { rs } => {
                let list: Vec<String> = rs.iter().map(usize::to_string).collect();
                format!("bipartite_union(rs={})", list.join(","))
            }
            Family::ErdosRenyi { n, p } => format!("erdos_renyi(n={n},p={p})"),
            Family::RandomBipartite { n, p } => format!("random_bipartite(n={n},p={p})"),
        };
        match self.seed {
            Some(seed) if self.family.is_random() => format!("{base}#seed={seed}#{index}"),
            _ => format!("{base}#{index}"),
        }
    }
}
