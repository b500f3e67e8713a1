//! Degree-based upper bounds on perfect-matching counts and permanents,
//! computed in the log domain.
//!
//! For a graph with degrees `d_v` the matching bound is
//!
//! ```text
//! prod_v (d_v!)^(1 / (2 d_v))        (0^(1/0) taken as 0)
//! ```
//!
//! and for a square 0/1 matrix with row sums `r_i` the Bregman-Minc bound is
//! `prod_i (r_i!)^(1 / r_i)`. Both are carried as [`LogValue`]s so that
//! products of irrational factors never overflow.

use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::bigcount::BigCount;
use crate::count::{count_perfect_matchings, count_perfect_matchings_with, CountOptions};
use crate::edgelist::serialize_graph;
use crate::error::{Error, Result};
use crate::graph::{BipartiteIncidence, Graph};
use crate::scalar::{CompensatedSum, Real};

/// Default tolerance on natural logs for count-versus-bound comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A nonnegative real stored by its natural logarithm, with an explicit
/// zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue<R> {
    ln: Option<R>,
}

impl<R: Real> LogValue<R> {
    pub fn zero() -> Self {
        LogValue { ln: None }
    }

    pub fn one() -> Self {
        LogValue { ln: Some(R::zero()) }
    }

    pub fn from_ln(ln: R) -> Self {
        LogValue { ln: Some(ln) }
    }

    pub fn is_zero(&self) -> bool {
        self.ln.is_none()
    }

    /// `None` for zero.
    pub fn ln(&self) -> Option<R> {
        self.ln
    }

    /// Linear value; overflows to infinity for large logs.
    pub fn value(&self) -> R {
        self.ln.map_or(R::zero(), R::exp)
    }

    /// `ln` as `f64`, with `-inf` for zero.
    pub fn ln_f64(&self) -> f64 {
        self.ln.map_or(f64::NEG_INFINITY, Real::to_f64_lossy)
    }
}

impl<R: Real> Mul for LogValue<R> {
    type Output = LogValue<R>;

    // Logarithms add.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: LogValue<R>) -> LogValue<R> {
        match (self.ln, rhs.ln) {
            (Some(a), Some(b)) => LogValue::from_ln(a + b),
            _ => LogValue::zero(),
        }
    }
}

impl<R: Real> Serialize for LogValue<R> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::report::log12::serialize(&self.ln_f64(), s)
    }
}

impl<'de, R: Real> Deserialize<'de> for LogValue<R> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let x = crate::report::log12::deserialize(d)?;
        Ok(if x == f64::NEG_INFINITY { LogValue::zero() } else { LogValue::from_ln(R::from_f64_lossy(x)) })
    }
}

/// `ln k!` as the compensated sum of `ln j` for `j = 2..=k`.
pub fn log_factorial<R: Real>(k: u64) -> R {
    (2..=k).map(|j| R::from_u64_exact(j).ln()).collect::<CompensatedSum<R>>().value()
}

/// Source of `ln k!` values: computed on demand or read from a table.
pub trait LogFactorialSource<R> {
    fn log_factorial(&self, k: u64) -> R;
}

/// Computes every value from scratch.
#[derive(Clone, Copy, Debug, Default)]
pub struct DirectLogFactorial;

impl<R: Real> LogFactorialSource<R> for DirectLogFactorial {
    fn log_factorial(&self, k: u64) -> R {
        log_factorial(k)
    }
}

/// Prefix table of `ln k!` for `k = 0..=max`. Entries are produced by the
/// same running compensated sum as [`log_factorial`], so they agree with it
/// exactly.
#[derive(Clone, Debug)]
pub struct LogFactorials<R> {
    values: Vec<R>,
}

impl<R: Real> LogFactorials<R> {
    pub fn new(max: u64) -> Self {
        let mut values = Vec::with_capacity(max as usize + 1);
        values.push(R::zero());
        let mut acc = CompensatedSum::new();
        for k in 1..=max {
            if k >= 2 {
                acc.add(R::from_u64_exact(k).ln());
            }
            values.push(acc.value());
        }
        LogFactorials { values }
    }

    pub fn max(&self) -> u64 {
        self.values.len() as u64 - 1
    }
}

impl<R: Real> LogFactorialSource<R> for LogFactorials<R> {
    fn log_factorial(&self, k: u64) -> R {
        match self.values.get(k as usize) {
            Some(&v) => v,
            None => log_factorial(k),
        }
    }
}

/// Log of `(k!)^(1/k)` for `k >= 1`.
fn log_factorial_root<R: Real>(lf: &impl LogFactorialSource<R>, k: u64) -> R {
    lf.log_factorial(k) / R::from_u64_exact(k)
}

/// Matching bound `prod_v (deg v!)^(1/(2 deg v))`; zero if any vertex is
/// isolated.
pub fn friedland_bound_log<R: Real>(g: &Graph) -> LogValue<R> {
    let degrees = g.degrees();
    if degrees.contains(&0) {
        return LogValue::zero();
    }
    let two = R::from_u64_exact(2);
    let sum: CompensatedSum<R> =
        degrees.iter().map(|&d| log_factorial_root::<R>(&DirectLogFactorial, d as u64) / two).collect();
    LogValue::from_ln(sum.value())
}

/// Bregman-Minc bound `prod_i (r_i!)^(1/r_i)` over the row sums of a
/// square 0/1 matrix; zero if any row is empty.
pub fn bregman_minc_bound_log<R: Real>(b: &BipartiteIncidence) -> Result<LogValue<R>> {
    if !b.is_square() {
        return Err(Error::NotSquare { rows: b.rows(), cols: b.cols() });
    }
    let sums = b.row_sums();
    if sums.contains(&0) {
        return Ok(LogValue::zero());
    }
    let sum: CompensatedSum<R> = sums.iter().map(|&r| log_factorial_root(&DirectLogFactorial, r as u64)).collect();
    Ok(LogValue::from_ln(sum.value()))
}

/// One empirical instance of the matching bound: exact count, bound, and
/// their log difference.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub graph_id: String,
    pub n: usize,
    pub count: BigCount,
    /// `ln count`; `-inf` when the count is zero.
    #[serde(with = "crate::report::log12")]
    pub count_log: f64,
    pub bound_log: LogValue<f64>,
    /// `ln bound - ln count`. Zero when both vanish, `+inf` when only the
    /// count does.
    #[serde(with = "crate::report::log12")]
    pub slack: f64,
    pub tight: bool,
    pub degree_sequence: Vec<usize>,
}

/// Slack between a bound and a count, both as natural logs (`-inf` for 0).
pub fn slack(bound_ln: f64, count_ln: f64) -> f64 {
    match (bound_ln == f64::NEG_INFINITY, count_ln == f64::NEG_INFINITY) {
        (true, true) => 0.0,
        (false, true) => f64::INFINITY,
        (true, false) => f64::NEG_INFINITY,
        (false, false) => bound_ln - count_ln,
    }
}

/// Counts perfect matchings and compares with the degree bound. A slack
/// below `-tolerance` is returned as [`Error::Violation`] carrying the
/// record and the graph in edge-list form.
pub fn verify_graph(g: &Graph, tolerance: f64) -> Result<VerificationRecord> {
    verify_graph_with(g, tolerance, &graph_descriptor(g), &CountOptions::default())
}

pub fn verify_graph_with(g: &Graph, tolerance: f64, graph_id: &str, opts: &CountOptions) -> Result<VerificationRecord> {
    let count = count_perfect_matchings_with(g, opts)?;
    let count_log = count.ln();
    let bound_log = friedland_bound_log::<f64>(g);
    let slack = slack(bound_log.ln_f64(), count_log);
    let record = VerificationRecord {
        graph_id: graph_id.to_owned(),
        n: g.n(),
        count,
        count_log,
        bound_log,
        slack,
        tight: slack.abs() <= tolerance,
        degree_sequence: g.degrees(),
    };
    if slack < -tolerance || slack.is_nan() {
        return Err(Error::Violation { record: Box::new(record), dump: serialize_graph(g) });
    }
    Ok(record)
}

/// Compact identifier: `n<n>:` followed by the upper-triangle adjacency bits
/// in hex, pairs in lexicographic order, most significant bit first.
pub fn graph_descriptor(g: &Graph) -> String {
    let n = g.n();
    let bits: Vec<bool> =
        (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).map(|(i, j)| g.has_edge(i, j)).collect();
    let hex: String = bits
        .chunks(4)
        .map(|c| {
            let v = c.iter().enumerate().fold(0u32, |acc, (k, &b)| acc | (u32::from(b) << (3 - k)));
            char::from_digit(v, 16).unwrap_or('0')
        })
        .collect();
    format!("n{n}:{hex}")
}

/// Both sides, in logs, of the local row inequality
/// `H^H <= r_i^H * prod_{j ~ i} H_ij^H_ij`, where `H` counts perfect
/// matchings of the graph and `H_ij` those of the minor without `i, j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalLemmaCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

fn x_ln_x(c: &BigCount) -> f64 {
    if c.is_zero() {
        0.0
    } else {
        c.to_f64() * c.ln()
    }
}

pub fn check_local_lemma(g: &Graph, i: usize) -> Result<LocalLemmaCheck> {
    if g.n() % 2 == 1 {
        return Err(Error::OddOrder { what: "local row inequality", n: g.n() });
    }
    if i >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: i, n: g.n() });
    }
    let h = count_perfect_matchings(g)?;
    if h.is_zero() {
        return Ok(LocalLemmaCheck { lhs: 0.0, rhs: 0.0, holds: true });
    }
    let lhs = x_ln_x(&h);
    let mut rhs = CompensatedSum::new();
    rhs.add(h.to_f64() * (g.degree(i) as f64).ln());
    for j in g.neighbors(i) {
        rhs.add(x_ln_x(&count_perfect_matchings(&g.minor(i, j)?)?));
    }
    let rhs = rhs.value();
    Ok(LocalLemmaCheck { lhs, rhs, holds: lhs <= rhs + 1e-9 * rhs.abs().max(1.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::Dd;
    use crate::graph::disjoint_union;

    fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn kbip(a: usize, b: usize) -> Graph {
        let edges: Vec<_> = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
        Graph::new(a + b, &edges).unwrap()
    }

    #[test]
    fn log_factorial_examples() {
        assert_eq!(log_factorial::<f64>(0), 0.0);
        assert_eq!(log_factorial::<f64>(1), 0.0);
        assert!((log_factorial::<f64>(3) - 1.791759469228055).abs() < 1e-15);
        // 10! = 3628800 exactly.
        assert!((log_factorial::<f64>(10) - 3628800f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_factorial_double_double_reference() {
        // ln(10000!) split as (hi, lo), from a 50-digit evaluation.
        let got: Dd = log_factorial(10_000);
        let want = Dd::new(82108.92783681436, -3.396006464210627e-12);
        assert!((got - want).abs().hi() < 1e-25, "{got}");
        let got: Dd = log_factorial(100);
        let want = Dd::new(363.73937555556347, 2.035561294749625e-14);
        assert!((got - want).abs().hi() < 1e-28, "{got}");
    }

    #[test]
    fn table_matches_direct_exactly() {
        let t = LogFactorials::<f64>::new(500);
        for k in [0u64, 1, 2, 3, 17, 256, 500] {
            assert_eq!(t.log_factorial(k), log_factorial::<f64>(k));
        }
        assert_eq!(t.log_factorial(700), log_factorial::<f64>(700));
        let t = LogFactorials::<Dd>::new(64);
        assert_eq!(t.log_factorial(64), log_factorial::<Dd>(64));
    }

    #[test]
    fn log_value_arithmetic() {
        let a = LogValue::<f64>::from_ln(2.0);
        let b = LogValue::from_ln(3.0);
        assert_eq!((a * b).ln(), Some(5.0));
        assert!((a * LogValue::zero()).is_zero());
        assert_eq!(LogValue::<f64>::zero().value(), 0.0);
        assert_eq!(LogValue::<f64>::one().value(), 1.0);
    }

    #[test]
    fn friedland_examples() {
        let b = friedland_bound_log::<f64>(&kbip(3, 3));
        assert!((b.ln().unwrap() - 6f64.ln()).abs() < 1e-14);

        let mut g = Graph::new(4, &[(0, 1), (1, 2)]).unwrap();
        assert!(friedland_bound_log::<f64>(&g).is_zero());
        g = complete(4);
        let b = friedland_bound_log::<f64>(&g);
        assert!((b.ln().unwrap() - 4.0 * 6f64.ln() / 6.0).abs() < 1e-14);
        assert!((b.value() - 3.3019272488946267).abs() < 1e-12);
    }

    #[test]
    fn bregman_minc_examples() {
        let j3 = BipartiteIncidence::all_ones(3);
        assert!((bregman_minc_bound_log::<f64>(&j3).unwrap().ln().unwrap() - 6f64.ln()).abs() < 1e-14);
        assert_eq!(bregman_minc_bound_log::<f64>(&BipartiteIncidence::identity(3)).unwrap().ln(), Some(0.0));

        let upper = BipartiteIncidence::from_rows(&[vec![1, 1, 1], vec![0, 1, 1], vec![0, 0, 1]]).unwrap();
        let ln = bregman_minc_bound_log::<f64>(&upper).unwrap().ln().unwrap();
        assert!((ln - (6f64.ln() / 3.0 + 2f64.ln() / 2.0)).abs() < 1e-14);
        assert!((ln.exp() - 2.5697965868507).abs() < 1e-9);

        let zero_row = BipartiteIncidence::from_rows(&[vec![1, 1], vec![0, 0]]).unwrap();
        assert!(bregman_minc_bound_log::<f64>(&zero_row).unwrap().is_zero());
        let rect = BipartiteIncidence::from_rows(&[vec![1, 1]]).unwrap();
        assert!(bregman_minc_bound_log::<f64>(&rect).is_err());
    }

    #[test]
    fn verify_examples() {
        let g = disjoint_union(&kbip(2, 2), &kbip(3, 3));
        let r = verify_graph(&g, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.count, 12);
        assert!((r.bound_log.ln().unwrap() - 12f64.ln()).abs() < 1e-12);
        assert!(r.tight);

        let r = verify_graph(&complete(4), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.count, 3);
        assert!(!r.tight);
        assert!((r.slack - (3.3019272488946267f64 / 3.0).ln()).abs() < 1e-12);

        let r = verify_graph(&Graph::empty(2), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.count, 0);
        assert!(r.bound_log.is_zero());
        assert_eq!(r.slack, 0.0);
        assert!(r.tight);

        // Count zero with a positive bound: the triangle.
        let r = verify_graph(&complete(3), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.slack, f64::INFINITY);
        assert!(!r.tight);
    }

    #[test]
    fn violation_is_an_error_with_dump() {
        // An absurd negative tolerance turns any finite slack into a
        // violation, exercising the error path.
        match verify_graph(&complete(4), -1.0) {
            Err(Error::Violation { record, dump }) => {
                assert_eq!(record.count, 3);
                assert!(dump.starts_with("p 4\n"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn descriptor_encodes_edges() {
        assert_eq!(graph_descriptor(&complete(4)), "n4:fc");
        assert_eq!(graph_descriptor(&Graph::empty(1)), "n1:");
    }

    #[test]
    fn local_lemma_examples() {
        let c = check_local_lemma(&complete(4), 0).unwrap();
        assert!((c.lhs - 3.0 * 3f64.ln()).abs() < 1e-12);
        assert!((c.rhs - 3.0 * 3f64.ln()).abs() < 1e-12);
        assert!(c.holds);

        let c = check_local_lemma(&kbip(3, 3), 0).unwrap();
        assert!((c.lhs - 6.0 * 6f64.ln()).abs() < 1e-12);
        assert!((c.rhs - (6.0 * 3f64.ln() + 3.0 * 2.0 * 2f64.ln())).abs() < 1e-12);
        assert!(c.holds);

        let c = check_local_lemma(&Graph::empty(4), 1).unwrap();
        assert_eq!(c, LocalLemmaCheck { lhs: 0.0, rhs: 0.0, holds: true });
        assert!(matches!(check_local_lemma(&complete(3), 0), Err(Error::OddOrder { .. })));
    }

    #[test]
    fn record_json_shape() {
        let r = verify_graph(&Graph::empty(2), DEFAULT_TOLERANCE).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["count"], "0");
        assert_eq!(v["count_log"], "-inf");
        assert_eq!(v["bound_log"], "-inf");
        assert_eq!(v["slack"], 0.0);
        let back: VerificationRecord = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
