//! Exact perfect-matching counts, hafnians and permanents of small graphs
//! and 0/1 matrices, together with the degree-based upper bound
//! `perfmat G <= prod_v (deg v!)^(1/(2 deg v))`, the Bregman-Minc bound for
//! permanents, and numerical checks of the analytic lemmas behind them.
//!
//! Counts are always exact ([`BigCount`]). Bounds and lemma quantities are
//! generic over the [`Real`] scalar; the aliases below fix the common
//! choices.

pub mod bigcount;
pub mod bounds;
pub mod campaign;
pub mod count;
pub mod dd;
pub mod edgelist;
pub mod error;
pub mod generators;
pub mod graph;
pub mod lemmas;
pub mod report;
pub mod scalar;

pub use bigcount::BigCount;
pub use bounds::{
    bregman_minc_bound_log, check_local_lemma, friedland_bound_log, log_factorial, verify_graph, verify_graph_with,
    LocalLemmaCheck, LogFactorials, LogValue, VerificationRecord, DEFAULT_TOLERANCE,
};
pub use campaign::{run_campaign, CampaignOptions, CampaignOutcome, CampaignRow};
pub use count::{
    count_perfect_matchings, count_perfect_matchings_with, count_via_permanent, enumerate_matchings, hafnian_expand,
    permanent, permanent_naive, weighted_hafnian, CountOptions,
};
pub use dd::Dd;
pub use edgelist::{parse_graph, serialize_graph};
pub use error::{Error, Result};
pub use generators::{CampaignSpec, Family, SplitMix64};
pub use graph::{disjoint_union, BipartiteIncidence, Graph, Matching};
pub use lemmas::{sweep_lemmas, LemmaSample, LemmaSweep};
pub use report::{Report, Summary};
pub use scalar::Real;

/// Log-domain value in double precision.
pub type LogValue64 = LogValue<f64>;
/// Log-domain value in double-double precision.
pub type LogValueDd = LogValue<Dd>;
pub type LogFactorials64 = LogFactorials<f64>;
pub type LogFactorialsDd = LogFactorials<Dd>;
