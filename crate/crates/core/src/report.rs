//! Machine-readable reports shared by the verification campaigns and the
//! lemma sweeps.

use serde::{Deserialize, Serialize};

use crate::generators::CampaignSpec;
use crate::lemmas::Check;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<Row> {
    pub tool_version: String,
    /// Command line that produced the report.
    pub command: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub campaign: Option<CampaignSpec>,
    pub rows: Vec<Row>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    /// Informational findings that never affect the outcome.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub summary: Summary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Largest `-slack` over violating rows (0 when none).
    #[serde(default, skip_serializing_if = "Option::is_none", with = "log12::option")]
    pub max_violation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "log12::option")]
    pub min_slack: Option<f64>,
    /// Rows reported tight that are not disjoint unions of `K_{r,r}`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unexpected_tight: Vec<usize>,
    pub wall_time_secs: f64,
}

impl Summary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

impl<Row> Report<Row> {
    pub fn ok(&self) -> bool {
        self.summary.ok() && self.checks.iter().all(|c| c.passed)
    }
}

/// Serde adapter for logarithms: finite values as JSON numbers rounded to
/// 12 significant digits, non-finite values as the strings `"inf"`,
/// `"-inf"` and `"nan"`.
pub mod log12 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn round12(x: f64) -> f64 {
        if x.is_finite() {
            format!("{x:.11e}").parse().unwrap_or(x)
        } else {
            x
        }
    }

    /// 12 significant digits, or `inf` / `-inf` / `nan`.
    pub fn format(x: f64) -> String {
        if x.is_nan() {
            "nan".into()
        } else if x.is_infinite() {
            if x > 0.0 { "inf" } else { "-inf" }.into()
        } else {
            let r = round12(x);
            if r != 0.0 && !(1e-4..1e15).contains(&r.abs()) {
                format!("{r:e}")
            } else {
                format!("{r}")
            }
        }
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(round12(*x))
        } else {
            s.serialize_str(&format(*x))
        }
    }

    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("invalid log value {other:?}"))),
            },
        }
    }

    pub mod option {
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(v) => super::serialize(v, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
            #[derive(Deserialize)]
            struct Wrap(#[serde(with = "super")] f64);
            Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
        }
    }
}
