//! Verification campaigns: run [`verify_graph_with`] over every sample of a
//! [`CampaignSpec`] and summarize.
//!
//! Samples may be processed on several threads; rows are always returned in
//! sample order, so identical specs give identical rows.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{verify_graph_with, VerificationRecord, DEFAULT_TOLERANCE};
use crate::count::CountOptions;
use crate::error::{Error, Result};
use crate::generators::CampaignSpec;
use crate::report::{Report, Summary, TOOL_VERSION};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CampaignOptions {
    pub tolerance: f64,
    pub count: CountOptions,
    /// Worker threads; `None` uses the global rayon pool, `Some(1)` runs
    /// inline.
    pub threads: Option<usize>,
}

impl Default for CampaignOptions {
    fn default() -> Self {
        CampaignOptions { tolerance: DEFAULT_TOLERANCE, count: CountOptions::default(), threads: Some(1) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignRow {
    pub index: usize,
    #[serde(flatten)]
    pub record: VerificationRecord,
    /// The family is known to attain the bound.
    pub expected_tight: bool,
    /// For expected-tight families: the exact count equals the known
    /// product of factorials.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
    pub violation: bool,
    /// Tight with a positive count but not a disjoint union of `K_{r,r}`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unexpected_tight: bool,
}

impl CampaignRow {
    pub fn passed(&self) -> bool {
        !self.violation && (!self.expected_tight || (self.record.tight && self.certified == Some(true)))
    }
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub index: usize,
    pub graph_id: String,
    /// Offending graph in edge-list form.
    pub dump: String,
}

#[derive(Clone, Debug)]
pub struct CampaignOutcome {
    pub rows: Vec<CampaignRow>,
    pub violations: Vec<Violation>,
    pub summary: Summary,
}

impl CampaignOutcome {
    pub fn into_report(self, spec: &CampaignSpec, command: Vec<String>) -> Report<CampaignRow> {
        Report {
            tool_version: TOOL_VERSION.to_owned(),
            command,
            campaign: Some(spec.clone()),
            rows: self.rows,
            checks: Vec::new(),
            notes: Vec::new(),
            summary: self.summary,
        }
    }
}

fn run_sample(spec: &CampaignSpec, index: usize, opts: &CampaignOptions) -> Result<(CampaignRow, Option<Violation>)> {
    let g = spec.graph(index)?;
    let id = spec.graph_id(index);
    let tight_count = spec.family.tight_count();
    let (record, violation) = match verify_graph_with(&g, opts.tolerance, &id, &opts.count) {
        Ok(r) => (r, None),
        Err(Error::Violation { record, dump }) => {
            let v = Violation { index, graph_id: id, dump };
            (*record, Some(v))
        }
        Err(e) => return Err(e),
    };
    let unexpected_tight =
        record.tight && tight_count.is_none() && !record.count.is_zero() && !g.is_balanced_complete_bipartite_union();
    let row = CampaignRow {
        index,
        expected_tight: tight_count.is_some(),
        certified: tight_count.map(|c| c == record.count),
        violation: violation.is_some(),
        unexpected_tight,
        record,
    };
    Ok((row, violation))
}

pub fn run_campaign(spec: &CampaignSpec, opts: &CampaignOptions) -> Result<CampaignOutcome> {
    spec.validate()?;
    let start = Instant::now();
    let work = |i: usize| run_sample(spec, i, opts);
    let results: Vec<Result<(CampaignRow, Option<Violation>)>> = match opts.threads {
        Some(1) => (0..spec.samples).map(work).collect(),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
            pool.install(|| (0..spec.samples).into_par_iter().map(work).collect())
        }
        None => (0..spec.samples).into_par_iter().map(work).collect(),
    };

    let mut rows = Vec::with_capacity(spec.samples);
    let mut violations = Vec::new();
    for r in results {
        let (row, v) = r?;
        rows.push(row);
        violations.extend(v);
    }
    let summary = summarize(&rows, start.elapsed().as_secs_f64());
    Ok(CampaignOutcome { rows, violations, summary })
}

fn summarize(rows: &[CampaignRow], wall_time_secs: f64) -> Summary {
    let passed = rows.iter().filter(|r| r.passed()).count();
    let max_violation = rows.iter().filter(|r| r.violation).map(|r| -r.record.slack).reduce(f64::max).unwrap_or(0.0);
    let min_slack = rows
        .iter()
        .map(|r| r.record.slack)
        .filter(|s| s.is_finite())
        .fold(None, |m: Option<f64>, s| Some(m.map_or(s, |m| m.min(s))));
    let unexpected_tight = rows.iter().filter(|r| r.unexpected_tight).map(|r| r.index).collect();
    Summary {
        total: rows.len(),
        passed,
        failed: rows.len() - passed,
        max_violation: Some(max_violation),
        min_slack,
        unexpected_tight,
        wall_time_secs,
    }
}

/// Writes a violating graph to `dir` under a timestamped name and returns
/// the path.
pub fn dump_violation(dir: &std::path::Path, v: &Violation) -> Result<std::path::PathBuf> {
    let stamp = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0);
    let path = dir.join(format!("violation-{stamp}-{}.txt", v.index));
    let text = format!("# {}\n{}", v.graph_id, v.dump);
    std::fs::write(&path, text)?;
    Ok(path)
}
