use std::error::Error;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use perfmat_core::campaign::{dump_violation, run_campaign, CampaignOptions};
use perfmat_core::count::DEFAULT_MAX_VERTICES;
use perfmat_core::report::{log12, TOOL_VERSION};
use perfmat_core::{
    count_perfect_matchings_with, friedland_bound_log, serialize_graph, sweep_lemmas, BigCount, CountOptions, Dd,
    LemmaSweep, Report, Summary, DEFAULT_TOLERANCE,
};
use serde::Serialize;

use crate::family::{input_graph, FamilyArgs};

type CmdResult = Result<bool, Box<dyn Error>>;

#[derive(Args)]
pub struct CountArgs {
    /// Edge-list file, or `-` for standard input.
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Use the graph of this campaign sample instead of `--seed` directly.
    #[arg(long)]
    pub sample: Option<usize>,
    /// Largest connected component the counter accepts (at most 64).
    #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct BoundArgs {
    /// Edge-list file, or `-` for standard input.
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    /// A row violates the bound when its log slack is below `-tol`.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE, allow_negative_numbers = true)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where violating graphs are written.
    #[arg(long, default_value = ".")]
    pub dump_dir: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "kebab-case")]
pub enum Precision {
    Double,
    DoubleDouble,
}

#[derive(Args)]
pub struct LemmasArgs {
    #[arg(long, default_value_t = 100)]
    pub r_max: u64,
    /// Stirling remainders are checked for k = 1..=theta-max.
    #[arg(long, default_value_t = 10_000)]
    pub theta_max: u64,
    /// Plain double precision cannot separate the Stirling remainder from 1
    /// beyond k of about 1300.
    #[arg(long, value_enum, default_value_t = Precision::DoubleDouble)]
    pub precision: Precision,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub sample: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, Box<dyn Error>> {
    if threads == 1 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    Ok(pool.install(f))
}

fn write_json(value: &impl Serialize, json: bool, out: &Option<PathBuf>) -> Result<(), Box<dyn Error>> {
    let text = serde_json::to_string_pretty(value)?;
    if let Some(path) = out {
        std::fs::write(path, format!("{text}\n")).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if json {
        println!("{text}");
    }
    Ok(())
}

#[derive(Serialize)]
struct CountOutput {
    tool_version: &'static str,
    command: Vec<String>,
    n: usize,
    edges: usize,
    count: BigCount,
}

pub fn count(args: CountArgs, command: Vec<String>) -> CmdResult {
    let g = input_graph(&args.input, &args.family, args.sample)?;
    let opts = CountOptions { max_vertices: args.max_vertices, parallel: args.threads != 1 };
    let count = in_pool(args.threads, || count_perfect_matchings_with(&g, &opts))??;
    if args.json {
        let out = CountOutput { tool_version: TOOL_VERSION, command, n: g.n(), edges: g.edge_count(), count };
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("{count}");
    }
    Ok(true)
}

#[derive(Serialize)]
struct BoundOutput {
    tool_version: &'static str,
    command: Vec<String>,
    n: usize,
    #[serde(with = "log12")]
    bound_log: f64,
    /// Linear value, absent when it does not fit a double.
    bound: Option<f64>,
}

/// `0` for the zero bound, six decimals while the value fits a double,
/// scientific notation beyond.
fn format_linear(ln: f64) -> String {
    if ln == f64::NEG_INFINITY {
        "0".into()
    } else if ln <= 700.0 {
        format!("{:.6}", ln.exp())
    } else {
        let decimal = ln / std::f64::consts::LN_10;
        let mut exponent = decimal.floor() as i64;
        let mut mantissa = format!("{:.6}", 10f64.powf(decimal - exponent as f64));
        if mantissa.starts_with("10") {
            exponent += 1;
            mantissa = "1.000000".into();
        }
        format!("{mantissa}e{exponent}")
    }
}

pub fn bound(args: BoundArgs, command: Vec<String>) -> CmdResult {
    let g = input_graph(&args.input, &args.family, args.sample)?;
    let ln = friedland_bound_log::<f64>(&g).ln_f64();
    if args.json {
        let bound = (ln <= 700.0).then(|| ln.exp());
        let out = BoundOutput { tool_version: TOOL_VERSION, command, n: g.n(), bound_log: ln, bound };
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("{}", format_linear(ln));
        println!("ln {}", log12::format(ln));
    }
    Ok(true)
}

pub fn verify(args: VerifyArgs, command: Vec<String>) -> CmdResult {
    let spec = args.family.spec(args.samples)?;
    let opts = CampaignOptions {
        tolerance: args.tol,
        count: CountOptions { max_vertices: args.max_vertices, parallel: false },
        threads: (args.threads != 0).then_some(args.threads),
    };
    let outcome = run_campaign(&spec, &opts)?;
    let mut dumped = Vec::new();
    for v in &outcome.violations {
        dumped.push(dump_violation(&args.dump_dir, v)?);
    }
    let report = outcome.into_report(&spec, command);

    if !args.json {
        println!("index\tcount\tbound_log\tslack\ttight\tgraph");
        for row in &report.rows {
            let r = &row.record;
            let mut flags = String::new();
            if row.violation {
                flags.push_str("\tVIOLATION");
            }
            if row.expected_tight && !row.passed() {
                flags.push_str("\tNOT-TIGHT");
            }
            if row.unexpected_tight {
                flags.push_str("\tUNEXPECTED-TIGHT");
            }
            println!(
                "{}\t{}\t{}\t{}\t{}\t{}{flags}",
                row.index,
                r.count,
                log12::format(r.bound_log.ln_f64()),
                log12::format(r.slack),
                r.tight,
                r.graph_id
            );
        }
        print_summary(&report.summary);
    }
    for path in &dumped {
        eprintln!("violating graph written to {}", path.display());
    }
    write_json(&report, args.json, &args.out)?;
    Ok(report.ok())
}

fn print_summary(s: &Summary) {
    println!("total {}  passed {}  failed {}", s.total, s.passed, s.failed);
    if let Some(m) = s.min_slack {
        println!("min slack {}", log12::format(m));
    }
    if let Some(m) = s.max_violation.filter(|&m| m > 0.0) {
        println!("max violation {}", log12::format(m));
    }
    if !s.unexpected_tight.is_empty() {
        println!("tight outside the K_{{r,r}} unions: samples {:?}", s.unexpected_tight);
    }
    println!("wall time {:.3} s", s.wall_time_secs);
}

fn sweep(args: &LemmasArgs) -> perfmat_core::Result<LemmaSweep> {
    match args.precision {
        Precision::Double => sweep_lemmas::<f64>(args.r_max, args.theta_max),
        Precision::DoubleDouble => sweep_lemmas::<Dd>(args.r_max, args.theta_max),
    }
}

pub fn lemmas(args: LemmasArgs, command: Vec<String>) -> CmdResult {
    let start = Instant::now();
    let sweep = sweep(&args)?;
    let passed = sweep.checks.iter().filter(|c| c.passed).count();
    let mut notes = Vec::new();
    match sweep.margin_decreases_beyond_checked {
        Some(true) => notes.push(format!("margin keeps decreasing up to r = {} (not asserted)", args.r_max)),
        Some(false) => notes.push(format!("margin stops decreasing before r = {} (not asserted)", args.r_max)),
        None => {}
    }
    let report = Report {
        tool_version: TOOL_VERSION.to_owned(),
        command,
        campaign: None,
        summary: Summary {
            total: sweep.checks.len(),
            passed,
            failed: sweep.checks.len() - passed,
            max_violation: None,
            min_slack: None,
            unexpected_tight: Vec::new(),
            wall_time_secs: start.elapsed().as_secs_f64(),
        },
        rows: sweep.samples,
        checks: sweep.checks,
        notes,
    };

    if !args.json {
        println!("r\tmargin\tconcavity_gap\texcess\texcess_bound\tfactorial_root\ttheta");
        for s in &report.rows {
            let cols = [s.margin, s.concavity_gap, s.excess, s.excess_bound, s.factorial_root, s.theta];
            let cols: Vec<String> = cols.iter().map(|&x| log12::format(x)).collect();
            println!("{}\t{}", s.r, cols.join("\t"));
        }
        for c in &report.checks {
            println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        for n in &report.notes {
            println!("note: {n}");
        }
        let precision = match args.precision {
            Precision::Double => "double",
            Precision::DoubleDouble => "double-double",
        };
        println!("{} of {} checks passed ({precision} precision)", passed, report.checks.len());
    }
    write_json(&report, args.json, &args.out)?;
    Ok(report.ok())
}

pub fn gen(args: GenArgs) -> CmdResult {
    let g = args.family.graph(args.sample)?;
    let text = serialize_graph(&g);
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(true)
}
