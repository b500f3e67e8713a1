//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines are always
//! shown.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use perfmat_core::bounds::slack;
use perfmat_core::campaign::{run_campaign, CampaignOptions};
use perfmat_core::generators::{
    all_graphs, bipartite_union, bipartite_union_count, complete_graph, random_bipartite, random_graph, random_matrix,
    SplitMix64,
};
use perfmat_core::lemmas::{concavity_margin, stirling_log_term, stirling_theta};
use perfmat_core::{
    bregman_minc_bound_log, check_local_lemma, count_perfect_matchings, count_via_permanent, enumerate_matchings,
    hafnian_expand, permanent, permanent_naive, sweep_lemmas, verify_graph, BigCount, BipartiteIncidence, CampaignSpec,
    Dd, Error, Family, Graph, LemmaSweep,
};
use rayon::prelude::*;

const TOL: f64 = 1e-9;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn small_graphs() -> Vec<Graph> {
    (0..=6).flat_map(all_graphs).collect()
}

fn multisets(max_blocks: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(rs) = stack.pop() {
        if !rs.is_empty() {
            out.push(rs.clone());
        }
        if rs.len() < max_blocks {
            for r in *rs.last().unwrap_or(&1)..=6 {
                let mut next = rs.clone();
                next.push(r);
                stack.push(next);
            }
        }
    }
    out
}

fn tight_families() -> Outcome {
    let sets = multisets(3);
    let mut worst: f64 = 0.0;
    for rs in &sets {
        let g = bipartite_union(rs).map_err(|e| e.to_string())?;
        let r = verify_graph(&g, TOL).map_err(|e| e.to_string())?;
        ensure(r.count == bipartite_union_count(rs), || format!("{rs:?}: count {}", r.count))?;
        ensure(r.slack.abs() <= TOL, || format!("{rs:?}: slack {}", r.slack))?;
        worst = worst.max(r.slack.abs());
    }
    Ok(format!("{} multisets, max |slack| {worst:.1e}", sets.len()))
}

fn main_inequality(small: &[Graph]) -> Outcome {
    let min_small = small
        .par_iter()
        .map(|g| verify_graph(g, TOL).map(|r| r.slack))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .fold(f64::INFINITY, f64::min);

    let mut random = 0;
    let mut violations = 0;
    let mut min_random = f64::INFINITY;
    let opts = CampaignOptions { threads: None, ..CampaignOptions::default() };
    let mut seed = 1000;
    for n in [8, 10, 12, 14, 16] {
        for p in [0.2, 0.5, 0.8] {
            seed += 1;
            let spec = CampaignSpec { family: Family::ErdosRenyi { n, p }, seed: Some(seed), samples: 667 };
            let out = run_campaign(&spec, &opts).map_err(|e| e.to_string())?;
            random += out.rows.len();
            violations += out.violations.len();
            min_random = out.rows.iter().map(|r| r.record.slack).fold(min_random, f64::min);
        }
    }
    ensure(min_small >= -TOL, || format!("small graphs: min slack {min_small}"))?;
    ensure(violations == 0, || format!("{violations} violations among random graphs"))?;
    Ok(format!(
        "{} graphs n <= 6 (min slack {min_small:.1e}), {random} random graphs (min slack {min_random:.1e}), 0 violations",
        small.len()
    ))
}

fn oracle_equivalence(small: &[Graph]) -> Outcome {
    small.par_iter().try_for_each(|g| {
        let c = count_perfect_matchings(g).map_err(|e| e.to_string())?;
        let listed = enumerate_matchings(g).map_err(|e| e.to_string())?.len();
        ensure(c == listed as u64, || format!("{g:?}: {c} vs {listed}"))
    })?;
    let mut rng = SplitMix64::new(3);
    for _ in 0..500 {
        let n = (rng.next_u64() % 11) as usize;
        let g = random_graph(n, 0.5, rng.next_u64()).map_err(|e| e.to_string())?;
        let c = count_perfect_matchings(&g).map_err(|e| e.to_string())?;
        let listed = enumerate_matchings(&g).map_err(|e| e.to_string())?.len();
        ensure(c == listed as u64, || format!("{g:?}: {c} vs {listed}"))?;
    }
    let mut rows = 0;
    for _ in 0..200 {
        let n = 2 * (1 + (rng.next_u64() % 6) as usize);
        let g = random_graph(n, 0.6, rng.next_u64()).map_err(|e| e.to_string())?;
        let c = count_perfect_matchings(&g).map_err(|e| e.to_string())?;
        for i in 0..n {
            let h = hafnian_expand(&g, i).map_err(|e| e.to_string())?;
            ensure(h == c, || format!("row {i} of {g:?}: {h} vs {c}"))?;
            rows += 1;
        }
    }
    Ok(format!("{} + 500 graphs against enumeration, {rows} row expansions", small.len()))
}

fn bipartite_reduction() -> Outcome {
    let mut rng = SplitMix64::new(4);
    let mut via_permanent = 0;
    for _ in 0..1000 {
        let n = 1 + (rng.next_u64() % 12) as usize;
        let p = [0.3, 0.5, 0.7][(rng.next_u64() % 3) as usize];
        let g = random_bipartite(n, p, rng.next_u64()).map_err(|e| e.to_string())?;
        let c = count_perfect_matchings(&g).map_err(|e| e.to_string())?;
        match count_via_permanent(&g) {
            Ok(perm) => {
                ensure(perm == c, || format!("{g:?}: permanent {perm} vs {c}"))?;
                via_permanent += 1;
            }
            Err(Error::Unbalanced { .. }) => ensure(c.is_zero(), || format!("{g:?}: unbalanced but count {c}"))?,
            Err(e) => return Err(e.to_string()),
        }
    }
    for _ in 0..500 {
        let n = (rng.next_u64() % 8) as usize;
        let b = random_matrix(n, 0.5, rng.next_u64()).map_err(|e| e.to_string())?;
        let (fast, slow) = (permanent(&b).map_err(|e| e.to_string())?, permanent_naive(&b).map_err(|e| e.to_string())?);
        ensure(fast == slow, || format!("{b:?}: Ryser {fast} vs naive {slow}"))?;
    }
    Ok(format!("1000 bipartite graphs ({via_permanent} balanced), 500 Ryser/naive pairs"))
}

fn bregman_minc() -> Outcome {
    let mut rng = SplitMix64::new(5);
    let mut min_gap = f64::INFINITY;
    for _ in 0..1000 {
        let n = 1 + (rng.next_u64() % 10) as usize;
        let p = [0.3, 0.5, 0.7, 0.9][(rng.next_u64() % 4) as usize];
        let b = random_matrix(n, p, rng.next_u64()).map_err(|e| e.to_string())?;
        let perm = permanent(&b).map_err(|e| e.to_string())?;
        let bound = bregman_minc_bound_log::<f64>(&b).map_err(|e| e.to_string())?;
        let gap = slack(bound.ln_f64(), perm.ln());
        ensure(gap >= -TOL, || format!("{b:?}: ln perm exceeds bound by {}", -gap))?;
        min_gap = min_gap.min(gap);
    }
    for r in 1..=6u64 {
        let j = BipartiteIncidence::all_ones(r as usize);
        let perm = permanent(&j).map_err(|e| e.to_string())?;
        ensure(perm == BigCount::factorial(r), || format!("perm J_{r} = {perm}"))?;
        let bound: Dd = bregman_minc_bound_log::<Dd>(&j).map_err(|e| e.to_string())?.ln().unwrap_or_default();
        let exact = Dd::from(perm.to_u64().unwrap_or(0)).ln();
        ensure((bound - exact).abs() < Dd::from(1e-25), || format!("J_{r}: bound {bound} vs ln r! {exact}"))?;
    }
    Ok(format!("1000 matrices (min slack {min_gap:.1e}), J_1..J_6 exact"))
}

fn check(sweep: &LemmaSweep, name: &str) -> Result<String, String> {
    let c = sweep.checks.iter().find(|c| c.name == name).ok_or(format!("check {name:?} missing"))?;
    ensure(c.passed, || format!("{name}: {}", c.detail))?;
    Ok(c.detail.clone())
}

fn lemma_values(sweep: &LemmaSweep) -> Outcome {
    let s3 = f64::from(concavity_margin::<Dd>(3).map_err(|e| e.to_string())?);
    let s4 = f64::from(concavity_margin::<Dd>(4).map_err(|e| e.to_string())?);
    ensure((s3 - (9.0f64 / 16.0).ln()).abs() <= 1e-12, || format!("s_3 = {s3}"))?;
    ensure((s4 - (128.0f64 / 243.0).ln()).abs() <= 1e-12, || format!("s_4 = {s4}"))?;
    check(sweep, "margin negative")?;
    check(sweep, "margin strictly decreasing")?;
    let s_big = f64::from(concavity_margin::<Dd>(10_000).map_err(|e| e.to_string())?);
    ensure((s_big + 1.0).abs() <= 0.01, || format!("s_10000 = {s_big}"))?;
    let aux = f64::from(stirling_log_term::<Dd>(3).map_err(|e| e.to_string())?);
    ensure((aux - 0.4894).abs() <= 5e-5, || format!("ln(6 pi)/6 = {aux}"))?;
    check(sweep, "Stirling estimate below -0.51")?;
    check(sweep, "Stirling estimate strictly decreasing")?;
    check(sweep, "excess below Stirling estimate")?;
    Ok(format!("s_3 = {s3:.12}, s_4 = {s4:.12}, s_10000 = {s_big:.6}, ln(6 pi)/6 = {aux:.6}"))
}

fn stirling(sweep: &LemmaSweep) -> Outcome {
    let detail = check(sweep, "Stirling remainder in (0, 1)")?;
    let last: Dd = stirling_theta(10_000).map_err(|e| e.to_string())?;
    ensure(last > Dd::from(0.0) && last < Dd::from(1.0), || format!("theta(10000) = {last}"))?;
    Ok(detail)
}

fn monotonicity() -> Outcome {
    let sweep = sweep_lemmas::<Dd>(1000, 1).map_err(|e| e.to_string())?;
    let roots = check(&sweep, "factorial root strictly increasing")?;
    let gaps = check(&sweep, "concavity gap positive")?;
    Ok(format!("factorial root {roots}, concavity gap {gaps}"))
}

fn local_lemma(small: &[Graph]) -> Outcome {
    let pairs = small
        .par_iter()
        .map(|g| -> Result<usize, String> {
            if count_perfect_matchings(g).map_err(|e| e.to_string())?.is_zero() {
                return Ok(0);
            }
            for i in 0..g.n() {
                let c = check_local_lemma(g, i).map_err(|e| e.to_string())?;
                ensure(c.holds, || format!("row {i} of {g:?}: {} > {}", c.lhs, c.rhs))?;
            }
            Ok(g.n())
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(format!("{pairs} (graph, row) pairs"))
}

fn performance() -> Outcome {
    let g = complete_graph(24);
    let start = Instant::now();
    let c = count_perfect_matchings(&g).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let double_factorial: u64 = (1..24).step_by(2).product();
    ensure(c == 316_234_143_225u64 && c == double_factorial, || format!("K_24 gave {c}"))?;
    ensure(elapsed <= Duration::from_secs(30), || format!("K_24 took {elapsed:?}"))?;
    // Past 64 bits: three disjoint K_{10,10}, (10!)^3.
    let big = bipartite_union(&[10, 10, 10]).map_err(|e| e.to_string())?;
    let c3 = count_perfect_matchings(&big).map_err(|e| e.to_string())?;
    ensure(c3 == bipartite_union_count(&[10, 10, 10]) && c3.to_u64().is_none(), || format!("(10!)^3 gave {c3}"))?;
    Ok(format!("K_24 = {c} in {:.3} s, (10!)^3 = {c3}", elapsed.as_secs_f64()))
}

fn verify_rows(threads: &str) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_perfmat"))
        .args(["verify", "--family", "erdos_renyi", "--n", "12", "--p", "0.4", "--samples", "1000", "--seed", "1"])
        .args(["--threads", threads, "--json"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("exit {:?}", out.status.code()))?;
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    serde_json::to_string(&report["rows"]).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let a = verify_rows("1")?;
    let b = verify_rows("1")?;
    let c = verify_rows("4")?;
    ensure(a == b, || "two serial runs differ".into())?;
    ensure(a == c, || "serial and 4-thread runs differ".into())?;
    Ok(format!("3 runs, {} bytes of identical rows", a.len()))
}

fn main() -> ExitCode {
    let small = small_graphs();
    let sweep = sweep_lemmas::<Dd>(10_000, 10_000);
    let sweep = match sweep {
        Ok(s) => s,
        Err(e) => {
            println!("lemma sweep failed to run: {e}");
            return ExitCode::FAILURE;
        }
    };
    let criteria: Vec<Criterion> = vec![
        ("tight families", Box::new(tight_families)),
        ("main inequality", Box::new(|| main_inequality(&small))),
        ("oracle equivalence", Box::new(|| oracle_equivalence(&small))),
        ("bipartite reduction", Box::new(bipartite_reduction)),
        ("Bregman-Minc", Box::new(bregman_minc)),
        ("lemma values", Box::new(|| lemma_values(&sweep))),
        ("Stirling remainder", Box::new(|| stirling(&sweep))),
        ("monotonicity", Box::new(monotonicity)),
        ("local lemma", Box::new(|| local_lemma(&small))),
        ("performance", Box::new(performance)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{secs:.2} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
