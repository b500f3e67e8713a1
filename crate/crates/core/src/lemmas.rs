//! Numerical checks of the analytic facts behind the matching bound:
//! convexity of `x ln x`, monotonicity and log-concavity of `(k!)^(1/k)`,
//! the logarithmic concavity margin, and the Stirling remainder.
//!
//! Every formula goes through [`log_factorial`](crate::bounds::log_factorial)
//! (exact compensated sums of logarithms), never a gamma-function
//! approximation. Functions are generic over [`Real`]; the Stirling
//! remainder needs [`Dd`](crate::Dd) beyond `k ~ 1000`, where its distance
//! from 1 (about `1/(30 k^2)`) falls below `f64` rounding of `ln k!`.

use serde::{Deserialize, Serialize};

use crate::bounds::{DirectLogFactorial, LogFactorialSource, LogFactorials};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Last index at which monotone decrease of the concavity margin is
/// asserted; beyond it the decrease is reported, never required.
pub const MARGIN_DECREASE_CHECKED_UP_TO: u64 = 100;

/// Relative margin for strict inequalities.
pub const STRICTNESS: f64 = 1e-12;

fn x_ln_x<R: Real>(x: R) -> R {
    if x == R::zero() {
        R::zero()
    } else {
        x * x.ln()
    }
}

fn int<R: Real>(k: u64) -> R {
    R::from_u64_exact(k)
}

fn require_at_least(what: &'static str, value: u64, min: u64) -> Result<()> {
    if value < min {
        Err(Error::OutOfDomain { what, value, min })
    } else {
        Ok(())
    }
}

/// `mean(t ln t) - mean(t) ln mean(t)`, with `0 ln 0 = 0`. Nonnegative by
/// convexity; zero iff all entries are equal.
pub fn convexity_gap<R: Real>(t: &[R]) -> Result<R> {
    if t.is_empty() {
        return Err(Error::Empty { what: "convexity gap" });
    }
    if let Some(index) = t.iter().position(|&x| x < R::zero()) {
        return Err(Error::NegativeEntry { index });
    }
    let r = int::<R>(t.len() as u64);
    let mut sum = R::zero();
    let mut sum_xlx = R::zero();
    for &x in t {
        sum += x;
        sum_xlx += x_ln_x(x);
    }
    Ok(sum_xlx / r - x_ln_x(sum / r))
}

/// `(k!)^(1/k)`.
pub fn factorial_root<R: Real>(k: u64) -> Result<R> {
    require_at_least("factorial root index", k, 1)?;
    Ok(factorial_root_with(&DirectLogFactorial, k))
}

fn factorial_root_with<R: Real>(lf: &impl LogFactorialSource<R>, k: u64) -> R {
    (lf.log_factorial(k) / int(k)).exp()
}

/// Log-concavity gap of `(k!)^(1/k)` at `r - 1`:
/// `2 ln((r-1)!)/(r-1) - ln(r!)/r - ln((r-2)!)/(r-2)`, positive for `r >= 3`.
pub fn concavity_gap<R: Real>(r: u64) -> Result<R> {
    require_at_least("concavity gap index", r, 3)?;
    Ok(concavity_gap_with(&DirectLogFactorial, r))
}

fn concavity_gap_with<R: Real>(lf: &impl LogFactorialSource<R>, r: u64) -> R {
    let two = int::<R>(2);
    two * lf.log_factorial(r - 1) / int(r - 1) - lf.log_factorial(r) / int(r) - lf.log_factorial(r - 2) / int(r - 2)
}

/// Equivalent logarithmic form of the concavity inequality,
/// `(r-1) ln(r/(r-1)) + 2 (ln((r-2)!)/(r-2) - ln(r-1))`.
/// Negative for `r >= 3`, tending to `-1`.
pub fn concavity_margin<R: Real>(r: u64) -> Result<R> {
    require_at_least("concavity margin index", r, 3)?;
    Ok(concavity_margin_with(&DirectLogFactorial, r))
}

fn concavity_margin_with<R: Real>(lf: &impl LogFactorialSource<R>, r: u64) -> R {
    let rm1 = int::<R>(r - 1);
    rm1 * (int::<R>(r) / rm1).ln() + int::<R>(2) * mean_log_factorial_excess_with(lf, r)
}

/// Stirling remainder `12k (ln k! - ln(2 pi k)/2 - k ln k + k)`, which lies
/// strictly inside `(0, 1)`.
pub fn stirling_theta<R: Real>(k: u64) -> Result<R> {
    require_at_least("Stirling index", k, 1)?;
    Ok(stirling_theta_with(&DirectLogFactorial, k))
}

fn stirling_theta_with<R: Real>(lf: &impl LogFactorialSource<R>, k: u64) -> R {
    let kr = int::<R>(k);
    let two = int::<R>(2);
    let residual = lf.log_factorial(k) - (two * R::pi() * kr).ln() / two - kr * kr.ln() + kr;
    int::<R>(12) * kr * residual
}

/// `ln(2 pi x) / (2x)`, decreasing for `x > e / (2 pi)`.
pub fn stirling_log_term<R: Real>(x: u64) -> Result<R> {
    require_at_least("Stirling term argument", x, 1)?;
    let xr = int::<R>(x);
    let two = int::<R>(2);
    Ok((two * R::pi() * xr).ln() / (two * xr))
}

/// `ln((r-2)!)/(r-2) - ln(r-1)`.
pub fn mean_log_factorial_excess<R: Real>(r: u64) -> Result<R> {
    require_at_least("excess index", r, 3)?;
    Ok(mean_log_factorial_excess_with(&DirectLogFactorial, r))
}

fn mean_log_factorial_excess_with<R: Real>(lf: &impl LogFactorialSource<R>, r: u64) -> R {
    lf.log_factorial(r - 2) / int(r - 2) - int::<R>(r - 1).ln()
}

/// Stirling upper estimate of [`mean_log_factorial_excess`]:
/// `ln(2 pi (r-2)) / (2 (r-2)) - 1`.
pub fn stirling_excess_bound<R: Real>(r: u64) -> Result<R> {
    require_at_least("excess index", r, 3)?;
    Ok(stirling_log_term::<R>(r - 2)? - R::one())
}

/// One row of a lemma sweep, converted to `f64` for reporting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaSample {
    pub r: u64,
    /// Logarithmic concavity margin at `r`.
    #[serde(with = "crate::report::log12")]
    pub margin: f64,
    #[serde(with = "crate::report::log12")]
    pub concavity_gap: f64,
    #[serde(with = "crate::report::log12")]
    pub excess: f64,
    #[serde(with = "crate::report::log12")]
    pub excess_bound: f64,
    #[serde(with = "crate::report::log12")]
    pub factorial_root: f64,
    /// Stirling remainder at `k = r`.
    #[serde(with = "crate::report::log12")]
    pub theta: f64,
}

/// Outcome of one asserted property.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, failure: Option<String>, ok_detail: String) -> Self {
        match failure {
            None => Check { name: name.to_owned(), passed: true, detail: ok_detail },
            Some(detail) => Check { name: name.to_owned(), passed: false, detail },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaSweep {
    pub samples: Vec<LemmaSample>,
    pub checks: Vec<Check>,
    /// Whether the concavity margin keeps decreasing past the checked range;
    /// `None` when the sweep does not extend past it. Informational only.
    pub margin_decreases_beyond_checked: Option<bool>,
}

impl LemmaSweep {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn strict_lt<R: Real>(a: R, b: R) -> bool {
    let scale = a.abs().max_of(b.abs()).max_of(R::one());
    a < b - R::from_f64_lossy(STRICTNESS) * scale
}

/// Evaluates every lemma quantity for `r = 3..=r_max` and the Stirling
/// remainder for `k = 1..=theta_max`, asserting:
///
/// - the margin is negative for every `r`, and strictly decreasing up to
///   [`MARGIN_DECREASE_CHECKED_UP_TO`];
/// - the margin matches `ln(9/16)` at 3 and `ln(128/243)` at 4;
/// - `(k!)^(1/k)` strictly increases for `k = 1..=r_max`;
/// - the concavity gap is positive;
/// - the excess lies strictly below its Stirling estimate, the estimate
///   strictly decreases, and is below `-0.51` from `r = 5`;
/// - `ln(6 pi)/6` rounds to `0.4894`;
/// - the Stirling remainder lies in `(0, 1)`.
pub fn sweep_lemmas<R: Real>(r_max: u64, theta_max: u64) -> Result<LemmaSweep> {
    require_at_least("r_max", r_max, 3)?;
    let table = LogFactorials::<R>::new(r_max.max(theta_max));

    let mut samples = Vec::with_capacity(r_max as usize - 2);
    let mut margins = Vec::with_capacity(r_max as usize - 2);
    let mut bounds = Vec::with_capacity(r_max as usize - 2);
    let mut not_negative = None;
    let mut gap_fail = None;
    let mut excess_fail = None;
    let mut below_051_fail = None;
    for r in 3..=r_max {
        let margin = concavity_margin_with(&table, r);
        let gap = concavity_gap_with(&table, r);
        let excess = mean_log_factorial_excess_with(&table, r);
        let bound = stirling_excess_bound::<R>(r)?;
        if not_negative.is_none() && !strict_lt(margin, R::zero()) {
            not_negative = Some(format!("margin at r = {r} is {margin}"));
        }
        if gap_fail.is_none() && !strict_lt(R::zero(), gap) {
            gap_fail = Some(format!("gap at r = {r} is {gap}"));
        }
        if excess_fail.is_none() && !strict_lt(excess, bound) {
            excess_fail = Some(format!("excess {excess} not below {bound} at r = {r}"));
        }
        if r >= 5
            && below_051_fail.is_none()
            && bound.partial_cmp(&R::from_f64_lossy(-0.51)) != Some(std::cmp::Ordering::Less)
        {
            below_051_fail = Some(format!("estimate {bound} at r = {r}"));
        }
        samples.push(LemmaSample {
            r,
            margin: margin.to_f64_lossy(),
            concavity_gap: gap.to_f64_lossy(),
            excess: excess.to_f64_lossy(),
            excess_bound: bound.to_f64_lossy(),
            factorial_root: factorial_root_with::<R>(&table, r).to_f64_lossy(),
            theta: stirling_theta_with::<R>(&table, r).to_f64_lossy(),
        });
        margins.push(margin);
        bounds.push(bound);
    }

    let mut checks = Vec::new();
    checks.push(Check::new("margin negative", not_negative, format!("r = 3..={r_max}")));

    let checked_end = r_max.min(MARGIN_DECREASE_CHECKED_UP_TO);
    let decreasing_fail = (3..checked_end).find_map(|r| {
        let (a, b) = (margins[(r - 3) as usize], margins[(r - 2) as usize]);
        (!strict_lt(b, a)).then(|| format!("margin({}) = {b} not below margin({r}) = {a}", r + 1))
    });
    checks.push(Check::new("margin strictly decreasing", decreasing_fail, format!("r = 3..={checked_end}")));

    let margin_decreases_beyond_checked = (r_max > MARGIN_DECREASE_CHECKED_UP_TO)
        .then(|| (MARGIN_DECREASE_CHECKED_UP_TO..r_max).all(|r| margins[(r - 2) as usize] < margins[(r - 3) as usize]));

    let known = [(3u64, (9.0f64 / 16.0).ln()), (4, (128.0f64 / 243.0).ln())];
    for (r, want) in known.into_iter().filter(|&(r, _)| r <= r_max) {
        let got = margins[(r - 3) as usize].to_f64_lossy();
        let fail = ((got - want).abs() > 1e-12).then(|| format!("margin({r}) = {got}, expected {want}"));
        checks.push(Check::new(&format!("margin({r}) closed form"), fail, format!("{got:.12}")));
    }

    let mut prev = factorial_root_with::<R>(&table, 1);
    let mut root_fail = None;
    for k in 2..=r_max {
        let next = factorial_root_with::<R>(&table, k);
        if !strict_lt(prev, next) {
            root_fail = Some(format!("root({k}) = {next} not above root({}) = {prev}", k - 1));
            break;
        }
        prev = next;
    }
    checks.push(Check::new("factorial root strictly increasing", root_fail, format!("k = 1..={r_max}")));
    checks.push(Check::new("concavity gap positive", gap_fail, format!("r = 3..={r_max}")));
    checks.push(Check::new("excess below Stirling estimate", excess_fail, format!("r = 3..={r_max}")));

    let bound_dec_fail = bounds
        .windows(2)
        .enumerate()
        .find(|(_, w)| !strict_lt(w[1], w[0]))
        .map(|(i, w)| format!("estimate at r = {} is {} after {}", i + 4, w[1], w[0]));
    checks.push(Check::new("Stirling estimate strictly decreasing", bound_dec_fail, format!("r = 3..={r_max}")));
    if r_max >= 5 {
        let largest = bounds[2..].iter().map(|b| b.to_f64_lossy()).fold(f64::NEG_INFINITY, f64::max);
        let detail = format!("r = 5..={r_max}, largest {largest:.6}, margin {:.6}", -0.51 - largest);
        checks.push(Check::new("Stirling estimate below -0.51", below_051_fail, detail));
    }

    let aux = stirling_log_term::<R>(3)?.to_f64_lossy();
    let aux_fail = ((aux - 0.4894).abs() > 5e-5).then(|| format!("ln(6 pi)/6 = {aux}"));
    checks.push(Check::new("ln(6 pi)/6 = 0.4894", aux_fail, format!("{aux:.6}")));

    let mut theta_fail = None;
    let mut theta_min = f64::INFINITY;
    let mut theta_max_seen = f64::NEG_INFINITY;
    for k in 1..=theta_max {
        let theta = stirling_theta_with::<R>(&table, k);
        theta_min = theta_min.min(theta.to_f64_lossy());
        theta_max_seen = theta_max_seen.max(theta.to_f64_lossy());
        if theta_fail.is_none() && !(theta > R::zero() && theta < R::one()) {
            theta_fail = Some(format!("theta({k}) = {theta}"));
        }
    }
    if theta_max >= 1 {
        checks.push(Check::new(
            "Stirling remainder in (0, 1)",
            theta_fail,
            format!("k = 1..={theta_max}, range [{theta_min:.12}, {theta_max_seen:.12}]"),
        ));
    }

    Ok(LemmaSweep { samples, checks, margin_decreases_beyond_checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::Dd;

    #[test]
    fn convexity_gap_examples() {
        assert_eq!(convexity_gap(&[1.0f64, 1.0]).unwrap(), 0.0);
        let g = convexity_gap(&[1.0f64, 2.0]).unwrap();
        let expected = 0.5 * (2.0 * 2f64.ln()) - 1.5 * 1.5f64.ln();
        assert!((g - expected).abs() < 1e-15);
        assert!((g - 0.0849).abs() < 1e-4);
        assert_eq!(convexity_gap(&[0.0f64, 0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn convexity_gap_errors() {
        assert!(matches!(convexity_gap::<f64>(&[]), Err(Error::Empty { .. })));
        assert!(matches!(convexity_gap(&[1.0f64, -0.5]), Err(Error::NegativeEntry { index: 1 })));
    }

    #[test]
    fn factorial_root_examples() {
        assert_eq!(factorial_root::<f64>(1).unwrap(), 1.0);
        assert!((factorial_root::<f64>(2).unwrap() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((factorial_root::<f64>(3).unwrap() - 6f64.powf(1.0 / 3.0)).abs() < 1e-15);
        assert!((factorial_root::<f64>(3).unwrap() - 1.81712059).abs() < 1e-8);
        assert!(factorial_root::<f64>(0).is_err());
    }

    #[test]
    fn concavity_gap_examples() {
        let g3 = concavity_gap::<f64>(3).unwrap();
        assert!((g3 - (2f64.ln() - 6f64.ln() / 3.0)).abs() < 1e-15);
        assert!((g3 - 0.0958).abs() < 1e-4);
        let g4 = concavity_gap::<f64>(4).unwrap();
        assert!((g4 - (2.0 * 6f64.ln() / 3.0 - 24f64.ln() / 4.0 - 2f64.ln() / 2.0)).abs() < 1e-15);
        assert!((g4 - 0.0535).abs() < 1e-4);
        assert!(concavity_gap::<f64>(100).unwrap() > 0.0);
        assert!(concavity_gap::<f64>(2).is_err());
    }

    #[test]
    fn concavity_margin_examples() {
        assert!((concavity_margin::<f64>(3).unwrap() - (9.0f64 / 16.0).ln()).abs() < 1e-12);
        assert!((concavity_margin::<f64>(3).unwrap() + 0.575364).abs() < 1e-6);
        assert!((concavity_margin::<f64>(4).unwrap() - (128.0f64 / 243.0).ln()).abs() < 1e-12);
        assert!((concavity_margin::<f64>(4).unwrap() + 0.641031).abs() < 1e-6);
        assert!((concavity_margin::<f64>(10_000).unwrap() + 1.0).abs() <= 0.01);
        assert!(concavity_margin::<f64>(2).is_err());
    }

    #[test]
    fn stirling_theta_examples() {
        let t1 = stirling_theta::<f64>(1).unwrap();
        assert!((t1 - 12.0 * (1.0 - (2.0 * std::f64::consts::PI).ln() / 2.0)).abs() < 1e-14);
        assert!((t1 - 0.9727376015439271).abs() < 1e-13);
        let t10 = stirling_theta::<f64>(10).unwrap();
        assert!((t10 - 0.9996676120035446).abs() < 1e-9);
        assert!(t10 > 0.0 && t10 < 1.0);
        assert!(stirling_theta::<f64>(0).is_err());
    }

    #[test]
    fn stirling_theta_needs_double_double_at_large_k() {
        // Reference 0.99999999966666666762 from a 40-digit evaluation.
        let t: Dd = stirling_theta(10_000).unwrap();
        assert!((t.to_f64_lossy() - 0.999_999_999_666_666_7).abs() < 1e-15, "{t}");
        assert!(t < Dd::ONE);
    }

    #[test]
    fn stirling_excess_examples() {
        let b3 = stirling_excess_bound::<f64>(3).unwrap();
        assert!((b3 - ((2.0 * std::f64::consts::PI).ln() / 2.0 - 1.0)).abs() < 1e-15);
        let aux = stirling_log_term::<f64>(3).unwrap();
        assert!((aux - (6.0 * std::f64::consts::PI).ln() / 6.0).abs() < 1e-15);
        assert!((aux - 0.4894).abs() < 5e-5);
        assert!(stirling_excess_bound::<f64>(5).unwrap() < -0.51);
        assert!(stirling_excess_bound::<f64>(100).unwrap() < stirling_excess_bound::<f64>(99).unwrap());
        assert!(mean_log_factorial_excess::<f64>(3).unwrap() < b3);
    }

    #[test]
    fn sweep_small_ranges() {
        let s = sweep_lemmas::<f64>(3, 3).unwrap();
        assert_eq!(s.samples.len(), 1);
        assert!(s.passed(), "{:?}", s.checks);
        assert!(s.samples[0].margin < 0.0);
        assert_eq!(s.margin_decreases_beyond_checked, None);

        let s = sweep_lemmas::<f64>(4, 4).unwrap();
        assert!(s.passed(), "{:?}", s.checks);
        assert!(s.samples[0].margin > s.samples[1].margin);
        assert!((s.samples[0].margin + 0.5754).abs() < 1e-4);
        assert!((s.samples[1].margin - (128.0f64 / 243.0).ln()).abs() < 1e-12);

        assert!(sweep_lemmas::<f64>(2, 2).is_err());
    }

    #[test]
    fn sweep_to_one_hundred() {
        let s = sweep_lemmas::<Dd>(100, 100).unwrap();
        assert!(s.passed(), "{:?}", s.checks);
        assert!(s.samples.windows(2).all(|w| w[1].margin < w[0].margin));
    }

    #[test]
    fn f64_sweep_fails_stirling_check_where_double_double_passes() {
        let s = sweep_lemmas::<f64>(3, 3000).unwrap();
        let theta = s.checks.iter().find(|c| c.name.starts_with("Stirling remainder")).unwrap();
        assert!(!theta.passed);
        let s = sweep_lemmas::<Dd>(3, 3000).unwrap();
        assert!(s.passed(), "{:?}", s.checks);
    }

    #[test]
    fn sample_rows_serialize_with_12_digits() {
        let s = sweep_lemmas::<f64>(3, 3).unwrap();
        let v = serde_json::to_value(&s.samples[0]).unwrap();
        assert_eq!(v["r"], 3);
        assert_eq!(v["margin"], -0.575364144904);
    }
}
