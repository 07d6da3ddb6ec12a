//! Numerical checks of the real-rootedness, interlacing, bound, sign and
//! limit statements for `W_n`.
//!
//! Each suite returns a [`VerificationReport`] made of per-`n` (or static)
//! records. A record carries a signed margin: positive means the predicate
//! holds with room to spare; non-strict predicates may pass with margin zero.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_complex::Complex64;
use rug::Float;

use crate::error::{Error, Result};
use crate::geometry::{classify_with, lollipop_junction, LimitKind};
use crate::poly::Polynomial;
use crate::recurrence::{RecurrenceParams, SignCase};
use crate::roots::{
    default_tolerance, find_roots_with, interlacing_gaps, interlacing_tolerance, is_real_rooted,
    snap_real, strictly_interlaces, RootSet, SolverConfig,
};
use crate::scalar::ANALYSIS_PRECISION;

/// Default horizon of the convergence suites.
pub const CONVERGENCE_HORIZON: usize = 60;
/// Default horizon of the interlacing and sign suites.
pub const INTERLACING_HORIZON: usize = 40;
/// First `n` at which gap monotonicity is examined.
pub const BURN_IN: usize = 10;
/// Scalar evaluations are compared with polynomial evaluation up to this `n`.
const CROSS_CHECK_HORIZON: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// No counterexample found where the theory only promises one eventually.
    Inconclusive,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Detail {
    pub n: Option<usize>,
    pub label: String,
    pub passed: bool,
    pub margin: f64,
    pub metrics: BTreeMap<String, f64>,
}

impl Detail {
    pub fn new(n: Option<usize>, label: impl Into<String>, passed: bool, margin: f64) -> Self {
        Self {
            n,
            label: label.into(),
            passed,
            margin,
            metrics: BTreeMap::new(),
        }
    }

    /// A strict check: passes iff `margin > 0`.
    pub fn strict(n: Option<usize>, label: impl Into<String>, margin: f64) -> Self {
        Self::new(n, label, margin > 0.0, margin)
    }

    pub fn metric(mut self, key: &str, value: f64) -> Self {
        self.metrics.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub claim: &'static str,
    pub params: RecurrenceParams,
    pub horizon: usize,
    pub passed: bool,
    pub outcome: Outcome,
    /// Smallest margin over all records.
    pub worst_margin: f64,
    /// Whether the parameters satisfy the hypotheses the claim is stated under.
    pub in_scope: bool,
    pub details: Vec<Detail>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn new(
        claim: &'static str,
        params: &RecurrenceParams,
        horizon: usize,
        details: Vec<Detail>,
    ) -> Self {
        let passed = !details.is_empty() && details.iter().all(|d| d.passed);
        let worst_margin = details
            .iter()
            .map(|d| d.margin)
            .filter(|m| !m.is_nan())
            .fold(f64::INFINITY, f64::min);
        Self {
            claim,
            params: *params,
            horizon,
            passed,
            outcome: if passed { Outcome::Pass } else { Outcome::Fail },
            worst_margin: if worst_margin.is_finite() {
                worst_margin
            } else {
                0.0
            },
            in_scope: true,
            details,
            notes: Vec::new(),
        }
    }

    fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    /// First record that failed.
    pub fn first_failure(&self) -> Option<&Detail> {
        self.details.iter().find(|d| !d.passed)
    }
}

/// Precision, solver settings and snapping tolerance shared by the suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub precision: u32,
    pub solver: SolverConfig,
    /// Relative tolerance for snapping to the real axis; defaults by precision.
    pub snap_tolerance: Option<f64>,
    /// Relative tolerance for interlacing gaps; by default derived from the
    /// error bounds of the two root sets compared.
    pub interlace_tolerance: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            precision: ANALYSIS_PRECISION,
            solver: SolverConfig::default(),
            snap_tolerance: None,
            interlace_tolerance: None,
        }
    }
}

impl SuiteConfig {
    pub fn tolerance(&self) -> f64 {
        self.snap_tolerance
            .unwrap_or_else(|| default_tolerance(self.precision))
    }

    pub fn interlacing(&self, x: &RootSet, y: &RootSet) -> f64 {
        self.interlace_tolerance
            .unwrap_or_else(|| interlacing_tolerance(x, y))
    }
}

/// Highest working precision the interlacing checks escalate to.
pub const MAX_REFINE_PRECISION: u32 = 4096;

/// Verdict on `x₁ < y₁ < x₂ < …` for two real-rooted zero sets.
#[derive(Debug, Clone, Copy)]
struct Interlacing {
    passed: bool,
    min_gap: f64,
    tol: f64,
    precision: u32,
}

/// Strict interlacing of `x` around `y`.
///
/// Under the adaptive tolerance a failure with no gap clearly negative is
/// undecided at this precision rather than false: consecutive zeros can
/// merge exponentially fast in `n`. `resolve` then re-solves both sets at
/// doubled precision, up to [`MAX_REFINE_PRECISION`].
fn decide_interlacing<F>(
    x: &RootSet,
    y: &RootSet,
    cfg: &SuiteConfig,
    resolve: F,
) -> Result<Interlacing>
where
    F: Fn(&SuiteConfig) -> Result<(RootSet, RootSet)>,
{
    let counts = (x.real_roots().len(), y.real_roots().len());
    let mut refined: Option<(RootSet, RootSet)> = None;
    let mut precision = cfg.precision;
    loop {
        let (x, y) = refined.as_ref().map_or((x, y), |(a, b)| (a, b));
        let (xr, yr) = (x.real_roots(), y.real_roots());
        if (xr.len(), yr.len()) != counts || !is_real_rooted(x) || !is_real_rooted(y) {
            return Ok(Interlacing {
                passed: false,
                min_gap: f64::NAN,
                tol: f64::NAN,
                precision,
            });
        }
        let tol = cfg.interlacing(x, y);
        let gaps = interlacing_gaps(&xr, &yr)?;
        let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
        let passed = strictly_interlaces(&xr, &yr, tol)?;
        let scale = xr
            .iter()
            .chain(&yr)
            .map(|r| r.to_f64().abs())
            .fold(1.0, f64::max);
        let undecided = !passed
            && cfg.interlace_tolerance.is_none()
            && gaps.iter().all(|g| *g > -tol * (1.0 + scale));
        if !undecided || precision >= MAX_REFINE_PRECISION {
            return Ok(Interlacing {
                passed,
                min_gap,
                tol,
                precision,
            });
        }
        precision = (precision * 2).min(MAX_REFINE_PRECISION);
        refined = Some(resolve(&SuiteConfig { precision, ..*cfg })?);
    }
}

/// Zeros of one polynomial of the sequence, snapped to the real axis.
/// Seeds come from a double precision pass over the recurrence.
pub fn solve_member(
    params: &RecurrenceParams,
    n: usize,
    p: &Polynomial,
    cfg: &SuiteConfig,
) -> Result<RootSet> {
    let rs = find_roots_with(p, &cfg.solver, |z| params.eval_f64_with_derivative(n, z))?;
    if !rs.converged {
        return Err(Error::NonConvergence {
            n,
            iterations: rs.iterations,
            precision: rs.precision,
        });
    }
    Ok(snap_real(&rs, cfg.tolerance()))
}

/// Zeros of `W_1, …, W_n_max`; entry `k` holds the zeros of `W_{k+1}`.
pub fn solve_sequence(
    params: &RecurrenceParams,
    n_max: usize,
    cfg: &SuiteConfig,
) -> Result<Vec<RootSet>> {
    let seq = params.sequence(n_max, cfg.precision);
    (1..=n_max)
        .map(|n| solve_member(params, n, &seq[n], cfg))
        .collect()
}

fn require_pmpm(params: &RecurrenceParams) -> Result<()> {
    if params.sign_case() == SignCase::PMPM {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "requires a, c > 0 and b, d < 0, got sign case {}",
            params.sign_case()
        )))
    }
}

fn require_xa_below_xb(params: &RecurrenceParams) -> Result<()> {
    require_pmpm(params)?;
    if params.xa_equals_xb() {
        return Err(Error::Precondition(
            "requires x_A < x_B; x_A = x_B is handled by the normalized suite".into(),
        ));
    }
    if params.compare_xa_xb() != Ordering::Less {
        return Err(Error::Precondition(format!(
            "requires x_A < x_B (x_A = {}, x_B = {})",
            params.x_a(),
            params.x_b()
        )));
    }
    Ok(())
}

fn gap(lo: &Float, hi: &Float) -> f64 {
    Float::with_val(lo.prec().max(hi.prec()), hi - lo).to_f64()
}

/// Smallest distance between consecutive entries of a sorted list.
fn min_separation(xs: &[Float]) -> f64 {
    xs.windows(2)
        .map(|w| gap(&w[0], &w[1]))
        .fold(f64::INFINITY, f64::min)
}

fn max_imag(rs: &RootSet) -> f64 {
    rs.roots
        .iter()
        .map(|z| z.im.to_f64().abs())
        .fold(0.0, f64::max)
}

/// `x_A ≤ x_B`, which under `a, c > 0` is the same as `ad ≤ bc`.
pub fn real_rooted_criterion(params: &RecurrenceParams) -> Result<bool> {
    require_pmpm(params)?;
    Ok(params.compare_xa_xb() != Ordering::Greater)
}

/// Empirical real-rootedness of `W_n` up to `n_max`, or of `U_n` when
/// `x_A = x_B`, where the repeated zero `x_A` of `W_n` would defeat the
/// solver.
///
/// Returns the first `n` with a non-real zero, if any.
pub fn first_non_real(
    params: &RecurrenceParams,
    n_max: usize,
    cfg: &SuiteConfig,
) -> Result<(Option<usize>, Vec<Detail>)> {
    let seq = if params.xa_equals_xb() {
        params.normalized_sequence(n_max, cfg.precision)?
    } else {
        params.sequence(n_max, cfg.precision)
    };
    let normalized = params.xa_equals_xb();
    let mut details = Vec::new();
    for (n, p) in seq.iter().enumerate().skip(1) {
        let rs = if normalized {
            solve_plain(p, n, cfg)?
        } else {
            solve_member(params, n, p, cfg)?
        };
        if is_real_rooted(&rs) {
            let sep = min_separation(&rs.real_roots());
            details.push(Detail::strict(
                Some(n),
                "real-rooted",
                if sep.is_finite() { sep } else { 1.0 },
            ));
        } else {
            details.push(Detail::new(Some(n), "real-rooted", false, -max_imag(&rs)));
            return Ok((Some(n), details));
        }
    }
    Ok((None, details))
}

fn solve_plain(p: &Polynomial, n: usize, cfg: &SuiteConfig) -> Result<RootSet> {
    let rs = crate::roots::find_roots(p, &cfg.solver)?;
    if !rs.converged {
        return Err(Error::NonConvergence {
            n,
            iterations: rs.iterations,
            precision: rs.precision,
        });
    }
    Ok(snap_real(&rs, cfg.tolerance()))
}

/// Both directions of the criterion up to `n_max`.
///
/// When the criterion holds every `W_n` must be real-rooted. When it fails
/// the search stops at the first non-real zero; finding none is reported as
/// inconclusive rather than as a pass.
pub fn verify_real_rooted(
    params: &RecurrenceParams,
    n_max: usize,
    cfg: &SuiteConfig,
) -> Result<VerificationReport> {
    let criterion = real_rooted_criterion(params)?;
    let (failure, details) = first_non_real(params, n_max, cfg)?;
    if criterion {
        let report = VerificationReport::new("real-rooted", params, n_max, details);
        return Ok(report.note("criterion x_A <= x_B holds: every W_n must be real-rooted"));
    }
    let mut report = match failure {
        Some(n) => {
            let last = details.last().expect("failure recorded").clone();
            let summary = Detail::new(Some(n), "first non-real-rooted n", true, -last.margin)
                .metric("max_abs_imag", -last.margin);
            VerificationReport::new("real-rooted", params, n_max, vec![summary])
        }
        None => {
            let mut r = VerificationReport::new("real-rooted", params, n_max, details);
            r.passed = false;
            r.outcome = Outcome::Inconclusive;
            r
        }
    };
    report
        .notes
        .push("criterion x_A <= x_B fails: some W_n must have a non-real zero".into());
    Ok(report)
}

/// Zeros stay inside `(u, v)` and consecutive zero sets strictly interlace.
/// Solves up to `W_{n_max+1}`. Without `tol`, gaps are judged against
/// [`SuiteConfig::interlacing`].
pub fn verify_interlacing_chain(
    params: &RecurrenceParams,
    n_max: usize,
    tol: Option<f64>,
    cfg: &SuiteConfig,
) -> Result<VerificationReport> {
    require_xa_below_xb(params)?;
    let cfg = SuiteConfig {
        interlace_tolerance: tol.or(cfg.interlace_tolerance),
        ..*cfg
    };
    let cs = params.critical_scalars(cfg.precision)?;
    let (u, v) = match (&cs.u, &cs.v) {
        (Some(u), Some(v)) => (u.clone(), v.clone()),
        _ => return Err(Error::PrecisionLoss("bound (u, v) is not real".into())),
    };
    let sets = solve_sequence(params, n_max + 1, &cfg)?;
    let mut details = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (rs, next) = (&sets[n - 1], &sets[n]);
        let real = is_real_rooted(rs) && is_real_rooted(next);
        let roots = rs.real_roots();
        let next_roots = next.real_roots();
        let count_ok = roots.len() == n && next_roots.len() == n + 1;
        let (to_u, to_v) = match (roots.first(), roots.last()) {
            (Some(lo), Some(hi)) => (gap(&u, lo), gap(hi, &v)),
            _ => (f64::NAN, f64::NAN),
        };
        let check = if real && count_ok {
            decide_interlacing(next, rs, &cfg, |c| {
                let seq = params.sequence(n + 1, c.precision);
                Ok((
                    solve_member(params, n + 1, &seq[n + 1], c)?,
                    solve_member(params, n, &seq[n], c)?,
                ))
            })?
        } else {
            Interlacing {
                passed: false,
                min_gap: f64::NAN,
                tol: f64::NAN,
                precision: cfg.precision,
            }
        };
        let margin = to_u.min(to_v).min(check.min_gap);
        let passed = check.passed && to_u > 0.0 && to_v > 0.0;
        details.push(
            Detail::new(
                Some(n),
                "R_n in (u, v) and R_{n+1} strictly interlaces R_n",
                passed,
                margin,
            )
            .metric("distance_to_u", to_u)
            .metric("distance_to_v", to_v)
            .metric("min_interlacing_gap", check.min_gap)
            .metric("interlacing_tolerance", check.tol)
            .metric("interlacing_precision", check.precision as f64)
            .metric("max_abs_imag", max_imag(rs).max(max_imag(next))),
        );
    }
    Ok(VerificationReport::new("interlace", params, n_max, details))
}

/// `W_n(u)(−1)^n > 0` and `W_n(v) > 0` for `0 ≤ n ≤ n_max`, plus the static
/// orderings `u ≤ x_Δ⁻ < x_A < x_Δ⁺ ≤ v < x_B` and `u < 0 < v`.
pub fn verify_sign_conditions(
    params: &RecurrenceParams,
    n_max: usize,
    cfg: &SuiteConfig,
) -> Result<VerificationReport> {
    require_xa_below_xb(params)?;
    let cs = params.critical_scalars(cfg.precision)?;
    let (u, v) = match (&cs.u, &cs.v) {
        (Some(u), Some(v)) => (u.clone(), v.clone()),
        _ => return Err(Error::PrecisionLoss("bound (u, v) is not real".into())),
    };
    let (dm, dp) = cs
        .x_delta_real()
        .ok_or_else(|| Error::PrecisionLoss("zeros of Δ are not real".into()))?;
    let mut details = vec![
        Detail::new(None, "u <= x_delta-", u <= dm, gap(&u, &dm)),
        Detail::strict(None, "x_delta- < x_A", gap(&dm, &cs.x_a)),
        Detail::strict(None, "x_A < x_delta+", gap(&cs.x_a, &dp)),
        Detail::new(None, "x_delta+ <= v", dp <= v, gap(&dp, &v)),
        Detail::strict(None, "v < x_B", gap(&v, &cs.x_b)),
        Detail::strict(None, "u < 0", -u.to_f64()),
        Detail::strict(None, "0 < v", v.to_f64()),
    ];

    let at_u = params.eval_scalar(n_max, &u);
    let at_v = params.eval_scalar(n_max, &v);
    let seq = params.sequence(n_max.min(CROSS_CHECK_HORIZON), cfg.precision);
    for n in 0..=n_max {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let mu = sign * at_u[n].normalized();
        let mv = at_v[n].normalized();
        let mut detail = Detail::strict(Some(n), "W_n(u)(-1)^n > 0 and W_n(v) > 0", mu.min(mv))
            .metric("normalized_u", mu)
            .metric("normalized_v", mv);
        if n <= CROSS_CHECK_HORIZON {
            let pu = seq[n].eval_real(&u);
            let pv = seq[n].eval_real(&v);
            let agree = pu.cmp0() == at_u[n].value.cmp0() && pv.cmp0() == at_v[n].value.cmp0();
            detail.passed &= agree;
            detail = detail.metric("polynomial_eval_agrees", if agree { 1.0 } else { 0.0 });
        }
        details.push(detail);
    }
    Ok(VerificationReport::new("signs", params, n_max, details))
}

/// Is the sequence `xs[k]` (for `k ≥ from`) nonincreasing up to `slack`?
fn decreasing_after(xs: &[f64], from: usize, slack: f64) -> bool {
    xs.iter()
        .skip(from)
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| *w[1] <= *w[0] + slack)
}

/// The extreme zeros approach `u` and `v`: both gaps fall below `tol` at
/// `n_max` and shrink from `n_max/2` to `n_max`. Monotonicity past the
/// burn-in is reported, not required.
pub fn verify_bound_sharpness(
    params: &RecurrenceParams,
    n_max: usize,
    tol: f64,
    cfg: &SuiteConfig,
) -> Result<VerificationReport> {
    require_xa_below_xb(params)?;
    let cs = params.critical_scalars(cfg.precision)?;
    let (u, v) = match (&cs.u, &cs.v) {
        (Some(u), Some(v)) => (u.clone(), v.clone()),
        _ => return Err(Error::PrecisionLoss("bound (u, v) is not real".into())),
    };
    let sets = solve_sequence(params, n_max, cfg)?;
    let mut g = Vec::with_capacity(n_max);
    let mut h = Vec::with_capacity(n_max);
    let mut details = Vec::new();
    for (k, rs) in sets.iter().enumerate() {
        let roots = rs.real_roots();
        if roots.len() != rs.len() || roots.is_empty() {
            details.push(Detail::new(Some(k + 1), "zeros real", false, -max_imag(rs)));
            g.push(f64::NAN);
            h.push(f64::NAN);
            continue;
        }
        let (gn, hn) = (gap(&u, &roots[0]), gap(&roots[roots.len() - 1], &v));
        g.push(gn);
        h.push(hn);
        details.push(
            Detail::strict(Some(k + 1), "extreme zeros inside (u, v)", gn.min(hn))
                .metric("gap_u", gn)
                .metric("gap_v", hn),
        );
    }
    let (g_end, h_end) = (g[n_max - 1], h[n_max - 1]);
    details.push(
        Detail::strict(Some(n_max), "gaps below tolerance", tol - g_end.max(h_end))
            .metric("gap_u", g_end)
            .metric("gap_v", h_end)
            .metric("tolerance", tol),
    );
    if n_max >= 2 {
        let half = n_max / 2;
        let (g_half, h_half) = (g[half - 1], h[half - 1]);
        details.push(
            Detail::strict(
                Some(n_max),
                "gaps shrink from n/2 to n",
                (g_half - g_end).min(h_half - h_end),
            )
            .metric("gap_u_half", g_half)
            .metric("gap_v_half", h_half),
        );
    }
    let slack = tol / 10.0;
    let mono_g = decreasing_after(&g, BURN_IN.saturating_sub(1), slack);
    let mono_h = decreasing_after(&h, BURN_IN.saturating_sub(1), slack);
    let mut report = VerificationReport::new("sharpness", params, n_max, details);
    report.notes.push(format!(
        "gap to u nonincreasing for n >= {BURN_IN} (slack tol/10): {mono_g}; gap to v: {mono_h}"
    ));
    Ok(report)
}

/// Side from which the nearest zero approaches a real point: `1` above,
/// `-1` below, `0` exactly on it or off the real axis.
fn approach_side(roots: &[Complex64], target: Complex64) -> f64 {
    let nearest = roots
        .iter()
        .min_by(|x, y| (*x - target).norm().total_cmp(&(*y - target).norm()));
    match nearest {
        Some(z) if target.im == 0.0 && z.im == 0.0 => (z.re - target.re).signum(),
        Some(z) if target.im == 0.0 && z.re != target.re => (z.re - target.re).signum(),
        _ => 0.0,
    }
}

/// Zeros of `W_n` approach the predicted limit set:
/// `D_N < tol` and `D_N ≤ D_{N/2} + tol/10`, with `D_n` the largest distance
/// from a zero of `W_n` to the set.
pub fn verify_limit_convergence(
    params: &RecurrenceParams,
    n_max: usize,
    tol: f64,
    cfg: &SuiteConfig,
) -> Result<VerificationReport> {
    if n_max < 2 {
        return Err(Error::Precondition("limit convergence needs N >= 2".into()));
    }
    let cs = params.critical_scalars(cfg.precision)?;
    let ls = classify_with(params, &cs);
    let seq = params.sequence(n_max, cfg.precision);
    let half = n_max / 2;
    let mut distances = Vec::new();
    let mut details = Vec::new();
    for n in [half, n_max] {
        let rs = solve_member(params, n, &seq[n], cfg)?;
        let roots = rs.to_c64();
        let d = roots.iter().map(|&z| ls.distance_to(z)).fold(0.0, f64::max);
        distances.push(d);
        let mut detail = Detail::strict(Some(n), "max distance from zeros to limit set", tol - d)
            .metric("max_distance", d)
            .metric("nearest_isolated_distance", f64::NAN);
        let nearest_iso = ls
            .isolated
            .iter()
            .map(|p| {
                roots
                    .iter()
                    .map(|z| (z - p).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(f64::NAN, f64::min);
        detail
            .metrics
            .insert("nearest_isolated_distance".into(), nearest_iso);
        for (k, p) in ls.isolated.iter().enumerate() {
            detail = detail.metric(
                &format!("approach_side_isolated_{k}"),
                approach_side(&roots, *p),
            );
        }
        if n == half {
            // Only the final horizon is held to the tolerance.
            detail.passed = true;
            detail.label = "max distance from zeros to limit set (reference)".into();
        }
        details.push(detail);
    }
    let (d_half, d_full) = (distances[0], distances[1]);
    details.push(Detail::new(
        Some(n_max),
        "D_N <= D_{N/2} + tol/10",
        d_full <= d_half + tol / 10.0,
        d_half + tol / 10.0 - d_full,
    ));
    if params.sign_case() == SignCase::PMPM
        && params.compare_xa_xb() == Ordering::Less
        && !params.xa_equals_xb()
    {
        if let Some((u, v)) = cs.uv_f64() {
            for (label, x) in [("u in limit set", u), ("v in limit set", v)] {
                let d = ls.distance_to(Complex64::new(x, 0.0));
                details.push(Detail::strict(None, label, tol - d).metric("distance", d));
            }
        }
    }
    let mut report = VerificationReport::new("limits", params, n_max, details);
    report
        .notes
        .push(format!("limit set kind: {}", ls.kind.as_str()));
    Ok(report)
}

/// Junction of the interval and circle parts of a lollipop.
pub fn verify_lollipop(params: &RecurrenceParams, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let cs = params.critical_scalars(cfg.precision)?;
    let ls = classify_with(params, &cs);
    if ls.kind != LimitKind::Lollipop {
        return Err(Error::Precondition(format!(
            "lollipop junction requires Δ_Δ > 0 and B(x_A) > 0 (limit set is {})",
            ls.kind.as_str()
        )));
    }
    let j = lollipop_junction(params)?;
    let (x_a, x_b) = (cs.x_a.to_f64(), cs.x_b.to_f64());
    let expected = 2.0 * x_b - x_a;
    let scale = 1.0 + x_a.abs() + x_b.abs();
    let (lo, hi) = ls.interval.expect("lollipop kind");
    let off_formula = (j.point - expected).abs();
    let off_circle = ((j.point - ls.circle_center).abs() - ls.circle_radius).abs();
    let details = vec![
        Detail::strict(None, "junction = 2 x_B - x_A", 1e-12 * scale - off_formula)
            .metric("junction", j.point)
            .metric("expected", expected),
        Detail::strict(None, "junction on C_0", 1e-12 * scale - off_circle),
        Detail::new(
            None,
            "junction in J_delta",
            lo <= j.point && j.point <= hi,
            (j.point - lo).min(hi - j.point),
        ),
        Detail::strict(
            None,
            "outside length > inside length",
            j.outside_len - j.inside_len,
        )
        .metric("inside_len", j.inside_len)
        .metric("outside_len", j.outside_len),
    ];
    Ok(VerificationReport::new("lollipop", params, 0, details))
}

/// The case `x_A = x_B`: `U_n = W_n / A^⌊n/2⌋` has degree `⌈n/2⌉`, real zeros
/// in `(u, x_B)` interlacing from the left, `U_n(x_B) > 0`,
/// `U_n(u)(−1)^⌈n/2⌉ > 0`, and extreme zeros within `tol` of `u` and `x_B`
/// at `n_max`.
pub fn verify_normalized_case(
    params: &RecurrenceParams,
    n_max: usize,
    tol: f64,
    cfg: &SuiteConfig,
) -> Result<VerificationReport> {
    require_pmpm(params)?;
    if !params.xa_equals_xb() {
        return Err(Error::Precondition(format!(
            "requires x_A = x_B (x_A = {}, x_B = {})",
            params.x_a(),
            params.x_b()
        )));
    }
    let mut details = Vec::new();
    let mut previous: Option<RootSet> = None;
    let mut extremes = (f64::NAN, f64::NAN);
    let level = NormalizedLevel::new(params, n_max, cfg)?;
    for n in 1..=n_max {
        let mut step = level.step(params, n, previous.as_ref())?;
        let roots = step.roots.clone();
        let mut precision = cfg.precision;
        while step.undecided && precision < MAX_REFINE_PRECISION {
            precision = (precision * 2).min(MAX_REFINE_PRECISION);
            let fine = NormalizedLevel::new(params, n, &SuiteConfig { precision, ..*cfg })?;
            let prev = match previous {
                Some(_) => Some(solve_plain(&fine.seq[n - 1], n - 1, &fine.cfg)?),
                None => None,
            };
            step = fine.step(params, n, prev.as_ref())?;
        }
        extremes = step.extremes;
        details.push(step.detail.metric("precision", precision as f64));
        previous = is_real_rooted(&roots).then_some(roots);
    }
    details.push(
        Detail::strict(
            Some(n_max),
            "extreme zeros within tolerance of u and x_B",
            tol - extremes.0.max(extremes.1),
        )
        .metric("gap_u", extremes.0)
        .metric("gap_x_b", extremes.1)
        .metric("tolerance", tol),
    );
    let mut report = VerificationReport::new("normalized", params, n_max, details);
    if params.compare_xa_xb() != Ordering::Equal {
        report = report.note("x_A and x_B agree only to tolerance, not exactly");
    }
    Ok(report)
}

/// Everything one normalized record needs at one working precision.
struct NormalizedLevel {
    cfg: SuiteConfig,
    u: Float,
    x_b: Float,
    seq: Vec<Polynomial>,
}

struct NormalizedStep {
    detail: Detail,
    roots: RootSet,
    extremes: (f64, f64),
    /// Failed only on comparisons within rounding error of zero.
    undecided: bool,
}

impl NormalizedLevel {
    fn new(params: &RecurrenceParams, n_max: usize, cfg: &SuiteConfig) -> Result<Self> {
        let cs = params.critical_scalars(cfg.precision)?;
        let u =
            cs.u.clone()
                .ok_or_else(|| Error::PrecisionLoss("lower bound u is not real".into()))?;
        Ok(Self {
            cfg: *cfg,
            u,
            x_b: cs.x_b.clone(),
            seq: params.normalized_sequence(n_max, cfg.precision)?,
        })
    }

    fn step(
        &self,
        params: &RecurrenceParams,
        n: usize,
        previous: Option<&RootSet>,
    ) -> Result<NormalizedStep> {
        let cfg = &self.cfg;
        let p = &self.seq[n];
        let degree_ok = p.degree() == Some(n.div_ceil(2));
        let rs = solve_plain(p, n, cfg)?;
        let roots = rs.real_roots();
        let real = is_real_rooted(&rs);
        let (to_u, to_xb) = match (roots.first(), roots.last()) {
            (Some(lo), Some(hi)) => (gap(&self.u, lo), gap(hi, &self.x_b)),
            _ => (f64::NAN, f64::NAN),
        };
        let check = match previous {
            Some(prev)
                if real
                    && roots
                        .len()
                        .checked_sub(prev.real_roots().len())
                        .is_some_and(|d| d <= 1) =>
            {
                decide_interlacing(&rs, prev, cfg, |c| {
                    let seq = params.normalized_sequence(n, c.precision)?;
                    Ok((
                        solve_plain(&seq[n], n, c)?,
                        solve_plain(&seq[n - 1], n - 1, c)?,
                    ))
                })?
            }
            Some(_) => Interlacing {
                passed: false,
                min_gap: f64::NAN,
                tol: f64::NAN,
                precision: cfg.precision,
            },
            None => Interlacing {
                passed: real,
                min_gap: f64::INFINITY,
                tol: f64::NAN,
                precision: cfg.precision,
            },
        };
        let (at_xb, xb_err) = p.eval_real_bounded(&self.x_b);
        let (at_u, u_err) = p.eval_real_bounded(&self.u);
        let sign_u = if n.div_ceil(2) % 2 == 0 { 1.0 } else { -1.0 };
        let (at_xb, at_u) = (at_xb.to_f64(), sign_u * at_u.to_f64());
        let margin = to_u.min(to_xb).min(check.min_gap).min(at_xb).min(at_u);

        // A zero within its error bound of an endpoint, or a value within
        // rounding of zero, says nothing about the sign either way.
        let ulp = 2f64.powi(8 - cfg.precision as i32);
        let err = rs.max_error_bound();
        let signs = [
            (to_u, err + ulp * (1.0 + self.u.to_f64().abs())),
            (to_xb, err + ulp * (1.0 + self.x_b.to_f64().abs())),
            (at_u, u_err),
            (at_xb, xb_err),
        ];
        let structural = degree_ok && real && check.passed;
        let passed = structural && signs.iter().all(|&(d, slack)| d > slack);
        let undecided = !passed && structural && signs.iter().all(|&(d, slack)| d >= -slack);
        let detail = Detail::new(
            Some(n),
            "U_n zeros real in (u, x_B), interlacing from the left",
            passed,
            margin,
        )
        .metric("degree", p.degree().unwrap_or(0) as f64)
        .metric("distance_to_u", to_u)
        .metric("distance_to_x_b", to_xb)
        .metric("min_interlacing_gap", check.min_gap)
        .metric("interlacing_tolerance", check.tol)
        .metric("interlacing_precision", check.precision as f64)
        .metric("u_n_at_x_b", at_xb)
        .metric("signed_u_n_at_u", at_u);
        Ok(NormalizedStep {
            detail,
            roots: rs,
            extremes: (to_u, to_xb),
            undecided,
        })
    }
}

/// Grid of parameters with `a, c > 0` and `b, d < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub horizon: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            a: vec![0.5, 1.0, 2.0],
            b: vec![-0.5, -1.0, -2.0],
            c: vec![0.5, 1.0, 2.0],
            d: vec![-0.5, -1.0, -2.0],
            horizon: CONVERGENCE_HORIZON,
        }
    }
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<RecurrenceParams>> {
        let mut out = Vec::new();
        for &a in &self.a {
            for &b in &self.b {
                for &c in &self.c {
                    for &d in &self.d {
                        let p = RecurrenceParams::new(a, b, c, d)?;
                        require_pmpm(&p)?;
                        out.push(p);
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub params: RecurrenceParams,
    pub criterion: bool,
    /// First `n` with a non-real zero.
    pub first_non_real: Option<usize>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSummary {
    pub horizon: usize,
    pub points: Vec<ScanPoint>,
    pub agreements: usize,
    /// Criterion true but a non-real zero was found.
    pub false_negatives: usize,
    /// Criterion false and no non-real zero found by the horizon.
    pub inconclusive: usize,
}

impl ScanSummary {
    pub fn passed(&self) -> bool {
        self.false_negatives == 0
    }

    pub fn to_report(&self) -> VerificationReport {
        let details = self
            .points
            .iter()
            .map(|p| {
                let [a, b, c, d] = p.params.as_array();
                let ok = !(p.criterion && p.first_non_real.is_some());
                Detail::new(
                    p.first_non_real,
                    format!("({a},{b},{c},{d})"),
                    ok,
                    if ok { 1.0 } else { -1.0 },
                )
                .metric("criterion", if p.criterion { 1.0 } else { 0.0 })
                .metric(
                    "inconclusive",
                    if p.outcome == Outcome::Inconclusive {
                        1.0
                    } else {
                        0.0
                    },
                )
            })
            .collect();
        let params = self
            .points
            .first()
            .map(|p| p.params)
            .unwrap_or_else(|| RecurrenceParams::new(1.0, -1.0, 1.0, -1.0).expect("valid"));
        let mut report = VerificationReport::new("scan", &params, self.horizon, details);
        report.notes.push(format!(
            "{} points, {} agreements, {} false negatives, {} inconclusive",
            self.points.len(),
            self.agreements,
            self.false_negatives,
            self.inconclusive
        ));
        report
    }
}

/// Compares the criterion with empirical real-rootedness on every grid point.
pub fn scan_sign_region(grid: &GridSpec, cfg: &SuiteConfig) -> Result<ScanSummary> {
    let mut points = Vec::new();
    let (mut agreements, mut false_negatives, mut inconclusive) = (0, 0, 0);
    for params in grid.points()? {
        let criterion = real_rooted_criterion(&params)?;
        let (first, _) = first_non_real(&params, grid.horizon, cfg)?;
        let outcome = match (criterion, first) {
            (true, None) | (false, Some(_)) => {
                agreements += 1;
                Outcome::Pass
            }
            (true, Some(_)) => {
                false_negatives += 1;
                Outcome::Fail
            }
            (false, None) => {
                inconclusive += 1;
                Outcome::Inconclusive
            }
        };
        points.push(ScanPoint {
            params,
            criterion,
            first_non_real: first,
            outcome,
        });
    }
    Ok(ScanSummary {
        horizon: grid.horizon,
        points,
        agreements,
        false_negatives,
        inconclusive,
    })
}

/// Zeros flagged real, as doubles.
pub fn real_parts(rs: &RootSet) -> Vec<f64> {
    rs.real_roots().iter().map(Float::to_f64).collect()
}
