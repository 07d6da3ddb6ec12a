//! Simultaneous root finding (Aberth–Ehrlich) at arbitrary precision, real
//! snapping, and interlacing tests on sorted real root sets.

use std::cmp::Ordering;

use num_complex::Complex64;
use rug::{Assign, Float};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{unit_roundoff, ComplexScalar};

/// Precision used for error bounds and other bookkeeping magnitudes.
const BOUND_PREC: u32 = 64;

/// Extra bits used by the Newton polish.
const POLISH_EXTRA_BITS: u32 = 64;

/// Iteration cap for the double precision seeding pass.
const SEED_ITERS: usize = 120;

/// Golden-angle rotation of the initial layout, so no guess sits on the
/// real axis.
const LAYOUT_OFFSET: f64 = 0.398_942_280_401_432_7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Retry once at twice the precision when the first attempt fails.
    pub escalate: bool,
    /// Newton polish at elevated precision after convergence.
    pub polish: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 200,
            escalate: true,
            polish: true,
        }
    }
}

/// Zeros of a polynomial, sorted by `(re, im)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<ComplexScalar>,
    pub is_real: Vec<bool>,
    /// `|p(r)| / Σ|c_k||r|^k` for each root.
    pub residuals: Vec<f64>,
    /// First-order bound on the distance from each root to the true zero:
    /// `(|p(r)| + rounding bound of p(r)) / |p'(r)|`. Infinite where `p'(r)`
    /// vanishes, so clustered zeros never count as resolved.
    pub error_bounds: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub precision: u32,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.roots.iter().map(ComplexScalar::to_c64).collect()
    }

    /// Real parts of the roots flagged real, ascending.
    pub fn real_roots(&self) -> Vec<Float> {
        self.roots
            .iter()
            .zip(&self.is_real)
            .filter(|(_, &r)| r)
            .map(|(z, _)| z.re.clone())
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_error_bound(&self) -> f64 {
        self.error_bounds.iter().copied().fold(0.0, f64::max)
    }
}

/// `deg · 2^(16 − precision)`, the largest relative residual accepted.
pub fn residual_bound(degree: usize, precision: u32) -> f64 {
    degree as f64 * 65536.0 * unit_roundoff(precision)
}

/// Default relative tolerance for [`snap_real`].
pub fn default_tolerance(precision: u32) -> f64 {
    match precision {
        0..=53 => 1e-12,
        54..=128 => 1e-18,
        129..=256 => 1e-25,
        _ => 1e-50,
    }
}

/// Tolerance for interlacing gaps between two root sets: twice the larger
/// error bound, so a gap above it cannot close when both endpoints move to
/// their true positions.
pub fn interlacing_tolerance(x: &RootSet, y: &RootSet) -> f64 {
    2.0 * x.max_error_bound().max(y.max_error_bound())
}

/// Finds all zeros of `p`, seeding the iteration from a double precision run
/// on the rounded coefficients.
pub fn find_roots(p: &Polynomial, cfg: &SolverConfig) -> Result<RootSet> {
    let f64_coeffs = p.to_f64_coeffs();
    find_roots_with(p, cfg, |z| horner_f64(&f64_coeffs, z))
}

/// Finds all zeros of `p`, seeding from a double precision run that evaluates
/// `p` and `p'` through `eval`. Useful when a cheaper or better conditioned
/// evaluation than the monomial form is available.
pub fn find_roots_with<F>(p: &Polynomial, cfg: &SolverConfig, eval: F) -> Result<RootSet>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let layout = initial_layout(p)?;
    let seeds = refine_f64(&layout, eval).unwrap_or(layout);
    find_roots_from(p, &seeds, cfg)
}

/// Finds all zeros of `p` starting from the given guesses.
pub fn find_roots_from(p: &Polynomial, seeds: &[Complex64], cfg: &SolverConfig) -> Result<RootSet> {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        other => return Err(Error::DegreeTooLow(other.unwrap_or(0))),
    };
    if seeds.len() != n {
        return Err(Error::Precondition(format!(
            "{} initial guesses for a polynomial of degree {n}",
            seeds.len()
        )));
    }
    let prec = p.precision();
    let start: Vec<ComplexScalar> = seeds
        .iter()
        .map(|&z| ComplexScalar::from_c64(prec, z))
        .collect();
    let first = solve(p, start, cfg);
    if first.converged || !cfg.escalate {
        return Ok(first);
    }
    let wide = p.with_precision(prec * 2);
    let restart = first.roots.iter().map(|z| z.with_prec(prec * 2)).collect();
    let mut second = solve(&wide, restart, cfg);
    second.iterations += first.iterations;
    Ok(second)
}

/// Equally spaced points on a circle about the root centroid, with radius
/// the Fujiwara bound of the recentred polynomial.
pub fn initial_layout(p: &Polynomial) -> Result<Vec<Complex64>> {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        other => return Err(Error::DegreeTooLow(other.unwrap_or(0))),
    };
    let prec = p.precision().max(BOUND_PREC);
    let lead = Float::with_val(prec, p.leading().expect("nonzero"));
    let center = Float::with_val(
        prec,
        -Float::with_val(prec, p.coeff(n - 1) / &lead) / n as u32,
    );

    // Taylor shift p(z + center), then normalise to a monic polynomial.
    let mut shifted: Vec<Float> = p
        .coeffs()
        .iter()
        .map(|c| Float::with_val(prec, c))
        .collect();
    for i in 0..n {
        for k in (i..n).rev() {
            let t = Float::with_val(prec, &shifted[k + 1] * &center);
            shifted[k] += t;
        }
    }
    let mut bound = Float::with_val(BOUND_PREC, 0);
    for k in 1..=n {
        let mut ratio = Float::with_val(BOUND_PREC, &shifted[n - k] / &lead).abs();
        if k == n {
            ratio /= 2u32;
        }
        let root = ratio.root(k as u32);
        if root > bound {
            bound = root;
        }
    }
    let radius = if bound.is_zero() { 1.0 } else { bound.to_f64() };
    let (cx, step) = (center.to_f64(), std::f64::consts::TAU / n as f64);
    Ok((0..n)
        .map(|k| {
            let theta = step * k as f64 + LAYOUT_OFFSET;
            Complex64::new(cx, 0.0) + Complex64::from_polar(radius, theta)
        })
        .collect())
}

fn horner_f64(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

/// Double precision Aberth iteration. Returns `None` if any value becomes
/// non-finite.
pub fn refine_f64<F>(start: &[Complex64], eval: F) -> Option<Vec<Complex64>>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let n = start.len();
    let mut z = start.to_vec();
    let mut done = vec![false; n];
    for _ in 0..SEED_ITERS {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (v, d) = eval(z[i]);
            if !v.is_finite() || !d.is_finite() {
                return None;
            }
            if v.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let newton = v / d;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = newton / (Complex64::new(1.0, 0.0) - newton * s);
            if !w.is_finite() {
                return None;
            }
            z[i] -= w;
            if w.norm() <= 1e-14 * (1.0 + z[i].norm()) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            break;
        }
    }
    Some(z)
}

/// Workspace for evaluating `p` and `p'` at a complex point.
struct Evaluator<'a> {
    coeffs: &'a [Float],
    abs_coeffs: Vec<Float>,
    value: ComplexScalar,
    deriv: ComplexScalar,
    tmp: Float,
}

impl<'a> Evaluator<'a> {
    fn new(p: &'a Polynomial, prec: u32) -> Self {
        Self {
            coeffs: p.coeffs(),
            abs_coeffs: p
                .coeffs()
                .iter()
                .map(|c| Float::with_val(BOUND_PREC, c.abs_ref()))
                .collect(),
            value: ComplexScalar::zero(prec),
            deriv: ComplexScalar::zero(prec),
            tmp: Float::new(prec),
        }
    }

    /// Sets `value = p(z)` and `deriv = p'(z)`.
    fn eval(&mut self, z: &ComplexScalar) {
        let n = self.coeffs.len() - 1;
        self.value.re.assign(&self.coeffs[n]);
        self.value.im.assign(0);
        self.deriv.re.assign(0);
        self.deriv.im.assign(0);
        for c in self.coeffs[..n].iter().rev() {
            self.deriv.mul_add(z, &self.value, &mut self.tmp);
            self.value.mul_add_real(z, c, &mut self.tmp);
        }
    }

    /// `Σ|c_k||z|^k`.
    fn magnitude(&self, z: &ComplexScalar) -> Float {
        let r = Float::with_val(BOUND_PREC, z.re.hypot_ref(&z.im));
        let mut acc = Float::with_val(BOUND_PREC, 0);
        for c in self.abs_coeffs.iter().rev() {
            acc *= &r;
            acc += c;
        }
        acc
    }
}

fn solve(p: &Polynomial, mut z: Vec<ComplexScalar>, cfg: &SolverConfig) -> RootSet {
    let n = z.len();
    let prec = p.precision();
    let u = unit_roundoff(prec);
    let noise_factor = Float::with_val(BOUND_PREC, 4.0 * (n as f64 + 1.0) * u);
    let step_floor = Float::with_val(BOUND_PREC, 2.0 * u);
    let mut ev = Evaluator::new(p, prec);
    let one = ComplexScalar::one(prec);
    let mut done = vec![false; n];
    let mut iterations = 0;

    for it in 1..=cfg.max_iters {
        iterations = it;
        for i in 0..n {
            if done[i] {
                continue;
            }
            ev.eval(&z[i]);
            let noise = Float::with_val(BOUND_PREC, ev.magnitude(&z[i]) * &noise_factor);
            if ev.value.abs() <= noise {
                done[i] = true;
                continue;
            }
            if ev.deriv.is_zero() {
                // Stationary point: nudge deterministically off it.
                let nudge = 1e-3 * (1.0 + z[i].to_c64().norm());
                let kick =
                    ComplexScalar::from_c64(prec, Complex64::from_polar(nudge, 1.0 + i as f64));
                z[i] = &z[i] + &kick;
                continue;
            }
            let newton = ev.value.div(&ev.deriv);
            let mut s = ComplexScalar::zero(prec);
            for j in 0..n {
                if j != i {
                    let diff = &z[i] - &z[j];
                    if !diff.is_zero() {
                        s = &s + &diff.recip();
                    }
                }
            }
            let w = newton.div(&(&one - &(&newton * &s)));
            if !w.is_finite() {
                continue;
            }
            z[i] = &z[i] - &w;
            let step = Float::with_val(BOUND_PREC, w.abs());
            if step <= Float::with_val(BOUND_PREC, z[i].abs() * &step_floor) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            break;
        }
    }

    if cfg.polish {
        polish(p, &mut z);
    }
    symmetrize(&mut z);
    z.sort_by(cmp_complex);

    let (residuals, error_bounds): (Vec<f64>, Vec<f64>) = z
        .iter()
        .map(|r| {
            ev.eval(r);
            let mag = ev.magnitude(r);
            let value = Float::with_val(BOUND_PREC, ev.value.abs());
            let residual = if mag.is_zero() {
                0.0
            } else {
                Float::with_val(BOUND_PREC, &value / &mag).to_f64()
            };
            let slope = Float::with_val(BOUND_PREC, ev.deriv.abs());
            let error = if slope.is_zero() {
                f64::INFINITY
            } else {
                ((value + mag * &noise_factor) / slope).to_f64()
            };
            (residual, error)
        })
        .unzip();
    let bound = residual_bound(n, prec);
    let converged = z.iter().all(ComplexScalar::is_finite) && residuals.iter().all(|&r| r <= bound);
    RootSet {
        is_real: vec![false; n],
        roots: z,
        residuals,
        error_bounds,
        iterations,
        converged,
        precision: prec,
    }
}

/// One guarded Newton step per root at elevated precision.
fn polish(p: &Polynomial, z: &mut [ComplexScalar]) {
    let prec = p.precision();
    let wide = p.with_precision(prec + POLISH_EXTRA_BITS);
    let mut ev = Evaluator::new(&wide, prec + POLISH_EXTRA_BITS);
    let snapshot: Vec<Complex64> = z.iter().map(ComplexScalar::to_c64).collect();
    for i in 0..z.len() {
        let separation = snapshot
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, w)| (snapshot[i] - w).norm())
            .fold(f64::INFINITY, f64::min);
        let x = z[i].with_prec(prec + POLISH_EXTRA_BITS);
        ev.eval(&x);
        if ev.deriv.is_zero() {
            continue;
        }
        let before = ev.value.abs();
        let step = ev.value.div(&ev.deriv);
        // NaN steps are rejected too.
        let contained = step.abs().to_f64() < 0.25 * separation;
        if !contained {
            continue;
        }
        let candidate = &x - &step;
        ev.eval(&candidate);
        if ev.value.abs() < before {
            z[i] = candidate.with_prec(prec);
        }
    }
}

/// Makes near-conjugate pairs exact conjugates of each other.
fn symmetrize(z: &mut [ComplexScalar]) {
    let prec = z.first().map_or(53, ComplexScalar::prec);
    let tol = (-(prec as f64) / 2.0).exp2();
    let upper: Vec<usize> = (0..z.len())
        .filter(|&i| z[i].im.is_sign_positive() && !z[i].im.is_zero())
        .collect();
    let mut lower: Vec<usize> = (0..z.len())
        .filter(|&i| z[i].im.is_sign_negative() && !z[i].im.is_zero())
        .collect();
    for i in upper {
        let zi = z[i].to_c64();
        let best = lower
            .iter()
            .enumerate()
            .map(|(k, &j)| (k, (zi - z[j].to_c64().conj()).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        let Some((k, dist)) = best else { break };
        if dist > tol * (1.0 + zi.norm()) {
            continue;
        }
        let j = lower.swap_remove(k);
        let re = Float::with_val(prec, &z[i].re + &z[j].re) / 2u32;
        let im = Float::with_val(prec, &z[i].im - &z[j].im) / 2u32;
        z[j] = ComplexScalar::new(re.clone(), Float::with_val(prec, -&im));
        z[i] = ComplexScalar::new(re, im);
    }
}

fn cmp_complex(x: &ComplexScalar, y: &ComplexScalar) -> Ordering {
    x.re.partial_cmp(&y.re)
        .unwrap_or(Ordering::Equal)
        .then(x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal))
}

/// Projects roots with `|im| ≤ tol (1 + |re|)` onto the real axis and flags
/// them real.
pub fn snap_real(rs: &RootSet, tol: f64) -> RootSet {
    let mut out = rs.clone();
    for (z, flag) in out.roots.iter_mut().zip(out.is_real.iter_mut()) {
        let limit = Float::with_val(BOUND_PREC, z.re.abs_ref()) + 1u32;
        if Float::with_val(BOUND_PREC, z.im.abs_ref()) <= limit * tol {
            z.im = Float::new(z.prec());
            *flag = true;
        } else {
            *flag = false;
        }
    }
    let mut order: Vec<usize> = (0..out.roots.len()).collect();
    order.sort_by(|&i, &j| cmp_complex(&out.roots[i], &out.roots[j]));
    out.roots = order.iter().map(|&i| out.roots[i].clone()).collect();
    out.is_real = order.iter().map(|&i| out.is_real[i]).collect();
    out.residuals = order.iter().map(|&i| out.residuals[i]).collect();
    out.error_bounds = order.iter().map(|&i| out.error_bounds[i]).collect();
    out
}

/// True when every root is flagged real. Apply [`snap_real`] first.
pub fn is_real_rooted(rs: &RootSet) -> bool {
    rs.is_real.iter().all(|&r| r)
}

/// Real values that can be checked for interlacing.
pub trait RealValue {
    fn magnitude(&self) -> f64;
    /// `other − self`, rounded to double once.
    fn gap_to(&self, other: &Self) -> f64;
}

impl RealValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn gap_to(&self, other: &Self) -> f64 {
        other - self
    }
}

impl RealValue for Float {
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
    fn gap_to(&self, other: &Self) -> f64 {
        Float::with_val(other.prec().max(self.prec()), other - self).to_f64()
    }
}

/// Consecutive differences `y₁ − x₁, x₂ − y₁, …` of the merged sequence
/// `x₁, y₁, x₂, y₂, …`. Requires `|X| − |Y| ∈ {0, 1}`.
pub fn interlacing_gaps<T: RealValue>(x: &[T], y: &[T]) -> Result<Vec<f64>> {
    if !(x.len() == y.len() || x.len() == y.len() + 1) {
        return Err(Error::Precondition(format!(
            "interlacing needs |X| - |Y| in {{0, 1}}, got |X| = {}, |Y| = {}",
            x.len(),
            y.len()
        )));
    }
    let mut merged: Vec<&T> = Vec::with_capacity(x.len() + y.len());
    for k in 0..x.len() {
        merged.push(&x[k]);
        if k < y.len() {
            merged.push(&y[k]);
        }
    }
    Ok(merged.windows(2).map(|w| w[0].gap_to(w[1])).collect())
}

/// `x₁ < y₁ < x₂ < …` with every gap above `tol (1 + |endpoint|)`.
pub fn strictly_interlaces<T: RealValue>(x: &[T], y: &[T], tol: f64) -> Result<bool> {
    let gaps = interlacing_gaps(x, y)?;
    let mut merged = Vec::with_capacity(x.len() + y.len());
    for k in 0..x.len() {
        merged.push(x[k].magnitude());
        if k < y.len() {
            merged.push(y[k].magnitude());
        }
    }
    Ok(gaps
        .iter()
        .zip(merged.windows(2))
        .all(|(&g, m)| g > tol * (1.0 + m[0].max(m[1]))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[f64], prec: u32) -> Polynomial {
        Polynomial::from_f64(c, prec).unwrap()
    }

    fn roots_f64(c: &[f64], prec: u32) -> RootSet {
        let rs = find_roots(&poly(c, prec), &SolverConfig::default()).unwrap();
        assert!(rs.converged);
        snap_real(&rs, default_tolerance(prec))
    }

    #[test]
    fn quadratic() {
        let rs = roots_f64(&[-3.0, 1.0, 1.0], 128);
        let s13 = 13f64.sqrt();
        let got = rs.to_c64();
        assert!((got[0].re - (-1.0 - s13) / 2.0).abs() < 1e-15);
        assert!((got[1].re - (-1.0 + s13) / 2.0).abs() < 1e-15);
        assert!(is_real_rooted(&rs));
    }

    #[test]
    fn cubic_with_zero_root() {
        let rs = roots_f64(&[0.0, -1.0, 0.0, 1.0], 53);
        let got: Vec<f64> = rs.to_c64().iter().map(|z| z.re).collect();
        for (g, e) in got.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((g - e).abs() < 1e-14);
        }
        assert!(is_real_rooted(&rs));
    }

    #[test]
    fn complex_pair_not_real() {
        let rs = roots_f64(&[1.0, 0.0, 1.0], 53);
        assert!(!is_real_rooted(&rs));
        assert_eq!(rs.roots[0].im, -rs.roots[1].im.clone());
        assert!(is_real_rooted(&roots_f64(&[0.0, 1.0], 53)));
    }

    #[test]
    fn degree_zero_rejected() {
        let p = poly(&[3.0], 53);
        assert_eq!(
            find_roots(&p, &SolverConfig::default()).unwrap_err(),
            Error::DegreeTooLow(0)
        );
    }

    #[test]
    fn sum_and_product_of_roots() {
        let c = [2.0, -3.5, 0.25, 7.0, -1.0, 0.5, 1.0];
        let rs = roots_f64(&c, 128);
        let roots = rs.to_c64();
        let sum: Complex64 = roots.iter().sum();
        let product: Complex64 = roots.iter().product();
        assert!((sum - Complex64::new(-0.5, 0.0)).norm() < 1e-10);
        assert!((product - Complex64::new(2.0, 0.0)).norm() < 1e-10 * 2.0);
    }

    #[test]
    fn residual_bound_holds_for_sequence() {
        let pr = crate::RecurrenceParams::new(1.0, 2.0, -2.0, -1.0).unwrap();
        let w = pr.polynomial(30, 256);
        let rs = find_roots_with(&w, &SolverConfig::default(), |z| {
            pr.eval_f64_with_derivative(30, z)
        })
        .unwrap();
        assert!(rs.converged);
        assert_eq!(rs.len(), 30);
        assert!(rs.max_residual() < 1e-20);
    }

    #[test]
    fn deterministic() {
        let p = poly(&[1.0, -2.0, 3.0, -4.0, 5.0, -6.0, 7.0], 256);
        let cfg = SolverConfig::default();
        assert_eq!(find_roots(&p, &cfg).unwrap(), find_roots(&p, &cfg).unwrap());
    }

    #[test]
    fn multiple_root_converges() {
        // (z − 1)³ (z + 2)
        let rs = find_roots(
            &poly(&[-2.0, 5.0, -3.0, -1.0, 1.0], 128),
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(rs.converged);
        let got = rs.to_c64();
        assert!((got[0] - Complex64::new(-2.0, 0.0)).norm() < 1e-30);
        for z in &got[1..] {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn error_bounds_flag_clusters() {
        // (z − 1)² (z + 2): the double zero cannot be resolved, the simple one can.
        let rs = find_roots(&poly(&[2.0, -3.0, 0.0, 1.0], 256), &SolverConfig::default()).unwrap();
        assert!(rs.error_bounds[0] < 1e-60);
        assert!(rs.error_bounds[1] > 1e-60 && rs.error_bounds[2] > 1e-60);
        let simple = find_roots(&poly(&[-2.0, 1.0, 1.0], 256), &SolverConfig::default()).unwrap();
        assert!(interlacing_tolerance(&simple, &simple) < 1e-60);
        assert!(interlacing_tolerance(&rs, &simple) > 1e-60);
    }

    #[test]
    fn snap_examples() {
        let prec = 128;
        let base = RootSet {
            roots: vec![
                ComplexScalar::from_f64(prec, 0.0, 1.5),
                ComplexScalar::from_f64(prec, 1.3027756, 1e-25),
            ],
            is_real: vec![false, false],
            residuals: vec![0.0, 0.0],
            error_bounds: vec![0.0, 0.0],
            iterations: 1,
            converged: true,
            precision: prec,
        };
        let rs = snap_real(&base, 1e-18);
        assert_eq!(rs.roots[1].to_c64(), Complex64::new(1.3027756, 0.0));
        assert_eq!(rs.is_real, vec![false, true]);
        assert_eq!(rs.roots[0].to_c64(), Complex64::new(0.0, 1.5));

        let pair = RootSet {
            roots: vec![
                ComplexScalar::from_f64(prec, 0.5, -1e-30),
                ComplexScalar::from_f64(prec, 0.5, 1e-30),
            ],
            is_real: vec![false, false],
            residuals: vec![0.0, 0.0],
            error_bounds: vec![0.0, 0.0],
            iterations: 1,
            converged: true,
            precision: prec,
        };
        let rs = snap_real(&pair, 1e-18);
        assert!(is_real_rooted(&rs));
        assert!(rs.roots.iter().all(|z| z.im.is_zero()));
    }

    #[test]
    fn interlacing_examples() {
        let x = [-2.302776, 1.302776];
        assert!(strictly_interlaces(&x, &[0.0], 1e-12).unwrap());
        assert!(strictly_interlaces(&[0.0], &[] as &[f64], 1e-12).unwrap());
        assert!(!strictly_interlaces(&[0.0, 1.0], &[1.0], 1e-12).unwrap());
        assert!(strictly_interlaces(&[0.0, 2.0], &[1.0, 3.0], 1e-12).unwrap());
        assert!(matches!(
            strictly_interlaces(&[0.0], &[1.0, 2.0], 1e-12),
            Err(Error::Precondition(_))
        ));
        let xf: Vec<Float> = [1.0, 3.0]
            .iter()
            .map(|&v| Float::with_val(256, v))
            .collect();
        let yf = vec![Float::with_val(256, 2.0)];
        assert!(strictly_interlaces(&xf, &yf, 1e-25).unwrap());
        assert!(!strictly_interlaces(&xf, &[Float::with_val(256, 4.0)], 1e-25).unwrap());
    }

    #[test]
    fn float_gaps_keep_tiny_separations() {
        let x = Float::with_val(256, 1.0);
        let y = Float::with_val(256, &x + Float::with_val(256, Float::i_exp(1, -150)));
        let gaps = interlacing_gaps(&[x], &[y]).unwrap();
        assert!(gaps[0] > 0.0 && gaps[0] < 1e-40);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn conjugate_symmetry_and_residuals(c in prop::collection::vec(-5.0f64..5.0, 2..12), lead in 0.5f64..3.0) {
            let mut coeffs = c.clone();
            coeffs.push(lead);
            let p = poly(&coeffs, 128);
            let rs = find_roots(&p, &SolverConfig::default()).unwrap();
            prop_assert!(rs.converged);
            prop_assert_eq!(rs.len(), coeffs.len() - 1);
            let bound = residual_bound(rs.len(), rs.precision);
            prop_assert!(rs.residuals.iter().all(|&r| r <= bound));
            let roots = rs.to_c64();
            for z in &roots {
                let mirror = roots.iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
                prop_assert!(mirror < 1e-8 * (1.0 + z.norm()));
            }
            let sum: Complex64 = roots.iter().sum();
            let expect = -coeffs[coeffs.len() - 2] / lead;
            let scale = 1.0 + roots.iter().map(|z| z.norm()).sum::<f64>();
            prop_assert!((sum.re - expect).abs() < 1e-10 * scale);
        }

        #[test]
        fn real_roots_recovered(mut r in prop::collection::vec(-10.0f64..10.0, 1..9)) {
            r.sort_by(f64::total_cmp);
            prop_assume!(r.windows(2).all(|w| w[1] - w[0] > 1e-3));
            let mut p = Polynomial::constant(1.0, 256);
            for &x in &r {
                p = p.mul(&Polynomial::linear(1.0, -x, 256));
            }
            let rs = snap_real(&find_roots(&p, &SolverConfig::default()).unwrap(), 1e-25);
            prop_assert!(is_real_rooted(&rs));
            for (got, want) in rs.to_c64().iter().zip(&r) {
                prop_assert!((got.re - want).abs() < 1e-12 * (1.0 + want.abs()));
            }
            // The true zeros lie within the reported bounds.
            for ((z, want), bound) in rs.roots.iter().zip(&r).zip(&rs.error_bounds) {
                let err = Float::with_val(512, &z.re - *want).abs().to_f64();
                prop_assert!(err <= 2.0 * bound, "error {} above bound {}", err, bound);
                prop_assert!(*bound < 1e-50);
            }
        }
    }
}
