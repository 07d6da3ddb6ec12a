//! Dense univariate polynomials with real multiprecision coefficients.

use std::fmt;

use rug::{Assign, Float};

use crate::error::{Error, Result};
use crate::scalar::{unit_roundoff, ComplexScalar};

/// Exponent offset of the cancellation threshold used by
/// [`Polynomial::linear_combine`]: a combined coefficient whose magnitude is
/// below `2^(8 - precision)` times the sum of the magnitudes of its summands is
/// rounding noise and is stored as an exact zero.
const CANCELLATION_SLACK_BITS: i32 = 8;

/// A polynomial `Σ coeffs[k] z^k` with coefficients stored in ascending order.
///
/// The highest stored coefficient is always nonzero; the zero polynomial has
/// no coefficients at all.
#[derive(Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Float>,
    precision: u32,
}

/// Quotient of a polynomial division together with the size of what was left
/// over.
#[derive(Clone, Debug)]
pub struct Division {
    pub quotient: Polynomial,
    pub remainder: Polynomial,
    /// `max|remainder_k| / max|dividend_k|`; zero for a zero dividend.
    pub relative_remainder: f64,
}

impl Division {
    /// Whether the remainder is small enough to call the division exact at
    /// the given precision.
    pub fn is_exact(&self, precision: u32) -> bool {
        let threshold = if precision >= 128 {
            1e-20
        } else {
            unit_roundoff(precision) * 1024.0
        };
        self.relative_remainder < threshold
    }
}

impl Polynomial {
    pub fn zero(precision: u32) -> Self {
        Self {
            coeffs: Vec::new(),
            precision,
        }
    }

    pub fn constant(value: f64, precision: u32) -> Self {
        Self::from_f64(&[value], precision).expect("finite constant")
    }

    /// `slope·z + intercept`.
    pub fn linear(slope: f64, intercept: f64, precision: u32) -> Self {
        Self::from_f64(&[intercept, slope], precision).expect("finite linear coefficients")
    }

    /// Builds a polynomial from ascending coefficients, rounding each to
    /// `precision` bits.
    pub fn new(coeffs: Vec<Float>, precision: u32) -> Result<Self> {
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let coeffs = coeffs
            .into_iter()
            .map(|c| Float::with_val(precision, c))
            .collect();
        let mut p = Self { coeffs, precision };
        p.trim();
        Ok(p)
    }

    pub fn from_f64(coeffs: &[f64], precision: u32) -> Result<Self> {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Float::with_val(precision, c))
                .collect(),
            precision,
        )
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Float] {
        &self.coeffs
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Float> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Float {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Float::new(self.precision))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(Float::to_f64).collect()
    }

    /// Same values rounded (or widened) to another precision.
    pub fn with_precision(&self, precision: u32) -> Self {
        let mut p = Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Float::with_val(precision, c))
                .collect(),
            precision,
        };
        p.trim();
        p
    }

    pub fn max_norm(&self) -> Float {
        let mut m = Float::new(self.precision);
        for c in &self.coeffs {
            if c.clone().abs() > m {
                m.assign(c.abs_ref());
            }
        }
        m
    }

    /// Horner evaluation at a complex point. For a real point the imaginary
    /// part of the result is exactly zero.
    pub fn eval(&self, z: &ComplexScalar) -> ComplexScalar {
        let precision = self.precision.max(z.prec());
        let mut acc = ComplexScalar::zero(precision);
        let mut tmp = Float::new(precision);
        for c in self.coeffs.iter().rev() {
            acc.mul_add_real(z, c, &mut tmp);
        }
        acc
    }

    pub fn eval_real(&self, x: &Float) -> Float {
        let precision = self.precision.max(x.prec());
        let mut acc = Float::new(precision);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Value at `x` with a bound on its error: Horner rounding plus the
    /// effect of `x` itself being off by a few units in the last place.
    pub fn eval_real_bounded(&self, x: &Float) -> (Float, f64) {
        let precision = self.precision.max(x.prec());
        let ax = Float::with_val(64, x.abs_ref());
        let (mut mag, mut slope) = (Float::new(64), Float::new(64));
        for c in self.coeffs.iter().rev() {
            slope = slope * &ax + &mag;
            mag = mag * &ax + Float::with_val(64, c.abs_ref());
        }
        let n = self.coeffs.len() as f64;
        let bound = (mag * (4.0 * n) + slope * ax * 16u32)
            * Float::with_val(64, Float::i_exp(1, -(precision as i32)));
        (self.eval_real(x), bound.to_f64())
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.eval_real(&Float::with_val(self.precision, x)).to_f64()
    }

    /// `l1·self + l2·q` where `l1` and `l2` have degree at most one.
    ///
    /// Coefficients that cancel down to rounding noise of their own summands
    /// are stored as exact zeros, so the result's degree reflects genuine
    /// cancellation only.
    pub fn linear_combine(
        &self,
        l1: &Polynomial,
        q: &Polynomial,
        l2: &Polynomial,
    ) -> Result<Polynomial> {
        for l in [l1, l2] {
            if let Some(deg) = l.degree() {
                if deg > 1 {
                    return Err(Error::NotLinear(deg));
                }
            }
        }
        let precision = self.precision.max(q.precision);
        let len = self.coeffs.len().max(q.coeffs.len()) + 1;
        let threshold = Float::with_val(
            64,
            Float::i_exp(1, CANCELLATION_SLACK_BITS - precision as i32),
        );
        let mut coeffs = Vec::with_capacity(len);
        let mut term = Float::new(precision);
        for k in 0..len {
            let mut sum = Float::new(precision);
            let mut magnitude = Float::new(64);
            let parts = [(l1, 0usize, self), (l1, 1, self), (l2, 0, q), (l2, 1, q)];
            for (lin, shift, poly) in parts {
                if k < shift {
                    continue;
                }
                let (Some(lc), Some(pc)) = (lin.coeffs.get(shift), poly.coeffs.get(k - shift))
                else {
                    continue;
                };
                term.assign(lc * pc);
                sum += &term;
                if term.is_sign_negative() {
                    magnitude -= &term;
                } else {
                    magnitude += &term;
                }
            }
            if !sum.is_zero() && sum.clone().abs() <= Float::with_val(64, &magnitude * &threshold) {
                sum = Float::new(precision);
            }
            coeffs.push(sum);
        }
        let mut out = Polynomial { coeffs, precision };
        out.trim();
        Ok(out)
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| Float::with_val(self.precision, c * k as u64))
            .collect();
        let mut out = Polynomial {
            coeffs,
            precision: self.precision,
        };
        out.trim();
        out
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let precision = self.precision.max(other.precision);
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| Float::with_val(precision, self.coeff(k) + other.coeff(k)))
            .collect();
        let mut out = Polynomial { coeffs, precision };
        out.trim();
        out
    }

    pub fn scale(&self, k: &Float) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| Float::with_val(self.precision, c * k))
            .collect();
        let mut out = Polynomial {
            coeffs,
            precision: self.precision,
        };
        out.trim();
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let precision = self.precision.max(other.precision);
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(precision);
        }
        let mut coeffs = vec![Float::new(precision); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += x * y;
            }
        }
        let mut out = Polynomial { coeffs, precision };
        out.trim();
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::constant(1.0, self.precision);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Long division by `divisor`, reporting how far the remainder is from
    /// zero relative to the dividend.
    pub fn divide_exact(&self, divisor: &Polynomial) -> Result<Division> {
        let precision = self.precision.max(divisor.precision);
        let Some(dq) = divisor.degree() else {
            return Err(Error::DivisionByZero);
        };
        let lead = divisor.leading().expect("nonzero divisor");
        let mut rem: Vec<Float> = self
            .coeffs
            .iter()
            .map(|c| Float::with_val(precision, c))
            .collect();
        let quotient_len = rem.len().saturating_sub(dq);
        let mut quotient = vec![Float::new(precision); quotient_len];
        let mut term = Float::new(precision);
        for k in (0..quotient_len).rev() {
            let coef = Float::with_val(precision, &rem[k + dq] / lead);
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                term.assign(&coef * dc);
                rem[k + j] -= &term;
            }
            rem[k + dq] = Float::new(precision);
            quotient[k] = coef;
        }
        rem.truncate(dq.min(rem.len()));
        let mut remainder = Polynomial {
            coeffs: rem,
            precision,
        };
        remainder.trim();
        let mut quotient = Polynomial {
            coeffs: quotient,
            precision,
        };
        quotient.trim();
        let norm = self.max_norm();
        let relative_remainder = if norm.is_zero() {
            0.0
        } else {
            (remainder.max_norm() / norm).to_f64()
        };
        Ok(Division {
            quotient,
            remainder,
            relative_remainder,
        })
    }

    /// `max_k |self_k − other_k| / max_k |self_k|`.
    pub fn relative_distance(&self, other: &Polynomial) -> f64 {
        let precision = self.precision.max(other.precision);
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut worst = Float::new(precision);
        for k in 0..len {
            let diff = Float::with_val(precision, self.coeff(k) - other.coeff(k)).abs();
            if diff > worst {
                worst = diff;
            }
        }
        let norm = self.max_norm();
        if norm.is_zero() {
            worst.to_f64()
        } else {
            (worst / norm).to_f64()
        }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({}; {} bits)", self, self.precision)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            let v = c.to_f64();
            if v == 0.0 {
                continue;
            }
            let mag = v.abs();
            if first {
                if v < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if v < 0.0 { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || mag != 1.0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn poly(c: &[f64]) -> Polynomial {
        Polynomial::from_f64(c, 128).unwrap()
    }

    #[test]
    fn bounded_eval_covers_cancellation() {
        // (x - 1)^5 near its root: the expanded form cancels to noise.
        let p = poly(&[-1.0, 5.0, -10.0, 10.0, -5.0, 1.0]);
        let x = Float::with_val(128, 1.0) + Float::with_val(128, Float::i_exp(1, -40));
        let (value, bound) = p.eval_real_bounded(&x);
        let exact = 2f64.powi(-200);
        assert!(
            (value.to_f64() - exact).abs() <= bound,
            "{value} vs {exact} within {bound}"
        );
        assert!(bound < 1e-30);
        let (v, b) = p.eval_real_bounded(&Float::with_val(128, 3.0));
        assert_eq!(v.to_f64(), 32.0);
        assert!(b < 1e-30);
    }

    #[test]
    fn eval_examples() {
        // W_2 for (1,-1,2,-3) is z^2 + z - 3; its constant term is d.
        let w2 = poly(&[-3.0, 1.0, 1.0]);
        assert_eq!(
            w2.eval(&ComplexScalar::zero(128)).to_c64(),
            Complex64::new(-3.0, 0.0)
        );
        assert!(Polynomial::zero(53)
            .eval(&ComplexScalar::from_f64(53, 2.0, 1.0))
            .is_zero());
        let root = ComplexScalar::from_real(&((Float::with_val(128, 13).sqrt() - 1u32) / 2u32));
        let v = w2.eval(&root);
        assert!(v.abs().to_f64() < 1e-12);
        assert!(v.im.is_zero());
    }

    #[test]
    fn linear_combine_examples() {
        let p = poly(&[-3.0, 1.0, 1.0]);
        let q = poly(&[0.0, 1.0]);
        let out = p
            .linear_combine(&poly(&[-1.0, 1.0]), &q, &poly(&[-3.0, 2.0]))
            .unwrap();
        assert_eq!(out.to_f64_coeffs(), vec![3.0, -7.0, 2.0, 1.0]);

        let one = poly(&[1.0]);
        let out = one
            .linear_combine(
                &poly(&[-2.5, 0.5]),
                &Polynomial::zero(128),
                &poly(&[7.0, 3.0]),
            )
            .unwrap();
        assert_eq!(out.to_f64_coeffs(), vec![-2.5, 0.5]);

        let out = one.linear_combine(&poly(&[0.0, 1.0]), &one, &one).unwrap();
        assert_eq!(out.to_f64_coeffs(), vec![1.0, 1.0]);
    }

    #[test]
    fn linear_combine_rejects_quadratic_factor() {
        let one = poly(&[1.0]);
        assert_eq!(
            one.linear_combine(&poly(&[0.0, 0.0, 1.0]), &one, &one),
            Err(Error::NotLinear(2))
        );
        assert_eq!(
            one.linear_combine(&one, &one, &poly(&[1.0, 1.0, 1.0, 1.0])),
            Err(Error::NotLinear(3))
        );
    }

    #[test]
    fn cancellation_noise_becomes_exact_zero() {
        // (z + 0.1)(1) - (z)(1) - 0.1 leaves only rounding noise in the
        // constant term at 53 bits; 0.1 is inexact in binary.
        let p = Polynomial::from_f64(&[0.1, 1.0], 53).unwrap();
        let q = Polynomial::from_f64(&[1.0], 53).unwrap();
        let l1 = Polynomial::from_f64(&[3.0], 53).unwrap();
        let l2 = Polynomial::from_f64(&[-0.3, -3.0], 53).unwrap();
        let out = p.linear_combine(&l1, &q, &l2).unwrap();
        assert!(out.is_zero(), "{out}");
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(
            poly(&[3.0, -7.0, 2.0, 1.0]).derivative().to_f64_coeffs(),
            vec![-7.0, 4.0, 3.0]
        );
        assert!(poly(&[5.0]).derivative().is_zero());
        let mut z10 = vec![0.0; 11];
        z10[10] = 1.0;
        let mut expect = vec![0.0; 10];
        expect[9] = 10.0;
        assert_eq!(poly(&z10).derivative().to_f64_coeffs(), expect);
    }

    #[test]
    fn divide_exact_examples() {
        let d = poly(&[-1.0, 0.0, 1.0])
            .divide_exact(&poly(&[-1.0, 1.0]))
            .unwrap();
        assert_eq!(d.quotient.to_f64_coeffs(), vec![1.0, 1.0]);
        assert_eq!(d.relative_remainder, 0.0);
        assert!(d.is_exact(128));

        let d = poly(&[1.0, 0.0, 1.0])
            .divide_exact(&poly(&[-1.0, 1.0]))
            .unwrap();
        assert_eq!(d.relative_remainder, 2.0);
        assert!(!d.is_exact(128));

        assert_eq!(
            poly(&[1.0])
                .divide_exact(&Polynomial::zero(128))
                .unwrap_err(),
            Error::DivisionByZero
        );
        let d = poly(&[1.0, 1.0])
            .divide_exact(&poly(&[0.0, 0.0, 1.0]))
            .unwrap();
        assert!(d.quotient.is_zero());
        assert_eq!(d.remainder.to_f64_coeffs(), vec![1.0, 1.0]);
    }

    #[test]
    fn rejects_non_finite() {
        assert_eq!(
            Polynomial::from_f64(&[1.0, f64::NAN], 53).unwrap_err(),
            Error::NonFinite(1)
        );
        assert!(Polynomial::from_f64(&[f64::INFINITY], 53).is_err());
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = poly(&[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(poly(&[0.0, 0.0]).degree(), None);
    }

    #[test]
    fn display() {
        assert_eq!(
            poly(&[3.0, -7.0, 2.0, 1.0]).to_string(),
            "z^3 + 2z^2 - 7z + 3"
        );
        assert_eq!(poly(&[0.0, -1.0]).to_string(), "-z");
        assert_eq!(Polynomial::zero(53).to_string(), "0");
    }

    fn coeff_vec() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-10.0f64..10.0, 1..8)
    }

    proptest! {
        #[test]
        fn eval_is_linear(p in coeff_vec(), q in coeff_vec(), alpha in -3.0f64..3.0,
                          beta in -3.0f64..3.0, zr in -2.0f64..2.0, zi in -2.0f64..2.0) {
            let prec = 128;
            let (p, q) = (poly(&p), poly(&q));
            let (al, be) = (Float::with_val(prec, alpha), Float::with_val(prec, beta));
            let z = ComplexScalar::from_f64(prec, zr, zi);
            let lhs = p.scale(&al).add(&q.scale(&be)).eval(&z);
            let rhs = &p.eval(&z).scale(&al) + &q.eval(&z).scale(&be);
            let diff = (&lhs - &rhs).abs().to_f64();
            prop_assert!(diff <= 1e-30 * (1.0 + rhs.abs().to_f64()));
        }

        #[test]
        fn division_reconstructs(p in coeff_vec(), q in coeff_vec()) {
            let (p, q) = (poly(&p), poly(&q));
            prop_assume!(!q.is_zero());
            let d = p.divide_exact(&q).unwrap();
            let back = d.quotient.mul(&q).add(&d.remainder);
            prop_assert!(back.relative_distance(&p) < 1e-25);
        }

        #[test]
        fn combine_degree_rule(p in coeff_vec(), q in coeff_vec(), s1 in 0.5f64..2.0, s2 in 0.5f64..2.0) {
            let (p, q) = (poly(&p), poly(&q));
            prop_assume!(!p.is_zero() && !q.is_zero());
            let (l1, l2) = (poly(&[1.0, s1]), poly(&[-1.0, s2]));
            let out = p.linear_combine(&l1, &q, &l2).unwrap();
            let (dp, dq) = (p.degree().unwrap(), q.degree().unwrap());
            let top = dp.max(dq);
            let lead = s1 * if dp == top { p.leading().unwrap().to_f64() } else { 0.0 }
                + s2 * if dq == top { q.leading().unwrap().to_f64() } else { 0.0 };
            if lead.abs() > 1e-9 {
                prop_assert_eq!(out.degree(), Some(top + 1));
            }
        }
    }
}
