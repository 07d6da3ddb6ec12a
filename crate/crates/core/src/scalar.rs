//! Configurable-precision real and complex scalars.
//!
//! Real values are MPFR floats ([`rug::Float`]). [`ComplexScalar`] is a plain
//! pair of them; the handful of complex operations the crate needs are
//! implemented here so that branch conventions stay under our control.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rug::{Assign, Float};

/// Significand widths accepted by the command line front end.
pub const SUPPORTED_PRECISIONS: [u32; 4] = [53, 128, 256, 512];

/// Default working precision of a freshly built polynomial.
pub const DEFAULT_PRECISION: u32 = 53;

/// Precision used by the verification suites and the scalar tables.
pub const ANALYSIS_PRECISION: u32 = 256;

/// Unit roundoff `2^-precision` as an `f64`.
pub fn unit_roundoff(precision: u32) -> f64 {
    (-(precision as f64)).exp2()
}

/// Picks a working precision for polynomials of degree `n`.
///
/// Coefficients of `W_n` grow roughly geometrically, so doubles stop being
/// adequate past a few dozen terms.
pub fn precision_for_degree(n: usize) -> u32 {
    if n <= 32 {
        53
    } else {
        128
    }
}

pub fn real(precision: u32, value: f64) -> Float {
    Float::with_val(precision, value)
}

/// A complex number whose components carry the same MPFR precision.
#[derive(Clone, PartialEq)]
pub struct ComplexScalar {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e} {:+e}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl ComplexScalar {
    pub fn new(re: Float, im: Float) -> Self {
        let precision = re.prec().max(im.prec());
        Self {
            re: Float::with_val(precision, re),
            im: Float::with_val(precision, im),
        }
    }

    pub fn from_f64(precision: u32, re: f64, im: f64) -> Self {
        Self {
            re: Float::with_val(precision, re),
            im: Float::with_val(precision, im),
        }
    }

    pub fn from_c64(precision: u32, z: Complex64) -> Self {
        Self::from_f64(precision, z.re, z.im)
    }

    pub fn from_real(x: &Float) -> Self {
        Self {
            re: x.clone(),
            im: Float::new(x.prec()),
        }
    }

    pub fn zero(precision: u32) -> Self {
        Self {
            re: Float::new(precision),
            im: Float::new(precision),
        }
    }

    pub fn one(precision: u32) -> Self {
        Self::from_f64(precision, 1.0, 0.0)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, precision: u32) -> Self {
        Self {
            re: Float::with_val(precision, &self.re),
            im: Float::with_val(precision, &self.im),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let mut out = Float::with_val(p, self.re.square_ref());
        out += Float::with_val(p, self.im.square_ref());
        out
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec();
        Self {
            re: Float::with_val(p, &self.re * k),
            im: Float::with_val(p, &self.im * k),
        }
    }

    pub fn add_real(&self, k: &Float) -> Self {
        Self {
            re: Float::with_val(self.prec(), &self.re + k),
            im: self.im.clone(),
        }
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let m = self.norm_sqr();
        Self {
            re: Float::with_val(p, &self.re / &m),
            im: Float::with_val(p, -Float::with_val(p, &self.im / &m)),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        // Smith's algorithm keeps intermediate magnitudes near the inputs'.
        let p = self.prec().max(other.prec());
        if other.re.clone().abs() >= other.im.clone().abs() {
            let r = Float::with_val(p, &other.im / &other.re);
            let den = Float::with_val(p, &other.re + Float::with_val(p, &other.im * &r));
            let re = Float::with_val(p, &self.re + Float::with_val(p, &self.im * &r)) / &den;
            let im = Float::with_val(p, &self.im - Float::with_val(p, &self.re * &r)) / &den;
            Self { re, im }
        } else {
            let r = Float::with_val(p, &other.re / &other.im);
            let den = Float::with_val(p, Float::with_val(p, &other.re * &r) + &other.im);
            let re = Float::with_val(p, Float::with_val(p, &self.re * &r) + &self.im) / &den;
            let im = Float::with_val(p, Float::with_val(p, &self.im * &r) - &self.re) / &den;
            Self { re, im }
        }
    }

    /// `self^n` by binary powering.
    pub fn powu(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.prec());
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// In-place `self = self * z + c` for a real `c`. Hot path of Horner
    /// evaluation; `tmp` avoids allocation.
    pub(crate) fn mul_add_real(&mut self, z: &ComplexScalar, c: &Float, tmp: &mut Float) {
        // re' = re*zr - im*zi + c ; im' = re*zi + im*zr
        tmp.assign(&self.re * &z.im);
        *tmp += &self.im * &z.re;
        self.re *= &z.re;
        self.re -= &self.im * &z.im;
        self.re += c;
        std::mem::swap(&mut self.im, tmp);
    }

    /// In-place `self = self * z + w`.
    pub(crate) fn mul_add(&mut self, z: &ComplexScalar, w: &ComplexScalar, tmp: &mut Float) {
        tmp.assign(&self.re * &z.im);
        *tmp += &self.im * &z.re;
        *tmp += &w.im;
        self.re *= &z.re;
        self.re -= &self.im * &z.im;
        self.re += &w.re;
        std::mem::swap(&mut self.im, tmp);
    }
}

impl Add for &ComplexScalar {
    type Output = ComplexScalar;
    fn add(self, rhs: &ComplexScalar) -> ComplexScalar {
        let p = self.prec().max(rhs.prec());
        ComplexScalar {
            re: Float::with_val(p, &self.re + &rhs.re),
            im: Float::with_val(p, &self.im + &rhs.im),
        }
    }
}

impl Sub for &ComplexScalar {
    type Output = ComplexScalar;
    fn sub(self, rhs: &ComplexScalar) -> ComplexScalar {
        let p = self.prec().max(rhs.prec());
        ComplexScalar {
            re: Float::with_val(p, &self.re - &rhs.re),
            im: Float::with_val(p, &self.im - &rhs.im),
        }
    }
}

impl Mul for &ComplexScalar {
    type Output = ComplexScalar;
    fn mul(self, rhs: &ComplexScalar) -> ComplexScalar {
        let p = self.prec().max(rhs.prec());
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re -= &self.im * &rhs.im;
        let mut im = Float::with_val(p, &self.re * &rhs.im);
        im += &self.im * &rhs.re;
        ComplexScalar { re, im }
    }
}

impl Neg for &ComplexScalar {
    type Output = ComplexScalar;
    fn neg(self) -> ComplexScalar {
        ComplexScalar {
            re: Float::with_val(self.prec(), -&self.re),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }
}

/// Principal square root: `r e^{iθ}` with `θ ∈ (−π, π]` maps to
/// `√r e^{iθ/2}`.
///
/// The result has nonnegative real part, and a negative real input maps to the
/// positive imaginary axis whatever the sign of its zero imaginary part.
pub fn principal_sqrt(z: &ComplexScalar) -> ComplexScalar {
    let p = z.prec();
    if z.im.is_zero() {
        return if z.re.is_sign_negative() && !z.re.is_zero() {
            ComplexScalar {
                re: Float::new(p),
                im: Float::with_val(p, (-z.re.clone()).sqrt()),
            }
        } else {
            ComplexScalar {
                re: Float::with_val(p, z.re.abs_ref()).sqrt(),
                im: Float::new(p),
            }
        };
    }
    let r = z.abs();
    if !z.re.is_sign_negative() {
        let t = (Float::with_val(p, &r + &z.re) / 2u32).sqrt();
        let im = Float::with_val(p, &z.im / Float::with_val(p, &t * 2u32));
        ComplexScalar { re: t, im }
    } else {
        let mut t = (Float::with_val(p, &r - &z.re) / 2u32).sqrt();
        if z.im.is_sign_negative() {
            t = -t;
        }
        let re = Float::with_val(p, &z.im / Float::with_val(p, &t * 2u32));
        ComplexScalar { re, im: t }
    }
}
