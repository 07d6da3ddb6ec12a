//! The sequence `W_n = (az+b)W_{n-1} + (cz+d)W_{n-2}` with `W_0 = 1`,
//! `W_1 = z`, its closed form, and the scalar quantities that control where
//! its zeros accumulate.

use std::fmt;

use num_complex::Complex64;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{principal_sqrt, ComplexScalar};

/// Relative tolerance for treating `x_A` and `x_B` as equal.
pub const XA_XB_TOLERANCE: f64 = 1e-12;

/// Relative tolerance for the agreement of the two routes to `F`.
const F_CROSS_CHECK: f64 = 1e-10;

/// Relative tolerance for `U_n · A^⌊n/2⌋ = W_n`.
const NORMALIZED_CROSS_CHECK: f64 = 1e-10;

/// The coefficients `(a, b, c, d)` of `A(z) = az + b` and `B(z) = cz + d`.
///
/// Values are taken as exact doubles; `a` and `c` must be nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

impl Sign {
    pub fn of(x: f64) -> Self {
        if x > 0.0 {
            Sign::Plus
        } else if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Zero => '0',
        }
    }
}

/// Signs of `(a, b, c, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignCase(pub [Sign; 4]);

impl SignCase {
    /// `a, c > 0` and `b, d < 0`: the case with a real-rootedness criterion.
    pub const PMPM: SignCase = SignCase([Sign::Plus, Sign::Minus, Sign::Plus, Sign::Minus]);

    /// Every sign pattern admissible under `ac ≠ 0`, in a fixed order.
    pub fn all_valid() -> Vec<SignCase> {
        let nonzero = [Sign::Plus, Sign::Minus];
        let any = [Sign::Plus, Sign::Minus, Sign::Zero];
        let mut out = Vec::with_capacity(36);
        for sa in nonzero {
            for sb in any {
                for sc in nonzero {
                    for sd in any {
                        out.push(SignCase([sa, sb, sc, sd]));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for SignCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0.map(Sign::symbol);
        write!(f, "({a},{b},{c},{d})")
    }
}

/// `A`, `B`, `Δ = A² + 4B`, `h = 2z − A` and `g = (h² − Δ)/4`.
#[derive(Debug, Clone)]
pub struct DerivedPolys {
    pub a: Polynomial,
    pub b: Polynomial,
    pub delta: Polynomial,
    pub h: Polynomial,
    pub g: Polynomial,
}

/// Which pair of critical points bounds the zeros in the real-rooted case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UvCase {
    /// `(x_Δ⁻, x_Δ⁺)`: `a < 2` and `F ≤ 0`, or `a = 1` with `b + c = 0`.
    DeltaZeros,
    /// `(x_g⁻, x_g⁺)`: `a > 2` and `F < 0`.
    GZeros,
    /// `(x_g⁺, x_Δ⁺)`: `a < 1` and `F > 0`.
    GPlusDeltaPlus,
    /// `(x_g⁻, x_Δ⁺)`: everything else.
    GMinusDeltaPlus,
}

/// Scalar quantities derived from the parameters, at a fixed precision.
#[derive(Debug, Clone)]
pub struct CriticalScalars {
    pub precision: u32,
    /// Zero of `A`, `−b/a`.
    pub x_a: Float,
    /// Zero of `B`, `−d/c`.
    pub x_b: Float,
    /// `B(x_A) = c(x_A − x_B)`.
    pub b_at_xa: Float,
    /// Discriminant of `Δ(z)` up to the factor 16: `c² − a²B(x_A)`.
    pub delta_delta: Float,
    pub x_delta_minus: ComplexScalar,
    pub x_delta_plus: ComplexScalar,
    /// `(b+c)² + 4d(1−a)`.
    pub delta_g: Float,
    /// `Δ_g − Δ_Δ`, evaluated through its expanded form.
    pub f: Float,
    pub x_g_minus: Option<Float>,
    pub x_g_plus: Option<Float>,
    /// Zero of `h`, defined when `a ≠ 2`.
    pub x_h: Option<Float>,
    pub uv_case: UvCase,
    pub u: Option<Float>,
    pub v: Option<Float>,
}

impl CriticalScalars {
    pub fn x_delta_real(&self) -> Option<(Float, Float)> {
        (!self.delta_delta.is_sign_negative() || self.delta_delta.is_zero())
            .then(|| (self.x_delta_minus.re.clone(), self.x_delta_plus.re.clone()))
    }

    pub fn uv_f64(&self) -> Option<(f64, f64)> {
        Some((self.u.as_ref()?.to_f64(), self.v.as_ref()?.to_f64()))
    }
}

/// Value of `W_n` at a real point together with the running magnitude of the
/// recurrence, `M_n = |A|M_{n-1} + |B|M_{n-2}`.
#[derive(Debug, Clone)]
pub struct ScalarValue {
    pub value: Float,
    pub scale: Float,
}

impl ScalarValue {
    /// `value / scale`, in `[−1, 1]`.
    pub fn normalized(&self) -> f64 {
        if self.scale.is_zero() {
            0.0
        } else {
            Float::with_val(64, &self.value / &self.scale).to_f64()
        }
    }
}

impl RecurrenceParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite")));
            }
        }
        if a == 0.0 {
            return Err(Error::InvalidParams("a must be nonzero".into()));
        }
        if c == 0.0 {
            return Err(Error::InvalidParams("c must be nonzero".into()));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// `−b/a` in double precision.
    pub fn x_a(&self) -> f64 {
        -self.b / self.a
    }

    /// `−d/c` in double precision.
    pub fn x_b(&self) -> f64 {
        -self.d / self.c
    }

    pub fn sign_case(&self) -> SignCase {
        SignCase([self.a, self.b, self.c, self.d].map(Sign::of))
    }

    /// Exact ordering of `x_A` and `x_B`: the sign of `(ad − bc)/(ac)`, with
    /// both products formed exactly.
    pub fn compare_xa_xb(&self) -> std::cmp::Ordering {
        let ad = Float::with_val(128, self.a) * self.d;
        let bc = Float::with_val(128, self.b) * self.c;
        let diff = ad - bc;
        let ord = diff.partial_cmp(&0).expect("finite");
        if (self.a > 0.0) == (self.c > 0.0) {
            ord
        } else {
            ord.reverse()
        }
    }

    /// `|x_A − x_B| ≤ 1e-12 (1 + |x_A|)`.
    pub fn xa_equals_xb(&self) -> bool {
        let (xa, xb) = (self.x_a(), self.x_b());
        (xa - xb).abs() <= XA_XB_TOLERANCE * (1.0 + xa.abs())
    }

    /// Parameters of the sequence `(−1)^n W_n(−z)`, which has mirrored zeros.
    pub fn mirrored(&self) -> Self {
        Self {
            a: self.a,
            b: -self.b,
            c: -self.c,
            d: self.d,
        }
    }

    fn floats(&self, precision: u32) -> [Float; 4] {
        [self.a, self.b, self.c, self.d].map(|v| Float::with_val(precision, v))
    }

    pub fn a_poly(&self, precision: u32) -> Polynomial {
        Polynomial::linear(self.a, self.b, precision)
    }

    pub fn b_poly(&self, precision: u32) -> Polynomial {
        Polynomial::linear(self.c, self.d, precision)
    }

    pub fn derived_polys(&self, precision: u32) -> DerivedPolys {
        let [a, b, c, d] = self.floats(precision);
        let p = precision;
        let delta = Polynomial::new(
            vec![
                Float::with_val(p, b.square_ref()) + Float::with_val(p, &d * 4u32),
                Float::with_val(p, Float::with_val(p, &a * &b) * 2u32)
                    + Float::with_val(p, &c * 4u32),
                Float::with_val(p, a.square_ref()),
            ],
            p,
        )
        .expect("finite parameters");
        let h = Polynomial::new(vec![Float::with_val(p, -&b), Float::with_val(p, 2 - &a)], p)
            .expect("finite parameters");
        let g = Polynomial::new(
            vec![
                Float::with_val(p, -&d),
                Float::with_val(p, -Float::with_val(p, &b + &c)),
                Float::with_val(p, 1 - &a),
            ],
            p,
        )
        .expect("finite parameters");
        DerivedPolys {
            a: self.a_poly(p),
            b: self.b_poly(p),
            delta,
            h,
            g,
        }
    }

    /// `W_0, …, W_n_max`.
    pub fn sequence(&self, n_max: usize, precision: u32) -> Vec<Polynomial> {
        let mut out = Vec::with_capacity(n_max + 1);
        out.push(Polynomial::constant(1.0, precision));
        if n_max == 0 {
            return out;
        }
        out.push(Polynomial::linear(1.0, 0.0, precision));
        let (pa, pb) = (self.a_poly(precision), self.b_poly(precision));
        for n in 2..=n_max {
            let next = out[n - 1]
                .linear_combine(&pa, &out[n - 2], &pb)
                .expect("A and B are linear");
            out.push(next);
        }
        out
    }

    /// `W_n` alone.
    pub fn polynomial(&self, n: usize, precision: u32) -> Polynomial {
        let mut seq = self.sequence(n, precision);
        seq.pop().expect("sequence holds W_0")
    }

    /// `W_n(z)` from the closed form `α₊λ₊ⁿ + α₋λ₋ⁿ`, falling back to
    /// `((A + nh)/2)(A/2)^{n−1}` when `Δ(z)` vanishes to working precision.
    pub fn closed_form(&self, n: u32, z: &ComplexScalar) -> ComplexScalar {
        let p = z.prec();
        let [a, b, c, d] = self.floats(p);
        let av = z.scale(&a).add_real(&b);
        let bv = z.scale(&c).add_real(&d);
        let delta = &(&av * &av) + &bv.scale(&Float::with_val(p, 4));
        let h = &z.scale(&Float::with_val(p, 2)) - &av;
        let half = Float::with_val(p, 0.5);

        let a_abs2 = av.norm_sqr();
        let threshold =
            Float::with_val(p, Float::i_exp(1, -(p as i32) / 2)) * Float::with_val(p, 1 + a_abs2);
        if delta.abs() < threshold {
            if n == 0 {
                return ComplexScalar::one(p);
            }
            let lead = (&av + &h.scale(&Float::with_val(p, n))).scale(&half);
            return &lead * &av.scale(&half).powu(n - 1);
        }
        let s = principal_sqrt(&delta);
        let lambda_plus = (&av + &s).scale(&half);
        let lambda_minus = (&av - &s).scale(&half);
        let two_s = s.scale(&Float::with_val(p, 2));
        let alpha_plus = (&s + &h).div(&two_s);
        let alpha_minus = (&s - &h).div(&two_s);
        &(&alpha_plus * &lambda_plus.powu(n)) + &(&alpha_minus * &lambda_minus.powu(n))
    }

    /// `W_0(x), …, W_n_max(x)` at a real point using two running scalars.
    pub fn eval_scalar(&self, n_max: usize, x: &Float) -> Vec<ScalarValue> {
        let p = x.prec();
        let [a, b, c, d] = self.floats(p);
        let av = Float::with_val(p, &a * x) + &b;
        let bv = Float::with_val(p, &c * x) + &d;
        let (aa, ba) = (av.clone().abs(), bv.clone().abs());
        let mut out = Vec::with_capacity(n_max + 1);
        out.push(ScalarValue {
            value: Float::with_val(p, 1),
            scale: Float::with_val(p, 1),
        });
        if n_max >= 1 {
            out.push(ScalarValue {
                value: x.clone(),
                scale: x.clone().abs(),
            });
        }
        for n in 2..=n_max {
            let value = Float::with_val(p, &av * &out[n - 1].value)
                + Float::with_val(p, &bv * &out[n - 2].value);
            let scale = Float::with_val(p, &aa * &out[n - 1].scale)
                + Float::with_val(p, &ba * &out[n - 2].scale);
            out.push(ScalarValue { value, scale });
        }
        out
    }

    /// `(W_n(z), W_n'(z))` in double precision, straight from the recurrence.
    pub fn eval_f64_with_derivative(&self, n: usize, z: Complex64) -> (Complex64, Complex64) {
        let av = z * self.a + self.b;
        let bv = z * self.c + self.d;
        let (mut w0, mut w1) = (Complex64::new(1.0, 0.0), z);
        let (mut d0, mut d1) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        if n == 0 {
            return (w0, d0);
        }
        for _ in 2..=n {
            let w2 = av * w1 + bv * w0;
            let d2 = av * d1 + w1 * self.a + bv * d0 + w0 * self.c;
            (w0, w1, d0, d1) = (w1, w2, d1, d2);
        }
        (w1, d1)
    }

    pub fn critical_scalars(&self, precision: u32) -> Result<CriticalScalars> {
        let p = precision;
        let [a, b, c, d] = self.floats(p);
        let f = |v: Float| Float::with_val(p, v);

        let x_a = f(-Float::with_val(p, &b / &a));
        let x_b = f(-Float::with_val(p, &d / &c));
        let ad_bc = f(Float::with_val(p, &a * &d) - Float::with_val(p, &b * &c));
        let b_at_xa = f(Float::with_val(p, &ad_bc / &a));
        // c² + abc − a²d, i.e. c² − a²B(x_A) without the division by a
        let delta_delta = f(
            Float::with_val(p, c.square_ref()) + Float::with_val(p, &a * &b) * &c
                - Float::with_val(p, a.square_ref()) * &d,
        );

        let a2 = f(Float::with_val(p, a.square_ref()));
        let shift = f(Float::with_val(
            p,
            &x_a - Float::with_val(p, &c * 2u32) / &a2,
        ));
        let (x_delta_minus, x_delta_plus) =
            if delta_delta.is_sign_negative() && !delta_delta.is_zero() {
                let spread = f(Float::with_val(p, -&delta_delta).sqrt() * 2u32 / &a2);
                (
                    ComplexScalar::new(shift.clone(), f(-spread.clone())),
                    ComplexScalar::new(shift, spread),
                )
            } else {
                let spread = f(delta_delta.clone().sqrt() * 2u32 / &a2);
                (
                    ComplexScalar::from_real(&f(Float::with_val(p, &shift - &spread))),
                    ComplexScalar::from_real(&f(Float::with_val(p, &shift + &spread))),
                )
            };

        let b_plus_c = f(Float::with_val(p, &b + &c));
        let one_minus_a = f(1 - a.clone());
        let delta_g = f(Float::with_val(p, b_plus_c.square_ref())
            + Float::with_val(p, &d * 4u32) * &one_minus_a);
        let a_minus_2 = f(a.clone() - 2u32);
        let f_expanded = f(
            Float::with_val(p, &d * Float::with_val(p, a_minus_2.square_ref()))
                - Float::with_val(p, &b * &c) * &a_minus_2
                + Float::with_val(p, b.square_ref()),
        );
        let f_difference = f(Float::with_val(p, &delta_g - &delta_delta));
        let gap = f(Float::with_val(p, &f_expanded - &f_difference).abs());
        let scale = f(delta_g.clone().abs()).max(&f(delta_delta.clone().abs()));
        if gap > Float::with_val(p, &scale * F_CROSS_CHECK) && gap > Float::with_val(p, 1e-300) {
            return Err(Error::PrecisionLoss(format!(
                "F = Δ_g − Δ_Δ and its expanded form differ by {:e}",
                gap.to_f64()
            )));
        }

        let (x_g_minus, x_g_plus) = if self.a != 1.0 {
            if delta_g.is_sign_negative() && !delta_g.is_zero() {
                (None, None)
            } else {
                let center = f(Float::with_val(p, &b_plus_c / &one_minus_a) / 2u32);
                let half =
                    f(delta_g.clone().sqrt() / Float::with_val(p, one_minus_a.abs_ref()) / 2u32);
                (
                    Some(f(Float::with_val(p, &center - &half))),
                    Some(f(Float::with_val(p, &center + &half))),
                )
            }
        } else if self.b + self.c != 0.0 {
            let root = f(-Float::with_val(p, &d / &b_plus_c));
            (Some(root.clone()), Some(root))
        } else {
            (None, None)
        };

        let x_h = (self.a != 2.0).then(|| f(Float::with_val(p, &b / Float::with_val(p, 2 - &a))));

        let f_val = &f_expanded;
        let uv_case = if (self.a == 1.0 && self.b + self.c == 0.0)
            || (self.a < 2.0 && (f_val.is_sign_negative() || f_val.is_zero()))
        {
            UvCase::DeltaZeros
        } else if self.a > 2.0 && f_val.is_sign_negative() && !f_val.is_zero() {
            UvCase::GZeros
        } else if self.a < 1.0 && f_val.is_sign_positive() && !f_val.is_zero() {
            UvCase::GPlusDeltaPlus
        } else {
            UvCase::GMinusDeltaPlus
        };
        let delta_real = !delta_delta.is_sign_negative() || delta_delta.is_zero();
        let dm = delta_real.then(|| x_delta_minus.re.clone());
        let dp = delta_real.then(|| x_delta_plus.re.clone());
        let (u, v) = match uv_case {
            UvCase::DeltaZeros => (dm, dp),
            UvCase::GZeros => (x_g_minus.clone(), x_g_plus.clone()),
            UvCase::GPlusDeltaPlus => (x_g_plus.clone(), dp),
            UvCase::GMinusDeltaPlus => (x_g_minus.clone(), dp),
        };
        let (u, v) = match (u, v) {
            (Some(u), Some(v)) => (Some(u), Some(v)),
            _ => (None, None),
        };

        Ok(CriticalScalars {
            precision,
            x_a,
            x_b,
            b_at_xa,
            delta_delta,
            x_delta_minus,
            x_delta_plus,
            delta_g,
            f: f_expanded,
            x_g_minus,
            x_g_plus,
            x_h,
            uv_case,
            u,
            v,
        })
    }

    /// `U_0, …, U_n_max` with `U_n = W_n / A^⌊n/2⌋`, valid when `x_A = x_B`.
    ///
    /// Built from the alternating recurrence with `c' = c/a` and checked
    /// against direct division of `W_n`.
    pub fn normalized_sequence(&self, n_max: usize, precision: u32) -> Result<Vec<Polynomial>> {
        if !self.xa_equals_xb() {
            return Err(Error::Precondition(format!(
                "requires x_A = x_B (x_A = {}, x_B = {})",
                self.x_a(),
                self.x_b()
            )));
        }
        let p = precision;
        let c_prime = Float::with_val(p, Float::with_val(p, self.c) / Float::with_val(p, self.a));
        let l_const = Polynomial::new(vec![c_prime], p)?;
        let one = Polynomial::constant(1.0, p);
        let pa = self.a_poly(p);

        let mut out = Vec::with_capacity(n_max + 1);
        out.push(one.clone());
        if n_max >= 1 {
            out.push(Polynomial::linear(1.0, 0.0, p));
        }
        for n in 2..=n_max {
            let lead = if n % 2 == 0 { &one } else { &pa };
            let next = out[n - 1].linear_combine(lead, &out[n - 2], &l_const)?;
            out.push(next);
        }

        let raw = self.sequence(n_max, p);
        let mut power = one;
        for (n, (u_n, w_n)) in out.iter().zip(&raw).enumerate() {
            if n >= 2 && n % 2 == 0 {
                power = power.mul(&pa);
            }
            let division = w_n.divide_exact(&power)?;
            let mismatch = division.quotient.relative_distance(u_n);
            if division.relative_remainder > NORMALIZED_CROSS_CHECK
                || mismatch > NORMALIZED_CROSS_CHECK
            {
                return Err(Error::PrecisionLoss(format!(
                    "U_{n} disagrees with W_{n}/A^{}: remainder {:e}, quotient mismatch {:e}",
                    n / 2,
                    division.relative_remainder,
                    mismatch
                )));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for RecurrenceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}
