//! The set on which the zeros of `W_n` accumulate: a non-isolated part (arc,
//! circle, lollipop or interval) plus at most two isolated points.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::recurrence::{CriticalScalars, RecurrenceParams};
use crate::scalar::ANALYSIS_PRECISION;

/// Relative width of the band in which `Δ_Δ` counts as zero.
pub const CIRCLE_TOLERANCE: f64 = 1e-12;

/// Relative width of the band in which `Re(A h̄)` counts as zero.
pub const ISOLATED_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Arc,
    Circle,
    Lollipop,
    Interval,
}

impl LimitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LimitKind::Arc => "arc",
            LimitKind::Circle => "circle",
            LimitKind::Lollipop => "lollipop",
            LimitKind::Interval => "interval",
        }
    }
}

/// Arc of the circle `C_0` between `x_Δ⁻` and `x_Δ⁺` that passes through
/// `x_A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcGeometry {
    pub endpoints: [Complex64; 2],
    pub through: f64,
    /// Angle of `x_A` about the centre, `0` or `π`.
    pub through_angle: f64,
    /// Half the angular extent of the arc.
    pub half_span: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateStatus {
    Included,
    Excluded,
    /// `Re(A h̄)` within tolerance of zero; excluded.
    Boundary,
}

impl CandidateStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CandidateStatus::Included => "included",
            CandidateStatus::Excluded => "excluded",
            CandidateStatus::Boundary => "boundary",
        }
    }
}

/// A zero of `g` together with the sign test that decides membership in the
/// isolated set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsolatedCandidate {
    pub point: Complex64,
    /// `Re(A(z) conj(h(z)))`.
    pub margin: f64,
    pub status: CandidateStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitSet {
    pub kind: LimitKind,
    pub circle_center: f64,
    pub circle_radius: f64,
    pub arc: Option<ArcGeometry>,
    /// `J_Δ`, for the interval and lollipop kinds.
    pub interval: Option<(f64, f64)>,
    pub isolated: Vec<Complex64>,
    pub candidates: Vec<IsolatedCandidate>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Junction {
    pub point: f64,
    pub inside_len: f64,
    pub outside_len: f64,
}

/// Kind predicate on `Δ_Δ` and `B(x_A)`.
pub fn kind_of(a: f64, c: f64, delta_delta: f64, b_at_xa: f64) -> LimitKind {
    let scale = c * c + a * a * b_at_xa.abs();
    if delta_delta.abs() <= CIRCLE_TOLERANCE * scale {
        LimitKind::Circle
    } else if delta_delta < 0.0 {
        LimitKind::Arc
    } else if b_at_xa > 0.0 {
        LimitKind::Lollipop
    } else {
        LimitKind::Interval
    }
}

fn wrap_angle(t: f64) -> f64 {
    let r = (t + PI).rem_euclid(2.0 * PI) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

pub fn classify(params: &RecurrenceParams) -> Result<LimitSet> {
    let cs = params.critical_scalars(ANALYSIS_PRECISION)?;
    Ok(classify_with(params, &cs))
}

pub fn classify_with(params: &RecurrenceParams, cs: &CriticalScalars) -> LimitSet {
    let (a, c) = (params.a(), params.c());
    let dd = cs.delta_delta.to_f64();
    let bxa = cs.b_at_xa.to_f64();
    let kind = kind_of(a, c, dd, bxa);
    let x_a = cs.x_a.to_f64();
    let center = cs.x_b.to_f64();
    let radius = cs.x_a.clone() - &cs.x_b;
    let radius = radius.abs().to_f64();

    let arc = (kind == LimitKind::Arc).then(|| {
        let through_angle = if x_a >= center { 0.0 } else { PI };
        let upper = cs.x_delta_plus.to_c64();
        let phi = (upper - center).arg();
        ArcGeometry {
            endpoints: [cs.x_delta_minus.to_c64(), upper],
            through: x_a,
            through_angle,
            half_span: wrap_angle(phi - through_angle).abs(),
        }
    });
    let interval = matches!(kind, LimitKind::Interval | LimitKind::Lollipop)
        .then(|| (cs.x_delta_minus.re.to_f64(), cs.x_delta_plus.re.to_f64()));

    let candidates = isolated_candidates_with(params, cs);
    let isolated = candidates
        .iter()
        .filter(|c| c.status == CandidateStatus::Included)
        .map(|c| c.point)
        .collect();
    LimitSet {
        kind,
        circle_center: center,
        circle_radius: radius,
        arc,
        interval,
        isolated,
        candidates,
    }
}

/// Zeros of `g` with their membership test. Empty when `g` has no zeros.
pub fn isolated_candidates(params: &RecurrenceParams) -> Result<Vec<IsolatedCandidate>> {
    let cs = params.critical_scalars(ANALYSIS_PRECISION)?;
    Ok(isolated_candidates_with(params, &cs))
}

fn isolated_candidates_with(
    params: &RecurrenceParams,
    cs: &CriticalScalars,
) -> Vec<IsolatedCandidate> {
    let (a, b, c, d) = (params.a(), params.b(), params.c(), params.d());
    let mut zeros: Vec<Complex64> = Vec::with_capacity(2);
    if a != 1.0 {
        match (&cs.x_g_minus, &cs.x_g_plus) {
            (Some(lo), Some(hi)) => {
                zeros.push(Complex64::new(lo.to_f64(), 0.0));
                zeros.push(Complex64::new(hi.to_f64(), 0.0));
            }
            _ => {
                let re = (b + c) / (2.0 * (1.0 - a));
                let im = (-cs.delta_g.to_f64()).sqrt() / (2.0 * (1.0 - a).abs());
                zeros.push(Complex64::new(re, -im));
                zeros.push(Complex64::new(re, im));
            }
        }
    } else if b + c != 0.0 {
        zeros.push(Complex64::new(-d / (b + c), 0.0));
    }
    zeros.dedup();

    zeros
        .into_iter()
        .map(|z| {
            let av = z * a + b;
            let hv = z * (2.0 - a) - b;
            let margin = (av * hv.conj()).re;
            let tol = ISOLATED_TOLERANCE * (1.0 + av.norm() * hv.norm());
            let status = if margin < -tol {
                CandidateStatus::Included
            } else if margin.abs() <= tol {
                CandidateStatus::Boundary
            } else {
                CandidateStatus::Excluded
            };
            IsolatedCandidate {
                point: z,
                margin,
                status,
            }
        })
        .collect()
}

/// The isolated limits of zeros.
pub fn isolated_limits(params: &RecurrenceParams) -> Result<Vec<Complex64>> {
    Ok(classify(params)?.isolated)
}

impl LimitSet {
    /// Distance from `z` to the non-isolated part.
    pub fn distance_to_continuum(&self, z: Complex64) -> f64 {
        let to_circle = || ((z - self.circle_center).norm() - self.circle_radius).abs();
        let to_interval = |(lo, hi): (f64, f64)| {
            let dx = (lo - z.re).max(0.0).max(z.re - hi);
            dx.hypot(z.im)
        };
        match self.kind {
            LimitKind::Circle => to_circle(),
            LimitKind::Interval => to_interval(self.interval.expect("interval kind")),
            LimitKind::Lollipop => {
                to_circle().min(to_interval(self.interval.expect("lollipop kind")))
            }
            LimitKind::Arc => {
                let arc = self.arc.expect("arc kind");
                let offset = z - self.circle_center;
                if offset.norm() == 0.0 {
                    return self.circle_radius;
                }
                let delta = wrap_angle(offset.arg() - arc.through_angle);
                if delta.abs() <= arc.half_span {
                    (offset.norm() - self.circle_radius).abs()
                } else {
                    arc.endpoints
                        .iter()
                        .map(|e| (z - e).norm())
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    /// Distance from `z` to the whole limit set.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        self.isolated
            .iter()
            .map(|p| (z - p).norm())
            .fold(self.distance_to_continuum(z), f64::min)
    }

    /// `(x_min, x_max, y_min, y_max)` of the limit set.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        let (c, r) = (self.circle_center, self.circle_radius);
        let mut b = match self.kind {
            LimitKind::Circle => (c - r, c + r, -r, r),
            LimitKind::Interval => {
                let (lo, hi) = self.interval.expect("interval kind");
                (lo, hi, 0.0, 0.0)
            }
            LimitKind::Lollipop => {
                let (lo, hi) = self.interval.expect("lollipop kind");
                (lo.min(c - r), hi.max(c + r), -r, r)
            }
            LimitKind::Arc => {
                let arc = self.arc.expect("arc kind");
                let mut b = (arc.through, arc.through, 0.0f64, 0.0f64);
                // Extreme points of the circle that the arc passes through.
                for (angle, p) in [
                    (0.0, Complex64::new(c + r, 0.0)),
                    (PI / 2.0, Complex64::new(c, r)),
                    (PI, Complex64::new(c - r, 0.0)),
                    (-PI / 2.0, Complex64::new(c, -r)),
                ]
                .into_iter()
                .chain(arc.endpoints.map(|e| ((e - c).arg(), e)))
                {
                    if wrap_angle(angle - arc.through_angle).abs() <= arc.half_span + 1e-15 {
                        b = (b.0.min(p.re), b.1.max(p.re), b.2.min(p.im), b.3.max(p.im));
                    }
                }
                b
            }
        };
        for p in &self.isolated {
            b = (b.0.min(p.re), b.1.max(p.re), b.2.min(p.im), b.3.max(p.im));
        }
        b
    }
}

/// The single point where `J_Δ` meets `C_0`, and the lengths of `J_Δ` inside
/// and outside the disk bounded by `C_0`.
pub fn lollipop_junction(params: &RecurrenceParams) -> Result<Junction> {
    let ls = classify(params)?;
    if ls.kind != LimitKind::Lollipop {
        return Err(Error::Precondition(
            "lollipop junction requires Δ_Δ > 0 and B(x_A) > 0".into(),
        ));
    }
    let (lo, hi) = ls.interval.expect("lollipop kind");
    let (c, r) = (ls.circle_center, ls.circle_radius);
    let outside_by = |x: f64| (lo - x).max(x - hi).max(0.0);
    let (left, right) = (c - r, c + r);
    let point = if outside_by(left) <= outside_by(right) {
        left
    } else {
        right
    };
    let inside_len = (hi.min(right) - lo.max(left)).max(0.0);
    Ok(Junction {
        point,
        inside_len,
        outside_len: (hi - lo) - inside_len,
    })
}
