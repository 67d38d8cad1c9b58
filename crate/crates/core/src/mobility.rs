//! UAV mobility: the DMS (Rayleigh speeds) and SMS (common speed) models,
//! the equivalent velocity of a serving triple, and its distributions.

use alloc::vec::Vec;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::geometry::Point;
use crate::math::{atan2, cos, erf, exp, lgamma, ln, sin, sq, sqrt, wrap_angle, PI, TAU};
use crate::special::gamma_p;
use crate::{Error, Result};

/// Speed law of the individual UAVs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpeedLaw {
    /// Independent Rayleigh speeds with scale `sigma` (m/s); mean speed
    /// `sigma * sqrt(pi / 2)`.
    Dms { sigma: f64 },
    /// Every UAV flies at `v0` (m/s).
    Sms { v0: f64 },
}

/// A mobility model: speed law plus the time between direction changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityModel {
    pub kind: SpeedLaw,
    pub waypoint_interval: f64,
}

/// Speed and heading of a mover. Headings are kept in `[-pi, pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Velocity {
    pub speed: f64,
    pub direction: f64,
}

/// Velocity of the virtual mover that stands for a whole serving triple.
pub type EquivalentVelocity = Velocity;

impl Velocity {
    pub fn new(speed: f64, direction: f64) -> Self {
        Velocity {
            speed,
            direction: wrap_angle(direction),
        }
    }

    /// Displacement after `t` seconds.
    pub fn displacement(&self, t: f64) -> Point {
        Point::polar(self.speed * t, self.direction)
    }
}

impl MobilityModel {
    pub fn dms(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidArgument("sigma must be positive"));
        }
        Ok(MobilityModel {
            kind: SpeedLaw::Dms { sigma },
            waypoint_interval: f64::INFINITY,
        })
    }

    pub fn sms(v0: f64) -> Result<Self> {
        if !(v0 > 0.0) || !v0.is_finite() {
            return Err(Error::InvalidArgument("v0 must be positive"));
        }
        Ok(MobilityModel {
            kind: SpeedLaw::Sms { v0 },
            waypoint_interval: f64::INFINITY,
        })
    }

    pub fn with_waypoint_interval(mut self, interval: f64) -> Result<Self> {
        if !(interval > 0.0) {
            return Err(Error::InvalidArgument("waypoint interval must be positive"));
        }
        self.waypoint_interval = interval;
        Ok(self)
    }

    pub fn mean_speed(&self) -> f64 {
        match self.kind {
            SpeedLaw::Dms { sigma } => sigma * sqrt(PI / 2.0),
            SpeedLaw::Sms { v0 } => v0,
        }
    }

    pub fn moments(&self) -> SpeedMoments {
        match self.kind {
            SpeedLaw::Dms { sigma } => SpeedMoments::rayleigh(sigma),
            SpeedLaw::Sms { v0 } => SpeedMoments::constant(v0),
        }
    }

    /// Speed exceeded with probability `tail` at most.
    pub fn speed_quantile(&self, tail: f64) -> f64 {
        match self.kind {
            SpeedLaw::Dms { sigma } => sigma * sqrt(-2.0 * ln(tail)),
            SpeedLaw::Sms { v0 } => v0,
        }
    }

    pub fn sample_speed<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            SpeedLaw::Dms { sigma } => {
                let e: f64 = Exp1.sample(rng);
                sigma * sqrt(2.0 * e)
            }
            SpeedLaw::Sms { v0 } => v0,
        }
    }

    /// Fresh velocity with a uniform heading.
    pub fn sample_velocity<R: Rng + ?Sized>(&self, rng: &mut R) -> Velocity {
        let speed = self.sample_speed(rng);
        let direction = sample_direction(rng);
        Velocity { speed, direction }
    }
}

/// Uniform heading in `[-pi, pi)`.
pub fn sample_direction<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen();
    wrap_angle(TAU * u - PI)
}

/// Piecewise-linear trajectory; `legs[i]` is the velocity between
/// `times[i]` and `times[i + 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub times: Vec<f64>,
    pub points: Vec<Point>,
    pub legs: Vec<Velocity>,
}

impl Trace {
    pub fn duration(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    /// Position at time `t`, clamped to the trace's time span.
    pub fn position_at(&self, t: f64) -> Point {
        let t = t.clamp(0.0, self.duration());
        let i = match self.times.iter().rposition(|&s| s <= t) {
            Some(i) if i < self.legs.len() => i,
            _ => return *self.points.last().expect("trace is never empty"),
        };
        self.points[i] + self.legs[i].displacement(t - self.times[i])
    }
}

/// Samples a trajectory starting at `start`: at every waypoint a new uniform
/// heading (and, for DMS, a new Rayleigh speed) is drawn.
pub fn sample_trace<R: Rng + ?Sized>(
    start: Point,
    model: &MobilityModel,
    duration: f64,
    rng: &mut R,
) -> Result<Trace> {
    if !(duration >= 0.0) || !duration.is_finite() {
        return Err(Error::InvalidArgument("duration must be finite and non-negative"));
    }
    let mut trace = Trace {
        times: alloc::vec![0.0],
        points: alloc::vec![start],
        legs: Vec::new(),
    };
    let mut t = 0.0;
    let mut p = start;
    while t < duration {
        let leg = model.sample_velocity(rng);
        let dt = model.waypoint_interval.min(duration - t);
        p = p + leg.displacement(dt);
        t += dt;
        trace.legs.push(leg);
        trace.times.push(t);
        trace.points.push(p);
    }
    Ok(trace)
}

/// Vector sum of the members' velocities.
pub fn equivalent_velocity(members: &[Velocity]) -> EquivalentVelocity {
    let (mut sx, mut sy) = (0.0, 0.0);
    for v in members {
        sx += v.speed * cos(v.direction);
        sy += v.speed * sin(v.direction);
    }
    let total: f64 = members.iter().map(|v| v.speed.abs()).sum();
    let speed = sqrt(sq(sx) + sq(sy));
    if speed <= 1e-14 * total {
        return Velocity::default();
    }
    Velocity::new(speed, atan2(sy, sx))
}

/// Second and fourth raw moments of the individual speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedMoments {
    pub m2: f64,
    pub m4: f64,
}

impl SpeedMoments {
    pub fn new(m2: f64, m4: f64) -> Result<Self> {
        if !(m2 > 0.0) || !(m4 >= m2 * m2) {
            return Err(Error::InvalidArgument("speed moments need m2 > 0 and m4 >= m2^2"));
        }
        Ok(SpeedMoments { m2, m4 })
    }

    pub fn rayleigh(sigma: f64) -> Self {
        let s2 = sigma * sigma;
        SpeedMoments {
            m2: 2.0 * s2,
            m4: 8.0 * s2 * s2,
        }
    }

    pub fn constant(v: f64) -> Self {
        let v2 = v * v;
        SpeedMoments { m2: v2, m4: v2 * v2 }
    }

    /// Shape `a` and scale `b` of the Gamma law fitted to the squared
    /// equivalent speed.
    pub fn equivalent_params(&self) -> (f64, f64) {
        let s = self.m4 + self.m2 * self.m2;
        (3.0 * self.m2 * self.m2 / s, s / self.m2)
    }
}

/// Density of the DMS equivalent speed: `v*^2` is Gamma with shape `a` and
/// scale `b` fitted from the speed moments.
pub fn pdf_equiv_speed_dms(x: f64, moments: &SpeedMoments) -> Result<f64> {
    let m = SpeedMoments::new(moments.m2, moments.m4)?;
    if !(x >= 0.0) {
        return Err(Error::InvalidArgument("speed must be non-negative"));
    }
    Ok(EquivalentSpeed::from_moments(&m).pdf(x))
}

/// Density of the SMS equivalent speed on `[0, 3 v0]` (not renormalized).
pub fn pdf_equiv_speed_sms(x: f64, v0: f64) -> Result<f64> {
    if !(v0 > 0.0) {
        return Err(Error::InvalidArgument("v0 must be positive"));
    }
    Ok(EquivalentSpeed::Maxwell { v0, renormalize: false }.pdf(x))
}

/// Density of the equivalent heading, uniform on `[-pi, pi)`.
pub fn equivalent_direction_pdf() -> f64 {
    1.0 / TAU
}

/// Distribution of an equivalent speed as used by the analytic bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EquivalentSpeed {
    /// `x^2 ~ Gamma(shape a, scale b)`.
    SquaredGamma { a: f64, b: f64 },
    /// Maxwell density with scale `v0` cut to `[0, 3 v0]`, optionally
    /// rescaled to unit mass.
    Maxwell { v0: f64, renormalize: bool },
    /// Every mover has speed `v`.
    Constant { v: f64 },
}

impl EquivalentSpeed {
    pub fn from_moments(m: &SpeedMoments) -> Self {
        let (a, b) = m.equivalent_params();
        EquivalentSpeed::SquaredGamma { a, b }
    }

    /// Equivalent speed of a DMS triple with Rayleigh(`sigma`) members:
    /// Rayleigh with scale `sqrt(3) sigma`.
    pub fn dms_rayleigh(sigma: f64) -> Self {
        Self::from_moments(&SpeedMoments::rayleigh(sigma))
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            EquivalentSpeed::SquaredGamma { a, b } => {
                if x < 0.0 {
                    return 0.0;
                }
                if x == 0.0 {
                    return if a < 0.5 { f64::INFINITY } else if a == 0.5 { 2.0 / sqrt(PI * b) } else { 0.0 };
                }
                2.0 * exp((2.0 * a - 1.0) * ln(x) - x * x / b - lgamma(a) - a * ln(b))
            }
            EquivalentSpeed::Maxwell { v0, renormalize } => {
                if !(0.0..=3.0 * v0).contains(&x) {
                    return 0.0;
                }
                let f = sqrt(2.0 / PI) * x * x / (v0 * v0 * v0) * exp(-x * x / (2.0 * v0 * v0));
                if renormalize {
                    f / maxwell_cdf(3.0, 1.0)
                } else {
                    f
                }
            }
            EquivalentSpeed::Constant { .. } => 0.0,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            EquivalentSpeed::SquaredGamma { a, b } => {
                if x <= 0.0 {
                    0.0
                } else {
                    gamma_p(a, x * x / b)
                }
            }
            EquivalentSpeed::Maxwell { v0, renormalize } => {
                let c = maxwell_cdf(x.clamp(0.0, 3.0 * v0), v0);
                if renormalize {
                    c / maxwell_cdf(3.0, 1.0)
                } else {
                    c
                }
            }
            EquivalentSpeed::Constant { v } => {
                if x >= v {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Total probability mass (below one for the unnormalized Maxwell cut).
    pub fn mass(&self) -> f64 {
        match *self {
            EquivalentSpeed::Maxwell { renormalize: false, .. } => maxwell_cdf(3.0, 1.0),
            _ => 1.0,
        }
    }

    /// Upper end of the integration range: the support end, or the point
    /// with tail probability `tail`.
    pub fn upper(&self, tail: f64) -> f64 {
        match *self {
            EquivalentSpeed::Maxwell { v0, .. } => 3.0 * v0,
            EquivalentSpeed::Constant { v } => v,
            EquivalentSpeed::SquaredGamma { a, b } => {
                let target = 1.0 - tail;
                let mut hi = sqrt(a * b).max(1e-12);
                while gamma_p(a, hi * hi / b) < target {
                    hi *= 2.0;
                }
                let mut lo = 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if gamma_p(a, mid * mid / b) < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= 1e-12 * hi {
                        break;
                    }
                }
                hi
            }
        }
    }
}

/// Maxwell CDF with scale `v0`.
fn maxwell_cdf(x: f64, v0: f64) -> f64 {
    let u = x / v0;
    erf(u / sqrt(2.0)) - sqrt(2.0 / PI) * u * exp(-u * u / 2.0)
}
