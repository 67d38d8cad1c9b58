//! Handoff probability bounds for the equivalent serving UAV.
//!
//! A handoff is avoided only if no other equivalent UAV (density `2 lambda0`)
//! lies in the part of the disk of radius `R` (the serving UAV's distance
//! after the move) that was not already known to be empty. Every function
//! below integrates the void probability of that region.

use crate::geometry::lens_area;
use crate::math::{cos, exp, ln, sin, sq, sqrt, PI};
use crate::mobility::{EquivalentSpeed, MobilityModel, SpeedLaw};
use crate::{Error, Result};

use super::quadrature::{integrate, integrate_pieces, QuadratureSpec};
use super::{acos_guarded, asin_guarded, clip_probability};

/// Inputs shared by the handoff bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HandoffScenario {
    /// UAV intensity, per m^2.
    pub lambda0: f64,
    /// Length of the motion leg, s.
    pub t: f64,
    pub model: MobilityModel,
    /// Probability that a handoff breaks the connection.
    pub zeta: f64,
}

impl HandoffScenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda0 > 0.0) || !self.lambda0.is_finite() {
            return Err(Error::InvalidArgument("lambda0 must be positive"));
        }
        if !(self.t >= 0.0) || !self.t.is_finite() {
            return Err(Error::InvalidArgument("t must be finite and non-negative"));
        }
        if !(0.0..=1.0).contains(&self.zeta) {
            return Err(Error::InvalidArgument("zeta must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// How the area swept by interferers is integrated in the DMS bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweptArea {
    /// Expected overlap of the search disk with the displaced exclusion
    /// disk, averaged over the displacement length.
    #[default]
    LensExpectation,
    /// Radial integral of the inhomogeneous interferer intensity.
    Pointwise,
}

/// Numerical options of the handoff bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HandoffOptions {
    pub quad: QuadratureSpec,
    /// Rescale the SMS equivalent-speed density on `[0, 3 v0]` to unit mass.
    pub sms_renormalize: bool,
    pub swept_area: SweptArea,
    /// The serving-distance integral stops where `exp(-2 lambda0 pi r^2)`
    /// falls below this value.
    pub envelope_floor: f64,
}

impl Default for HandoffOptions {
    fn default() -> Self {
        HandoffOptions {
            quad: QuadratureSpec::default(),
            sms_renormalize: false,
            swept_area: SweptArea::LensExpectation,
            envelope_floor: 1e-12,
        }
    }
}

/// Radius beyond which `exp(-density * pi * r^2)` is below `floor`.
pub fn truncation_radius(density: f64, floor: f64) -> f64 {
    sqrt(-ln(floor) / (PI * density))
}

/// Intensity, at distance `r` from the user and time `t`, of the UAVs that
/// started outside the exclusion disk of radius `r_star`, when every UAV is
/// displaced by an independent speed with law `speed` in a uniform direction.
pub fn interferer_intensity_dms(
    t: f64,
    r: f64,
    r_star: f64,
    speed: &EquivalentSpeed,
    lambda0: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if !(t >= 0.0) || !(r >= 0.0) || !(r_star >= 0.0) {
        return Err(Error::InvalidArgument("t, r and r_star must be non-negative"));
    }
    if t == 0.0 {
        return Ok(if r > r_star { lambda0 } else { 0.0 });
    }
    let inside = speed.cdf((r_star - r) / t);
    if let EquivalentSpeed::Constant { v } = *speed {
        let s = v * t;
        let part = if s > (r_star - r).abs() && s < r_star + r {
            acos_guarded((r * r + s * s - r_star * r_star) / (2.0 * r * s)) / PI
        } else {
            0.0
        };
        return Ok(lambda0 * (1.0 - inside - part));
    }
    let lo = (r_star - r).abs() / t;
    let hi = ((r_star + r) / t).min(speed.upper(quad.truncation_quantile));
    let mut sum = 0.0;
    if r > 0.0 && hi > lo {
        sum = integrate(
            |x| {
                let arg = (r * r + x * x * t * t - r_star * r_star) / (2.0 * r * x * t);
                Ok(speed.pdf(x) * acos_guarded(arg))
            },
            lo,
            hi,
            quad,
        )?;
    }
    Ok(lambda0 - lambda0 * inside - lambda0 / PI * sum)
}

/// Area of the part of the disk of radius `radius` (centred on the user) not
/// covered by the exclusion disk of radius `r_star` after that disk's points
/// moved for time `t`, averaged over the displacement law.
fn swept_area_lens(
    r_star: f64,
    radius: f64,
    t: f64,
    speed: &EquivalentSpeed,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let full = PI * radius * radius;
    if let EquivalentSpeed::Constant { v } = *speed {
        return Ok(full - lens_area(r_star, radius, v * t));
    }
    let upper = speed.upper(quad.truncation_quantile);
    let y1 = ((radius - r_star).abs() / t).min(upper);
    let y2 = ((radius + r_star) / t).min(upper);
    let contained = PI * sq(r_star.min(radius));
    // below y1 the displaced disk is nested; above y2 the disks are apart
    let mut overlap = contained * speed.cdf(y1);
    if y2 > y1 {
        // y = mid - half cos(u) smooths the square-root edges of the lens
        let (mid, half) = (0.5 * (y1 + y2), 0.5 * (y2 - y1));
        overlap += integrate(
            |u| {
                let y = mid - half * cos(u);
                Ok(half * sin(u) * speed.pdf(y) * lens_area(r_star, radius, y * t))
            },
            0.0,
            PI,
            quad,
        )?;
    }
    Ok(full - overlap)
}

/// Same area as [`swept_area_lens`], from the radial interferer intensity.
fn swept_area_pointwise(
    r_star: f64,
    radius: f64,
    t: f64,
    speed: &EquivalentSpeed,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let mut points = [0.0, r_star.min(radius), radius];
    points.sort_by(f64::total_cmp);
    integrate_pieces(
        |r| Ok(2.0 * PI * r * interferer_intensity_dms(t, r, r_star, speed, 1.0, quad)?),
        &points,
        quad,
    )
}

/// Lower bound on the handoff probability of a user served by an equivalent
/// UAV whose speed, and that of every other equivalent UAV, has law `speed`.
pub fn handoff_lb_with_speed(
    lambda0: f64,
    t: f64,
    speed: &EquivalentSpeed,
    opts: &HandoffOptions,
) -> Result<f64> {
    if !(lambda0 > 0.0) || !(t >= 0.0) {
        return Err(Error::InvalidArgument("need lambda0 > 0 and t >= 0"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let quad = &opts.quad;
    let density = 2.0 * lambda0;
    let r_max = truncation_radius(density, opts.envelope_floor);
    let swept = |r_star: f64, radius: f64| match opts.swept_area {
        SweptArea::LensExpectation => swept_area_lens(r_star, radius, t, speed, quad),
        SweptArea::Pointwise => swept_area_pointwise(r_star, radius, t, speed, quad),
    };
    let weight = |r_star: f64| 2.0 * PI * density * r_star * exp(-density * PI * r_star * r_star);
    let stay_total = match *speed {
        EquivalentSpeed::Constant { v } => {
            let s = v * t;
            integrate(
                |r_star| {
                    let w = weight(r_star);
                    if w == 0.0 {
                        return Ok(0.0);
                    }
                    let inner = integrate(
                        |theta| {
                            let radius = sqrt((r_star * r_star + s * s + 2.0 * r_star * s * cos(theta)).max(0.0));
                            Ok(exp(-density * swept(r_star, radius)?))
                        },
                        0.0,
                        PI,
                        quad,
                    )?;
                    Ok(w * inner / PI)
                },
                0.0,
                r_max,
                quad,
            )?
        }
        _ => {
            let reach = t * speed.upper(quad.truncation_quantile);
            integrate(
                |r_star| {
                    let w = weight(r_star);
                    if w == 0.0 {
                        return Ok(0.0);
                    }
                    let mut points = [(r_star - reach).max(0.0), r_star, r_star + reach];
                    points.sort_by(f64::total_cmp);
                    let inner = integrate_pieces(
                        |radius| {
                            let k = moved_distance_pdf(radius, r_star, t, speed, quad)?;
                            if k == 0.0 {
                                return Ok(0.0);
                            }
                            Ok(k * exp(-density * swept(r_star, radius)?))
                        },
                        &points,
                        quad,
                    )?;
                    Ok(w * inner)
                },
                0.0,
                r_max,
                quad,
            )?
        }
    };
    Ok(clip_probability(1.0 - stay_total))
}

/// Density at `radius` of the distance from the user to a point that started
/// at distance `r_star` and moved for time `t` with speed law `speed` in a
/// uniform direction.
fn moved_distance_pdf(
    radius: f64,
    r_star: f64,
    t: f64,
    speed: &EquivalentSpeed,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if radius <= 0.0 || r_star <= 0.0 {
        return Ok(0.0);
    }
    let lo = (radius - r_star).abs();
    let hi = radius + r_star;
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    // s = mid - half cos(u) cancels the inverse square roots at both ends
    integrate(
        |u| {
            let s = mid - half * cos(u);
            let d = sqrt((s + lo) * (s + hi));
            if d == 0.0 {
                return Ok(0.0);
            }
            Ok(speed.pdf(s / t) / t * 2.0 * radius / (PI * d))
        },
        0.0,
        PI,
        quad,
    )
}

/// Lower bound on the CoMP handoff probability under DMS mobility, with the
/// equivalent speed law fitted from the Rayleigh speed moments.
pub fn handoff_lb_dms(scn: &HandoffScenario, opts: &HandoffOptions) -> Result<f64> {
    scn.validate()?;
    match scn.model.kind {
        SpeedLaw::Dms { .. } => {}
        SpeedLaw::Sms { .. } => return Err(Error::InvalidArgument("DMS bound needs a DMS model")),
    }
    let speed = EquivalentSpeed::from_moments(&scn.model.moments());
    handoff_lb_with_speed(scn.lambda0, scn.t, &speed, opts)
}

fn sms_speed(scn: &HandoffScenario, opts: &HandoffOptions) -> Result<EquivalentSpeed> {
    scn.validate()?;
    match scn.model.kind {
        SpeedLaw::Sms { v0 } => Ok(EquivalentSpeed::Maxwell {
            v0,
            renormalize: opts.sms_renormalize,
        }),
        SpeedLaw::Dms { .. } => Err(Error::InvalidArgument("SMS bound needs an SMS model")),
    }
}

/// `g(x) = x - sin(2x) / 2`.
fn g(x: f64) -> f64 {
    x - 0.5 * sin(2.0 * x)
}

/// Lower bound on the conditional handoff probability when the user moves a
/// distance `s` at angle `theta` from a serving UAV at distance `r_star`.
pub fn conditional_handoff_sms(lambda0: f64, r_star: f64, s: f64, theta: f64) -> f64 {
    clip_probability(1.0 - exp(-2.0 * lambda0 * uncovered_area_angles(r_star, s, theta)))
}

/// Area of the new search disk outside the old empty disk, written with the
/// half-angles of the two circles.
fn uncovered_area_angles(r_star: f64, s: f64, theta: f64) -> f64 {
    let r2 = r_star * r_star + s * s + 2.0 * r_star * s * cos(theta);
    let radius = sqrt(r2.max(0.0));
    if s == 0.0 || r_star == 0.0 || radius == 0.0 {
        return PI * r2.max(0.0) - PI * sq(r_star.min(radius));
    }
    let phi1 = acos_guarded((r_star * r_star + s * s - r2) / (2.0 * r_star * s));
    let phi2 = acos_guarded((r2 + s * s - r_star * r_star) / (2.0 * radius * s));
    r2 * (PI - g(phi2)) - r_star * r_star * g(phi1)
}

/// Probability of no handoff for a displacement `s`, angle-form integrand.
fn stay_angles(lambda0: f64, s: f64, r_max: f64, quad: &QuadratureSpec) -> Result<f64> {
    integrate(
        |r_star| {
            let inner = integrate(
                |theta| {
                    let e = PI * r_star * r_star + uncovered_area_angles(r_star, s, theta);
                    Ok(exp(-2.0 * lambda0 * e))
                },
                0.0,
                PI,
                quad,
            )?;
            Ok(4.0 * lambda0 * r_star * inner)
        },
        0.0,
        r_max,
        quad,
    )
}

/// Lower bound on the CoMP handoff probability under SMS mobility, from the
/// conditional bound averaged over serving distance, heading and the
/// equivalent speed.
pub fn handoff_lb_sms(scn: &HandoffScenario, opts: &HandoffOptions) -> Result<f64> {
    let speed = sms_speed(scn, opts)?;
    if scn.t == 0.0 {
        return Ok(0.0);
    }
    let quad = &opts.quad;
    let r_max = truncation_radius(2.0 * scn.lambda0, opts.envelope_floor);
    let upper = speed.upper(quad.truncation_quantile);
    let stay = integrate(
        |x| Ok(speed.pdf(x) * stay_angles(scn.lambda0, x * scn.t, r_max, quad)?),
        0.0,
        upper,
        quad,
    )?;
    Ok(clip_probability(1.0 - stay))
}

/// The same SMS bound evaluated through the split `J1 + J2 + J3` form.
pub fn handoff_lb_sms_split(scn: &HandoffScenario, opts: &HandoffOptions) -> Result<f64> {
    let speed = sms_speed(scn, opts)?;
    if scn.t == 0.0 {
        return Ok(0.0);
    }
    let quad = &opts.quad;
    let lambda = 2.0 * scn.lambda0;
    let r_max = truncation_radius(lambda, opts.envelope_floor);
    let upper = speed.upper(quad.truncation_quantile);
    let stay = integrate(
        |x| Ok(speed.pdf(x) * split_stay(lambda, x * scn.t, r_max, quad)?),
        0.0,
        upper,
        quad,
    )?;
    Ok(clip_probability(1.0 - stay))
}

/// `2 lambda (J1 + J2 + J3)` for displacement `s`: the no-handoff
/// probability of a cell process with intensity `lambda`.
fn split_stay(lambda: f64, s: f64, r_max: f64, quad: &QuadratureSpec) -> Result<f64> {
    let q = |u: f64, r_star: f64, theta: f64, radius2: f64| {
        let a2 = r_star * r_star * theta + r_star * s * sin(theta);
        r_star * exp(-lambda * (radius2 * u + a2))
    };
    let parts = |r_star: f64, theta: f64| {
        let radius2 = (r_star * r_star + s * s + 2.0 * r_star * s * cos(theta)).max(0.0);
        let ratio = if radius2 > 0.0 { s * sin(theta) / sqrt(radius2) } else { 0.0 };
        let arc = asin_guarded(ratio);
        (radius2, arc)
    };
    let near = integrate(
        |theta| {
            integrate(
                |r_star| {
                    let (radius2, arc) = parts(r_star, theta);
                    Ok(q(PI - theta + arc, r_star, theta, radius2))
                },
                0.0,
                r_max,
                quad,
            )
        },
        0.0,
        PI / 2.0,
        quad,
    )?;
    let far = integrate(
        |theta| {
            let delta = (s * cos(PI - theta)).min(r_max);
            let j2 = integrate(
                |r_star| {
                    let (radius2, arc) = parts(r_star, theta);
                    Ok(q(2.0 * PI - theta - arc, r_star, theta, radius2))
                },
                0.0,
                delta,
                quad,
            )?;
            let j3 = integrate(
                |r_star| {
                    let (radius2, arc) = parts(r_star, theta);
                    Ok(q(PI - theta + arc, r_star, theta, radius2))
                },
                delta,
                r_max,
                quad,
            )?;
            Ok(j2 + j3)
        },
        PI / 2.0,
        PI,
        quad,
    )?;
    Ok(2.0 * lambda * (near + far))
}

/// Exact handoff probability when every UAV flies at the same speed
/// `v_bar` (m/s) and the user is static, with equivalent-cell density
/// `2 lambda0`.
pub fn handoff_constant_speed(lambda0: f64, v_bar: f64, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(lambda0 > 0.0) || !(v_bar >= 0.0) || !(t >= 0.0) {
        return Err(Error::InvalidArgument("need lambda0 > 0, v_bar >= 0 and t >= 0"));
    }
    let s = v_bar * t;
    if s == 0.0 {
        return Ok(0.0);
    }
    let density = 2.0 * lambda0;
    let r_max = truncation_radius(density, 1e-12).max(s);
    let omega = |r_star: f64, theta: f64| -> Result<f64> {
        let radius = sqrt((r_star * r_star + s * s + 2.0 * r_star * s * cos(theta)).max(0.0));
        let lo = (s - r_star).abs();
        if radius <= lo {
            return Ok(0.0);
        }
        integrate(
            |r| {
                if r == 0.0 {
                    return Ok(0.0);
                }
                Ok(2.0 * r * acos_guarded((r_star * r_star - r * r - s * s) / (2.0 * r * s)))
            },
            lo,
            radius,
            quad,
        )
    };
    let term = |r_star: f64, extra: f64| -> Result<f64> {
        let inner = integrate(
            |theta| Ok(exp(-density * (PI * r_star * r_star + extra + omega(r_star, theta)?))),
            0.0,
            PI,
            quad,
        )?;
        Ok(2.0 * density * r_star * inner)
    };
    let outer = integrate(|r_star| term(r_star, 0.0), s.min(r_max), r_max, quad)?;
    let inner = integrate(|r_star| term(r_star, PI * sq(s - r_star)), 0.0, s.min(r_max), quad)?;
    Ok(clip_probability(1.0 - outer - inner))
}

/// Handoff probability of a user moving at speed `v` for time `t` through a
/// static Poisson-Voronoi network of intensity `lambda`, in the three-part
/// split form.
pub fn handoff_static_network(lambda: f64, v: f64, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(lambda > 0.0) || !(v >= 0.0) || !(t >= 0.0) {
        return Err(Error::InvalidArgument("need lambda > 0, v >= 0 and t >= 0"));
    }
    let s = v * t;
    if s == 0.0 {
        return Ok(0.0);
    }
    let r_max = truncation_radius(lambda, 1e-12);
    Ok(clip_probability(1.0 - split_stay(lambda, s, r_max, quad)?))
}
