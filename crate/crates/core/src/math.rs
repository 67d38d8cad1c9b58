//! Float functions for `no_std` builds.

pub(crate) use libm::{
    acos, asin, atan2, cos, erf, exp, hypot, lgamma, log as ln, pow, sin, sqrt,
};

pub(crate) const PI: f64 = core::f64::consts::PI;
pub(crate) const TAU: f64 = core::f64::consts::TAU;

#[inline]
pub(crate) fn sq(x: f64) -> f64 {
    x * x
}

/// Wraps an angle into `[-pi, pi)`.
pub(crate) fn wrap_angle(theta: f64) -> f64 {
    let mut a = libm::fmod(theta + PI, TAU);
    if a < 0.0 {
        a += TAU;
    }
    let a = a - PI;
    if a >= PI {
        -PI
    } else {
        a
    }
}
