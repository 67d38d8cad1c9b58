//! Coverage upper bound from the three nearest UAVs and the combination of
//! coverage with handoff cost.

use alloc::vec::Vec;

use crate::channel::{
    aggregate_signal_params, interferer_gamma_params, signal_gamma_params, BetaConvention,
    ChannelSpec,
};
use crate::math::{exp, lgamma, ln, pow, sqrt, PI};
use crate::special::gauss_2f1;
use crate::{Error, Result};

use super::quadrature::{integrate, QuadratureSpec};
use super::toeplitz::{exp_toeplitz_norm1, ToeplitzExpProblem, DIM_CAP};
use super::{clip_probability, note_alpha_perturbation};

/// Inputs of the coverage bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageScenario {
    /// SIR threshold (linear).
    pub gamma: f64,
    /// UAV intensity, per m^2.
    pub lambda0: f64,
    pub spec: ChannelSpec,
    /// UAV altitude, m.
    pub h: f64,
}

impl CoverageScenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0) {
            return Err(Error::InvalidArgument("gamma must be non-negative"));
        }
        if !(self.lambda0 > 0.0) || !self.lambda0.is_finite() {
            return Err(Error::InvalidArgument("lambda0 must be positive"));
        }
        if !(self.h > 0.0) || !self.h.is_finite() {
            return Err(Error::InvalidArgument("height must be positive"));
        }
        self.spec.validate()
    }
}

/// Numerical options of the coverage bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageOptions {
    pub quad: QuadratureSpec,
    pub convention: BetaConvention,
    pub dim_cap: usize,
    /// The third-distance integral stops at `lambda pi z^2 = z_tail`.
    pub z_tail: f64,
}

impl Default for CoverageOptions {
    fn default() -> Self {
        CoverageOptions {
            quad: QuadratureSpec::default().with_tolerances(1e-7, 1e-11),
            convention: BetaConvention::MomentMatched,
            dim_cap: DIM_CAP,
            z_tail: 45.0,
        }
    }
}

/// Joint density of the three nearest ground distances `x <= y <= z` in a
/// PPP of intensity `lambda`.
pub fn joint_distance_pdf(x: f64, y: f64, z: f64, lambda: f64) -> Result<f64> {
    if !(0.0 < x && x <= y && y <= z) {
        return Err(Error::InvalidArgument("distances must satisfy 0 < x <= y <= z"));
    }
    Ok(joint_pdf_unchecked(x, y, z, lambda))
}

fn joint_pdf_unchecked(x: f64, y: f64, z: f64, lambda: f64) -> f64 {
    let c = 2.0 * lambda * PI;
    c * c * c * x * y * z * exp(-lambda * PI * z * z)
}

/// Integral of `f(x, y, z) * pdf(x, y, z)` over the ordered cone, for `f`
/// of size about `scale`. Every level is resolved against the pdf mass it
/// covers, so the absolute error is about `rel_tol * scale` and slices that
/// carry almost no mass stay cheap.
fn cone_expectation<F>(lambda: f64, z_tail: f64, scale: f64, quad: &QuadratureSpec, mut f: F) -> Result<f64>
where
    F: FnMut(f64, f64, f64) -> Result<f64>,
{
    let z_max = sqrt(z_tail / (lambda * PI));
    let c = 2.0 * lambda * PI;
    let c3 = c * c * c;
    integrate(
        |z| {
            let tail = exp(-lambda * PI * z * z);
            // mass of the slice at z, and of the segment at (y, z)
            let slice = c3 * z * tail * pow(z, 4.0) / 8.0;
            integrate(
                |y| {
                    let segment = c3 * z * tail * y * y * y / 2.0;
                    integrate(
                        |x| Ok(joint_pdf_unchecked(x, y, z, lambda) * f(x, y, z)?),
                        0.0,
                        y,
                        &quad.scaled_to(scale * segment),
                    )
                },
                0.0,
                z,
                &quad.scaled_to(scale * slice),
            )
        },
        0.0,
        z_max,
        &quad.scaled_to(scale),
    )
}

fn slant(r: f64, h: f64) -> f64 {
    sqrt(r * r + h * h)
}

/// Toeplitz dimension: the rounded mean of the aggregate Gamma shape over
/// the three nearest distances.
pub fn coverage_matrix_dim(lambda0: f64, spec: &ChannelSpec, h: f64, opts: &CoverageOptions) -> Result<usize> {
    if !(lambda0 > 0.0) || !(h > 0.0) {
        return Err(Error::InvalidArgument("need lambda0 > 0 and h > 0"));
    }
    let sig = signal_gamma_params(spec)?;
    let alpha = spec.ple;
    let mean = cone_expectation(lambda0, opts.z_tail, 3.0, &opts.quad, |x, y, z| {
        let (s1, s2) = [x, y, z].iter().fold((0.0, 0.0), |(a, b), &r| {
            let p = pow(slant(r, h), -alpha);
            (a + p, b + p * p)
        });
        Ok(s1 * s1 / s2)
    })?;
    let dim = libm::round(sig.shape * mean).max(1.0) as usize;
    if dim > opts.dim_cap {
        return Err(Error::DimensionCap { dim, cap: opts.dim_cap });
    }
    Ok(dim)
}

/// Entries `e_0 .. e_{k_max}` of the Toeplitz exponent for a user whose third
/// nearest UAV is at slant distance `d3`.
#[allow(clippy::too_many_arguments)]
pub fn toeplitz_entries(
    k_max: usize,
    d3: f64,
    gamma: f64,
    alpha: f64,
    n2: f64,
    beta2: f64,
    beta_prime: f64,
    lambda: f64,
) -> Result<Vec<f64>> {
    if !(gamma >= 0.0) || !(d3 > 0.0) || !(n2 > 0.0) || !(beta2 > 0.0) || !(beta_prime > 0.0) {
        return Err(Error::InvalidArgument("Toeplitz entries need positive parameters"));
    }
    let mut alpha = alpha;
    if (1..=k_max).any(|k| k as f64 * alpha == 2.0) {
        alpha += 1e-9;
        note_alpha_perturbation();
    }
    let base = lambda * PI * d3 * d3;
    let mut out = Vec::with_capacity(k_max + 1);
    if gamma == 0.0 {
        out.resize(k_max + 1, 0.0);
        return Ok(out);
    }
    // x = -beta2 gamma d3^-alpha / (3 beta')
    let neg_x = beta2 * gamma * pow(d3, -alpha) / (3.0 * beta_prime);
    let ln_neg_x = ln(neg_x);
    let two_over_alpha = 2.0 / alpha;
    for k in 0..=k_max {
        let kf = k as f64;
        // (n2)_k / k! * (-x)^k, in logs
        let ln_poch = lgamma(kf + n2) - lgamma(n2) - lgamma(kf + 1.0) + kf * ln_neg_x;
        let coef = 2.0 * base / (2.0 - kf * alpha) * exp(ln_poch);
        let f = gauss_2f1(kf + n2, kf - two_over_alpha, kf + 1.0 - two_over_alpha, -neg_x)?;
        let delta = if k == 0 { base } else { 0.0 };
        out.push(delta - coef * f);
    }
    Ok(out)
}

/// Upper bound on the coverage probability `P(SIR > gamma)` of a user
/// served by its three nearest UAVs.
pub fn coverage_ub(scn: &CoverageScenario, opts: &CoverageOptions) -> Result<f64> {
    scn.validate()?;
    if scn.gamma == 0.0 {
        return Ok(1.0);
    }
    let dim = coverage_matrix_dim(scn.lambda0, &scn.spec, scn.h, opts)?;
    coverage_ub_with_dim(scn, opts, dim)
}

/// [`coverage_ub`] with a given Toeplitz dimension.
pub fn coverage_ub_with_dim(scn: &CoverageScenario, opts: &CoverageOptions, dim: usize) -> Result<f64> {
    scn.validate()?;
    if scn.gamma == 0.0 {
        return Ok(1.0);
    }
    if dim == 0 || dim > opts.dim_cap {
        return Err(Error::DimensionCap { dim, cap: opts.dim_cap });
    }
    let sig = signal_gamma_params(&scn.spec)?;
    let intf = interferer_gamma_params(&scn.spec)?;
    let alpha = scn.spec.ple;
    let h = scn.h;
    let value = cone_expectation(scn.lambda0, opts.z_tail, 1.0, &opts.quad, |x, y, z| {
        let d = [slant(x, h), slant(y, h), slant(z, h)];
        let agg = aggregate_signal_params(&d, sig, alpha, opts.convention)?;
        let entries = toeplitz_entries(
            dim - 1,
            d[2],
            scn.gamma,
            alpha,
            intf.shape,
            intf.scale,
            agg.scale,
            scn.lambda0,
        )?;
        Ok(exp_toeplitz_norm1(&ToeplitzExpProblem::new(entries)?))
    })?;
    Ok(clip_probability(value))
}

/// Coverage with handoff cost: `((1 - zeta) + zeta (1 - p_handoff)) p_cov`.
pub fn coverage_with_handoff(handoff_p: f64, coverage_p: f64, zeta: f64) -> Result<f64> {
    for v in [handoff_p, coverage_p, zeta] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidArgument("probabilities must lie in [0, 1]"));
        }
    }
    Ok(((1.0 - zeta) + zeta * (1.0 - handoff_p)) * coverage_p)
}
