//! Fading samplers, Gamma moment matching of the link gains, and the SIR of a
//! user served jointly by a CoMP triple.

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::geometry::Point;
use crate::math::{pow, sqrt};
use crate::point_process::UavField;
use crate::triangulation::CompSet;
use crate::{Error, Result};

/// Small-scale fading family of each antenna element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fading {
    /// Elements `CN(sqrt(K), 1)`; the squared envelope is Rician and is
    /// approximated by a Nakagami (Gamma) law in the analysis.
    NakagamiRician,
    /// Format-1 eta-mu elements: in-phase and quadrature powers are
    /// `Gamma(mu, 2 sx^2)` and `Gamma(mu, 2 sy^2)` with `sx^2 = eta sy^2`
    /// and unit mean element power.
    EtaMu { eta: f64, mu: f64 },
    /// Nakagami-m elements with unit mean power and uniform phase.
    Nakagami { m: f64 },
}

/// Link parameters shared by all UAVs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub antennas: u32,
    pub rician_k: f64,
    pub ple: f64,
    pub tx_power: f64,
    /// Fractional power-control exponent: UAV `i` transmits
    /// `tx_power * d_i^(alpha * pc_exponent)`.
    pub pc_exponent: f64,
    pub fading: Fading,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        ChannelSpec {
            antennas: 2,
            rician_k: 1.0,
            ple: 2.4,
            tx_power: 1.0,
            pc_exponent: 0.0,
            fading: Fading::NakagamiRician,
        }
    }
}

impl ChannelSpec {
    pub fn validate(&self) -> Result<()> {
        if self.antennas < 1 {
            return Err(Error::InvalidArgument("at least one antenna is required"));
        }
        if !(self.rician_k >= 0.0) || !self.rician_k.is_finite() {
            return Err(Error::InvalidArgument("Rician factor must be finite and >= 0"));
        }
        if !(self.ple > 2.0) || !self.ple.is_finite() {
            return Err(Error::InvalidArgument("path-loss exponent must exceed 2"));
        }
        if !(self.tx_power > 0.0) || !self.tx_power.is_finite() {
            return Err(Error::InvalidArgument("transmit power must be positive"));
        }
        if !(0.0..=1.0).contains(&self.pc_exponent) {
            return Err(Error::InvalidArgument("power-control exponent must lie in [0, 1]"));
        }
        match self.fading {
            Fading::NakagamiRician => {}
            Fading::EtaMu { eta, mu } => {
                if !(eta > 0.0) || !eta.is_finite() || !(mu > 0.0) || !mu.is_finite() {
                    return Err(Error::InvalidArgument("eta-mu needs eta > 0 and mu > 0"));
                }
            }
            Fading::Nakagami { m } => {
                if !(m >= 0.5) || !m.is_finite() {
                    return Err(Error::InvalidArgument("Nakagami m must be at least 1/2"));
                }
            }
        }
        Ok(())
    }

    /// Transmit power of a UAV at slant distance `d` from the user.
    pub fn power_at(&self, d: f64) -> f64 {
        if self.pc_exponent == 0.0 {
            self.tx_power
        } else {
            self.tx_power * pow(d, self.ple * self.pc_exponent)
        }
    }
}

/// Gamma law with shape `shape` and scale `scale` (mean `shape * scale`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    pub shape: f64,
    pub scale: f64,
}

impl GammaParams {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0) || !(scale > 0.0) || !shape.is_finite() || !scale.is_finite() {
            return Err(Error::InvalidArgument("Gamma shape and scale must be positive"));
        }
        Ok(GammaParams { shape, scale })
    }

    /// Second-order moment matching.
    pub fn from_moments(mean: f64, variance: f64) -> Result<Self> {
        GammaParams::new(mean * mean / variance, variance / mean)
    }

    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    pub fn variance(&self) -> f64 {
        self.shape * self.scale * self.scale
    }
}

/// Which scale the aggregate serving gain uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BetaConvention {
    /// `beta' = beta1 * sum d^-2a / sum d^-a`, the variance-to-mean ratio.
    #[default]
    MomentMatched,
    /// `beta' = sum d^-2a / (beta1 * sum d^-a)`.
    AsPrinted,
}

fn rician_only(spec: &ChannelSpec) -> Result<()> {
    match spec.fading {
        Fading::NakagamiRician => Ok(()),
        _ => Err(Error::InvalidArgument("Gamma link parameters need Nakagami-Rician fading")),
    }
}

/// Nakagami fit `(n, beta)` of one element's power, `n = (K+1)^2/(2K+1)`,
/// `beta = K + 1`.
pub fn element_gamma_params(k: f64) -> (f64, f64) {
    ((k + 1.0) * (k + 1.0) / (2.0 * k + 1.0), k + 1.0)
}

/// Serving gain `||g||^2 ~ Gamma(n M, beta / n)`.
pub fn signal_gamma_params(spec: &ChannelSpec) -> Result<GammaParams> {
    rician_only(spec)?;
    let (n, beta) = element_gamma_params(spec.rician_k);
    GammaParams::new(n * spec.antennas as f64, beta / n)
}

/// Interfering gain `|g^H w|^2` with `w` an isotropic unit vector, fitted by
/// its exact first two moments: `E h = 1 + K` and
/// `E h^2 = 2 K^2 M / (M + 1) + 4 K + 2`.
pub fn interferer_gamma_params(spec: &ChannelSpec) -> Result<GammaParams> {
    rician_only(spec)?;
    let k = spec.rician_k;
    let m = spec.antennas as f64;
    let mean = 1.0 + k;
    let second = 2.0 * k * k * m / (m + 1.0) + 4.0 * k + 2.0;
    GammaParams::from_moments(mean, second - mean * mean)
}

/// Gamma fit of `sum h_i d_i^-alpha` for serving gains `h_i ~ sig`.
pub fn aggregate_signal_params(
    d: &[f64; 3],
    sig: GammaParams,
    alpha: f64,
    convention: BetaConvention,
) -> Result<GammaParams> {
    if d.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::InvalidArgument("distances must be positive"));
    }
    let (s1, s2) = d.iter().fold((0.0, 0.0), |(a, b), &x| {
        let p = pow(x, -alpha);
        (a + p, b + p * p)
    });
    let shape = sig.shape * s1 * s1 / s2;
    let scale = match convention {
        BetaConvention::MomentMatched => sig.scale * s2 / s1,
        BetaConvention::AsPrinted => s2 / (sig.scale * s1),
    };
    GammaParams::new(shape, scale)
}

/// Link role of a sampled gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Maximum-ratio gain `||g||^2`.
    Serving,
    /// `|g^H w|^2` for an independent isotropic unit precoder `w`.
    Interfering,
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    (re * core::f64::consts::FRAC_1_SQRT_2, im * core::f64::consts::FRAC_1_SQRT_2)
}

fn gamma_draw<R: Rng + ?Sized>(shape: f64, scale: f64, rng: &mut R) -> f64 {
    Gamma::new(shape, scale).expect("validated parameters").sample(rng)
}

fn random_sign<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.gen::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// One antenna element of the channel.
fn sample_element<R: Rng + ?Sized>(spec: &ChannelSpec, rng: &mut R) -> (f64, f64) {
    match spec.fading {
        Fading::NakagamiRician => {
            let (re, im) = complex_normal(rng);
            (sqrt(spec.rician_k) + re, im)
        }
        Fading::EtaMu { eta, mu } => {
            let sy2 = 1.0 / (2.0 * mu * (1.0 + eta));
            let sx2 = eta * sy2;
            let x2 = gamma_draw(mu, 2.0 * sx2, rng);
            let y2 = gamma_draw(mu, 2.0 * sy2, rng);
            (random_sign(rng) * sqrt(x2), random_sign(rng) * sqrt(y2))
        }
        Fading::Nakagami { m } => {
            let p = gamma_draw(m, 1.0 / m, rng);
            let phase = crate::mobility::sample_direction(rng);
            let r = sqrt(p);
            (r * crate::math::cos(phase), r * crate::math::sin(phase))
        }
    }
}

/// Draws a power gain for one link.
pub fn sample_fading<R: Rng + ?Sized>(spec: &ChannelSpec, role: Role, rng: &mut R) -> Result<f64> {
    spec.validate()?;
    Ok(draw_gain(spec, role, rng))
}

pub(crate) fn draw_gain<R: Rng + ?Sized>(spec: &ChannelSpec, role: Role, rng: &mut R) -> f64 {
    let m = spec.antennas as usize;
    match role {
        Role::Serving => (0..m)
            .map(|_| {
                let (re, im) = sample_element(spec, rng);
                re * re + im * im
            })
            .sum(),
        Role::Interfering => {
            if m == 1 {
                let (re, im) = sample_element(spec, rng);
                return re * re + im * im;
            }
            // isotropic unit precoder: a normalized complex Gaussian vector
            let (mut dot_re, mut dot_im, mut norm2) = (0.0, 0.0, 0.0);
            for _ in 0..m {
                let (gr, gi) = sample_element(spec, rng);
                let (wr, wi) = complex_normal(rng);
                // conj(g) * w
                dot_re += gr * wr + gi * wi;
                dot_im += gr * wi - gi * wr;
                norm2 += wr * wr + wi * wi;
            }
            (dot_re * dot_re + dot_im * dot_im) / norm2
        }
    }
}

/// Coherent received power `|sum sqrt(P_i d_i^-alpha g_i)|^2` of serving
/// links `(slant distance, ||g||^2)`.
pub fn received_signal(serving: &[(f64, f64)], spec: &ChannelSpec) -> f64 {
    let amp: f64 = serving
        .iter()
        .map(|&(d, g)| sqrt(spec.power_at(d) * pow(d, -spec.ple) * g))
        .sum();
    amp * amp
}

/// Summed power of interfering links `(slant distance, h)`.
pub fn received_interference(interferers: impl IntoIterator<Item = (f64, f64)>, spec: &ChannelSpec) -> f64 {
    interferers
        .into_iter()
        .map(|(d, h)| spec.power_at(d) * pow(d, -spec.ple) * h)
        .sum()
}

/// Mean interfering gain `E |g^H w|^2`: `1 + K` for Rician elements, 1 for
/// the unit-power families.
pub fn mean_interferer_gain(spec: &ChannelSpec) -> f64 {
    match spec.fading {
        Fading::NakagamiRician => 1.0 + spec.rician_k,
        Fading::EtaMu { .. } | Fading::Nakagami { .. } => 1.0,
    }
}

/// `signal / interference`, `+inf` without interference and 0 without
/// either.
pub fn sir_ratio(signal: f64, interference: f64) -> f64 {
    if interference > 0.0 {
        signal / interference
    } else if signal > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// SIR from serving links `(slant distance, ||g||^2)` and interfering links
/// `(slant distance, h)`. Without interferers the SIR is `+inf`.
pub fn sir_from_links(
    serving: &[(f64, f64)],
    interferers: impl IntoIterator<Item = (f64, f64)>,
    spec: &ChannelSpec,
) -> f64 {
    sir_ratio(received_signal(serving, spec), received_interference(interferers, spec))
}

/// SIR of a user at `ue` served coherently by `comp`; every other UAV in the
/// field interferes.
pub fn sir<R: Rng + ?Sized>(
    ue: Point,
    comp: &CompSet,
    field: &UavField,
    spec: &ChannelSpec,
    rng: &mut R,
) -> Result<f64> {
    spec.validate()?;
    if comp.uav_ids.iter().any(|&i| i as usize >= field.len()) {
        return Err(Error::InvalidArgument("serving set is not part of the field"));
    }
    let serving = comp.uav_ids.map(|i| {
        let d = field.slant_distance(i as usize, ue);
        (d, draw_gain(spec, Role::Serving, rng))
    });
    let mut interferers = alloc::vec::Vec::with_capacity(field.len());
    for j in 0..field.len() {
        if comp.contains(j as u32) {
            continue;
        }
        let d = field.slant_distance(j, ue);
        interferers.push((d, draw_gain(spec, Role::Interfering, rng)));
    }
    Ok(sir_from_links(&serving, interferers, spec))
}
