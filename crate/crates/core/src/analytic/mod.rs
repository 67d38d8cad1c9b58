//! Numerical evaluation of the handoff and coverage bounds.

use core::sync::atomic::{AtomicUsize, Ordering};

mod coverage;
mod handoff;
pub mod quadrature;
mod toeplitz;

pub use crate::special::gauss_2f1;
pub use coverage::{
    coverage_matrix_dim, coverage_ub, coverage_ub_with_dim, coverage_with_handoff,
    joint_distance_pdf, toeplitz_entries, CoverageOptions, CoverageScenario,
};
pub use handoff::{
    conditional_handoff_sms, handoff_constant_speed, handoff_lb_dms, handoff_lb_sms,
    handoff_lb_sms_split, handoff_lb_with_speed, handoff_static_network, interferer_intensity_dms,
    truncation_radius, HandoffOptions, HandoffScenario, SweptArea,
};
pub use quadrature::QuadratureSpec;
pub use toeplitz::{exp_toeplitz_log_norm1, exp_toeplitz_norm1, ToeplitzExpProblem, DIM_CAP};

static CLIP_EVENTS: AtomicUsize = AtomicUsize::new(0);
static GEOMETRY_WARNINGS: AtomicUsize = AtomicUsize::new(0);
static ALPHA_PERTURBATIONS: AtomicUsize = AtomicUsize::new(0);

/// Process-wide counters of numerical corrections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Diagnostics {
    /// Probabilities that had to be clipped into `[0, 1]` by more than 1e-9.
    pub clip_events: usize,
    /// `acos`/`asin` arguments clamped from beyond `1 + 1e-9`.
    pub geometry_warnings: usize,
    /// Times `alpha` was nudged because `k alpha = 2` exactly.
    pub alpha_perturbations: usize,
}

pub fn diagnostics() -> Diagnostics {
    Diagnostics {
        clip_events: CLIP_EVENTS.load(Ordering::Relaxed),
        geometry_warnings: GEOMETRY_WARNINGS.load(Ordering::Relaxed),
        alpha_perturbations: ALPHA_PERTURBATIONS.load(Ordering::Relaxed),
    }
}

pub(crate) fn clip_probability(p: f64) -> f64 {
    if p < -1e-9 || p > 1.0 + 1e-9 {
        CLIP_EVENTS.fetch_add(1, Ordering::Relaxed);
    }
    p.clamp(0.0, 1.0)
}

fn guard(x: f64) -> f64 {
    if x.abs() > 1.0 + 1e-9 {
        GEOMETRY_WARNINGS.fetch_add(1, Ordering::Relaxed);
    }
    x.clamp(-1.0, 1.0)
}

pub(crate) fn acos_guarded(x: f64) -> f64 {
    crate::math::acos(guard(x))
}

pub(crate) fn asin_guarded(x: f64) -> f64 {
    crate::math::asin(guard(x))
}

pub(crate) fn note_alpha_perturbation() {
    ALPHA_PERTURBATIONS.fetch_add(1, Ordering::Relaxed);
}
