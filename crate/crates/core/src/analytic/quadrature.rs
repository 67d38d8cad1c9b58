//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Tolerances of one quadrature level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Tail probability at which infinite speed ranges are cut.
    pub truncation_quantile: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-7,
            abs_tol: 1e-12,
            max_subdivisions: 400,
            truncation_quantile: 1e-10,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || self.max_subdivisions == 0 {
            return Err(Error::InvalidArgument("quadrature tolerances must be positive"));
        }
        if !(self.truncation_quantile > 0.0 && self.truncation_quantile < 1.0) {
            return Err(Error::InvalidArgument("truncation quantile must lie in (0, 1)"));
        }
        Ok(())
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    /// The same tolerances for an integral of size up to about `scale`:
    /// errors below `rel_tol * scale` are accepted.
    pub fn scaled_to(mut self, scale: f64) -> Self {
        self.abs_tol = self.abs_tol.max(self.rel_tol * scale);
        self
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        let r = libm::pow(200.0 * error / res_asc, 1.5);
        error = res_asc * r.min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        return Err(Error::NonConvergence {
            what: "quadrature (non-finite integrand)",
            value,
            error: f64::INFINITY,
        });
    }
    Ok(Segment { a, b, value, error })
}

/// Integral of `f` over `[a, b]` (`a > b` flips the sign). The integrand
/// may fail; its error is passed through.
pub fn integrate<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, spec).map(|v| -v);
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument("integration limits must be finite"));
    }
    let first = kronrod(&mut f, a, b)?;
    let mut segments: Vec<Segment> = alloc::vec![first];
    let mut total = first.value;
    let mut total_err = first.error;
    for _ in 0..spec.max_subdivisions {
        if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok(total);
        }
        let (idx, worst) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, s)| (i, *s))
            .expect("at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            break;
        }
        let left = kronrod(&mut f, worst.a, mid)?;
        let right = kronrod(&mut f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        segments[idx] = left;
        segments.push(right);
        total_err = segments.iter().map(|s| s.error).sum();
    }
    if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
        return Ok(total);
    }
    // re-sum to shed the drift of the running total
    let total: f64 = segments.iter().map(|s| s.value).sum();
    if total_err <= 10.0 * spec.abs_tol.max(spec.rel_tol * total.abs()) {
        return Ok(total);
    }
    Err(Error::NonConvergence {
        what: "adaptive quadrature",
        value: total,
        error: total_err,
    })
}

/// [`integrate`] for an integrand that cannot fail.
pub fn integrate_plain<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate(|x| Ok(f(x)), a, b, spec)
}

/// Sum of [`integrate`] over consecutive pieces `[p0, p1], [p1, p2], ...`
/// split at known kinks of the integrand.
pub fn integrate_pieces<F>(mut f: F, points: &[f64], spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut sum = 0.0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            sum += integrate(&mut f, w[0], w[1], spec)?;
        }
    }
    Ok(sum)
}
