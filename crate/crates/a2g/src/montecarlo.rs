//! Monte Carlo estimates of handoff, coverage and spectral efficiency.
//!
//! Every trial draws its own field, velocities and fading from streams keyed
//! by `(seed, trial)`, so the estimates do not depend on the thread count.
//! The user sits at the origin of a disk large enough to hold the search
//! window plus a guard ring.

use std::sync::atomic::{AtomicU64, Ordering};

use a2g_core::analytic::{CoverageScenario, HandoffScenario};
use a2g_core::channel::{
    mean_interferer_gain, received_interference, received_signal, sample_fading, sir_ratio,
    ChannelSpec, Role,
};
use a2g_core::mobility::{equivalent_velocity, sample_direction, MobilityModel, Velocity};
use a2g_core::point_process::{sample_ppp_with, trial_rng, Altitude, Region, StreamRng, UavField};
use a2g_core::triangulation::{min_search_radius, nearest_uav, subdivision_search};
use a2g_core::{Error, Point, Result};
use rand::Rng;
use rayon::prelude::*;

/// How the serving UAVs of a user are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// The Delaunay triangle with the largest average received power.
    DelaunayComp,
    /// The nearest UAV alone.
    VoronoiNearest,
    /// Up to three UAVs, nearest first, inside the user's hexagonal cell.
    HexagonalComp { cell_area: f64 },
}

impl Scheme {
    /// Hexagonal cells holding three UAVs on average.
    pub fn hexagonal(lambda0: f64) -> Self {
        Scheme::HexagonalComp {
            cell_area: 3.0 / lambda0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::DelaunayComp => "delaunay_comp",
            Scheme::VoronoiNearest => "voronoi_nearest",
            Scheme::HexagonalComp { .. } => "hexagonal_comp",
        }
    }
}

/// Which side moves during a leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Frame {
    /// Every UAV draws its own velocity from the model; the user is static.
    #[default]
    UavsMove,
    /// UAVs are static and the user moves with the equivalent velocity of
    /// three independent model velocities.
    UeMovesEquivalent,
    /// UAVs are static and the user moves at the model's mean speed.
    UeMovesConstant,
}

/// Sample mean with a Wald 95% half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub ci95: f64,
    pub trials: u64,
}

impl Estimate {
    fn from_sums(sum: f64, sum_sq: f64, n: u64) -> Self {
        let nf = n as f64;
        let mean = sum / nf;
        let var = if n > 1 {
            ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
        } else {
            0.0
        };
        Estimate {
            mean,
            ci95: 1.96 * (var / nf).sqrt(),
            trials: n,
        }
    }

    /// Tolerance for comparing against an analytic bound: two half-widths,
    /// but never less than one trial, since the Wald width is 0 at 0 and 1.
    pub fn bound_margin(&self) -> f64 {
        (2.0 * self.ci95).max(1.0 / self.trials.max(1) as f64)
    }

    /// `self.mean - other.mean` exceeds the combined half-widths.
    pub fn clearly_above(&self, other: &Estimate) -> bool {
        self.mean - other.mean > self.ci95 + other.ci95
    }
}

/// Run-wide knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
    pub frame: Frame,
    /// Add the mean interference of the plane beyond the sampled disk
    /// whenever it is finite.
    pub tail_compensation: bool,
    /// Largest displacement of any leg in the run, m. Fixes the sampled disk
    /// so grids over `t` reuse the same fields.
    pub reach: f64,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions {
            trials: 10_000,
            seed: 1,
            threads: 0,
            frame: Frame::UavsMove,
            tail_compensation: true,
            reach: 0.0,
        }
    }
}

/// Deployment shared by all trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Network {
    /// UAV intensity, per m^2.
    pub lambda0: f64,
    /// UAV altitude, m, or the range altitudes are drawn from.
    pub heights: (f64, f64),
    pub spec: ChannelSpec,
}

impl Network {
    pub fn new(lambda0: f64, h: f64, spec: ChannelSpec) -> Self {
        Network {
            lambda0,
            heights: (h, h),
            spec,
        }
    }

    pub fn from_scenario(scn: &CoverageScenario) -> Self {
        Network::new(scn.lambda0, scn.h, scn.spec)
    }

    pub fn mean_height(&self) -> f64 {
        0.5 * (self.heights.0 + self.heights.1)
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda0 > 0.0) || !self.lambda0.is_finite() {
            return Err(Error::InvalidArgument("lambda0 must be positive"));
        }
        let (lo, hi) = self.heights;
        if !(lo > 0.0) || !(hi >= lo) || !hi.is_finite() {
            return Err(Error::InvalidArgument("heights must satisfy 0 < lo <= hi"));
        }
        self.spec.validate()
    }
}

static RESAMPLED: AtomicU64 = AtomicU64::new(0);

/// Trials redrawn because the field admitted no serving set, since start-up.
pub fn resampled_trials() -> u64 {
    RESAMPLED.load(Ordering::Relaxed)
}

const MAX_ATTEMPTS: u64 = 64;

#[derive(Clone, Copy)]
enum Purpose {
    Field = 0,
    Heights = 1,
    Mobility = 2,
    Fading = 3,
    Cell = 4,
}

fn stream(seed: u64, trial: u64, attempt: u64, purpose: Purpose) -> StreamRng {
    // splitmix64 of the root seed, salted per purpose and attempt
    let mut z = seed
        .wrapping_add((purpose as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(attempt.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    trial_rng(z ^ (z >> 31), trial)
}

fn region_radius(lambda0: f64, reach: f64) -> Result<f64> {
    Ok((5.0 / lambda0.sqrt()).max(reach) + min_search_radius(lambda0)?)
}

/// Regular hexagon with flat top, given by centre and circumradius.
#[derive(Debug, Clone, Copy)]
struct Hexagon {
    center: Point,
    radius: f64,
}

impl Hexagon {
    fn with_area(center: Point, area: f64) -> Self {
        Hexagon {
            center,
            radius: (2.0 * area / (3.0 * 3f64.sqrt())).sqrt(),
        }
    }

    fn contains(&self, p: Point) -> bool {
        let x = (p.x - self.center.x).abs();
        let y = (p.y - self.center.y).abs();
        let apothem = 0.5 * 3f64.sqrt() * self.radius;
        y <= apothem && 3f64.sqrt() * x + y <= 2.0 * apothem
    }

    fn sample_offset<R: Rng>(&self, rng: &mut R) -> Point {
        let apothem = 0.5 * 3f64.sqrt() * self.radius;
        let local = Hexagon {
            center: Point::new(0.0, 0.0),
            radius: self.radius,
        };
        loop {
            let p = Point::new(
                rng.gen_range(-self.radius..self.radius),
                rng.gen_range(-apothem..apothem),
            );
            if local.contains(p) {
                return p;
            }
        }
    }
}

/// One sampled realisation: field at time 0 plus all motion.
struct World {
    field: UavField,
    velocities: Vec<Velocity>,
    ue_velocity: Velocity,
    cell: Option<Hexagon>,
}

impl World {
    fn sample(
        net: &Network,
        scheme: Scheme,
        model: Option<&MobilityModel>,
        opts: &McOptions,
        trial: u64,
        attempt: u64,
    ) -> Result<World> {
        let radius = region_radius(net.lambda0, opts.reach)?;
        let region = Region::disk(Point::new(0.0, 0.0), radius)?;
        let mut rng = stream(opts.seed, trial, attempt, Purpose::Field);
        let positions = sample_ppp_with(net.lambda0, &region, &mut rng)?;
        let n = positions.len();
        let mut field = UavField::new(positions, net.heights.0, net.lambda0);
        if net.heights.1 > net.heights.0 {
            let mut rng = stream(opts.seed, trial, attempt, Purpose::Heights);
            let hs = (0..n).map(|_| rng.gen_range(net.heights.0..=net.heights.1)).collect();
            field.altitude = Altitude::PerUav(hs);
        }
        let mut rng = stream(opts.seed, trial, attempt, Purpose::Mobility);
        let mut velocities = Vec::new();
        let mut ue_velocity = Velocity::default();
        if let Some(model) = model {
            match opts.frame {
                Frame::UavsMove => velocities = (0..n).map(|_| model.sample_velocity(&mut rng)).collect(),
                Frame::UeMovesEquivalent => {
                    let triple = [0; 3].map(|_| model.sample_velocity(&mut rng));
                    ue_velocity = equivalent_velocity(&triple);
                }
                Frame::UeMovesConstant => {
                    ue_velocity = Velocity::new(model.mean_speed(), sample_direction(&mut rng));
                }
            }
        }
        let cell = match scheme {
            Scheme::HexagonalComp { cell_area } => {
                if !(cell_area > 0.0) {
                    return Err(Error::InvalidArgument("hexagon area must be positive"));
                }
                let mut rng = stream(opts.seed, trial, attempt, Purpose::Cell);
                let hex = Hexagon::with_area(Point::new(0.0, 0.0), cell_area);
                let offset = hex.sample_offset(&mut rng);
                Some(Hexagon::with_area(Point::new(-offset.x, -offset.y), cell_area))
            }
            _ => None,
        };
        Ok(World {
            field,
            velocities,
            ue_velocity,
            cell,
        })
    }

    /// Field and user position after `t` seconds.
    fn at(&self, t: f64) -> (UavField, Point) {
        if t == 0.0 {
            return (self.field.clone(), Point::new(0.0, 0.0));
        }
        if self.velocities.is_empty() {
            return (self.field.clone(), self.ue_velocity.displacement(t));
        }
        let mut field = self.field.clone();
        for (p, v) in field.positions.iter_mut().zip(&self.velocities) {
            *p = *p + v.displacement(t);
        }
        (field, Point::new(0.0, 0.0))
    }
}

/// Serving UAV indices, ascending. Empty only for a hexagon without UAVs.
fn serving_set(scheme: Scheme, field: &UavField, ue: Point, alpha: f64, cell: Option<Hexagon>) -> Result<Vec<u32>> {
    match scheme {
        Scheme::DelaunayComp => Ok(subdivision_search(field, ue, alpha)?.uav_ids.to_vec()),
        Scheme::VoronoiNearest => Ok(vec![nearest_uav(field, ue)?]),
        Scheme::HexagonalComp { .. } => {
            let cell = cell.expect("hexagonal worlds carry a cell");
            let mut inside: Vec<(f64, u32)> = field
                .positions
                .iter()
                .enumerate()
                .filter(|(_, p)| cell.contains(**p))
                .map(|(i, p)| (p.dist2(ue), i as u32))
                .collect();
            inside.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut ids: Vec<u32> = inside.iter().take(3).map(|&(_, i)| i).collect();
            ids.sort_unstable();
            Ok(ids)
        }
    }
}

fn retryable(e: &Error) -> bool {
    matches!(e, Error::DegenerateInput(_) | Error::NotFound { .. })
}

/// Runs `f(world)` for every trial, redrawing degenerate worlds, and reduces
/// the per-trial outputs in trial order.
fn run<F>(outputs: usize, opts: &McOptions, sample: impl Fn(u64, u64) -> Result<World> + Sync, f: F) -> Result<Vec<Estimate>>
where
    F: Fn(&World, u64, u64) -> Result<Vec<f64>> + Sync,
{
    if opts.trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required"));
    }
    let one = |trial: u64| -> Result<Vec<f64>> {
        for attempt in 0..MAX_ATTEMPTS {
            let world = sample(trial, attempt)?;
            match f(&world, trial, attempt) {
                Ok(v) => return Ok(v),
                Err(e) if retryable(&e) => {
                    RESAMPLED.fetch_add(1, Ordering::Relaxed);
                }
                Err(e) => return Err(e),
            }
        }
        Err(Error::NonConvergence {
            what: "degenerate fields",
            value: MAX_ATTEMPTS as f64,
            error: f64::NAN,
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|_| Error::InvalidArgument("cannot start worker threads"))?;
    let mut sum = vec![0.0; outputs];
    let mut sum_sq = vec![0.0; outputs];
    const CHUNK: u64 = 4096;
    let mut start = 0;
    while start < opts.trials {
        let end = (start + CHUNK).min(opts.trials);
        let chunk: Vec<Result<Vec<f64>>> = pool.install(|| (start..end).into_par_iter().map(one).collect());
        for values in chunk {
            let values = values?;
            for (k, v) in values.into_iter().enumerate() {
                sum[k] += v;
                sum_sq[k] += v * v;
            }
        }
        start = end;
    }
    Ok(sum
        .iter()
        .zip(&sum_sq)
        .map(|(&s, &q)| Estimate::from_sums(s, q, opts.trials))
        .collect())
}

/// Mean interference from UAVs beyond `radius`, or 0 when it diverges.
fn tail_interference(net: &Network, radius: f64) -> f64 {
    let spec = &net.spec;
    let eff = spec.ple * (1.0 - spec.pc_exponent);
    if eff <= 2.0 + 1e-9 {
        return 0.0;
    }
    let h = net.mean_height();
    spec.tx_power * 2.0 * std::f64::consts::PI * net.lambda0 * mean_interferer_gain(spec)
        * (radius * radius + h * h).powf(1.0 - 0.5 * eff)
        / (eff - 2.0)
}

/// SIR at `ue` when `members` serve it and every other UAV interferes.
fn trial_sir<R: Rng>(net: &Network, field: &UavField, ue: Point, members: &[u32], tail: f64, rng: &mut R) -> Result<f64> {
    let spec = &net.spec;
    let mut serving = Vec::with_capacity(members.len());
    for &i in members {
        serving.push((field.slant_distance(i as usize, ue), sample_fading(spec, Role::Serving, rng)?));
    }
    let mut links = Vec::with_capacity(field.len());
    for j in 0..field.len() {
        if members.contains(&(j as u32)) {
            continue;
        }
        links.push((field.slant_distance(j, ue), sample_fading(spec, Role::Interfering, rng)?));
    }
    let interference = received_interference(links, spec) + tail;
    Ok(sir_ratio(received_signal(&serving, spec), interference))
}

/// Handoff probability at each leg length in `ts`; one field per trial is
/// shared by the whole grid.
pub fn estimate_handoff_curve(
    scheme: Scheme,
    net: &Network,
    model: &MobilityModel,
    ts: &[f64],
    opts: &McOptions,
) -> Result<Vec<Estimate>> {
    net.validate()?;
    if ts.iter().any(|&t| !(t >= 0.0) || !t.is_finite()) {
        return Err(Error::InvalidArgument("leg lengths must be finite and non-negative"));
    }
    let alpha = net.spec.ple;
    run(
        ts.len(),
        opts,
        |trial, attempt| World::sample(net, scheme, Some(model), opts, trial, attempt),
        |world, _, _| {
            let start = serving_set(scheme, &world.field, Point::new(0.0, 0.0), alpha, world.cell)?;
            ts.iter()
                .map(|&t| {
                    if t == 0.0 {
                        return Ok(0.0);
                    }
                    let (field, ue) = world.at(t);
                    let now = serving_set(scheme, &field, ue, alpha, world.cell)?;
                    Ok(if now != start { 1.0 } else { 0.0 })
                })
                .collect()
        },
    )
}

/// Handoff probability over one leg of the scenario.
pub fn estimate_handoff(scheme: Scheme, net: &Network, hand: &HandoffScenario, opts: &McOptions) -> Result<Estimate> {
    hand.validate()?;
    let net = Network { lambda0: hand.lambda0, ..*net };
    let reach = opts.reach.max(hand.model.speed_quantile(1e-9) * hand.t);
    let opts = McOptions { reach, ..*opts };
    Ok(estimate_handoff_curve(scheme, &net, &hand.model, &[hand.t], &opts)?[0])
}

/// Coverage with handoff cost at every threshold in `gammas` (linear): per
/// trial `1{SIR(t) > gamma} (1 - zeta 1{handoff})`.
pub fn estimate_coverage_curve(
    scheme: Scheme,
    net: &Network,
    hand: &HandoffScenario,
    gammas: &[f64],
    opts: &McOptions,
) -> Result<Vec<Estimate>> {
    net.validate()?;
    hand.validate()?;
    if gammas.iter().any(|g| g.is_nan()) {
        return Err(Error::InvalidArgument("thresholds must not be NaN"));
    }
    let alpha = net.spec.ple;
    let t = hand.t;
    let zeta = hand.zeta;
    let reach = opts.reach.max(hand.model.speed_quantile(1e-9) * t * 3.0);
    let opts = McOptions { reach, ..*opts };
    let tail = if opts.tail_compensation {
        tail_interference(net, region_radius(net.lambda0, reach)?)
    } else {
        0.0
    };
    run(
        gammas.len(),
        &opts,
        |trial, attempt| World::sample(net, scheme, Some(&hand.model), &opts, trial, attempt),
        |world, trial, attempt| {
            let origin = Point::new(0.0, 0.0);
            let (field, ue) = world.at(t);
            let now = serving_set(scheme, &field, ue, alpha, world.cell)?;
            let handoff = zeta > 0.0 && t > 0.0 && serving_set(scheme, &world.field, origin, alpha, world.cell)? != now;
            let mut rng = stream(opts.seed, trial, attempt, Purpose::Fading);
            let sir = if now.is_empty() {
                0.0
            } else {
                trial_sir(net, &field, ue, &now, tail, &mut rng)?
            };
            let keep = if handoff { 1.0 - zeta } else { 1.0 };
            Ok(gammas.iter().map(|&g| if sir > g { keep } else { 0.0 }).collect())
        },
    )
}

/// Coverage with handoff cost at `scn.gamma`.
pub fn estimate_coverage(scheme: Scheme, scn: &CoverageScenario, hand: &HandoffScenario, opts: &McOptions) -> Result<Estimate> {
    scn.validate()?;
    let net = Network::from_scenario(scn);
    Ok(estimate_coverage_curve(scheme, &net, hand, &[scn.gamma], opts)?[0])
}

/// Mean `log2(1 + SIR)` of a static user, bit/s/Hz.
pub fn estimate_spectral_efficiency(scheme: Scheme, net: &Network, opts: &McOptions) -> Result<Estimate> {
    net.validate()?;
    let alpha = net.spec.ple;
    let tail = if opts.tail_compensation {
        tail_interference(net, region_radius(net.lambda0, opts.reach)?)
    } else {
        0.0
    };
    let out = run(
        1,
        opts,
        |trial, attempt| World::sample(net, scheme, None, opts, trial, attempt),
        |world, trial, attempt| {
            let origin = Point::new(0.0, 0.0);
            let members = serving_set(scheme, &world.field, origin, alpha, world.cell)?;
            let mut rng = stream(opts.seed, trial, attempt, Purpose::Fading);
            let sir = if members.is_empty() {
                0.0
            } else {
                trial_sir(net, &world.field, origin, &members, tail, &mut rng)?
            };
            if !sir.is_finite() {
                return Err(Error::DegenerateInput("no interferer in the sampled field"));
            }
            Ok(vec![(1.0 + sir).log2()])
        },
    )?;
    Ok(out[0])
}

/// Static coverage with altitudes drawn uniformly from `net.heights`, and the
/// same trials with every UAV at the mean altitude.
pub fn estimate_height_sensitivity(
    scheme: Scheme,
    net: &Network,
    gammas: &[f64],
    opts: &McOptions,
) -> Result<(Vec<Estimate>, Vec<Estimate>)> {
    let fixed = Network::new(net.lambda0, net.mean_height(), net.spec);
    let hand = HandoffScenario {
        lambda0: net.lambda0,
        t: 0.0,
        model: MobilityModel::sms(1.0)?,
        zeta: 0.0,
    };
    let varied = estimate_coverage_curve(scheme, net, &hand, gammas, opts)?;
    let mean = estimate_coverage_curve(scheme, &fixed, &hand, gammas, opts)?;
    Ok((varied, mean))
}
