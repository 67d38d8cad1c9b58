//! Registry of the figure experiments: each one resolves its parameters,
//! computes analytic curves and Monte Carlo estimates, and lists the checks
//! that compare them.

use std::f64::consts::PI;
use std::fmt;

use a2g_core::analytic::{
    coverage_ub, coverage_with_handoff, handoff_constant_speed, handoff_lb_dms, handoff_lb_sms,
    handoff_static_network, CoverageOptions, CoverageScenario, HandoffOptions, HandoffScenario,
    QuadratureSpec,
};
use a2g_core::channel::{ChannelSpec, Fading};
use a2g_core::mobility::{MobilityModel, SpeedLaw};
use a2g_core::Error;

use crate::config::{ConfigError, Params};
use crate::montecarlo::{
    estimate_coverage_curve, estimate_handoff_curve, estimate_height_sensitivity,
    estimate_spectral_efficiency, Estimate, Frame, McOptions, Network, Scheme,
};

/// One CSV: a header and one row per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Table {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

/// One comparison in the report. Failed `bound` checks are bound violations;
/// the others are qualitative claims.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub bound: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl Outcome {
    fn check(&mut self, name: String, pass: bool, detail: String, bound: bool) {
        self.checks.push(Check { name, pass, detail, bound });
    }

    pub fn bound_violations(&self) -> usize {
        self.checks.iter().filter(|c| c.bound && !c.pass).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    /// Bad or inconsistent parameters.
    Config(ConfigError),
    /// A kernel failed to produce a number.
    Numeric(Error),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => RunError::Config(ConfigError(msg.to_string())),
            e => RunError::Numeric(e),
        }
    }
}

type Run = fn(&Params, &Context) -> Result<Outcome, RunError>;

pub struct Experiment {
    pub id: &'static str,
    pub about: &'static str,
    defaults: &'static [(&'static str, &'static str)],
    run: Run,
}

/// Settings that do not change the results.
#[derive(Debug, Clone, Copy, Default)]
pub struct Context {
    pub threads: usize,
}

impl Experiment {
    /// Parameters with this experiment's defaults.
    pub fn params(&self, force: bool) -> Params {
        let mut p = Params::new().force(force);
        for (k, v) in [("trials", "10000"), ("seed", "1")].iter().chain(self.defaults) {
            p.set_default(k, v).expect("experiment defaults are valid");
        }
        p
    }

    pub fn run(&self, p: &Params, ctx: &Context) -> Result<Outcome, RunError> {
        (self.run)(p, ctx)
    }
}

pub fn find(id: &str) -> Option<&'static Experiment> {
    EXPERIMENTS.iter().find(|e| e.id == id)
}

const COVERAGE_GRID: (&str, &str) = ("gamma_db", "-10:2.5:20");

pub const EXPERIMENTS: &[Experiment] = &[
    Experiment {
        id: "fig8",
        about: "constant-speed handoff: equivalent-UAV integral vs the single-tier reference form",
        defaults: &[("lambda0_per_km2", "1, 2"), ("v0_kmh", "25, 45"), ("t_s", "0:5:30")],
        run: fig8,
    },
    Experiment {
        id: "fig9a",
        about: "DMS handoff lower bound vs Monte Carlo",
        defaults: &[("model", "dms"), ("lambda0_per_km2", "1, 2"), ("v0_kmh", "25, 45"), ("t_s", "0:5:30"), ("h_m", "150")],
        run: handoff_vs_bound,
    },
    Experiment {
        id: "fig9b",
        about: "SMS handoff lower bound vs Monte Carlo",
        defaults: &[("model", "sms"), ("lambda0_per_km2", "1, 2"), ("v0_kmh", "25, 45"), ("t_s", "0:5:30"), ("h_m", "150")],
        run: handoff_vs_bound,
    },
    Experiment {
        id: "fig10",
        about: "handoff under DMS vs SMS, and SMS vs the equivalent static network",
        defaults: &[("lambda0_per_km2", "1"), ("v0_kmh", "45"), ("t_s", "3:3:30"), ("h_m", "150")],
        run: fig10,
    },
    Experiment {
        id: "fig11",
        about: "coverage with handoffs: upper bound vs Monte Carlo",
        defaults: &[
            ("model", "sms"), ("lambda0_per_km2", "20"), ("v0_kmh", "45"), ("alpha", "2.4"),
            ("antennas", "1, 2, 4"), ("rician_k", "1"), ("h_m", "150"), ("zeta", "0.1, 0.7"),
            ("t_s", "3"), COVERAGE_GRID, ("handoff_p", "0.15"),
        ],
        run: fig11,
    },
    Experiment {
        id: "fig12",
        about: "coverage of Delaunay CoMP vs nearest-UAV association, moving and static",
        defaults: &[
            ("model", "sms"), ("lambda0_per_km2", "20"), ("v0_kmh", "45"), ("alpha", "2.6"),
            ("antennas", "2"), ("rician_k", "1"), ("h_m", "150"), ("zeta", "0, 0.5"), ("t_s", "3"),
            COVERAGE_GRID,
        ],
        run: fig12,
    },
    Experiment {
        id: "fig13",
        about: "coverage under fractional power control",
        defaults: &[
            ("lambda0_per_km2", "20"), ("alpha", "2.4"), ("antennas", "2"), ("rician_k", "1"),
            ("h_m", "150"), ("pc_exponent", "0, 0.2, 0.5, 0.8"), COVERAGE_GRID,
        ],
        run: fig13,
    },
    Experiment {
        id: "fig14",
        about: "coverage with random UAV altitudes vs the mean altitude",
        defaults: &[
            ("lambda0_per_km2", "20"), ("alpha", "2.4"), ("antennas", "2"), ("rician_k", "1"),
            ("h_m", "150, 100"), ("h_spread_m", "10"), COVERAGE_GRID,
        ],
        run: fig14,
    },
    Experiment {
        id: "fig15",
        about: "coverage with handoffs under eta-mu fading",
        defaults: &[
            ("model", "sms"), ("lambda0_per_km2", "20"), ("v0_kmh", "25, 45"), ("alpha", "2.4"),
            ("antennas", "2"), ("h_m", "150"), ("zeta", "0.4"), ("t_s", "3"), ("mu", "1"),
            ("eta", "0.5, 0.9, 0.99"), COVERAGE_GRID,
        ],
        run: fig15,
    },
    Experiment {
        id: "fig16",
        about: "spectral efficiency vs path-loss exponent and antenna count",
        defaults: &[
            ("lambda0_per_km2", "20"), ("alpha", "2.4:0.4:3.6"), ("antennas", "1, 2, 4"),
            ("rician_k", "1"), ("h_m", "150"),
        ],
        run: fig16,
    },
    Experiment {
        id: "fig17",
        about: "coverage of Delaunay CoMP vs hexagonal-cell CoMP",
        defaults: &[
            ("lambda0_per_km2", "20"), ("alpha", "2.4"), ("antennas", "2"), ("rician_k", "1"),
            ("h_m", "150"), ("gamma_db", "-10:2.5:5"),
        ],
        run: fig17,
    },
    Experiment {
        id: "custom",
        about: "handoff and coverage for one free parameter set",
        defaults: &[
            ("scheme", "delaunay"), ("model", "sms"), ("frame", "uavs"), ("lambda0_per_km2", "20"),
            ("v0_kmh", "45"), ("alpha", "2.4"), ("antennas", "2"), ("rician_k", "1"), ("h_m", "150"),
            ("h_spread_m", "0"), ("zeta", "0"), ("pc_exponent", "0"), ("t_s", "0, 3"), COVERAGE_GRID,
        ],
        run: custom,
    },
];

fn kmh(v: f64) -> f64 {
    v / 3.6
}

fn per_m2(lambda_per_km2: f64) -> f64 {
    lambda_per_km2 * 1e-6
}

fn linear(gamma_db: f64) -> f64 {
    10f64.powf(gamma_db / 10.0)
}

/// Rayleigh scale whose mean speed is `v`.
fn sigma_for_mean(v: f64) -> f64 {
    v * (2.0 / PI).sqrt()
}

fn mobility(p: &Params, v0_kmh: f64) -> Result<MobilityModel, RunError> {
    let v = kmh(v0_kmh);
    Ok(match p.word("model")? {
        "dms" => MobilityModel::dms(sigma_for_mean(v))?,
        _ => MobilityModel::sms(v)?,
    })
}

fn channel(p: &Params, alpha: f64, antennas: f64) -> Result<ChannelSpec, RunError> {
    if antennas.fract() != 0.0 {
        return Err(ConfigError("`antennas` must be an integer".into()).into());
    }
    let fading = match (p.opt_num("eta")?, p.opt_num("mu")?) {
        (Some(eta), Some(mu)) => Fading::EtaMu { eta, mu },
        _ => Fading::NakagamiRician,
    };
    let spec = ChannelSpec {
        antennas: antennas as u32,
        rician_k: p.opt_num("rician_k")?.unwrap_or(1.0),
        ple: alpha,
        tx_power: 1.0,
        pc_exponent: p.opt_num("pc_exponent")?.unwrap_or(0.0),
        fading,
    };
    spec.validate()?;
    Ok(spec)
}

fn mc(p: &Params, ctx: &Context, frame: Frame) -> Result<McOptions, RunError> {
    Ok(McOptions {
        trials: p.count("trials")?,
        seed: p.count("seed")?,
        threads: ctx.threads,
        frame,
        ..McOptions::default()
    })
}

/// Largest displacement over the grid, for UAVs or for the moving user.
fn reach(model: &MobilityModel, ts: &[f64], frame: Frame) -> f64 {
    let t_max = ts.iter().cloned().fold(0.0, f64::max);
    let one = model.speed_quantile(1e-9) * t_max;
    match frame {
        Frame::UeMovesEquivalent => 3.0 * one,
        _ => one,
    }
}

fn handoff_bound(model: &MobilityModel, lambda0: f64, t: f64) -> Result<f64, RunError> {
    let scn = HandoffScenario { lambda0, t, model: *model, zeta: 0.0 };
    let opts = HandoffOptions::default();
    Ok(match model.kind {
        SpeedLaw::Dms { .. } => handoff_lb_dms(&scn, &opts)?,
        SpeedLaw::Sms { .. } => handoff_lb_sms(&scn, &opts)?,
    })
}

/// Half-width for the difference of two estimates.
fn diff_ci(a: &Estimate, b: &Estimate) -> f64 {
    a.ci95.hypot(b.ci95)
}

fn est_cols(prefix: &str) -> [String; 2] {
    [format!("p_{prefix}"), format!("ci95_{prefix}")]
}

fn fig8(p: &Params, _: &Context) -> Result<Outcome, RunError> {
    let quad = QuadratureSpec::default();
    let ts = p.nums("t_s")?;
    let mut out = Outcome::default();
    for &lambda in p.nums("lambda0_per_km2")? {
        for &v in p.nums("v0_kmh")? {
            let mut table = Table::new(format!("lambda{lambda}_v{v}"), &["t_s", "p_equivalent", "p_static_network", "absdiff"]);
            let mut worst = 0.0f64;
            for &t in ts {
                let a = handoff_constant_speed(per_m2(lambda), kmh(v), t, &quad)?;
                let b = handoff_static_network(2.0 * per_m2(lambda), kmh(v), t, &quad)?;
                worst = worst.max((a - b).abs());
                table.rows.push(vec![t, a, b, (a - b).abs()]);
            }
            out.check(
                format!("identity lambda0={lambda}/km2 v={v}km/h"),
                worst < 1e-6,
                format!("max |diff| = {worst:.2e} (limit 1e-6)"),
                true,
            );
            out.tables.push(table);
        }
    }
    Ok(out)
}

fn handoff_vs_bound(p: &Params, ctx: &Context) -> Result<Outcome, RunError> {
    let ts = p.nums("t_s")?;
    let h = p.num("h_m")?;
    let mut out = Outcome::default();
    for &lambda in p.nums("lambda0_per_km2")? {
        for &v in p.nums("v0_kmh")? {
            let model = mobility(p, v)?;
            let net = Network::new(per_m2(lambda), h, ChannelSpec::default());
            let opts = McOptions { reach: reach(&model, ts, Frame::UavsMove), ..mc(p, ctx, Frame::UavsMove)? };
            let est = estimate_handoff_curve(Scheme::DelaunayComp, &net, &model, ts, &opts)?;
            let name = format!("{}_lambda{lambda}_v{v}", p.word("model")?);
            let mut table = Table::new(name.clone(), &["t_s", "p_lb", "p_mc", "ci95_mc"]);
            let (mut slack, mut gap) = (f64::INFINITY, 0.0f64);
            for (&t, e) in ts.iter().zip(&est) {
                let lb = handoff_bound(&model, per_m2(lambda), t)?;
                if t > 0.0 {
                    slack = slack.min(e.mean + e.bound_margin() - lb);
                    gap = gap.max((e.mean - lb).abs());
                }
                table.rows.push(vec![t, lb, e.mean, e.ci95]);
            }
            out.check(format!("{name}: bound <= mc + 2ci"), slack >= 0.0, format!("min slack {slack:.4}"), true);
            out.check(format!("{name}: |mc - bound| < 0.05"), gap < 0.05, format!("max gap {gap:.4}"), false);
            out.tables.push(table);
        }
    }
    Ok(out)
}

fn handoff_table(name: &str, ts: &[f64], est: &[Estimate]) -> Table {
    let mut table = Table::new(name, &["t_s", "p_mc", "ci95_mc"]);
    for (&t, e) in ts.iter().zip(est) {
        table.rows.push(vec![t, e.mean, e.ci95]);
    }
    table
}

fn fig10(p: &Params, ctx: &Context) -> Result<Outcome, RunError> {
    let ts = p.nums("t_s")?;
    let lambda = per_m2(p.num("lambda0_per_km2")?);
    let v = kmh(p.num("v0_kmh")?);
    let net = Network::new(lambda, p.num("h_m")?, ChannelSpec::default());
    let dms = MobilityModel::dms(sigma_for_mean(v))?;
    let slow = MobilityModel::dms(5.0 * sigma_for_mean(v) / 9.0)?;
    let sms = MobilityModel::sms(v)?;
    let curve = |scheme: Scheme, model: &MobilityModel, frame: Frame| -> Result<Vec<Estimate>, RunError> {
        let opts = McOptions { reach: reach(model, ts, frame), ..mc(p, ctx, frame)? };
        Ok(estimate_handoff_curve(scheme, &net, model, ts, &opts)?)
    };
    let dms_est = curve(Scheme::DelaunayComp, &dms, Frame::UavsMove)?;
    let slow_est = curve(Scheme::DelaunayComp, &slow, Frame::UavsMove)?;
    let sms_est = curve(Scheme::DelaunayComp, &sms, Frame::UavsMove)?;
    let static_est = curve(Scheme::DelaunayComp, &sms, Frame::UeMovesEquivalent)?;
    let sms_vor = curve(Scheme::VoronoiNearest, &sms, Frame::UavsMove)?;
    let static_vor = curve(Scheme::VoronoiNearest, &sms, Frame::UeMovesEquivalent)?;

    let mut out = Outcome::default();
    let mut compare = |name: &str, a: &[Estimate], b: &[Estimate], ok: &dyn Fn(&Estimate, &Estimate) -> bool| {
        let bad: Vec<String> = ts
            .iter()
            .zip(a.iter().zip(b))
            .filter(|(_, (x, y))| !ok(x, y))
            .map(|(t, (x, y))| format!("t={t}: {:.4} vs {:.4}", x.mean, y.mean))
            .collect();
        let detail = if bad.is_empty() { "all grid points".to_string() } else { bad.join("; ") };
        out.check(name.to_string(), bad.is_empty(), detail, false);
    };
    compare("dms(mean v0) >= sms(v0) - 2ci", &dms_est, &sms_est, &|a, b| a.mean >= b.mean - 2.0 * diff_ci(a, b));
    compare("dms(mean 5v0/9) <= sms(v0) + 2ci", &slow_est, &sms_est, &|a, b| a.mean <= b.mean + 2.0 * diff_ci(a, b));
    compare("delaunay: sms == static within 2ci", &sms_est, &static_est, &|a, b| (a.mean - b.mean).abs() <= 2.0 * diff_ci(a, b));
    compare("voronoi: sms == static within 2ci", &sms_vor, &static_vor, &|a, b| (a.mean - b.mean).abs() <= 2.0 * diff_ci(a, b));

    for (name, est) in [
        ("dms", &dms_est),
        ("dms_slow", &slow_est),
        ("sms_delaunay", &sms_est),
        ("static_delaunay", &static_est),
        ("sms_voronoi", &sms_vor),
        ("static_voronoi", &static_vor),
    ] {
        out.tables.push(handoff_table(name, ts, est));
    }
    Ok(out)
}

/// Per-point comparisons over a coverage grid, summarised in one check.
fn grid_check(
    out: &mut Outcome,
    name: String,
    gammas: &[f64],
    bound: bool,
    mut ok: impl FnMut(usize) -> Result<bool, String>,
) {
    let mut bad = Vec::new();
    for (i, g) in gammas.iter().enumerate() {
        match ok(i) {
            Ok(true) => {}
            Ok(false) => bad.push(format!("{g} dB")),
            Err(msg) => bad.push(format!("{g} dB ({msg})")),
        }
    }
    let detail = if bad.is_empty() {
        format!("{} grid points", gammas.len())
    } else {
        format!("fails at {}", bad.join(", "))
    };
    out.check(name, bad.is_empty(), detail, bound);
}

fn coverage_table(name: String, gammas: &[f64], series: &[(&str, &[Estimate])]) -> Table {
    let mut header = vec!["gamma_db".to_string()];
    for (label, _) in series {
        header.extend(est_cols(label));
    }
    let mut table = Table { name, header, rows: Vec::new() };
    for (i, &g) in gammas.iter().enumerate() {
        let mut row = vec![g];
        for (_, est) in series {
            row.push(est[i].mean);
            row.push(est[i].ci95);
        }
        table.rows.push(row);
    }
    table
}

fn fig11(p: &Params, ctx: &Context) -> Result<Outcome, RunError> {
    let gammas = p.nums("gamma_db")?;
    let linear_g: Vec<f64> = gammas.iter().map(|&g| linear(g)).collect();
    let lambda = per_m2(p.num("lambda0_per_km2")?);
    let h = p.num("h_m")?;
    let t = p.num("t_s")?;
    let model = mobility(p, p.num("v0_kmh")?)?;
    let fixed_p = p.num("handoff_p")?;
    let handoff_lb = handoff_bound(&model, lambda, t)?;
    let mut out = Outcome::default();
    for &m in p.nums("antennas")? {
        let spec = channel(p, p.num("alpha")?, m)?;
        let net = Network::new(lambda, h, spec);
        let ub: Vec<f64> = linear_g
            .iter()
            .map(|&g| coverage_ub(&CoverageScenario { gamma: g, lambda0: lambda, spec, h }, &CoverageOptions::default()))
            .collect::<Result<_, _>>()?;
        for &zeta in p.nums("zeta")? {
            let hand = HandoffScenario { lambda0: lambda, t, model, zeta };
            let est = estimate_coverage_curve(Scheme::DelaunayComp, &net, &hand, &linear_g, &mc(p, ctx, Frame::UavsMove)?)?;
            let name = format!("zeta{zeta}_m{m}");
            let mut table = Table::new(name.clone(), &["gamma_db", "p_ub_fixed_handoff", "p_ub", "p_mc", "ci95_mc"]);
            let mut ub_h = Vec::new();
            for (i, &g) in gammas.iter().enumerate() {
                let fixed = coverage_with_handoff(fixed_p, ub[i], zeta)?;
                let with_lb = coverage_with_handoff(handoff_lb, ub[i], zeta)?;
                ub_h.push(with_lb);
                table.rows.push(vec![g, fixed, with_lb, est[i].mean, est[i].ci95]);
            }
            grid_check(&mut out, format!("{name}: mc - 2ci <= upper bound"), gammas, true, |i| {
                Ok(est[i].mean - est[i].bound_margin() <= ub_h[i])
            });
            out.tables.push(table);
        }
    }
    Ok(out)
}

fn fig12(p: &Params, ctx: &Context) -> Result<Outcome, RunError> {
    let gammas = p.nums("gamma_db")?;
    let linear_g: Vec<f64> = gammas.iter().map(|&g| linear(g)).collect();
    let lambda = per_m2(p.num("lambda0_per_km2")?);
    let spec = channel(p, p.num("alpha")?, p.num("antennas")?)?;
    let net = Network::new(lambda, p.num("h_m")?, spec);
    let model = mobility(p, p.num("v0_kmh")?)?;
    let t = p.num("t_s")?;
    let mut out = Outcome::default();
    let window = |i: usize| (-5.0..=15.0).contains(&gammas[i]);
    for &zeta in p.nums("zeta")? {
        let hand = HandoffScenario { lambda0: lambda, t, model, zeta };
        let curve = |scheme, frame| -> Result<Vec<Estimate>, RunError> {
            Ok(estimate_coverage_curve(scheme, &net, &hand, &linear_g, &mc(p, ctx, frame)?)?)
        };
        let dm = curve(Scheme::DelaunayComp, Frame::UavsMove)?;
        let ds = curve(Scheme::DelaunayComp, Frame::UeMovesConstant)?;
        let vm = curve(Scheme::VoronoiNearest, Frame::UavsMove)?;
        let vs = curve(Scheme::VoronoiNearest, Frame::UeMovesConstant)?;
        for (label, a, b) in [("moving", &dm, &vm), ("static", &ds, &vs)] {
            grid_check(&mut out, format!("zeta={zeta} {label}: delaunay > voronoi + 2ci on [-5, 15] dB"), gammas, false, |i| {
                Ok(!window(i) || a[i].mean - b[i].mean > 2.0 * diff_ci(&a[i], &b[i]))
            });
        }
        if zeta == 0.0 {
            for (label, a, b) in [("delaunay", &dm, &ds), ("voronoi", &vm, &vs)] {
                grid_check(&mut out, format!("zeta=0 {label}: moving == static within 2ci"), gammas, false, |i| {
                    Ok((a[i].mean - b[i].mean).abs() <= 2.0 * diff_ci(&a[i], &b[i]))
                });
            }
        }
        out.tables.push(coverage_table(
            format!("zeta{zeta}"),
            gammas,
            &[("delaunay_moving", &dm), ("delaunay_static", &ds), ("voronoi_moving", &vm), ("voronoi_static", &vs)],
        ));
    }
    Ok(out)
}

/// Coverage of a static user, no handoff cost.
fn static_coverage(scheme: Scheme, net: &Network, gammas: &[f64], opts: &McOptions) -> Result<Vec<Estimate>, RunError> {
    let hand = HandoffScenario { lambda0: net.lambda0, t: 0.0, model: MobilityModel::sms(1.0)?, zeta: 0.0 };
    let linear_g: Vec<f64> = gammas.iter().map(|&g| linear(g)).collect();
    Ok(estimate_coverage_curve(scheme, net, &hand, &linear_g, opts)?)
}

fn fig13(p: &Params, ctx: &Context) -> Result<Outcome, RunError> {
    let gammas = p.nums("gamma_db")?;
    let lambda = per_m2(p.num("lambda0_per_km2")?);
    let base = channel(&without(p, "pc_exponent"), p.num("alpha")?, p.num("antennas")?)?;
    let opts = mc(p, ctx, Frame::UavsMove)?;
    let mut curves = Vec::new();
    let mut out = Outcome::default();
    for &pc in p.nums("pc_exponent")? {
        let net = Network::new(lambda, p.num("h_m")?, ChannelSpec { pc_exponent: pc, ..base });
        let est = static_coverage(Scheme::DelaunayComp, &net, gammas, &opts)?;
        out.tables.push(coverage_table(format!("pc{pc}"), gammas, &[("mc", &est)]));
        curves.push((pc, est));
    }
    let strong: Vec<&Vec<Estimate>> = curves.iter().filter(|(pc, _)| *pc >= 0.2).map(|(_, e)| e).collect();
    if strong.len() > 1 {
        grid_check(&mut out, "spread over pc_exponent >= 0.2 < 0.02 + 2ci".into(), gammas, false, |i| {
            let hi = strong.iter().max_by(|a, b| a[i].mean.total_cmp(&b[i].mean)).unwrap();
            let lo = strong.iter().min_by(|a, b| a[i].mean.total_cmp(&b[i].mean)).unwrap();
            Ok(hi[i].mean - lo[i].mean < 0.02 + 2.0 * diff_ci(&hi[i], &lo[i]))
        });
    }
    if let Some((_, zero)) = curves.iter().find(|(pc, _)| *pc == 0.0) {
        for (pc, est) in curves.iter().filter(|(pc, _)| *pc > 0.0) {
            grid_check(&mut out, format!("pc_exponent={pc} >= pc_exponent=0 - 2ci"), gammas, false, |i| {
                Ok(est[i].mean >= zero[i].mean - 2.0 * diff_ci(&est[i], &zero[i]))
            });
        }
    }
    Ok(out)
}

/// A copy of `p` without `key`, for building a base from list-valued keys.
fn without(p: &Params, key: &str) -> Params {
    let mut q = Params::new().force(true);
    for (k, v) in p.iter() {
        if k != key {
            q.set_default(k, &v.to_string()).expect("values were already valid");
        }
    }
    q
}

fn fig14(p: &Params, ctx: &Context) -> Result<Outcome, RunError> {
    let gammas = p.nums("gamma_db")?;
    let linear_g: Vec<f64> = gammas.iter().map(|&g| linear(g)).collect();
    let spread = p.num("h_spread_m")?;
    let spec = channel(p, p.num("alpha")?, p.num("antennas")?)?;
    let mut out = Outcome::default();
    for &h in p.nums("h_m")? {
        if spread >= h {
            return Err(ConfigError(format!("h_spread_m must be below h_m = {h}")).into());
        }
        let net = Network { lambda0: per_m2(p.num("lambda0_per_km2")?), heights: (h - spread, h + spread), spec };
        let (varied, fixed) = estimate_height_sensitivity(Scheme::DelaunayComp, &net, &linear_g, &mc(p, ctx, Frame::UavsMove)?)?;
        grid_check(&mut out, format!("h={h}+-{spread}: |varied - fixed| < 0.01 + 2ci"), gammas, false, |i| {
            Ok((varied[i].mean - fixed[i].mean).abs() < 0.01 + 2.0 * diff_ci(&varied[i], &fixed[i]))
        });
        out.tables.push(coverage_table(format!("h{h}"), gammas, &[("varied", &varied), ("mean_height", &fixed)]));
    }
    Ok(out)
}

fn fig15(p: &Params, ctx: &Context) -> Result<Outcome, RunError> {
    let gammas = p.nums("gamma_db")?;
    let linear_g: Vec<f64> = gammas.iter().map(|&g| linear(g)).collect();
    let lambda = per_m2(p.num("lambda0_per_km2")?);
    let mu = p.num("mu")?;
    let mut etas = p.nums("eta")?.to_vec();
    etas.sort_by(f64::total_cmp);
    let base = channel(&without(&without(p, "eta"), "mu"), p.num("alpha")?, p.num("antennas")?)?;
    let h = p.num("h_m")?;
    let mut out = Outcome::default();
    for &v in p.nums("v0_kmh")? {
        let hand = HandoffScenario { lambda0: lambda, t: p.num("t_s")?, model: mobility(p, v)?, zeta: p.num("zeta")? };
        let curve = |fading| -> Result<Vec<Estimate>, RunError> {
            let net = Network::new(lambda, h, ChannelSpec { fading, ..base });
            Ok(estimate_coverage_curve(Scheme::DelaunayComp, &net, &hand, &linear_g, &mc(p, ctx, Frame::UavsMove)?)?)
        };
        let nakagami = curve(Fading::Nakagami { m: 2.0 * mu })?;
        let mut by_eta = Vec::new();
        for &eta in &etas {
            let est = curve(Fading::EtaMu { eta, mu })?;
            out.tables.push(coverage_table(format!("v{v}_eta{eta}"), gammas, &[("mc", &est)]));
            by_eta.push(est);
        }
        out.tables.push(coverage_table(format!("v{v}_nakagami"), gammas, &[("mc", &nakagami)]));
        if let (Some(&eta), Some(est)) = (etas.last(), by_eta.last()) {
            if eta >= 0.99 {
                grid_check(&mut out, format!("v={v}: eta={eta} matches nakagami m={} within 2ci", 2.0 * mu), gammas, false, |i| {
                    Ok((est[i].mean - nakagami[i].mean).abs() <= 2.0 * diff_ci(&est[i], &nakagami[i]))
                });
            }
        }
        for w in by_eta.windows(2).zip(etas.windows(2)) {
            let ([a, b], [ea, eb]) = (w.0, w.1) else { unreachable!() };
            grid_check(&mut out, format!("v={v}: eta={eb} >= eta={ea} - 2ci"), gammas, false, |i| {
                Ok(b[i].mean >= a[i].mean - 2.0 * diff_ci(&a[i], &b[i]))
            });
        }
    }
    Ok(out)
}

fn fig16(p: &Params, ctx: &Context) -> Result<Outcome, RunError> {
    let alphas = p.nums("alpha")?;
    let ms = p.nums("antennas")?;
    let lambda = per_m2(p.num("lambda0_per_km2")?);
    let h = p.num("h_m")?;
    let opts = mc(p, ctx, Frame::UavsMove)?;
    let mut grid = Vec::new();
    let mut out = Outcome::default();
    for &m in ms {
        let mut table = Table::new(format!("m{m}"), &["alpha", "se_bps_hz", "ci95_se"]);
        let mut row = Vec::new();
        for &alpha in alphas {
            let net = Network::new(lambda, h, channel(p, alpha, m)?);
            let e = estimate_spectral_efficiency(Scheme::DelaunayComp, &net, &opts)?;
            table.rows.push(vec![alpha, e.mean, e.ci95]);
            row.push(e);
        }
        out.tables.push(table);
        grid.push(row);
    }
    for (row, m) in grid.iter().zip(ms) {
        let bad: Vec<String> = row
            .windows(2)
            .zip(alphas.windows(2))
            .filter(|(e, _)| e[1].mean < e[0].mean - 2.0 * diff_ci(&e[0], &e[1]))
            .map(|(_, a)| format!("{} -> {}", a[0], a[1]))
            .collect();
        out.check(format!("M={m}: se nondecreasing in alpha"), bad.is_empty(), if bad.is_empty() { "ok".into() } else { bad.join(", ") }, false);
    }
    for (j, &alpha) in alphas.iter().enumerate() {
        let bad: Vec<String> = grid
            .windows(2)
            .zip(ms.windows(2))
            .filter(|(g, _)| g[1][j].mean < g[0][j].mean - 2.0 * diff_ci(&g[0][j], &g[1][j]))
            .map(|(_, m)| format!("M {} -> {}", m[0], m[1]))
            .collect();
        out.check(format!("alpha={alpha}: se nondecreasing in M"), bad.is_empty(), if bad.is_empty() { "ok".into() } else { bad.join(", ") }, false);
    }
    Ok(out)
}

fn fig17(p: &Params, ctx: &Context) -> Result<Outcome, RunError> {
    let gammas = p.nums("gamma_db")?;
    let lambda = per_m2(p.num("lambda0_per_km2")?);
    let net = Network::new(lambda, p.num("h_m")?, channel(p, p.num("alpha")?, p.num("antennas")?)?);
    let opts = mc(p, ctx, Frame::UavsMove)?;
    let del = static_coverage(Scheme::DelaunayComp, &net, gammas, &opts)?;
    let hex = static_coverage(Scheme::hexagonal(lambda), &net, gammas, &opts)?;
    let mut out = Outcome::default();
    grid_check(&mut out, "delaunay > hexagonal".into(), gammas, false, |i| Ok(del[i].mean > hex[i].mean));
    out.tables.push(coverage_table("delaunay".into(), gammas, &[("mc", &del)]));
    out.tables.push(coverage_table("hexagonal".into(), gammas, &[("mc", &hex)]));
    Ok(out)
}

fn custom(p: &Params, ctx: &Context) -> Result<Outcome, RunError> {
    let gammas = p.nums("gamma_db")?;
    let linear_g: Vec<f64> = gammas.iter().map(|&g| linear(g)).collect();
    let ts = p.nums("t_s")?;
    let lambda = per_m2(p.num("lambda0_per_km2")?);
    let h = p.num("h_m")?;
    let spread = p.num("h_spread_m")?;
    if spread >= h {
        return Err(ConfigError("h_spread_m must be below h_m".into()).into());
    }
    let spec = channel(p, p.num("alpha")?, p.num("antennas")?)?;
    let net = Network { lambda0: lambda, heights: (h - spread, h + spread), spec };
    let model = mobility(p, p.num("v0_kmh")?)?;
    let scheme = match p.word("scheme")? {
        "delaunay" => Scheme::DelaunayComp,
        "voronoi" => Scheme::VoronoiNearest,
        _ => Scheme::hexagonal(lambda),
    };
    let frame = match p.word("frame")? {
        "uavs" => Frame::UavsMove,
        "ue_equivalent" => Frame::UeMovesEquivalent,
        _ => Frame::UeMovesConstant,
    };
    let zeta = p.num("zeta")?;
    let with_bounds = scheme == Scheme::DelaunayComp && frame == Frame::UavsMove;
    let opts = McOptions { reach: reach(&model, ts, frame), ..mc(p, ctx, frame)? };
    let mut out = Outcome::default();

    let handoff = estimate_handoff_curve(scheme, &net, &model, ts, &opts)?;
    let mut lbs = Vec::new();
    let header: &[&str] = if with_bounds { &["t_s", "p_lb", "p_mc", "ci95_mc"] } else { &["t_s", "p_mc", "ci95_mc"] };
    let mut table = Table::new("handoff", header);
    for (&t, e) in ts.iter().zip(&handoff) {
        if with_bounds {
            let lb = handoff_bound(&model, lambda, t)?;
            lbs.push(lb);
            table.rows.push(vec![t, lb, e.mean, e.ci95]);
        } else {
            table.rows.push(vec![t, e.mean, e.ci95]);
        }
    }
    out.tables.push(table);
    if with_bounds {
        grid_check(&mut out, "handoff: bound <= mc + 2ci".into(), ts, true, |i| {
            Ok(lbs[i] <= handoff[i].mean + handoff[i].bound_margin())
        });
    }

    let analytic_cov = with_bounds && spread == 0.0 && spec.pc_exponent == 0.0 && spec.fading == Fading::NakagamiRician;
    for (k, &t) in ts.iter().enumerate() {
        let hand = HandoffScenario { lambda0: lambda, t, model, zeta };
        let est = estimate_coverage_curve(scheme, &net, &hand, &linear_g, &opts)?;
        let name = format!("coverage_t{t}");
        if analytic_cov {
            let mut table = Table::new(name.clone(), &["gamma_db", "p_ub", "p_mc", "ci95_mc"]);
            let mut ubs = Vec::new();
            for (i, &g) in gammas.iter().enumerate() {
                let c = coverage_ub(&CoverageScenario { gamma: linear_g[i], lambda0: lambda, spec, h }, &CoverageOptions::default())?;
                let ub = coverage_with_handoff(lbs[k], c, zeta)?;
                ubs.push(ub);
                table.rows.push(vec![g, ub, est[i].mean, est[i].ci95]);
            }
            grid_check(&mut out, format!("{name}: mc - 2ci <= upper bound"), gammas, true, |i| {
                Ok(est[i].mean - est[i].bound_margin() <= ubs[i])
            });
            out.tables.push(table);
        } else {
            out.tables.push(coverage_table(name, gammas, &[("mc", &est)]));
        }
    }
    Ok(out)
}
