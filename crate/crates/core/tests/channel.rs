use a2g_core::channel::{interferer_gamma_params, sample_fading, signal_gamma_params, ChannelSpec, Fading, Role};
use a2g_core::point_process::trial_rng;

const N: usize = 400_000;

fn moments(spec: &ChannelSpec, role: Role, seed: u64) -> (f64, f64) {
    let mut rng = trial_rng(seed, 0);
    let xs: Vec<f64> = (0..N).map(|_| sample_fading(spec, role, &mut rng).unwrap()).collect();
    let mean = xs.iter().sum::<f64>() / N as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (N - 1) as f64;
    (mean, var)
}

fn close(got: f64, want: f64, rel: f64) -> bool {
    (got / want - 1.0).abs() < rel
}

#[test]
fn rician_serving_gain_moments() {
    for (m, k) in [(1, 0.0), (2, 1.0), (4, 3.0)] {
        let spec = ChannelSpec { antennas: m, rician_k: k, ..ChannelSpec::default() };
        let (mean, var) = moments(&spec, Role::Serving, 10 + m as u64);
        let m = m as f64;
        assert!(close(mean, m * (1.0 + k), 0.01), "mean {mean}");
        assert!(close(var, m * (1.0 + 2.0 * k), 0.02), "var {var}");
        let g = signal_gamma_params(&spec).unwrap();
        assert!(close(g.mean(), m * (1.0 + k), 1e-12));
        assert!(close(g.variance(), m * (1.0 + 2.0 * k), 1e-12));
    }
}

#[test]
fn interferer_gain_matches_its_gamma_fit() {
    for (m, k) in [(1, 1.0), (2, 1.0), (4, 1.0), (2, 0.0)] {
        let spec = ChannelSpec { antennas: m, rician_k: k, ..ChannelSpec::default() };
        let (mean, var) = moments(&spec, Role::Interfering, 20 + m as u64);
        let g = interferer_gamma_params(&spec).unwrap();
        assert!(close(mean, 1.0 + k, 0.01), "M={m}: mean {mean}");
        assert!(close(var, g.variance(), 0.03), "M={m}: var {var} vs {}", g.variance());
    }
}

#[test]
fn eta_mu_element_moments() {
    for (eta, mu) in [(0.5, 1.0), (0.9, 1.0), (0.99, 0.75), (0.2, 2.0)] {
        let spec = ChannelSpec { antennas: 1, fading: Fading::EtaMu { eta, mu }, ..ChannelSpec::default() };
        let (mean, var) = moments(&spec, Role::Serving, 30);
        let af = (1.0 + eta * eta) / (mu * (1.0 + eta) * (1.0 + eta));
        assert!(close(mean, 1.0, 0.01), "mean {mean}");
        assert!(close(var, af, 0.03), "eta {eta} mu {mu}: var {var} vs {af}");
    }
}

#[test]
fn eta_mu_at_unit_eta_is_nakagami_two_mu() {
    let mu = 1.0;
    let a = ChannelSpec { antennas: 2, fading: Fading::EtaMu { eta: 1.0, mu }, ..ChannelSpec::default() };
    let b = ChannelSpec { antennas: 2, fading: Fading::Nakagami { m: 2.0 * mu }, ..ChannelSpec::default() };
    for role in [Role::Serving, Role::Interfering] {
        let (ma, va) = moments(&a, role, 40);
        let (mb, vb) = moments(&b, role, 41);
        assert!(close(ma, mb, 0.01) && close(va, vb, 0.03), "{role:?}: {ma} {va} vs {mb} {vb}");
    }
}
