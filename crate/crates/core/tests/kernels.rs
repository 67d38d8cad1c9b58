use a2g_core::analytic::{
    exp_toeplitz_log_norm1, exp_toeplitz_norm1, gauss_2f1, joint_distance_pdf, toeplitz_entries,
    ToeplitzExpProblem,
};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dense(entries: &[f64]) -> DMatrix<f64> {
    let n = entries.len();
    DMatrix::from_fn(n, n, |i, j| if i >= j { entries[i - j] } else { 0.0 })
}

fn norm1(m: &DMatrix<f64>) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

// exp(e0 I + N) = e^e0 sum_{k < n} N^k / k!, with N nilpotent
fn nilpotent_sum(entries: &[f64]) -> DMatrix<f64> {
    let n = entries.len();
    let mut strict = entries.to_vec();
    strict[0] = 0.0;
    let nil = dense(&strict);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..n {
        term = &term * &nil / k as f64;
        sum += &term;
    }
    sum * entries[0].exp()
}

#[test]
fn toeplitz_norm_matches_dense_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let dim = rng.gen_range(1..=12);
        let entries: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let got = exp_toeplitz_norm1(&ToeplitzExpProblem::new(entries.clone()).unwrap());
        let scaling_squaring = norm1(&dense(&entries).exp());
        let series = norm1(&nilpotent_sum(&entries));
        assert!((got - scaling_squaring).abs() <= 1e-10 * scaling_squaring, "{entries:?}: {got} vs {scaling_squaring}");
        assert!((got - series).abs() <= 1e-10 * series);
    }
}

#[test]
fn toeplitz_norm_on_coverage_entries() {
    // entries of the kind the coverage bound builds, for a few thresholds
    for &gamma in &[0.1, 1.0, 3.0] {
        for dim in [3, 6, 12] {
            let e = toeplitz_entries(dim - 1, 250.0, gamma, 2.4, 1.7, 1.3, 0.8, 2e-5).unwrap();
            let got = exp_toeplitz_norm1(&ToeplitzExpProblem::new(e.clone()).unwrap());
            let want = norm1(&dense(&e).exp());
            assert!((got - want).abs() <= 1e-10 * want, "gamma {gamma} dim {dim}: {got} vs {want}");
        }
    }
}

#[test]
fn toeplitz_log_norm_survives_overflow() {
    let p = ToeplitzExpProblem::new(vec![800.0, 1.0, 0.5]).unwrap();
    assert!(exp_toeplitz_norm1(&p).is_infinite() || exp_toeplitz_norm1(&p) > 1e300);
    let small = ToeplitzExpProblem::new(vec![0.0, 1.0, 0.5]).unwrap();
    let want = 800.0 + exp_toeplitz_norm1(&small).ln();
    assert!((exp_toeplitz_log_norm1(&p) - want).abs() < 1e-12);
}

fn fixture() -> Vec<[f64; 5]> {
    let text = include_str!("data/hyp2f1_cases.csv");
    text.lines()
        .skip(1)
        .map(|line| {
            let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3], v[4]]
        })
        .collect()
}

#[test]
fn hypergeometric_matches_high_precision_values() {
    let cases = fixture();
    assert_eq!(cases.len(), 1000);
    let mut worst = 0.0f64;
    for [a, b, c, x, want] in cases {
        let got = gauss_2f1(a, b, c, x).unwrap();
        let rel = ((got - want) / want).abs();
        worst = worst.max(rel);
        assert!(rel < 1e-10, "2F1({a}, {b}; {c}; {x}) = {got}, want {want}");
    }
    println!("worst relative error {worst:e}");
}

// 2F1(a, b; b + 1; x) = b int_0^1 t^(b-1) (1 - x t)^(-a) dt, on a graded
// Gauss-Legendre grid towards t = 0
fn euler_integral(a: f64, b: f64, x: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(30);
    let mut sum = 0.0;
    let mut hi = 1.0;
    for _ in 0..60 {
        let lo = hi * 0.5;
        for (u, w) in nodes.iter().zip(&weights) {
            let t = lo + (hi - lo) * u;
            sum += w * (hi - lo) * t.powf(b - 1.0) * (1.0 - x * t).powf(-a);
        }
        hi = lo;
    }
    // remainder on [0, hi]: (1 - x t)^(-a) ~ 1
    b * (sum + hi.powf(b) / b)
}

fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(0.5 * (1.0 - z));
        weights.push(1.0 / ((1.0 - z * z) * dp * dp));
    }
    (nodes, weights)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hypergeometric_matches_euler_integral(a in 0.2f64..12.0, b in 0.2f64..8.0, lx in -3.0f64..2.5) {
        let x = -(10f64.powf(lx));
        let got = gauss_2f1(a, b, b + 1.0, x).unwrap();
        let want = euler_integral(a, b, x);
        prop_assert!(((got - want) / want).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn hypergeometric_symmetric_in_upper_parameters(a in 0.1f64..6.0, b in 0.1f64..6.0, c in 0.3f64..9.0, lx in -3.0f64..2.0) {
        let x = -(10f64.powf(lx));
        let ab = gauss_2f1(a, b, c, x).unwrap();
        let ba = gauss_2f1(b, a, c, x).unwrap();
        prop_assert!(((ab - ba) / ab).abs() < 1e-10);
    }
}

#[test]
fn joint_distance_density_is_normalised() {
    // x = y s, y = z u maps the ordered cone to [0, 1]^2 x [0, inf)
    let (nodes, weights) = gauss_legendre(24);
    for &lambda in &[1e-6, 2e-5, 3e-4] {
        let z_max = (60.0 / (lambda * std::f64::consts::PI)).sqrt();
        let pieces = 64;
        let mut total = 0.0;
        for piece in 0..pieces {
            let (z0, z1) = (z_max * piece as f64 / pieces as f64, z_max * (piece + 1) as f64 / pieces as f64);
            for (zn, zw) in nodes.iter().zip(&weights) {
                let z = z0 + (z1 - z0) * zn;
                let mut inner = 0.0;
                for (un, uw) in nodes.iter().zip(&weights) {
                    for (sn, sw) in nodes.iter().zip(&weights) {
                        let y = z * un;
                        let x = y * sn;
                        if x > 0.0 {
                            inner += uw * sw * joint_distance_pdf(x, y, z, lambda).unwrap() * z * y;
                        }
                    }
                }
                total += zw * (z1 - z0) * inner;
            }
        }
        assert!((total - 1.0).abs() < 1e-6, "lambda {lambda}: {total}");
    }
}

#[test]
fn joint_distance_density_domain() {
    assert!(joint_distance_pdf(2.0, 1.0, 3.0, 1e-5).is_err());
    assert!(joint_distance_pdf(0.0, 1.0, 3.0, 1e-5).is_err());
    assert!(joint_distance_pdf(1e-9, 100.0, 200.0, 1e-5).unwrap() < 1e-15);
}
