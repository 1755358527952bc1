use std::f64::consts::PI;

use proptest::prelude::*;
use transmutation::io::{read_function_csv, write_function_csv};
use transmutation::kernels::{a_function, f_partial, KernelGrid, KernelKind, SeriesConfig};
use transmutation::numerics::{
    cos_sqrt, find_root_bracketed, prefix_integral, FunctionSamples, UniformGrid,
};
use transmutation::spectral::SpectralData;
use transmutation::transmute::apply_t;

/// Spectral data shaped like a real problem: `rho_n = n + omega/(pi n) + k_n/n^2`,
/// `alpha_n = pi/2 + K_n/n^2`.
fn synthetic_spectrum(omega: f64, lambda0: f64, ks: &[f64], big_ks: &[f64]) -> SpectralData {
    let mut lambdas = vec![lambda0];
    let mut alphas = vec![PI + big_ks[0]];
    for n in 1..ks.len() {
        let nf = n as f64;
        let rho = nf + omega / (PI * nf) + ks[n] / (nf * nf);
        lambdas.push(rho * rho);
        alphas.push(PI / 2.0 + big_ks[n] / (nf * nf));
    }
    SpectralData::from_parts(omega, &lambdas, &alphas).unwrap()
}

fn spectrum_strategy() -> impl Strategy<Value = SpectralData> {
    (
        -1.0..1.0f64,
        -0.9..-0.1f64,
        prop::collection::vec(-0.1..0.1f64, 31),
        prop::collection::vec(-0.3..0.3f64, 31),
    )
        .prop_map(|(omega, l0, ks, big_ks)| synthetic_spectrum(omega, l0, &ks, &big_ks))
}

fn mode_strategy() -> impl Strategy<Value = SeriesConfig> {
    (1usize..=30, any::<bool>()).prop_map(|(n, acc)| {
        if acc {
            SeriesConfig::accelerated(n)
        } else {
            SeriesConfig::plain(n)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn f_is_symmetric(spec in spectrum_strategy(), cfg in mode_strategy(), x in 0.0..PI, t in 0.0..PI) {
        let a = f_partial(&spec, x, t, cfg).unwrap();
        let b = f_partial(&spec, t, x, cfg).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn f_is_generated_by_a(spec in spectrum_strategy(), cfg in mode_strategy(), x in 0.0..PI, t in 0.0..PI) {
        let f = f_partial(&spec, x, t, cfg).unwrap();
        let from_a = 0.5 * (a_function(&spec, x + t, cfg).unwrap() + a_function(&spec, x - t, cfg).unwrap());
        prop_assert!((f - from_a).abs() <= 1e-10, "{} vs {}", f, from_a);
    }

    #[test]
    fn series_modes_coincide_without_omega(
        l0 in -0.9..-0.1f64,
        ks in prop::collection::vec(-0.1..0.1f64, 31),
        big_ks in prop::collection::vec(-0.3..0.3f64, 31),
        x in 0.0..PI,
        t in 0.0..PI,
    ) {
        let spec = synthetic_spectrum(0.0, l0, &ks, &big_ks);
        let plain = f_partial(&spec, x, t, SeriesConfig::plain(30)).unwrap();
        let acc = f_partial(&spec, x, t, SeriesConfig::accelerated(30)).unwrap();
        prop_assert_eq!(plain, acc);
    }

    #[test]
    fn prefix_integral_is_exact_for_cubics(m in 3usize..60, c in prop::array::uniform4(-3.0..3.0f64)) {
        let grid = UniformGrid::standard(m).unwrap();
        let p = |x: f64| c[0] + x * (c[1] + x * (c[2] + x * c[3]));
        let values: Vec<f64> = grid.points().into_iter().map(p).collect();
        let exact = c[0] * PI + c[1] * PI.powi(2) / 2.0 + c[2] * PI.powi(3) / 3.0 + c[3] * PI.powi(4) / 4.0;
        prop_assert!((prefix_integral(grid.step(), &values) - exact).abs() <= 1e-10 * (1.0 + exact.abs()));
    }

    #[test]
    fn transmutation_is_linear(
        m in 2usize..25,
        seed in prop::collection::vec(-1.0..1.0f64, 325),
        a in -2.0..2.0f64,
        b in -2.0..2.0f64,
    ) {
        let len = m * (m + 1) / 2;
        let kernel = KernelGrid::new(KernelKind::G, UniformGrid::standard(m).unwrap(), seed[..len].to_vec()).unwrap();
        let grid = *kernel.grid();
        let u = FunctionSamples::from_fn(grid, f64::sin).unwrap();
        let v = FunctionSamples::from_fn(grid, |x| x * x - 1.0).unwrap();
        let w = FunctionSamples::from_fn(grid, |x| a * x.sin() + b * (x * x - 1.0)).unwrap();
        let (tu, tv, tw) = (apply_t(&kernel, &u).unwrap(), apply_t(&kernel, &v).unwrap(), apply_t(&kernel, &w).unwrap());
        for j in 0..m {
            let combo = a * tu.values()[j] + b * tv.values()[j];
            prop_assert!((tw.values()[j] - combo).abs() <= 1e-12 * (1.0 + combo.abs()));
        }
    }

    #[test]
    fn bracketed_root_is_found(r in -5.0..5.0f64, w1 in 0.1..3.0f64, w2 in 0.1..3.0f64) {
        let root = find_root_bracketed(|x| (x - r) * (x * x + 1.0), r - w1, r + w2, 1e-13).unwrap();
        prop_assert!((root - r).abs() <= 1e-12);
    }

    #[test]
    fn cos_sqrt_is_continuous_through_zero(eps in 1e-14..1e-9f64, x in 0.0..PI) {
        prop_assert!((cos_sqrt(eps, x) - cos_sqrt(-eps, x)).abs() <= 2.0 * eps * x * x);
    }

    #[test]
    fn function_csv_round_trips(values in prop::collection::vec(-1e6..1e6f64, 2..40)) {
        let grid = UniformGrid::standard(values.len()).unwrap();
        let samples = FunctionSamples::new(grid, values).unwrap();
        let mut buf = Vec::new();
        write_function_csv(&samples, &mut buf).unwrap();
        let back = read_function_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.values(), samples.values());
    }
}
