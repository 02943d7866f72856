use archimedean_credit::rng::RngStream;
use archimedean_credit::PositiveStableLaw;
use libm::erf;

fn levy_pdf(x: f64) -> f64 {
    0.5 / std::f64::consts::PI.sqrt() * x.powf(-1.5) * (-0.25 / x).exp()
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

#[test]
fn laplace_transform_matches_sample_mean() {
    const DRAWS: usize = 1_000_000;
    for (k, beta) in [0.3, 0.5, 0.8].into_iter().enumerate() {
        let law = PositiveStableLaw::new(beta).unwrap();
        let mut rng = RngStream::from_seed(100 + k as u64);
        let draws: Vec<f64> = (0..DRAWS).map(|_| law.sample(&mut rng)).collect();
        for s in [0.25, 1.0, 4.0] {
            let vals: Vec<f64> = draws.iter().map(|v| (-s * v).exp()).collect();
            let mean = vals.iter().sum::<f64>() / DRAWS as f64;
            let var =
                vals.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (DRAWS - 1) as f64;
            let se = (var / DRAWS as f64).sqrt();
            let exact = (-f64::powf(s, beta)).exp();
            assert!(
                (mean - exact).abs() <= 4.0 * se,
                "beta={beta} s={s}: mean {mean} vs {exact} (se {se})"
            );
        }
    }
}

#[test]
fn levy_case_matches_closed_form_on_grid() {
    let law = PositiveStableLaw::new(0.5).unwrap();
    for x in log_grid(1e-2, 1e4, 61) {
        let sf = law.sf(x).unwrap();
        let pdf = law.pdf(x).unwrap();
        assert!((sf - erf(0.5 / x.sqrt())).abs() <= 1e-8, "sf at {x}");
        assert!((pdf - levy_pdf(x)).abs() <= 1e-8, "pdf at {x}");
        let ln_pdf = law.ln_pdf_ln(x.ln()).unwrap();
        assert!((ln_pdf - levy_pdf(x).ln()).abs() <= 1e-8, "ln pdf at {x}");
    }
}

#[test]
fn density_is_minus_derivative_of_survival() {
    for beta in [0.25, 0.5, 2.0 / 3.0, 0.9] {
        let law = PositiveStableLaw::new(beta).unwrap();
        for x in log_grid(0.2, 200.0, 15) {
            let diff = |h: f64| (law.sf(x - h).unwrap() - law.sf(x + h).unwrap()) / (2.0 * h);
            let h = 1e-4 * x;
            let deriv = (4.0 * diff(h / 2.0) - diff(h)) / 3.0;
            let pdf = law.pdf(x).unwrap();
            assert!(
                (deriv - pdf).abs() <= 1e-6 * pdf.max(1e-3),
                "beta={beta} x={x}: -sf' {deriv} vs pdf {pdf}"
            );
        }
    }
}

#[test]
fn survival_is_monotone_and_bounded() {
    for beta in [0.1, 0.5, 0.95] {
        let law = PositiveStableLaw::new(beta).unwrap();
        let mut prev = 1.0;
        for x in log_grid(1e-3, 1e8, 400) {
            let sf = law.sf(x).unwrap();
            assert!((0.0..=1.0).contains(&sf), "beta={beta} x={x}: {sf}");
            assert!(sf <= prev + 1e-14, "beta={beta} x={x}: {sf} > {prev}");
            assert!((law.cdf(x).unwrap() + sf - 1.0).abs() < 1e-14);
            prev = sf;
        }
    }
}

#[test]
fn empirical_cdf_within_dkw_band() {
    const DRAWS: usize = 200_000;
    // P(sup |F_m - F| > eps) <= 2 exp(-2 m eps²) = 1e-6
    let eps = ((2.0f64 / 1e-6).ln() / (2.0 * DRAWS as f64)).sqrt();
    for (k, beta) in [1.0 / 1.1, 2.0 / 3.0, 0.5, 0.2].into_iter().enumerate() {
        let law = PositiveStableLaw::new(beta).unwrap();
        let mut rng = RngStream::from_seed(7 + k as u64);
        let mut draws: Vec<f64> = (0..DRAWS).map(|_| law.sample(&mut rng)).collect();
        draws.sort_by(f64::total_cmp);
        for decile in 1..10 {
            let x = draws[decile * DRAWS / 10];
            let f = law.cdf(x).unwrap();
            assert!(
                (f - decile as f64 / 10.0).abs() <= eps,
                "beta={beta} decile {decile}: F={f}"
            );
        }
    }
}
