use archimedean_credit::rng::RngStream;
use archimedean_credit::{GumbelGenerator, LtGenerator};
use proptest::prelude::*;

fn pairs(alpha: f64, count: usize, seed: u64) -> Vec<(f64, f64)> {
    let g = GumbelGenerator::new(alpha).unwrap();
    let law = g.mixing_law();
    let mut rng = RngStream::from_seed(seed);
    (0..count)
        .map(|_| {
            let v = law.sample(&mut rng);
            let u = g.sample_uniforms(2, v, &mut rng);
            (u[0], u[1])
        })
        .collect()
}

/// Kendall's tau by pair sampling.
fn kendall_tau(data: &[(f64, f64)]) -> f64 {
    let half = data.len() / 2;
    let (a, b) = data.split_at(half);
    let s: f64 = a
        .iter()
        .zip(b)
        .map(|(p, q)| ((p.0 - q.0) * (p.1 - q.1)).signum())
        .sum();
    s / half as f64
}

#[test]
fn kendall_tau_matches_one_minus_inverse_alpha() {
    for (alpha, seed) in [(1.1, 1), (2.0, 2), (5.0, 3)] {
        let tau = kendall_tau(&pairs(alpha, 400_000, seed));
        let exact = 1.0 - 1.0 / alpha;
        // 200k independent signs: se <= 1/sqrt(200k) ≈ 2.2e-3
        assert!(
            (tau - exact).abs() < 0.01,
            "alpha={alpha}: tau {tau} vs {exact}"
        );
    }
}

#[test]
fn marginals_are_uniform() {
    const DRAWS: usize = 100_000;
    let mut u: Vec<f64> = pairs(1.5, DRAWS, 11).into_iter().map(|p| p.1).collect();
    u.sort_by(f64::total_cmp);
    let d = u
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let lo = i as f64 / DRAWS as f64;
            let hi = (i + 1) as f64 / DRAWS as f64;
            (x - lo).abs().max((hi - x).abs())
        })
        .fold(0.0, f64::max);
    // Kolmogorov critical value at 0.1%: 1.95 / sqrt(n)
    assert!(d < 1.95 / (DRAWS as f64).sqrt(), "KS statistic {d}");
}

#[test]
fn strong_dependence_clusters_joint_defaults() {
    let data = pairs(5.0, 200_000, 21);
    let q = 0.01;
    let both = data.iter().filter(|p| p.0 < q && p.1 < q).count() as f64;
    let first = data.iter().filter(|p| p.0 < q).count() as f64;
    // independence would give P(U2 < q | U1 < q) = q
    assert!(both / first > 10.0 * q);
}

#[test]
fn generator_is_convex_and_decreasing() {
    for alpha in [1.1, 1.5, 3.0] {
        let g = GumbelGenerator::new(alpha).unwrap();
        let grid: Vec<f64> = (1..200).map(|i| i as f64 / 200.0).collect();
        let vals: Vec<f64> = grid.iter().map(|&u| g.phi(u).unwrap()).collect();
        for w in vals.windows(3) {
            assert!(w[0] > w[1]);
            assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-12);
        }
    }
}

proptest! {
    #[test]
    fn inverse_round_trip(alpha in 1.01f64..10.0, u in 1e-6f64..1.0) {
        let g = GumbelGenerator::new(alpha).unwrap();
        let back = g.phi_inv(g.phi(u).unwrap()).unwrap();
        prop_assert!((back - u).abs() <= 1e-12 * u.max(1e-3));
    }

    #[test]
    fn one_minus_form_agrees_with_direct(alpha in 1.01f64..10.0, q in 1e-3f64..0.5) {
        let g = GumbelGenerator::new(alpha).unwrap();
        let direct = g.phi(1.0 - q).unwrap();
        let stable = g.phi_one_minus(q);
        prop_assert!((direct - stable).abs() <= 1e-10 * stable);
    }
}
