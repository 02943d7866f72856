//! Browser bindings for the interactive demo page in `www/`.
//!
//! Every export returns a flat `Float64Array`; the page slices it into
//! columns.

use archimedean_credit::asymptotics::{
    expected_shortfall_asymptotic, tail_probability_asymptotic, AsymptoticInputs,
};
use archimedean_credit::estimators::{self, EstimatorConfig, EstimatorKind};
use archimedean_credit::{DefaultScale, GumbelGenerator, Portfolio, PositiveStableLaw};
use wasm_bindgen::prelude::*;

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points.max(2) - 1) as f64).exp())
        .collect()
}

/// `[x, pdf, sf]` triples on a log grid for the stable law with index `1/alpha`.
pub fn stable_curve_rows(
    alpha: f64,
    x_min: f64,
    x_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    if !(x_min > 0.0 && x_max > x_min) {
        return Err(format!("need 0 < x_min < x_max, got {x_min} and {x_max}"));
    }
    let law = PositiveStableLaw::from_alpha(alpha).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(3 * points);
    for x in log_grid(x_min, x_max, points) {
        out.push(x);
        out.push(law.pdf(x).map_err(|e| e.to_string())?);
        out.push(law.sf(x).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

/// `[b, tail probability, expected shortfall / n]` for `b` across `(0, 1)`.
pub fn asymptotic_curve_rows(
    alpha: f64,
    n: u64,
    scale: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let portfolio = Portfolio::homogeneous(1.0, scale, n).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(3 * points);
    for i in 1..=points {
        let b = 0.98 * i as f64 / points as f64;
        let inputs = AsymptoticInputs::new(portfolio.clone(), alpha, DefaultScale::Reciprocal, b)
            .map_err(|e| e.to_string())?;
        out.push(b);
        out.push(tail_probability_asymptotic(&inputs).map_err(|e| e.to_string())?);
        out.push(expected_shortfall_asymptotic(&inputs).map_err(|e| e.to_string())? / n as f64);
    }
    Ok(out)
}

/// `[estimate, std_error, rel_error_pct, variance_reduction, asymptotic]`;
/// unavailable entries are NaN.
#[allow(clippy::too_many_arguments)]
pub fn simulate_row(
    method: &str,
    alpha: f64,
    n: u64,
    scale: f64,
    b: f64,
    replications: u64,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let kind: EstimatorKind = method
        .parse()
        .map_err(|e: archimedean_credit::Error| e.to_string())?;
    let portfolio = Portfolio::homogeneous(1.0, scale, n).map_err(|e| e.to_string())?;
    let config = EstimatorConfig {
        portfolio: portfolio.clone(),
        generator: GumbelGenerator::new(alpha).map_err(|e| e.to_string())?,
        scale: DefaultScale::Reciprocal,
        b,
        replications,
        seed,
        x0: estimators::DEFAULT_X0,
        threads: 1,
        kind,
    };
    let report = estimators::estimate(&config).map_err(|e| e.to_string())?;
    let asymptotic = AsymptoticInputs::new(portfolio, alpha, DefaultScale::Reciprocal, b)
        .and_then(|i| tail_probability_asymptotic(&i))
        .unwrap_or(f64::NAN);
    Ok(vec![
        report.estimate,
        report.std_error,
        report.rel_error_pct.unwrap_or(f64::NAN),
        report.variance_reduction.value().unwrap_or(f64::NAN),
        asymptotic,
    ])
}

#[wasm_bindgen]
pub fn stable_curve(
    alpha: f64,
    x_min: f64,
    x_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    stable_curve_rows(alpha, x_min, x_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn asymptotic_curve(
    alpha: f64,
    n: u32,
    scale: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    asymptotic_curve_rows(alpha, n as u64, scale, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn simulate(
    method: &str,
    alpha: f64,
    n: u32,
    scale: f64,
    b: f64,
    replications: u32,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    simulate_row(
        method,
        alpha,
        n as u64,
        scale,
        b,
        replications as u64,
        seed as u64,
    )
    .map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_curve_is_flat_triples() {
        let rows = stable_curve_rows(2.0, 0.01, 100.0, 40).unwrap();
        assert_eq!(rows.len(), 120);
        for t in rows.chunks(3) {
            assert!(t[1] >= 0.0 && (0.0..=1.0).contains(&t[2]));
        }
        assert!(stable_curve_rows(0.5, 0.01, 100.0, 40).is_err());
    }

    #[test]
    fn asymptotic_curve_decreases_in_b() {
        let rows = asymptotic_curve_rows(1.5, 500, 0.5, 20).unwrap();
        let tails: Vec<f64> = rows.chunks(3).map(|t| t[1]).collect();
        assert!(tails.windows(2).all(|w| w[1] < w[0]));
        let at_08 = rows
            .chunks(3)
            .find(|t| (t[0] - 0.784).abs() < 1e-9)
            .unwrap();
        assert!(at_08[2] > at_08[0]);
    }

    #[test]
    fn simulate_returns_estimate_and_asymptotic() {
        let row = simulate_row("condmc", 1.5, 500, 0.5, 0.8, 2000, 1).unwrap();
        assert_eq!(row.len(), 5);
        assert!((row[0] / row[4] - 1.0).abs() < 0.05);
        assert!(simulate_row("bogus", 1.5, 500, 0.5, 0.8, 2000, 1).is_err());
    }
}
