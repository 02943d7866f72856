//! Sharp large-portfolio approximations.
//!
//! * `P(L_n > nb) ~ f_n (v*)^{-1/α} / Γ(1 - 1/α)`
//! * `E[L_n | L_n > nb] ~ n ψ(α, b)` with
//!   `ψ = b + (v*)^{1/α} ∫_{v*}^∞ r'(v) v^{-1/α} dv`.

use statrs::function::gamma::{gamma, gamma_ur};

use crate::error::{Error, Result};
use crate::portfolio::{DefaultScale, Portfolio};
use crate::quad::{self, Tolerance};

#[derive(Debug, Clone)]
pub struct AsymptoticInputs {
    pub portfolio: Portfolio,
    pub alpha: f64,
    pub scale: DefaultScale,
    pub b: f64,
}

impl AsymptoticInputs {
    pub fn new(portfolio: Portfolio, alpha: f64, scale: DefaultScale, b: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha.is_finite()) {
            return Err(Error::domain(format!("alpha must exceed 1, got {alpha}")));
        }
        scale.resolve(&portfolio)?;
        let cbar = portfolio.mean_exposure();
        if !(b > 0.0 && b < cbar) {
            return Err(Error::domain(format!(
                "loss level {b} must lie in (0, c̄) with c̄ = {cbar}"
            )));
        }
        Ok(AsymptoticInputs {
            portfolio,
            alpha,
            scale,
            b,
        })
    }

    fn vstar(&self) -> Result<f64> {
        self.portfolio.solve_vstar(self.alpha, self.b)
    }
}

pub fn tail_probability_asymptotic(inputs: &AsymptoticInputs) -> Result<f64> {
    let f_n = inputs.scale.resolve(&inputs.portfolio)?;
    let vstar = inputs.vstar()?;
    let a = inputs.alpha;
    Ok(f_n * vstar.powf(-1.0 / a) / gamma(1.0 - 1.0 / a))
}

/// `ψ(α, b)` by adaptive quadrature on the general portfolio.
pub fn shortfall_factor(inputs: &AsymptoticInputs) -> Result<f64> {
    let pf = &inputs.portfolio;
    let a = inputs.alpha;
    let vstar = inputs.vstar()?;
    // v = v* + u / λ with λ the slowest decay rate, so the integrand decays
    // at least like e^{-u}.
    let rate = pf
        .groups()
        .iter()
        .map(|g| g.scale.powf(a))
        .fold(f64::INFINITY, f64::min);
    let integrand = |u: f64| {
        let v = vstar + u / rate;
        pf.limiting_mean_loss_derivative(a, v) * v.powf(-1.0 / a) / rate
    };
    let tol = Tolerance {
        abs: 0.0,
        rel: 1e-12,
        max_intervals: 400,
    };
    let integral = quad::integrate_to_infinity(integrand, 0.0, tol)?.value;
    Ok(inputs.b + integral * vstar.powf(1.0 / a))
}

pub fn expected_shortfall_asymptotic(inputs: &AsymptoticInputs) -> Result<f64> {
    Ok(inputs.portfolio.n() as f64 * shortfall_factor(inputs)?)
}

/// Homogeneous closed form `l f_n (ln(c/(c-b)))^{-1/α} / Γ(1 - 1/α)`.
pub fn homogeneous_tail_closed_form(
    alpha: f64,
    exposure: f64,
    scale: f64,
    f_n: f64,
    b: f64,
) -> f64 {
    let log_ratio = (exposure / (exposure - b)).ln();
    scale * f_n * log_ratio.powf(-1.0 / alpha) / gamma(1.0 - 1.0 / alpha)
}

/// Homogeneous closed form `ψ = b + c Γ(1 - 1/α, L) L^{1/α}` with
/// `L = ln(c/(c-b))` and `Γ(·,·)` the (non-regularised) upper incomplete gamma.
pub fn homogeneous_shortfall_factor(alpha: f64, exposure: f64, b: f64) -> f64 {
    let s = 1.0 - 1.0 / alpha;
    let log_ratio = (exposure / (exposure - b)).ln();
    let upper = gamma_ur(s, log_ratio) * gamma(s);
    b + exposure * upper * log_ratio.powf(1.0 / alpha)
}
