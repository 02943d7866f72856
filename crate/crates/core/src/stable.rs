//! The one-sided (positive) stable law with Laplace transform `exp(-s^β)`.
//!
//! This is the mixing variable of the Gumbel copula with `β = 1/α`.
//!
//! Distribution functions come from Zolotarev's integral representation,
//! which follows directly from Kanter's sampling identity
//! `V = (A(Θ)/W)^{(1-β)/β}` with `Θ ~ U(0, π)` and `W ~ Exp(1)`:
//!
//! ```text
//! P(V > x) = (1/π) ∫_0^π (1 - exp(-A(θ) x^{-γ})) dθ,   γ = β / (1 - β)
//! ```
//!
//! For large `x` the convergent series in powers of `x^{-β}` is cheaper and
//! more accurate; it is used whenever its terms do not cancel badly.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Exp1, Open01};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};

/// Maximum number of tail-series terms kept per law.
const SERIES_TERMS: usize = 160;
/// Series terms below this (relative to the leading term) are dropped.
const SERIES_EPS: f64 = 1e-17;
/// Largest admissible ratio between the biggest series term and the sum.
const SERIES_MAX_CANCELLATION: f64 = 50.0;

#[derive(Debug, Clone, Copy)]
struct SeriesTerm {
    /// ln |Γ(kβ+1)/k!| (density) and ln |Γ(kβ)/k!| (survival).
    ln_pdf_mag: f64,
    ln_sf_mag: f64,
    /// (-1)^{k+1} sin(kπβ)
    sine: f64,
}

#[derive(Debug, Clone)]
pub struct PositiveStableLaw {
    beta: f64,
    /// γ = β/(1-β)
    gamma: f64,
    ln_a_at_zero: f64,
    series: Vec<SeriesTerm>,
}

impl PositiveStableLaw {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::domain(format!(
                "stability index must lie in (0, 1), got {beta}"
            )));
        }
        let gamma = beta / (1.0 - beta);
        let series = (1..=SERIES_TERMS)
            .map(|k| {
                let kb = k as f64 * beta;
                let ln_fact = ln_gamma(k as f64 + 1.0);
                SeriesTerm {
                    ln_pdf_mag: ln_gamma(kb + 1.0) - ln_fact,
                    ln_sf_mag: ln_gamma(kb) - ln_fact,
                    sine: if k % 2 == 1 { 1.0 } else { -1.0 } * (PI * kb.rem_euclid(2.0)).sin(),
                }
            })
            .collect();
        Ok(PositiveStableLaw {
            beta,
            gamma,
            ln_a_at_zero: (1.0 - beta).ln() + gamma * beta.ln(),
            series,
        })
    }

    /// The mixing law of a Gumbel copula with parameter `alpha > 1`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha.is_finite()) {
            return Err(Error::domain(format!("alpha must exceed 1, got {alpha}")));
        }
        Self::new(1.0 / alpha)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// ln A(θ) where A is Zolotarev's function
    /// `sin((1-β)θ) sin(βθ)^γ / sin(θ)^{1+γ}`.
    fn ln_a(&self, theta: f64) -> f64 {
        let b = self.beta;
        let sin_theta = if theta > 0.5 * PI {
            (PI - theta).sin()
        } else {
            theta.sin()
        };
        ((1.0 - b) * theta).sin().ln() + self.gamma * (b * theta).sin().ln()
            - (1.0 + self.gamma) * sin_theta.ln()
    }

    /// Draws one variate with the Kanter transform.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        let w: f64 = rng.sample(Exp1);
        ((self.ln_a(PI * u) - w.ln()) / self.gamma).exp()
    }

    /// Density at `x > 0`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_point(x)?;
        if x.is_infinite() {
            return Ok(0.0);
        }
        Ok(self.ln_pdf_ln(x.ln())?.exp())
    }

    /// Natural log of the density, parameterised by `ln x` so that points far
    /// beyond the range of `f64` can be evaluated.
    pub fn ln_pdf_ln(&self, ln_x: f64) -> Result<f64> {
        if ln_x.is_nan() {
            return Err(Error::domain("density evaluated at NaN"));
        }
        if ln_x == f64::INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        if let Some((ln_lead, ratio)) = self.tail_series(ln_x, SeriesKind::Density) {
            return Ok(ln_lead + ratio.ln());
        }
        let x = ln_x.exp();
        if x == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let shift = self.gamma * ln_x;
        let g = |theta: f64| {
            let z = (self.ln_a(theta) - shift).exp();
            let v = z * (-z).exp();
            if v.is_finite() {
                v
            } else {
                0.0
            }
        };
        let integral = self.integrate_theta(g, shift)?;
        Ok((self.gamma / PI * integral).ln() - ln_x)
    }

    /// Survival function `P(V > x)` for `x > 0`.
    pub fn sf(&self, x: f64) -> Result<f64> {
        check_point(x)?;
        if x.is_infinite() {
            return Ok(0.0);
        }
        let ln_x = x.ln();
        if let Some((ln_lead, ratio)) = self.tail_series(ln_x, SeriesKind::Survival) {
            return Ok((ln_lead.exp() * ratio).clamp(0.0, 1.0));
        }
        let shift = self.gamma * ln_x;
        let g = |theta: f64| {
            let z = (self.ln_a(theta) - shift).exp();
            -(-z).exp_m1()
        };
        Ok((self.integrate_theta(g, shift)? / PI).clamp(0.0, 1.0))
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(1.0 - self.sf(x)?)
    }

    /// Integrates over θ ∈ (0, π), splitting at the point where
    /// `A(θ) x^{-γ} = 1` since the integrand turns over sharply there.
    fn integrate_theta<F: Fn(f64) -> f64>(&self, g: F, shift: f64) -> Result<f64> {
        let tol = Tolerance {
            abs: 1e-14,
            rel: 1e-12,
            max_intervals: 500,
        };
        if shift <= self.ln_a_at_zero {
            return Ok(quad::integrate(&g, 0.0, PI, tol)?.value);
        }
        let (mut lo, mut hi) = (0.0, PI);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if self.ln_a(mid) < shift {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let split = 0.5 * (lo + hi);
        let left = quad::integrate(&g, 0.0, split, tol)?;
        let right = quad::integrate(&g, split, PI, tol)?;
        Ok(left.value + right.value)
    }

    /// Evaluates the large-`x` series. Returns `(ln |leading term|, sum / leading term)`
    /// or `None` when the series would need too many terms or cancel too much.
    fn tail_series(&self, ln_x: f64, kind: SeriesKind) -> Option<(f64, f64)> {
        let mag = |t: &SeriesTerm| match kind {
            SeriesKind::Density => t.ln_pdf_mag,
            SeriesKind::Survival => t.ln_sf_mag,
        };
        let first = &self.series[0];
        let step = self.beta * ln_x;
        // quick reject: the second term must already be smaller than the first
        if mag(&self.series[1]) - mag(first) - step > 0.0 {
            return None;
        }
        let mut sum = 1.0;
        let mut largest: f64 = 1.0;
        let mut converged = false;
        let mut prev = f64::INFINITY;
        for (k, term) in self.series.iter().enumerate().skip(1) {
            let ln_ratio = mag(term) - mag(first) - k as f64 * step;
            let bound = ln_ratio.exp();
            largest = largest.max(bound);
            sum += term.sine / first.sine * bound;
            if bound < SERIES_EPS && prev < SERIES_EPS * 1e3 {
                converged = true;
                break;
            }
            prev = bound;
        }
        if !converged || sum <= 0.0 || largest > SERIES_MAX_CANCELLATION * sum {
            return None;
        }
        let mut ln_lead = mag(first) + (first.sine / PI).ln() - step;
        if let SeriesKind::Density = kind {
            ln_lead -= ln_x;
        }
        Some((ln_lead, sum))
    }
}

#[derive(Debug, Clone, Copy)]
enum SeriesKind {
    Density,
    Survival,
}

fn check_point(x: f64) -> Result<()> {
    if x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "stable law evaluated at non-positive point {x}"
        )))
    }
}
