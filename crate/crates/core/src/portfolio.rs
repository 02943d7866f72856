//! Credit-portfolio data model.
//!
//! A portfolio is a finite collection of homogeneous sub-portfolios. Obligor
//! `i` in group `j` defaults when its copula coordinate exceeds `1 - l_j f_n`,
//! losing `c_j`. Given the mixing variable `V`, defaults are independent.

use serde::{Deserialize, Serialize};

use crate::archimedean::LtGenerator;
use crate::error::{Error, Result};
use crate::roots;

/// Relative slack applied when comparing a loss against `n b`, so that
/// `n b = 400.00000000000006` still counts 401 defaults of size 1 as the first
/// exceedance.
const EXCEEDANCE_SLACK: f64 = 1e-12;

/// `true` when `loss` strictly exceeds `threshold`.
pub fn exceeds(loss: f64, threshold: f64) -> bool {
    loss > threshold + EXCEEDANCE_SLACK * threshold.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubPortfolio {
    /// Exposure at default per obligor.
    pub exposure: f64,
    /// Multiplier of the default-probability scale.
    pub scale: f64,
    pub count: u64,
}

impl SubPortfolio {
    pub fn new(exposure: f64, scale: f64, count: u64) -> Result<Self> {
        let g = SubPortfolio {
            exposure,
            scale,
            count,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if !(self.exposure > 0.0 && self.exposure.is_finite()) {
            return Err(Error::domain(format!(
                "exposure must be positive, got {}",
                self.exposure
            )));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::domain(format!(
                "scale must be positive, got {}",
                self.scale
            )));
        }
        if self.count == 0 {
            return Err(Error::domain(
                "sub-portfolio must hold at least one obligor",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Portfolio {
    groups: Vec<SubPortfolio>,
    n: u64,
}

impl Portfolio {
    pub fn new(groups: Vec<SubPortfolio>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::domain("portfolio needs at least one sub-portfolio"));
        }
        for g in &groups {
            g.validate()?;
        }
        let n = groups
            .iter()
            .try_fold(0u64, |acc, g| acc.checked_add(g.count))
            .ok_or_else(|| Error::domain("obligor count overflows"))?;
        Ok(Portfolio { groups, n })
    }

    /// `n` identical obligors.
    pub fn homogeneous(exposure: f64, scale: f64, n: u64) -> Result<Self> {
        Self::new(vec![SubPortfolio::new(exposure, scale, n)?])
    }

    pub fn groups(&self) -> &[SubPortfolio] {
        &self.groups
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Finite-`n` weight `n_j / n`.
    pub fn weight(&self, j: usize) -> f64 {
        self.groups[j].count as f64 / self.n as f64
    }

    /// `c̄ = Σ c_j w_j`, the average loss per obligor if everyone defaults.
    pub fn mean_exposure(&self) -> f64 {
        self.groups
            .iter()
            .map(|g| g.exposure * g.count as f64)
            .sum::<f64>()
            / self.n as f64
    }

    pub fn total_exposure(&self) -> f64 {
        self.groups
            .iter()
            .map(|g| g.exposure * g.count as f64)
            .sum()
    }

    /// All obligors share one exposure size.
    pub fn has_uniform_exposure(&self) -> bool {
        let c = self.groups[0].exposure;
        self.groups.iter().all(|g| g.exposure == c)
    }

    pub fn max_scale(&self) -> f64 {
        self.groups.iter().map(|g| g.scale).fold(0.0, f64::max)
    }

    /// Loss threshold `n b`.
    pub fn threshold(&self, b: f64) -> f64 {
        self.n as f64 * b
    }

    /// Fails unless `n b` lies below the total exposure.
    pub fn check_attainable(&self, b: f64) -> Result<()> {
        let total = self.total_exposure();
        let threshold = self.threshold(b);
        if b.is_nan() || b < 0.0 {
            return Err(Error::domain(format!(
                "loss level must be non-negative, got {b}"
            )));
        }
        if !exceeds(total, threshold) {
            return Err(Error::LossUnattainable { threshold, total });
        }
        Ok(())
    }

    pub fn conditional_default_prob<G: LtGenerator>(
        &self,
        scale: &DefaultScale,
        generator: &G,
        v_raw: f64,
        j: usize,
    ) -> Result<f64> {
        let g = self
            .groups
            .get(j)
            .ok_or_else(|| Error::domain(format!("no sub-portfolio with index {j}")))?;
        let f_n = scale.resolve(self)?;
        Ok(-(-v_raw * generator.phi_one_minus(g.scale * f_n)).exp_m1())
    }

    /// Conditional default probability given the normalised factor
    /// `v = V φ(1 - f_n)`; tends to `1 - exp(-v l_j^α)` as `f_n → 0`.
    pub fn scaled_conditional_default_prob<G: LtGenerator>(
        &self,
        scale: &DefaultScale,
        generator: &G,
        v: f64,
        j: usize,
    ) -> Result<f64> {
        let f_n = scale.resolve(self)?;
        self.conditional_default_prob(scale, generator, v / generator.phi_one_minus(f_n), j)
    }

    /// Limiting conditional mean loss per obligor
    /// `r(v) = Σ c_j w_j (1 - exp(-v l_j^α))`.
    pub fn limiting_mean_loss(&self, alpha: f64, v: f64) -> f64 {
        self.groups
            .iter()
            .enumerate()
            .map(|(j, g)| g.exposure * self.weight(j) * -(-v * g.scale.powf(alpha)).exp_m1())
            .sum()
    }

    /// `r'(v) = Σ c_j w_j l_j^α exp(-v l_j^α)`.
    pub fn limiting_mean_loss_derivative(&self, alpha: f64, v: f64) -> f64 {
        self.groups
            .iter()
            .enumerate()
            .map(|(j, g)| {
                let rate = g.scale.powf(alpha);
                g.exposure * self.weight(j) * rate * (-v * rate).exp()
            })
            .sum()
    }

    /// Unique `v*` with `r(v*) = b`, for `0 < b < c̄`.
    pub fn solve_vstar(&self, alpha: f64, b: f64) -> Result<f64> {
        let cbar = self.mean_exposure();
        if !(b > 0.0 && b < cbar) {
            return Err(Error::domain(format!(
                "loss level {b} must lie in (0, c̄) with c̄ = {cbar}"
            )));
        }
        let r = |v: f64| self.limiting_mean_loss(alpha, v);
        let hi = roots::expand_upper(&r, b, 1.0, 2000)?;
        Ok(roots::bisect_increasing(&r, b, 0.0, hi, 1e-12 * cbar))
    }

    /// Number of smallest-`O` defaults needed to exceed `n b` when all
    /// exposures are equal. `None` for mixed exposures, where the index
    /// depends on which obligors default first.
    pub fn threshold_index(&self, b: f64) -> Result<Option<u64>> {
        self.check_attainable(b)?;
        if !self.has_uniform_exposure() {
            return Ok(None);
        }
        let c = self.groups[0].exposure;
        let threshold = self.threshold(b);
        let mut k = (threshold / c).floor().max(0.0) as u64 + 1;
        while k > 1 && exceeds((k - 1) as f64 * c, threshold) {
            k -= 1;
        }
        while !exceeds(k as f64 * c, threshold) {
            k += 1;
        }
        Ok(Some(k))
    }

    /// `L_n = Σ_j c_j d_j` for per-group default counts `d_j`.
    pub fn realized_loss(&self, defaults: &[u64]) -> Result<f64> {
        if defaults.len() != self.groups.len() {
            return Err(Error::domain(format!(
                "expected {} default counts, got {}",
                self.groups.len(),
                defaults.len()
            )));
        }
        let mut loss = 0.0;
        for (g, &d) in self.groups.iter().zip(defaults) {
            if d > g.count {
                return Err(Error::domain(format!(
                    "{d} defaults in a sub-portfolio of {} obligors",
                    g.count
                )));
            }
            loss += g.exposure * d as f64;
        }
        Ok(loss)
    }
}

/// How the default-probability scale `f_n` shrinks with portfolio size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefaultScale {
    /// `f_n = 1/n`
    Reciprocal,
    /// `f_n = 1/ln n`
    LogReciprocal,
    Constant(f64),
}

impl DefaultScale {
    /// Resolves `f_n` for the portfolio, checking every marginal default
    /// probability `l_j f_n` is a valid probability.
    pub fn resolve(&self, portfolio: &Portfolio) -> Result<f64> {
        let n = portfolio.n() as f64;
        let f_n = match *self {
            DefaultScale::Reciprocal => 1.0 / n,
            DefaultScale::LogReciprocal => 1.0 / n.ln(),
            DefaultScale::Constant(f) => f,
        };
        if !(f_n > 0.0 && f_n < 1.0) {
            return Err(Error::domain(format!(
                "default scale f_n = {f_n} outside (0, 1)"
            )));
        }
        if portfolio.max_scale() * f_n >= 1.0 {
            return Err(Error::domain(format!(
                "marginal default probability {} is not below 1",
                portfolio.max_scale() * f_n
            )));
        }
        Ok(f_n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archimedean::GumbelGenerator;
    use approx::assert_relative_eq;

    fn two_groups() -> Portfolio {
        Portfolio::new(vec![
            SubPortfolio::new(1.0, 0.5, 300).unwrap(),
            SubPortfolio::new(2.0, 1.5, 200).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(Portfolio::new(vec![]).is_err());
        assert!(SubPortfolio::new(0.0, 1.0, 1).is_err());
        assert!(SubPortfolio::new(1.0, -1.0, 1).is_err());
        assert!(SubPortfolio::new(1.0, 1.0, 0).is_err());
        let pf = two_groups();
        assert_eq!(pf.n(), 500);
        assert_relative_eq!(pf.mean_exposure(), (300.0 + 400.0) / 500.0);
    }

    #[test]
    fn default_scale_resolution() {
        let pf = Portfolio::homogeneous(1.0, 0.5, 100).unwrap();
        assert_eq!(DefaultScale::Reciprocal.resolve(&pf).unwrap(), 0.01);
        assert_relative_eq!(
            DefaultScale::LogReciprocal.resolve(&pf).unwrap(),
            1.0 / 100f64.ln()
        );
        assert!(DefaultScale::Constant(2.5).resolve(&pf).is_err());
        let risky = Portfolio::homogeneous(1.0, 4.0, 100).unwrap();
        assert!(DefaultScale::Constant(0.3).resolve(&risky).is_err());
    }

    #[test]
    fn conditional_probability_limits() {
        let pf = two_groups();
        let g = GumbelGenerator::new(1.5).unwrap();
        let s = DefaultScale::Reciprocal;
        assert!(pf.conditional_default_prob(&s, &g, 1e-300, 0).unwrap() < 1e-300);
        assert_eq!(pf.conditional_default_prob(&s, &g, 1e300, 0).unwrap(), 1.0);
        let p0 = pf.conditional_default_prob(&s, &g, 10.0, 0).unwrap();
        let p1 = pf.conditional_default_prob(&s, &g, 10.0, 1).unwrap();
        let p0_more = pf.conditional_default_prob(&s, &g, 20.0, 0).unwrap();
        assert!(p1 > p0 && p0_more > p0);
        assert!(pf.conditional_default_prob(&s, &g, 10.0, 2).is_err());
    }

    #[test]
    fn scaled_probability_tends_to_limit() {
        let g = GumbelGenerator::new(1.5).unwrap();
        let pf = Portfolio::homogeneous(1.0, 0.5, 500).unwrap();
        let at_500 = pf
            .scaled_conditional_default_prob(&DefaultScale::Reciprocal, &g, 1.0, 0)
            .unwrap();
        let direct = -(-(g.phi_one_minus(0.001) / g.phi_one_minus(0.002))).exp_m1();
        assert_relative_eq!(at_500, direct, max_relative = 1e-14);
        let limit = 1.0 - (-(0.5f64).powf(1.5)).exp();
        assert_relative_eq!(limit, 0.29781, max_relative = 1e-4);
        let tiny = pf
            .scaled_conditional_default_prob(&DefaultScale::Constant(1e-6), &g, 1.0, 0)
            .unwrap();
        assert!((tiny - limit).abs() < 1e-3);
    }

    #[test]
    fn limiting_loss_shape() {
        let pf = two_groups();
        assert_eq!(pf.limiting_mean_loss(1.5, 0.0), 0.0);
        assert_relative_eq!(
            pf.limiting_mean_loss(1.5, 1e4),
            pf.mean_exposure(),
            max_relative = 1e-12
        );
        let homog = Portfolio::homogeneous(1.0, 0.5, 10).unwrap();
        assert_relative_eq!(
            homog.limiting_mean_loss(1.5, 4.552_177_847),
            0.8,
            max_relative = 1e-7
        );
    }

    #[test]
    fn vstar_homogeneous_closed_form() {
        let pf = Portfolio::homogeneous(1.0, 0.5, 500).unwrap();
        let v = pf.solve_vstar(1.5, 0.8).unwrap();
        let closed = 0.5f64.powf(-1.5) * 5f64.ln();
        assert_relative_eq!(v, closed, max_relative = 1e-11);
        assert_relative_eq!(closed, 4.55218, max_relative = 1e-5);
        assert!(pf.solve_vstar(1.5, 1e-9).unwrap() < 1e-8);
    }

    #[test]
    fn vstar_domain() {
        let pf = two_groups();
        let err = pf.solve_vstar(1.5, 1.4).unwrap_err();
        assert!(err.to_string().contains("1.4"));
        assert!(pf.solve_vstar(1.5, 0.0).is_err());
    }

    #[test]
    fn vstar_two_groups_against_plain_bisection() {
        let pf = two_groups();
        for b in [0.1, 0.7, 1.3] {
            let v = pf.solve_vstar(2.0, b).unwrap();
            assert!((pf.limiting_mean_loss(2.0, v) - b).abs() <= 1e-12 * pf.mean_exposure());
            // independent oracle: fixed-bracket bisection with 200 halvings
            let (mut lo, mut hi) = (0.0f64, 1e6f64);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let r = 0.6 * (1.0 - (-mid * 0.25).exp()) + 0.8 * (1.0 - (-mid * 2.25).exp());
                if r < b {
                    lo = mid
                } else {
                    hi = mid
                }
            }
            assert_relative_eq!(v, lo, max_relative = 1e-10);
        }
    }

    #[test]
    fn threshold_indices() {
        let pf = Portfolio::homogeneous(1.0, 0.5, 500).unwrap();
        assert_eq!(pf.threshold_index(0.8).unwrap(), Some(401));
        assert_eq!(pf.threshold_index(0.0).unwrap(), Some(1));
        let pf100 = Portfolio::homogeneous(1.0, 0.5, 100).unwrap();
        assert_eq!(pf100.threshold_index(0.3).unwrap(), Some(31));
        assert_eq!(pf100.threshold_index(0.305).unwrap(), Some(31));
        assert!(matches!(
            pf100.threshold_index(1.0),
            Err(Error::LossUnattainable { .. })
        ));
        assert_eq!(two_groups().threshold_index(0.5).unwrap(), None);
    }

    #[test]
    fn realized_loss_arithmetic() {
        let pf = Portfolio::new(vec![
            SubPortfolio::new(1.0, 1.0, 10).unwrap(),
            SubPortfolio::new(2.0, 1.0, 10).unwrap(),
        ])
        .unwrap();
        assert_eq!(pf.realized_loss(&[0, 0]).unwrap(), 0.0);
        assert_eq!(pf.realized_loss(&[10, 10]).unwrap(), 30.0);
        assert_eq!(pf.realized_loss(&[3, 5]).unwrap(), 13.0);
        assert!(pf.realized_loss(&[11, 0]).is_err());
        assert!(pf.realized_loss(&[1]).is_err());
    }
}
