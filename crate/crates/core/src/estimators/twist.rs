//! Exponential twisting of the conditionally independent default indicators.
//!
//! Given default probabilities `p_j`, the twisted probabilities are
//! `p_j^θ = p_j e^{θ c_j} / (1 + p_j (e^{θ c_j} - 1))`, i.e. the logit of
//! `p_j` shifted by `θ c_j`. All arithmetic runs on log-probabilities so
//! that `p_j` as small as `1e-300` or indistinguishable from one is handled.

use crate::error::{Error, Result};
use crate::portfolio::{exceeds, Portfolio};
use crate::roots;

/// Default probability of one group in log form: `ln p` and `ln(1 - p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogProb {
    pub ln_p: f64,
    pub ln_q: f64,
}

impl LogProb {
    pub fn from_prob(p: f64) -> Self {
        LogProb {
            ln_p: p.ln(),
            ln_q: (-p).ln_1p(),
        }
    }

    /// Probability `1 - exp(-h)` from the hazard `h >= 0`.
    pub fn from_hazard(h: f64) -> Self {
        LogProb {
            ln_p: (-(-h).exp_m1()).ln(),
            ln_q: -h,
        }
    }

    fn from_logit(z: f64) -> Self {
        LogProb {
            ln_p: -softplus(-z),
            ln_q: -softplus(z),
        }
    }

    pub fn logit(&self) -> f64 {
        self.ln_p - self.ln_q
    }

    pub fn prob(&self) -> f64 {
        if self.ln_q > -0.5 {
            self.ln_p.exp()
        } else {
            -self.ln_q.exp_m1()
        }
    }
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistState {
    pub theta: f64,
    /// Twisted default probabilities `p_j^{θ*}` in log form.
    pub twisted: Vec<LogProb>,
    /// Conditional cumulant `Λ(θ*) = Σ n_j ln(1 + p_j (e^{θ* c_j} - 1))`.
    pub cumulant: f64,
}

impl TwistState {
    pub fn twisted_probs(&self) -> Vec<f64> {
        self.twisted.iter().map(LogProb::prob).collect()
    }
}

struct Curve<'a> {
    counts: Vec<f64>,
    exposures: Vec<f64>,
    logits: Vec<f64>,
    probs: &'a [LogProb],
}

impl Curve<'_> {
    /// `Λ'(θ) = Σ n_j c_j p_j^θ`
    fn slope(&self, theta: f64) -> f64 {
        self.counts
            .iter()
            .zip(&self.exposures)
            .zip(&self.logits)
            .map(|((n, c), z)| n * c * sigmoid(z + theta * c))
            .sum()
    }

    fn curvature(&self, theta: f64) -> f64 {
        self.counts
            .iter()
            .zip(&self.exposures)
            .zip(&self.logits)
            .map(|((n, c), z)| {
                let s = sigmoid(z + theta * c);
                n * c * c * s * (1.0 - s)
            })
            .sum()
    }

    fn cumulant(&self, theta: f64) -> f64 {
        if theta == 0.0 {
            return 0.0;
        }
        self.counts
            .iter()
            .zip(&self.exposures)
            .zip(self.probs)
            .map(|((n, c), lp)| {
                if lp.ln_p == f64::NEG_INFINITY {
                    0.0
                } else if lp.ln_q == f64::NEG_INFINITY {
                    n * theta * c
                } else {
                    n * (lp.ln_q + softplus(lp.logit() + theta * c))
                }
            })
            .sum()
    }
}

/// Solves for the twist that moves the conditional mean loss to `threshold`.
///
/// Returns `θ* = 0` when the untwisted mean already reaches the threshold.
pub fn solve_theta_star_log(
    portfolio: &Portfolio,
    probs: &[LogProb],
    threshold: f64,
) -> Result<TwistState> {
    let groups = portfolio.groups();
    if probs.len() != groups.len() {
        return Err(Error::domain(format!(
            "expected {} default probabilities, got {}",
            groups.len(),
            probs.len()
        )));
    }
    let curve = Curve {
        counts: groups.iter().map(|g| g.count as f64).collect(),
        exposures: groups.iter().map(|g| g.exposure).collect(),
        logits: probs.iter().map(LogProb::logit).collect(),
        probs,
    };
    if threshold <= curve.slope(0.0) {
        return Ok(TwistState {
            theta: 0.0,
            twisted: probs.to_vec(),
            cumulant: 0.0,
        });
    }
    let reachable: f64 = groups
        .iter()
        .zip(probs)
        .filter(|(_, lp)| lp.ln_p > f64::NEG_INFINITY)
        .map(|(g, _)| g.exposure * g.count as f64)
        .sum();
    if !exceeds(reachable, threshold) {
        return Err(Error::LossUnattainable {
            threshold,
            total: reachable,
        });
    }
    let slope = |t: f64| curve.slope(t);
    let hi = roots::expand_upper(&slope, threshold, 1.0, 1100)?;
    let tol = 1e-9 * threshold;
    let theta = roots::newton_bracketed(&slope, &|t| curve.curvature(t), threshold, 0.0, hi, tol);
    let twisted = curve
        .logits
        .iter()
        .zip(&curve.exposures)
        .map(|(z, c)| LogProb::from_logit(z + theta * c))
        .collect();
    Ok(TwistState {
        theta,
        twisted,
        cumulant: curve.cumulant(theta),
    })
}

/// [`solve_theta_star_log`] for plain probabilities in `(0, 1)`.
pub fn solve_theta_star(
    portfolio: &Portfolio,
    probs: &[f64],
    threshold: f64,
) -> Result<TwistState> {
    if let Some(p) = probs.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(Error::domain(format!(
            "default probability {p} outside (0, 1)"
        )));
    }
    let logs: Vec<LogProb> = probs.iter().map(|&p| LogProb::from_prob(p)).collect();
    solve_theta_star_log(portfolio, &logs, threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::portfolio::SubPortfolio;
    use approx::assert_relative_eq;

    #[test]
    fn no_twist_when_mean_reaches_threshold() {
        let pf = Portfolio::homogeneous(1.0, 0.5, 500).unwrap();
        let s = solve_theta_star(&pf, &[0.9], 400.0).unwrap();
        assert_eq!(s.theta, 0.0);
        assert_relative_eq!(s.twisted_probs()[0], 0.9, max_relative = 1e-15);
        assert_eq!(s.cumulant, 0.0);
    }

    #[test]
    fn homogeneous_closed_form() {
        let pf = Portfolio::homogeneous(1.0, 0.5, 500).unwrap();
        let s = solve_theta_star(&pf, &[0.1], 400.0).unwrap();
        assert_relative_eq!(s.theta, 36f64.ln(), max_relative = 1e-9);
        assert_relative_eq!(s.theta, 3.5835, max_relative = 1e-4);
        assert_relative_eq!(s.twisted_probs()[0], 0.8, max_relative = 1e-9);
        // Λ(θ) = n ln(1 + p(e^θ - 1)) = 500 ln(1 + 0.1 * 35)
        assert_relative_eq!(s.cumulant, 500.0 * 4.5f64.ln(), max_relative = 1e-9);
    }

    #[test]
    fn twisted_mean_hits_threshold() {
        let pf = Portfolio::new(vec![
            SubPortfolio::new(1.0, 0.5, 300).unwrap(),
            SubPortfolio::new(2.5, 1.5, 200).unwrap(),
        ])
        .unwrap();
        let s = solve_theta_star(&pf, &[1e-4, 3e-3], 350.0).unwrap();
        let p = s.twisted_probs();
        let mean = 300.0 * p[0] + 500.0 * p[1];
        assert!((mean - 350.0).abs() <= 1e-9 * 350.0);
    }

    #[test]
    fn extreme_probabilities() {
        let pf = Portfolio::homogeneous(1.0, 0.5, 500).unwrap();
        let tiny = [LogProb::from_hazard(1e-200)];
        let s = solve_theta_star_log(&pf, &tiny, 400.0).unwrap();
        assert!(s.theta > 400.0);
        assert_relative_eq!(s.twisted[0].prob(), 0.8, max_relative = 1e-9);
    }

    #[test]
    fn unattainable_target() {
        let pf = Portfolio::homogeneous(1.0, 0.5, 100).unwrap();
        assert!(matches!(
            solve_theta_star(&pf, &[0.1], 100.0),
            Err(Error::LossUnattainable { .. })
        ));
        assert!(solve_theta_star(&pf, &[1.0], 50.0).is_err());
        let zero = [LogProb::from_hazard(0.0)];
        assert!(solve_theta_star_log(&pf, &zero, 10.0).is_err());
    }

    #[test]
    fn zero_twist_is_identity() {
        for p in [1e-9, 0.3, 0.999] {
            let lp = LogProb::from_prob(p);
            let back = LogProb::from_logit(lp.logit());
            assert_relative_eq!(back.prob(), p, max_relative = 1e-12);
        }
    }
}
