//! Archimedean generators whose inverse is a Laplace transform.

use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::stable::PositiveStableLaw;

/// Distribution of the mixing variable `V` of an LT-Archimedean copula.
pub trait MixingLaw: Clone + Send + Sync + std::fmt::Debug {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64;
    fn pdf(&self, x: f64) -> Result<f64>;
    /// Log-density as a function of `ln x`.
    fn ln_pdf_ln(&self, ln_x: f64) -> Result<f64>;
    fn sf(&self, x: f64) -> Result<f64>;
}

impl MixingLaw for PositiveStableLaw {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        PositiveStableLaw::sample(self, rng)
    }
    fn pdf(&self, x: f64) -> Result<f64> {
        PositiveStableLaw::pdf(self, x)
    }
    fn ln_pdf_ln(&self, ln_x: f64) -> Result<f64> {
        PositiveStableLaw::ln_pdf_ln(self, ln_x)
    }
    fn sf(&self, x: f64) -> Result<f64> {
        PositiveStableLaw::sf(self, x)
    }
}

/// A generator `φ` with `φ⁻¹` the Laplace transform of a positive mixing law.
///
/// `alpha` is the index of regular variation of `φ(1 - 1/t)` (which is
/// `RV_{-α}`), the quantity that drives every tail asymptotic.
pub trait LtGenerator: Clone + Send + Sync + std::fmt::Debug {
    type Mixing: MixingLaw;

    fn alpha(&self) -> f64;

    fn phi(&self, u: f64) -> Result<f64>;

    /// `φ(1 - q)` evaluated without forming `1 - q`.
    fn phi_one_minus(&self, q: f64) -> f64;

    fn phi_inv(&self, s: f64) -> Result<f64>;

    fn mixing_law(&self) -> Self::Mixing;

    /// Marshall–Olkin draw of `n` copula coordinates given `V = v`.
    fn sample_uniforms<R: Rng + ?Sized>(&self, n: usize, v: f64, rng: &mut R) -> Vec<f64> {
        (0..n)
            .map(|_| {
                let r: f64 = rng.sample(Exp1);
                self.phi_inv(r / v).unwrap_or(0.0)
            })
            .collect()
    }
}

/// Gumbel generator `φ(t) = (-ln t)^α`, `α > 1`.
#[derive(Debug, Clone)]
pub struct GumbelGenerator {
    alpha: f64,
    law: PositiveStableLaw,
}

impl GumbelGenerator {
    pub fn new(alpha: f64) -> Result<Self> {
        let law = PositiveStableLaw::from_alpha(alpha)?;
        Ok(GumbelGenerator { alpha, law })
    }
}

impl LtGenerator for GumbelGenerator {
    type Mixing = PositiveStableLaw;

    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn phi(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u <= 1.0) {
            return Err(Error::domain(format!(
                "generator argument {u} outside (0, 1]"
            )));
        }
        // u - 1 is exact for u in [0.5, 1]
        let neg_log = if u >= 0.5 {
            -(u - 1.0).ln_1p()
        } else {
            -u.ln()
        };
        Ok(neg_log.powf(self.alpha))
    }

    fn phi_one_minus(&self, q: f64) -> f64 {
        (-(-q).ln_1p()).powf(self.alpha)
    }

    fn phi_inv(&self, s: f64) -> Result<f64> {
        if s.is_nan() || s < 0.0 {
            return Err(Error::domain(format!(
                "inverse generator argument {s} is negative"
            )));
        }
        Ok((-s.powf(1.0 / self.alpha)).exp())
    }

    fn mixing_law(&self) -> PositiveStableLaw {
        self.law.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use approx::assert_relative_eq;

    #[test]
    fn boundary_values() {
        let g = GumbelGenerator::new(2.0).unwrap();
        assert_eq!(g.phi(1.0).unwrap(), 0.0);
        assert_relative_eq!(g.phi((-1.0f64).exp()).unwrap(), 1.0, max_relative = 1e-15);
        assert_eq!(g.phi_inv(0.0).unwrap(), 1.0);
        assert_relative_eq!(
            g.phi_inv(1.0).unwrap(),
            (-1.0f64).exp(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn domain_errors() {
        let g = GumbelGenerator::new(1.5).unwrap();
        assert!(g.phi(0.0).is_err());
        assert!(g.phi(1.2).is_err());
        assert!(g.phi_inv(-1e-3).is_err());
        assert!(GumbelGenerator::new(1.0).is_err());
    }

    #[test]
    fn near_one_precision() {
        let g = GumbelGenerator::new(1.5).unwrap();
        // (-ln 0.998)^1.5 = 0.002002002670673...^1.5
        let expected = 0.002_002_002_670_673_07_f64.powf(1.5);
        assert_relative_eq!(
            g.phi(1.0 - 1.0 / 500.0).unwrap(),
            expected,
            max_relative = 1e-13
        );
        assert_relative_eq!(g.phi_one_minus(1.0 / 500.0), expected, max_relative = 1e-14);
        assert_relative_eq!(expected, 8.9577e-5, max_relative = 1e-4);
    }

    #[test]
    fn round_trip() {
        for alpha in [1.1, 1.5, 2.0, 5.0] {
            let g = GumbelGenerator::new(alpha).unwrap();
            for u in [0.01, 0.5, 0.999] {
                assert_relative_eq!(
                    g.phi_inv(g.phi(u).unwrap()).unwrap(),
                    u,
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn regular_variation_at_one() {
        let g = GumbelGenerator::new(1.5).unwrap();
        let t = 1e6;
        for x in [2.0, 10.0] {
            let ratio = g.phi_one_minus(1.0 / (t * x)) / g.phi_one_minus(1.0 / t);
            assert_relative_eq!(ratio, x.powf(-1.5), max_relative = 1e-2);
        }
    }

    #[test]
    fn conditional_uniform_limits() {
        let g = GumbelGenerator::new(3.0).unwrap();
        let mut rng = RngStream::from_seed(3);
        let tiny_v = g.sample_uniforms(50, 1e-12, &mut rng);
        assert!(tiny_v.iter().all(|&u| u < 1e-2));
        let huge_v = g.sample_uniforms(50, 1e12, &mut rng);
        assert!(huge_v.iter().all(|&u| u > 0.9));
    }
}
