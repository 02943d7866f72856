use rand::Rng;
use rand_distr::Exp1;

use super::naive::binomial;
use super::twist::solve_theta_star_log;
use super::LossModel;
use crate::archimedean::{LtGenerator, MixingLaw};
use crate::error::{Error, Result};
use crate::portfolio::exceeds;
use crate::rng::RngStream;

/// One draw of the mixing variable under the proposal, with its likelihood
/// ratio `f_V(V) / f*_V(V)` in log form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VDraw {
    /// May be `+∞` when the Pareto tail overshoots the `f64` range.
    pub v: f64,
    pub ln_v: f64,
    pub ln_lr: f64,
}

/// Result of one importance-sampling replication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsOutcome {
    pub loss: f64,
    /// Log of the full likelihood ratio `L*`.
    pub ln_weight: f64,
    pub exceeded: bool,
}

impl IsOutcome {
    pub fn weight(&self) -> f64 {
        self.ln_weight.exp()
    }

    /// `1{L_n > nb} L*`
    pub fn tail_value(&self) -> f64 {
        if self.exceeded {
            self.weight()
        } else {
            0.0
        }
    }
}

/// Two-step importance sampler.
///
/// Step one keeps the law of `V` below the splice point `x0` and replaces
/// its tail by a Pareto tail of shape `η = -1 / ln φ(1 - f_n)` carrying the
/// same mass `P(V ≥ x0)`. Step two twists the conditional default
/// probabilities so that the conditional mean loss reaches `n b`.
#[derive(Debug)]
pub struct ImportanceSampler<'a, G: LtGenerator> {
    model: &'a LossModel<G>,
    x0: f64,
    ln_x0: f64,
    shape: f64,
    /// ln P(V ≥ x0)
    ln_sf_x0: f64,
}

impl<'a, G: LtGenerator> ImportanceSampler<'a, G> {
    pub fn new(model: &'a LossModel<G>, x0: f64) -> Result<Self> {
        if !(x0 > 0.0 && x0.is_finite()) {
            return Err(Error::domain(format!(
                "splice point x0 must be positive, got {x0}"
            )));
        }
        let phi = model.generator.phi_one_minus(model.f_n);
        if phi.is_nan() || phi >= 1.0 {
            return Err(Error::domain(format!(
                "Pareto shape needs φ(1 - f_n) < 1, got {phi}"
            )));
        }
        let sf = model.law.sf(x0)?;
        if sf <= 0.0 {
            return Err(Error::domain(format!("P(V ≥ x0) vanishes at x0 = {x0}")));
        }
        Ok(ImportanceSampler {
            model,
            x0,
            ln_x0: x0.ln(),
            shape: -1.0 / phi.ln(),
            ln_sf_x0: sf.ln(),
        })
    }

    /// Pareto tail index `η`.
    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn sample_v(&self, rng: &mut RngStream) -> Result<VDraw> {
        let v = self.model.law.sample(rng);
        if v < self.x0 {
            return Ok(VDraw {
                v,
                ln_v: v.ln(),
                ln_lr: 0.0,
            });
        }
        let e: f64 = rng.sample(Exp1);
        let ln_v = self.ln_x0 + e / self.shape;
        let ln_proposal =
            self.ln_sf_x0 + self.shape.ln() + self.shape * self.ln_x0 - (self.shape + 1.0) * ln_v;
        let ln_lr = self.model.law.ln_pdf_ln(ln_v)? - ln_proposal;
        Ok(VDraw {
            v: ln_v.exp(),
            ln_v,
            ln_lr,
        })
    }

    pub fn one_rep(&self, rng: &mut RngStream) -> Result<IsOutcome> {
        let draw = self.sample_v(rng)?;
        let model = self.model;
        let probs = model.default_probs(draw.v);
        let twist = match solve_theta_star_log(&model.portfolio, &probs, model.threshold) {
            Ok(t) => t,
            // the groups that can still default cannot reach the threshold:
            // the indicator is zero under both measures
            Err(Error::LossUnattainable { .. }) => {
                return Ok(IsOutcome {
                    loss: 0.0,
                    ln_weight: draw.ln_lr,
                    exceeded: false,
                })
            }
            Err(e) => return Err(e),
        };
        let mut loss = 0.0;
        let mut ln_lr = draw.ln_lr;
        for ((g, p), q) in model
            .portfolio
            .groups()
            .iter()
            .zip(&probs)
            .zip(&twist.twisted)
        {
            let d = binomial(rng, g.count, q.prob())?;
            loss += g.exposure * d as f64;
            ln_lr += log_lr_term(d, p.ln_p, q.ln_p) + log_lr_term(g.count - d, p.ln_q, q.ln_q);
        }
        Ok(IsOutcome {
            loss,
            ln_weight: ln_lr,
            exceeded: exceeds(loss, model.threshold),
        })
    }

    /// `1{L_n > nb} L*` for one replication.
    pub fn tail_one_rep(&self, rng: &mut RngStream) -> Result<f64> {
        Ok(self.one_rep(rng)?.tail_value())
    }
}

fn log_lr_term(count: u64, ln_original: f64, ln_twisted: f64) -> f64 {
    if count == 0 || ln_original == ln_twisted {
        0.0
    } else {
        count as f64 * (ln_original - ln_twisted)
    }
}
