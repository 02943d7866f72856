use rand_distr::{Binomial, Distribution};

use super::LossModel;
use crate::archimedean::{LtGenerator, MixingLaw};
use crate::error::{Error, Result};
use crate::portfolio::exceeds;
use crate::rng::RngStream;

pub(crate) fn binomial(rng: &mut RngStream, count: u64, p: f64) -> Result<u64> {
    let dist = Binomial::new(count, p)
        .map_err(|e| Error::Estimation(format!("binomial({count}, {p}): {e}")))?;
    Ok(dist.sample(rng))
}

impl<G: LtGenerator> LossModel<G> {
    /// One crude replication: `1{L_n > nb}` under the original measure.
    pub fn naive_one_rep(&self, rng: &mut RngStream) -> Result<bool> {
        let v = self.law.sample(rng);
        let mut loss = 0.0;
        for (g, lp) in self.portfolio.groups().iter().zip(self.default_probs(v)) {
            loss += g.exposure * binomial(rng, g.count, lp.prob())? as f64;
        }
        Ok(exceeds(loss, self.threshold))
    }
}
