use rand::Rng;
use rand_distr::Exp1;

use super::LossModel;
use crate::archimedean::{LtGenerator, MixingLaw};
use crate::error::Result;
use crate::portfolio::exceeds;
use crate::rng::RngStream;

/// Reusable buffers for [`LossModel::condmc_one_rep`].
#[derive(Debug, Default)]
pub struct ConditionalScratch {
    thresholds: Vec<f64>,
    pairs: Vec<(f64, f64)>,
}

impl<G: LtGenerator> LossModel<G> {
    /// One conditional Monte Carlo replication.
    ///
    /// Obligor `i` defaults iff `V > O_i = R_i / φ(1 - l_i f_n)`, so the loss
    /// exceeds `n b` iff `V > O_(k)` for the order statistic at which the
    /// cumulative exposure first exceeds `n b`. Returns `P(V > O_(k))`.
    pub fn condmc_one_rep(
        &self,
        rng: &mut RngStream,
        scratch: &mut ConditionalScratch,
    ) -> Result<f64> {
        let groups = self.portfolio.groups();
        let critical = match self.fixed_index {
            Some(k) => {
                let o = &mut scratch.thresholds;
                o.clear();
                for (g, phi) in groups.iter().zip(&self.group_phi) {
                    o.extend((0..g.count).map(|_| rng.sample::<f64, _>(Exp1) / phi));
                }
                let (_, kth, _) = o.select_nth_unstable_by((k - 1) as usize, f64::total_cmp);
                *kth
            }
            None => {
                let pairs = &mut scratch.pairs;
                pairs.clear();
                for (g, phi) in groups.iter().zip(&self.group_phi) {
                    pairs.extend(
                        (0..g.count).map(|_| (rng.sample::<f64, _>(Exp1) / phi, g.exposure)),
                    );
                }
                pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
                let mut cumulative = 0.0;
                let mut critical = f64::INFINITY;
                for &(o, c) in pairs.iter() {
                    cumulative += c;
                    if exceeds(cumulative, self.threshold) {
                        critical = o;
                        break;
                    }
                }
                critical
            }
        };
        if critical <= 0.0 {
            return Ok(1.0);
        }
        self.law.sf(critical)
    }
}
