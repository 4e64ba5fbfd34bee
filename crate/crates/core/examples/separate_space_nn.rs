//! The nearest-neighbour threshold learner on a separate domain.

use oodlab::domain::{FeatureSpace, FiniteDomain, IdJoint, OodMarginal};
use oodlab::learners::{nn_rate_bound, nn_threshold_learner, TrainingSet};
use oodlab::loss::{risk_in, risk_out, LossTable};

fn main() -> oodlab::Result<()> {
    let x = FeatureSpace::grid(4, 3)?;
    let id = IdJoint::uniform(12, 1, &[(0, 1), (1, 1), (4, 1), (5, 1)])?;
    let ood = OodMarginal::uniform(12, &[3, 7, 10, 11])?;
    let domain = FiniteDomain::new(id, ood, 0.5)?;
    let loss = LossTable::zero_one(1);

    for n in [1, 2, 4, 8, 16, 32] {
        let trials = 200;
        let mut mean_in = 0.0;
        let mut max_out: f64 = 0.0;
        for seed in 0..trials {
            let s = TrainingSet::sample(&domain, n, seed)?;
            let h = nn_threshold_learner(&s, &x)?;
            mean_in += risk_in(h.labels(), &domain, &loss)? / trials as f64;
            max_out = max_out.max(risk_out(h.labels(), &domain, &loss)?);
        }
        println!(
            "n = {n:>2}: mean R_in = {mean_in:.4}, max R_out = {max_out}, rate bound = {:.4}",
            nn_rate_bound(4, n)
        );
    }
    Ok(())
}
