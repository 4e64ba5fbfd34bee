//! Constrained ERM with rejection, and the constrained thresholded ranker.

use oodlab::auc::{all_order_types, auc};
use oodlab::domain::{FiniteDomain, IdJoint, OodMarginal};
use oodlab::hypothesis::exhaustive_labelings;
use oodlab::learners::{constrained_auc_learner, constrained_reject_learner, threshold_pairs, TrainingSet};
use oodlab::loss::{alpha_risk, LossTable};

fn main() -> oodlab::Result<()> {
    let id = IdJoint::uniform(4, 2, &[(0, 1), (1, 2)])?;
    let domain = FiniteDomain::new(id, OodMarginal::uniform(4, &[2, 3])?, 0.5)?;
    let loss = LossTable::zero_one(2);
    let s = TrainingSet::new(vec![(0, 1), (1, 2), (0, 1)], 2)?;
    let aux = [0, 1, 2, 3];

    let h = constrained_reject_learner(&s, &aux, &exhaustive_labelings(4, 2)?, &loss)?;
    println!("constrained reject learner output {:?}", h.labels());
    for alpha in [0.0, 0.5, 1.0] {
        println!("  R^{alpha} = {}", alpha_risk(h.labels(), &domain, &loss, alpha)?);
    }

    let rankers = all_order_types(4)?;
    let pairs = threshold_pairs(&rankers);
    let binary = TrainingSet::new(vec![(0, 1), (1, 1)], 1)?;
    let out = constrained_auc_learner(&binary, &aux, &rankers, &pairs)?;
    println!(
        "thresholded ranker {:?} at tau {} rejects {} auxiliary points, AUC {}",
        out.ranker.scores(),
        out.tau,
        out.rejected_aux,
        auc(&out.ranker, &domain)?
    );
    Ok(())
}
