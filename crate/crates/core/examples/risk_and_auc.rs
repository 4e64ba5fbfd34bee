//! Risks, α-risk infima and AUC on a three-point domain.

use oodlab::auc::{auc, bayes_ranker, bayes_sup_auc, linear_rankers_1d, sup_auc};
use oodlab::domain::{FiniteDomain, IdJoint, OodMarginal};
use oodlab::hypothesis::exhaustive_labelings;
use oodlab::loss::{inf_alpha_risk, risk_in, risk_out, LossTable};

fn main() -> oodlab::Result<()> {
    // ID mass on points 0 and 1 (label 1), OOD mass split between 1 and 2.
    let id = IdJoint::new(3, 1, &[(0, 1, 0.75), (1, 1, 0.25)])?;
    let ood = OodMarginal::new(vec![0.0, 0.5, 0.5])?;
    let domain = FiniteDomain::new(id, ood, 0.5)?;
    let loss = LossTable::zero_one(1);

    let h = [1u8, 2, 2];
    println!("h = {h:?}: R_in = {}, R_out = {}", risk_in(&h, &domain, &loss)?, risk_out(&h, &domain, &loss)?);

    let space = exhaustive_labelings(3, 1)?;
    for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let best = inf_alpha_risk(&space, &domain, &loss, alpha)?;
        println!("alpha {alpha:.2}: inf = {:.4}, minimiser {:?}", best.value, space.member(best.representative));
    }

    let rankers = linear_rankers_1d(&[0.0, 1.0, 2.0])?;
    let best = sup_auc(&rankers, &domain)?;
    println!("sup AUC over 1-D linear rankers = {:.4}", best.value);
    println!("Bayes sup AUC = {:.4}", bayes_sup_auc(&domain));
    let r = bayes_ranker(&domain)?;
    println!("Bayes ranker scores {:?} reach AUC {:.4}", r.scores(), auc(&r, &domain)?);
    Ok(())
}
