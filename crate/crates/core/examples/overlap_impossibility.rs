//! Overlap between ID and OOD supports forces a positive α-risk gap.

use oodlab::counterexamples::{alpha_risk_gap, overlap_certificate, overlap_domain};
use oodlab::hypothesis::HypothesisSpace;
use oodlab::loss::LossTable;

fn main() -> oodlab::Result<()> {
    let loss = LossTable::zero_one(1);
    // The two constant hypotheses on a single point.
    let space = HypothesisSpace::from_members(1, 1, vec![vec![1], vec![2]])?;
    let domain = overlap_domain(&space)?;
    println!("overlap set: {:?}", domain.overlap_set());

    for alpha in [0.25, 0.5, 0.75] {
        let gap = alpha_risk_gap(&domain, &space, &loss, alpha)?;
        println!(
            "alpha {alpha}: inf R^alpha = {:.3}, chord = {:.3}, gap = {:.3}, lower bound = {:?}",
            gap.inf_alpha,
            (1.0 - alpha) * gap.inf_in + alpha * gap.inf_out,
            gap.gap,
            gap.bound
        );
    }

    let cert = overlap_certificate(&space, &loss, 0.5)?;
    println!("certificate verified: {}", cert.verified());
    for c in &cert.checks {
        println!("  {}: {} {} {} -> {}", c.name, c.lhs, c.relation, c.rhs, c.holds);
    }
    Ok(())
}
