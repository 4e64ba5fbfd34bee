//! Dispatching a sample to the closest reference class by MMD.

use oodlab::domain::{FeatureSpace, FiniteDomain, IdJoint, OodMarginal};
use oodlab::hypothesis::Hypothesis;
use oodlab::learners::{mmd_dispatch_learner, Reference, TrainingSet};

fn main() -> oodlab::Result<()> {
    let x = FeatureSpace::line(5)?;
    let left = FiniteDomain::new(
        IdJoint::new(5, 1, &[(0, 1, 0.5), (1, 1, 0.3), (2, 1, 0.2)])?,
        OodMarginal::dirac(5, 4)?,
        0.5,
    )?;
    let right = FiniteDomain::new(
        IdJoint::new(5, 1, &[(2, 1, 0.2), (3, 1, 0.3), (4, 1, 0.5)])?,
        OodMarginal::dirac(5, 0)?,
        0.5,
    )?;
    let reject_right = |_: &TrainingSet| Hypothesis::new(vec![1, 1, 1, 2, 2], 1);
    let reject_left = |_: &TrainingSet| Hypothesis::new(vec![2, 2, 1, 1, 1], 1);
    let refs = [
        Reference { sample: TrainingSet::sample(&left, 64, 1)?, learner: &reject_right },
        Reference { sample: TrainingSet::sample(&right, 64, 2)?, learner: &reject_left },
    ];
    for (name, domain, seed) in [("left", &left, 10), ("right", &right, 11)] {
        let s = TrainingSet::sample(domain, 32, seed)?;
        let out = mmd_dispatch_learner(&s, &refs, &x, None)?;
        println!(
            "{name} sample -> class {:?}, MMD {:?}, output {:?}",
            out.diagnostics.chosen_class, out.diagnostics.mmd, out.hypothesis
        );
    }
    Ok(())
}
