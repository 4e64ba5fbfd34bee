//! Learnability verdicts for a few domain spaces.

use oodlab::conditions::{learnability_verdict, VerdictMode};
use oodlab::domain::{DomainSpaceSpec, FiniteDomain, IdJoint, OodMarginal, SpaceKind};
use oodlab::experiment::verdict_table;
use oodlab::hypothesis::{exhaustive_labelings, threshold_space, HypothesisSpace};
use oodlab::loss::LossTable;

fn main() -> oodlab::Result<()> {
    let loss = LossTable::zero_one(1);
    let separate = FiniteDomain::new(IdJoint::uniform(3, 1, &[(0, 1)])?, OodMarginal::uniform(3, &[2])?, 0.5)?;
    let overlapping = FiniteDomain::new(IdJoint::uniform(3, 1, &[(0, 1), (1, 1)])?, OodMarginal::uniform(3, &[1, 2])?, 0.5)?;

    // Thresholds plus the all-OOD constant: every point can be rejected, but
    // the space is too small to fit every separate domain.
    let mut members = threshold_space(3)?.members();
    members.push(vec![2, 2, 2]);
    let small = HypothesisSpace::from_members(3, 1, members)?;

    let cases = [
        ("separate, exhaustive", SpaceKind::Separate, separate.clone(), exhaustive_labelings(3, 1)?),
        ("separate, thresholds", SpaceKind::Separate, separate.clone(), threshold_space(3)?),
        ("separate, thresholds + reject-all", SpaceKind::Separate, separate, small),
        ("total, exhaustive", SpaceKind::Total, overlapping, exhaustive_labelings(3, 1)?),
    ];
    for (name, kind, member, space) in cases {
        let spec = DomainSpaceSpec::new(kind, vec![member])?;
        let record = learnability_verdict(&spec, VerdictMode::Risk { space: &space, loss: &loss, decomposition: None })?;
        println!("== {name}: {}", record.verdict);
        print!("{}", verdict_table(&record));
    }
    Ok(())
}
