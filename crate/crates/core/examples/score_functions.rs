//! Softmax, temperature-scaled and energy scores, and the classifiers they induce.

use oodlab::domain::FeatureSpace;
use oodlab::fcnn::{score_induced_space, score_interpolating_network, score_value, ScoreFunction, ScoreKind};

fn main() -> oodlab::Result<()> {
    let v = [2.0, 0.5, -1.0];
    for kind in [ScoreKind::Softmax, ScoreKind::TempScaled { t: 2.0 }, ScoreKind::Energy { t: 1.0 }] {
        println!("{kind:?} on {v:?} = {:.6}", score_value(kind, &v));
    }

    let x = FeatureSpace::line(3)?;
    let score = ScoreFunction::new(ScoreKind::Energy { t: 1.0 }, 1.0, 2)?;
    let targets = [vec![1u8, 1, 1], vec![2, 2, 2], vec![1, 1, 2], vec![2, 1, 2]];
    let nets = targets
        .iter()
        .map(|l| score_interpolating_network(l, &x, &score, 2))
        .collect::<oodlab::Result<Vec<_>>>()?;
    let space = score_induced_space(&nets, &score, &x)?;
    println!("energy-score classifiers (label 2 = rejected): {:?}", space.members());
    Ok(())
}
