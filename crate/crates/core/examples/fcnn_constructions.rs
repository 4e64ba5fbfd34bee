//! Network embedding, point isolation and label interpolation.

use oodlab::domain::FeatureSpace;
use oodlab::fcnn::{
    arch_precedes, embed_network, induced_hypothesis, interpolating_network, network_ranker, point_isolating_ranker,
    Architecture, Layer, ReluNetwork,
};
use oodlab::hypothesis::exhaustive_labelings;

fn main() -> oodlab::Result<()> {
    let small = Architecture::new(vec![1, 2, 1])?;
    let big = Architecture::new(vec![1, 3, 3, 1])?;
    println!("{:?} precedes {:?}: {}", small.widths(), big.widths(), arch_precedes(&small, &big));

    let net = ReluNetwork::new(
        small,
        vec![
            Layer { weights: vec![1.0, -1.0], bias: vec![0.0, 0.5] },
            Layer { weights: vec![2.0, 1.0], bias: vec![-0.25] },
        ],
    )?;
    let embedded = embed_network(&net, &big)?;
    for p in [-1.0, 0.0, 0.3, 2.0] {
        println!("f({p}) = {:?}, embedded = {:?}", net.forward(&[p])?, embedded.forward(&[p])?);
    }

    let x = FeatureSpace::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0], vec![1.5, 1.5]])?;
    for t in 0..x.len() {
        let r = network_ranker(&point_isolating_ranker(t, &x)?, &x)?;
        println!("isolating point {t}: scores {:?}", r.scores());
    }

    let line = FeatureSpace::line(3)?;
    for labels in exhaustive_labelings(3, 1)?.iter() {
        let net = interpolating_network(labels, &line, 1)?;
        let h = induced_hypothesis(&net, &line, 1)?;
        println!("target {labels:?} -> induced {:?} with widths {:?}", h.labels(), net.arch().widths());
    }
    Ok(())
}
