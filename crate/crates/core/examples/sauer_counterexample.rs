//! A separate domain that a low-capacity space cannot fit.

use oodlab::counterexamples::sauer_pattern_domain;
use oodlab::hypothesis::{phi_project, sauer_bound, threshold_space, vc_dimension};
use oodlab::loss::LossTable;

fn main() -> oodlab::Result<()> {
    let loss = LossTable::zero_one(1);
    for m in [3, 5, 8] {
        let space = threshold_space(m)?;
        let v = vc_dimension(&phi_project(&space))?;
        println!("thresholds on {m} points: VC dimension {v}, counting bound {}", sauer_bound(v, m - 1));
    }
    let cert = sauer_pattern_domain(&threshold_space(6)?, &loss)?;
    println!("{}", serde_json::to_string_pretty(&cert).expect("certificate serializes"));
    Ok(())
}
