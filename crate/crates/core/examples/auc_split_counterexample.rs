//! Counting ID/OOD splits that a finite ranking space cannot separate.

use oodlab::auc::{all_order_types, linear_rankers_1d};
use oodlab::counterexamples::{auc_unrealizable_split, separate_auc_size_threshold};

fn main() -> oodlab::Result<()> {
    let rankers = linear_rankers_1d(&[0.0, 1.0, 2.0, 3.0])?;
    let cert = auc_unrealizable_split(&rankers)?;
    println!("linear rankers on 4 collinear points: {}", cert.verdict);
    for (key, value) in &cert.ledger {
        println!("  {key}: {value}");
    }

    match auc_unrealizable_split(&all_order_types(3)?) {
        Ok(_) => println!("unexpected split for the full order-type space"),
        Err(e) => println!("full order-type space: {e}"),
    }
    for d in 1..=3 {
        println!("size threshold for input dimension {d}: {:.1}", separate_auc_size_threshold(d));
    }
    Ok(())
}
