//! Symbolic conjugacy classes of PSL(2, q), checked against enumeration
//! when the group is small enough.
//!
//! Run with `cargo run --example class_inventory -- 13`.

use std::collections::BTreeMap;

use invgen::psl2::{Psl2, DEFAULT_ENUMERATION_CAP};

fn main() -> invgen::Result<()> {
    let q: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(13);
    let g = Psl2::from_order(q)?;
    let inv = g.inventory()?;
    println!("PSL(2, {q}): order {}, {} classes, |Out| = {}", g.order(), inv.len(), g.out_order());
    for e in inv.entries() {
        println!("  {:<16} order {:>4}  size {:>8}", e.label.to_string(), e.order, e.size);
    }

    if g.q() <= DEFAULT_ENUMERATION_CAP {
        let mut counted: BTreeMap<_, u64> = BTreeMap::new();
        for x in g.enumerate(DEFAULT_ENUMERATION_CAP)? {
            *counted.entry(g.class_of(&x)?).or_default() += 1;
        }
        let agree = inv.entries().iter().all(|e| counted.get(&e.label) == Some(&e.size));
        println!("enumeration of all {} elements agrees: {agree}", counted.values().sum::<u64>());
    }
    Ok(())
}
