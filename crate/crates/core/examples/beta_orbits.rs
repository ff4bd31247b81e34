//! Outer automorphism orbits on the generating pairs.
//!
//! Run with `cargo run --example beta_orbits -- 9`.

use std::collections::BTreeMap;

use invgen::autorbits::{beta, AutAction};
use invgen::structure::{psi2_structural, StructuralModel};

fn main() -> invgen::Result<()> {
    let q: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(9);
    let model = StructuralModel::new(q)?;
    let table = psi2_structural(&model);
    let action = AutAction::new(model.group(), model.inventory());
    let report = beta(&table, &action)?;

    let mut orbits: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (&(i, j), &o) in table.pairs().iter().zip(&report.partition.orbit_of) {
        orbits.entry(o).or_default().push(format!("({}, {})", table.labels()[i], table.labels()[j]));
    }
    for (o, pairs) in &orbits {
        println!("orbit {o}: {}", pairs.join(" "));
    }
    println!(
        "q = {q}: {} pairs, |Out| = {}, beta = {}, consistent = {}",
        report.psi2,
        report.out_order,
        report.beta,
        report.consistent()
    );
    Ok(())
}
