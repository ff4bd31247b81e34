//! The generating graph on classes, with the parts induced by the Borel /
//! nonsplit dihedral covering, written as DOT.
//!
//! Run with `cargo run --example lambda_graph -- 7 > lambda7.dot`.

use invgen::iggraph::{covering_parts, edges_cross_parts, lambda_graph};
use invgen::structure::{psi2_structural, verify_2covering, StructuralModel};

fn main() -> invgen::Result<()> {
    let q: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(7);
    let model = StructuralModel::new(q)?;
    let table = psi2_structural(&model);

    let full = lambda_graph(&table, false);
    let isolated: Vec<&str> = full.isolated().iter().map(|&v| full.name(v)).collect();
    eprintln!("isolated classes: {isolated:?}");

    let mut g = lambda_graph(&table, true);
    let parts = covering_parts(&g, &verify_2covering(&model));
    eprintln!("edges cross the covering parts: {}", edges_cross_parts(&g, &parts));
    g.set_parts(parts);
    eprintln!("{}", g.summary());
    eprintln!("clique {} chromatic {}", g.clique_number()?, g.chromatic_number()?);
    print!("{}", g.to_dot());
    Ok(())
}
