//! Graphs of direct powers S^t from the column criterion, and their
//! component counts against half the central binomial coefficient.
//!
//! Run with `cargo run --release --example power_graph`.

use invgen::autorbits::{beta, AutAction};
use invgen::iggraph::{component_bound, lambda_power, DEFAULT_VERTEX_CAP};
use invgen::structure::{psi2_structural, StructuralModel};

fn main() -> invgen::Result<()> {
    for (q, t) in [(5u64, 2usize), (7, 2), (7, 4), (9, 2), (4, 2)] {
        let model = StructuralModel::new(q)?;
        let table = psi2_structural(&model);
        let b = beta(&table, &AutAction::new(model.group(), model.inventory()))?;
        let g = lambda_power(&table, &b.partition, t, true, DEFAULT_VERTEX_CAP)?;
        let s = g.summary();
        print!("q = {q:>2}, t = {t}, beta = {}: {s}", b.beta);
        if t == b.beta {
            let bound = component_bound(t as u64)?;
            print!(", bound {}", bound.bound);
        }
        println!();
    }
    Ok(())
}
