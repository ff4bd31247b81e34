//! Brute-force certification of the structural pair table, the class
//! labels and the subgroup profiles.
//!
//! Run with `cargo run --release --example oracle_certification -- 4 5 7 8 9 11 13`.

use invgen::autorbits::{beta, AutAction};
use invgen::oracle::Oracle;
use invgen::structure::{psi2_structural, StructuralModel};

fn main() -> invgen::Result<()> {
    let mut qs: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if qs.is_empty() {
        qs = vec![4, 5, 7, 8, 9, 11, 13, 16, 25, 27];
    }
    println!("{:>4} {:>6} {:>6} {:>5} {:>9} {:>7} {:>8} {:>9}", "q", "|S|", "|Psi2|", "beta", "isolated", "match", "labels", "profiles");
    for q in qs {
        let model = StructuralModel::new(q)?;
        let oracle = Oracle::new(q)?;
        let table = oracle.psi2();
        let same = table.same_pairs(&psi2_structural(&model));
        let b = beta(&table, &AutAction::new(model.group(), model.inventory()))?;
        let fusion = oracle.class_fusion(&model)?;
        println!(
            "{:>4} {:>6} {:>6} {:>5} {:>9} {:>7} {:>8} {:>9}",
            q,
            oracle.size(),
            table.len(),
            b.beta,
            table.isolated().len(),
            same,
            oracle.certify_labels(),
            fusion.consistent
        );
        for r in fusion.records.iter().filter(|r| r.order != r.expected_order) {
            println!("      {} closed to order {}, expected {}", r.kind, r.order, r.expected_order);
        }
    }
    Ok(())
}
