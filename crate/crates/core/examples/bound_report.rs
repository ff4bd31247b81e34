//! Certified lower bounds on component counts from the pair table alone,
//! as exact integers and in log2 form.
//!
//! Run with `cargo run --release --example bound_report -- 25 49 121 1024`.

use invgen::iggraph::n_lower_bound_report;
use invgen::structure::{psi2_structural, StructuralModel};

fn main() -> invgen::Result<()> {
    let mut qs: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if qs.is_empty() {
        qs = vec![5, 7, 25, 64, 125, 1024];
    }
    for q in qs {
        let model = StructuralModel::new(q)?;
        let table = psi2_structural(&model);
        let r = n_lower_bound_report(&model, &table)?;
        let digits = r.bound.to_string();
        let shown = if digits.len() > 40 { format!("{}...({} digits)", &digits[..20], digits.len()) } else { digits };
        println!(
            "q = {q:>4}: |Psi2| = {:>6}, |Out| = {:>2}, beta >= {:>6}, bound = {shown}, log2 = {:.2}",
            table.len(),
            model.group().out_order(),
            r.beta_lower,
            r.log2
        );
    }
    Ok(())
}
