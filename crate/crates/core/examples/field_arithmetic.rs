//! Arithmetic in GF(p^f): modulus choice, squares, Frobenius and subfields.
//!
//! Run with `cargo run --example field_arithmetic -- 3 2`.

use invgen::gf::GfContext;

fn main() -> invgen::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (p, f) = match args[..] {
        [p, f, ..] => (p, f as u32),
        _ => (3, 2),
    };
    let k = GfContext::new(p, f)?;
    println!("GF({}) = GF({p}^{f}), modulus coefficients (constant first) {:?}", k.q(), k.modulus());
    let w = k.primitive_element();
    println!("primitive element {w} of order {}", k.multiplicative_order(w)?);

    println!("{:>4} {:>8} {:>6} {:>6} {:>10}", "a", "coeffs", "a^-1", "a^p", "square");
    for a in k.elements() {
        let inv = k.inv(a).map(|x| x.to_string()).unwrap_or_else(|_| "-".into());
        println!(
            "{:>4} {:>8} {:>6} {:>6} {:>10}",
            a.to_string(),
            format!("{:?}", k.coeffs(a)),
            inv,
            k.frobenius(a).to_string(),
            k.is_square(a)
        );
    }
    for e in (1..=f).filter(|e| f % e == 0) {
        let n = k.elements().filter(|&a| k.in_subfield(a, e).unwrap()).count();
        println!("subfield GF({p}^{e}) has {n} elements");
    }
    Ok(())
}
