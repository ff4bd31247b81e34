//! The full check suite over a range of q, printed as JSON.
//!
//! Run with `cargo run --release --example verify_sweep -- 4 1024`.

use invgen::verify::{run, VerifyOptions};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (lo, hi) = match args[..] {
        [lo, hi, ..] => (lo, hi),
        _ => (4, 256),
    };
    let report = run(&VerifyOptions::new(lo, hi));
    println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("json"));
    if !report.passed() {
        std::process::exit(1);
    }
}
