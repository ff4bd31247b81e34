//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//! Set `INVGEN_EXTENDED=1` to add the oracle run on q = 16, 25, 27.

use std::time::{Duration, Instant};

use num_bigint::BigUint;

use invgen::arith::prime_powers_in;
use invgen::autorbits::{beta, orbit_partition, AutAction};
use invgen::iggraph::{covering_parts, edges_cross_parts, lambda_graph, lambda_power, n_lower_bound_report, component_bound};
use invgen::oracle::{Oracle, OracleOptions};
use invgen::psl2::{ClassLabel, Psl2};
use invgen::structure::{psi2_structural, verify_2covering, Psi2Table, StructuralModel};
use invgen::verify::{expected_isolated, probability_deviation, psi2_ratio, PROBABILITY_CONSTANT, PSI2_RATIO_RANGE};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle(q: u64) -> Result<Oracle, String> {
    let opts = OracleOptions { cap: 31, early_exit: true, centraliser_reduction: true };
    Oracle::with_options(Psl2::from_order(q).map_err(|e| e.to_string())?, opts).map_err(|e| e.to_string())
}

fn model(q: u64) -> Result<(StructuralModel, Psi2Table), String> {
    let m = StructuralModel::new(q).map_err(|e| e.to_string())?;
    let t = psi2_structural(&m);
    Ok((m, t))
}

fn class_count() -> Outcome {
    let qs = prime_powers_in(4, 1024);
    for &q in &qs {
        let g = Psl2::from_order(q).map_err(|e| e.to_string())?;
        let d = g.d() as u64;
        let n = g.inventory().map_err(|e| e.to_string())?.len() as u64;
        ensure(n == (q + 4 * d - 3) / d, || format!("q = {q}: {n} classes"))?;
    }
    Ok(format!("{} values of q", qs.len()))
}

fn oracle_equivalence(qs: &[u64]) -> Outcome {
    for &q in qs {
        let (_, s) = model(q)?;
        let o = oracle(q)?.psi2();
        ensure(o.same_pairs(&s), || format!("q = {q}: oracle {} pairs, structural {}", o.len(), s.len()))?;
    }
    Ok(format!("q in {qs:?}"))
}

fn isolated_census() -> Outcome {
    let cases: [(&[u64], usize); 4] = [(&[7], 1), (&[9], 3), (&[13, 17, 25, 29, 8, 16], 1), (&[11, 19, 23], 0)];
    for (qs, n) in cases {
        for &q in qs {
            let (m, s) = model(q)?;
            let found = oracle(q)?.isolated_vertices();
            let structural: Vec<ClassLabel> = s.isolated().iter().map(|&i| s.labels()[i]).collect();
            ensure(found == structural, || format!("q = {q}: oracle {found:?} vs structural {structural:?}"))?;
            ensure(found.len() == n, || format!("q = {q}: {} isolated, expected {n}", found.len()))?;
            let expected = expected_isolated(&m);
            ensure(found == expected, || format!("q = {q}: {found:?}, expected {expected:?}"))?;
            if q == 7 {
                let order = m.inventory().get(m.inventory().find(&found[0]).unwrap()).order;
                ensure(order == 3, || "q = 7: isolated class is not of order 3".into())?;
            }
        }
    }
    Ok("q = 7, 9, 13, 17, 25, 29, 8, 16, 11, 19, 23 by oracle".into())
}

fn bipartite_connected() -> Outcome {
    let mut worst = 0;
    for q in prime_powers_in(4, 1024) {
        let (m, s) = model(q)?;
        let g = lambda_graph(&s, true);
        let parts = covering_parts(&g, &verify_2covering(&m));
        ensure(g.is_bipartite() && edges_cross_parts(&g, &parts), || format!("q = {q}: not bipartite"))?;
        let sum = g.summary();
        ensure(sum.components == 1, || format!("q = {q}: {} components", sum.components))?;
        ensure(sum.diameter <= 3, || format!("q = {q}: diameter {}", sum.diameter))?;
        worst = worst.max(sum.diameter);
    }
    Ok(format!("max diameter {worst}"))
}

fn probability() -> Outcome {
    let mut sup: f64 = 0.0;
    for q in prime_powers_in(64, 1024) {
        let (m, s) = model(q)?;
        let dev = probability_deviation(m.q(), &s);
        ensure(dev <= PROBABILITY_CONSTANT, || format!("q = {q}: q*dev = {dev:.3}"))?;
        sup = sup.max(dev);
    }
    Ok(format!("sup q*| |Psi2|/k^2 - 1/2 | = {sup:.4} <= {PROBABILITY_CONSTANT}"))
}

fn psi2_asymptotic() -> Outcome {
    let (mut lo, mut hi) = (f64::MAX, f64::MIN);
    for q in prime_powers_in(64, 1024) {
        let (m, s) = model(q)?;
        let r = psi2_ratio(&m, &s);
        ensure((PSI2_RATIO_RANGE.0..=PSI2_RATIO_RANGE.1).contains(&r), || format!("q = {q}: ratio {r:.4}"))?;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok(format!("ratio in [{lo:.4}, {hi:.4}]"))
}

fn beta_pipeline() -> Outcome {
    for (q, expected) in [(5u64, 2usize), (7, 4), (9, 2)] {
        let (m, s) = model(q)?;
        let o = oracle(q)?.psi2();
        ensure(o.same_pairs(&s), || format!("q = {q}: table not certified"))?;
        let r = beta(&o, &AutAction::new(m.group(), m.inventory())).map_err(|e| e.to_string())?;
        ensure(r.beta == expected, || format!("q = {q}: beta {} expected {expected}", r.beta))?;
    }
    let qs = prime_powers_in(4, 1024);
    for &q in &qs {
        let (m, s) = model(q)?;
        let r = beta(&s, &AutAction::new(m.group(), m.inventory())).map_err(|e| e.to_string())?;
        ensure(r.even && r.within_bounds, || format!("q = {q}: beta {} for {} pairs", r.beta, r.psi2))?;
    }
    Ok(format!("beta(5)=2 beta(7)=4 beta(9)=2; even and bounded for {} values of q", qs.len()))
}

fn power_graph() -> Outcome {
    let (m, s) = model(5)?;
    let b = beta(&s, &AutAction::new(m.group(), m.inventory())).map_err(|e| e.to_string())?;
    let g = lambda_power(&s, &b.partition, 2, true, 1_000_000).map_err(|e| e.to_string())?;
    let comps = g.components().1;
    ensure(g.vertex_count() == 4, || format!("{} vertices", g.vertex_count()))?;
    ensure(comps == 1, || format!("{comps} components"))?;
    let bound = component_bound(b.beta as u64).map_err(|e| e.to_string())?.bound;
    ensure(bound == BigUint::from(1u32) && BigUint::from(comps) >= bound, || format!("bound {bound}"))?;
    let cov = verify_2covering(&m);
    for v in 0..g.vertex_count() {
        let t = g.tuple(v);
        let p1 = t.iter().filter(|l| cov.only_borel.contains(l)).count();
        let p2 = t.iter().filter(|l| cov.only_dihedral.contains(l)).count();
        ensure(p1 == 1 && p2 == 1, || format!("vertex {} is unbalanced", g.name(v)))?;
    }
    Ok("4 vertices, 1 component, bound 1, one coordinate per part".into())
}

fn bound_report() -> Outcome {
    let (m, s) = model(25)?;
    let r = n_lower_bound_report(&m, &s).map_err(|e| e.to_string())?;
    let out = m.group().out_order();
    ensure(r.beta_lower == (s.len() as u64).div_ceil(out), || "wrong beta lower bound".into())?;
    let bits = r.bound.bits() as f64;
    ensure(r.log2 <= bits && r.log2 >= bits - 1.0 - 1e-9, || format!("log2 {} vs {} bits", r.log2, bits))?;
    Ok(format!(
        "|Psi2| = {}, d*f = {out}, beta_lb = {}, bound = {} (log2 {:.3})",
        s.len(),
        r.beta_lower,
        r.bound,
        r.log2
    ))
}

fn self_consistency() -> Outcome {
    let qs = prime_powers_in(4, 1024);
    for &q in &qs {
        let (m, s) = model(q)?;
        ensure(s.is_symmetric(), || format!("q = {q}: asymmetric"))?;
        ensure(s.pairs().iter().all(|&(i, j)| !s.labels()[i].is_identity() && !s.labels()[j].is_identity()), || {
            format!("q = {q}: identity in a pair")
        })?;
        orbit_partition(&s, &AutAction::new(m.group(), m.inventory())).map_err(|e| format!("q = {q}: {e}"))?;
    }
    for q in [4u64, 5, 7, 8, 9, 11, 13] {
        ensure(oracle(q)?.check_power_conjugacy(), || format!("q = {q}: power conjugacy"))?;
    }
    for q in prime_powers_in(5, 31).into_iter().filter(|q| q % 2 == 1) {
        let eps: i64 = if q % 4 == 1 { 1 } else { -1 };
        let n = oracle(q)?.involution_count() as i64;
        ensure(n == q as i64 * (q as i64 + eps) / 2, || format!("q = {q}: {n} involutions"))?;
    }
    Ok(format!("symmetry and invariance for {} values of q; powers for q <= 13; involutions for odd q <= 31", qs.len()))
}

fn main() {
    let extended = std::env::var("INVGEN_EXTENDED").is_ok_and(|v| v == "1");
    type Criterion = (u32, &'static str, u64, Box<dyn Fn() -> Outcome>);
    let mut criteria: Vec<Criterion> = vec![
        (1, "class count formula", 10, Box::new(class_count)),
        (2, "oracle equivalence", 120, Box::new(|| oracle_equivalence(&[4, 5, 7, 8, 9, 11, 13]))),
        (3, "isolated vertex census", 60, Box::new(isolated_census)),
        (4, "bipartite, connected, diameter <= 3", 60, Box::new(bipartite_connected)),
        (5, "probability convergence", 60, Box::new(probability)),
        (6, "pair count asymptotic", 60, Box::new(psi2_asymptotic)),
        (7, "beta pipeline", 60, Box::new(beta_pipeline)),
        (8, "power graph ground truth", 10, Box::new(power_graph)),
        (9, "bound report", 10, Box::new(bound_report)),
        (10, "self-consistency", 120, Box::new(self_consistency)),
    ];
    if extended {
        criteria.push((2, "oracle equivalence (extended)", 900, Box::new(|| oracle_equivalence(&[16, 25, 27]))));
    }
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let result = match result {
            Ok(detail) if took > Duration::from_secs(limit) => {
                Err(format!("{detail}; took {:.1}s, limit {limit}s", took.as_secs_f64()))
            }
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS criterion {n:>2}: {name} [{detail}] ({:.2}s)", took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n:>2}: {name} [{why}] ({:.2}s)", took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
