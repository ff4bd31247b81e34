//! Range sweeps over prime powers `q`, checking the structural results and,
//! where the oracle can run, certifying them by exhaustion.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::autorbits::{beta, AutAction};
use crate::error::Result;
use crate::iggraph::{covering_parts, edges_cross_parts, lambda_graph};
use crate::oracle::{Oracle, OracleOptions};
use crate::psl2::ClassLabel;
use crate::structure::{psi2_structural, verify_2covering, Psi2Table, StructuralModel};

/// Values of `q` always certified by the oracle when in range.
pub const ORACLE_SET: [u64; 7] = [4, 5, 7, 8, 9, 11, 13];
/// Values added by the extended sweep.
pub const EXTENDED_ORACLE_SET: [u64; 3] = [16, 25, 27];
/// Smallest `q` for the asymptotic checks.
pub const ASYMPTOTIC_FROM: u64 = 64;
/// `| |Psi2| / k^2 - 1/2 | <= PROBABILITY_CONSTANT / q`.
pub const PROBABILITY_CONSTANT: f64 = 10.0;
/// Range for `|Psi2| 2 d^2 / q^2`.
pub const PSI2_RATIO_RANGE: (f64, f64) = (0.8, 1.2);

/// `q | |Psi2| / k^2 - 1/2 |` with `k` counting the identity class.
pub fn probability_deviation(q: u32, psi2: &Psi2Table) -> f64 {
    q as f64 * (psi2.probability() - 0.5).abs()
}

/// `|Psi2| 2 d^2 / q^2`.
pub fn psi2_ratio(model: &StructuralModel, psi2: &Psi2Table) -> f64 {
    let (q, d) = (model.q() as f64, model.group().d() as f64);
    psi2.len() as f64 * 2.0 * d * d / (q * q)
}

/// The isolated classes of the full graph by case analysis on `q`:
/// the order-3 class for `q = 7`, the involutions and both order-3 classes
/// for `q = 9`, nothing for other primes `q = 3 mod 4`, and the involution
/// class otherwise.
pub fn expected_isolated(model: &StructuralModel) -> Vec<ClassLabel> {
    let inv = model.inventory();
    let k = model.group().field();
    let q = k.q();
    let involution = if k.p() == 2 { ClassLabel::Unipotent(None) } else { ClassLabel::Involution };
    match q {
        7 => inv.of_order(3).into_iter().map(|i| inv.label(i)).collect(),
        9 => {
            let mut v: Vec<ClassLabel> = inv.of_order(3).into_iter().map(|i| inv.label(i)).collect();
            v.push(ClassLabel::Involution);
            v.sort();
            v
        }
        _ if k.f() == 1 && q % 4 == 3 => vec![],
        _ => vec![involution],
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub q: u32,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub lo: u64,
    pub hi: u64,
    pub extended: bool,
    pub oracle: OracleOptions,
}

impl VerifyOptions {
    pub fn new(lo: u64, hi: u64) -> Self {
        VerifyOptions { lo, hi, extended: false, oracle: OracleOptions::default() }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub lo: u64,
    pub hi: u64,
    pub extended: bool,
    pub qs: Vec<u64>,
    pub checks: Vec<CheckResult>,
    /// Largest `q | |Psi2|/k^2 - 1/2 |` over the asymptotic range.
    pub probability_sup: Option<f64>,
    pub psi2_ratio_range: Option<(f64, f64)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut by_check: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for c in &self.checks {
            let e = by_check.entry(c.id).or_default();
            e.0 += 1;
            e.1 += usize::from(!c.passed);
        }
        let by_check: BTreeMap<&str, serde_json::Value> = by_check
            .into_iter()
            .map(|(k, (run, failed))| (k, serde_json::json!({ "run": run, "failed": failed })))
            .collect();
        serde_json::json!({
            "q_range": [self.lo, self.hi],
            "extended": self.extended,
            "q_count": self.qs.len(),
            "checks_run": self.checks.len(),
            "passed": self.passed(),
            "failures": self.failures(),
            "by_check": by_check,
            "probability_sup": self.probability_sup,
            "psi2_ratio_range": self.psi2_ratio_range.map(|(a, b)| [a, b]),
        })
    }
}

struct QOutcome {
    checks: Vec<CheckResult>,
    deviation: Option<f64>,
    ratio: Option<f64>,
}

fn check(checks: &mut Vec<CheckResult>, id: &'static str, q: u32, passed: bool, detail: impl FnOnce() -> String) {
    let detail = if passed { String::new() } else { detail() };
    checks.push(CheckResult { id, q, passed, detail });
}

fn structural_checks(q: u64) -> Result<QOutcome> {
    let model = StructuralModel::new(q)?;
    let q32 = model.q();
    let d = model.group().d() as u64;
    let mut out = Vec::new();
    let classes = model.inventory().len() as u64;
    check(&mut out, "class-count", q32, classes == (q + 4 * d - 3) / d, || format!("{classes} classes"));

    let cov = verify_2covering(&model);
    check(&mut out, "covering", q32, cov.covers, || format!("uncovered {:?}", cov.uncovered));

    let psi2 = psi2_structural(&model);
    check(&mut out, "psi2-symmetry", q32, psi2.is_symmetric(), String::new);

    let plus = lambda_graph(&psi2, true);
    let parts = covering_parts(&plus, &cov);
    check(&mut out, "bipartite", q32, plus.is_bipartite() && edges_cross_parts(&plus, &parts), || {
        "an edge does not cross the covering parts".into()
    });
    let summary = plus.summary();
    check(&mut out, "connected", q32, summary.components == 1, || format!("{} components", summary.components));
    check(&mut out, "diameter", q32, summary.diameter <= 3, || format!("diameter {}", summary.diameter));

    let found: Vec<ClassLabel> = psi2.isolated().iter().map(|&i| psi2.labels()[i]).collect();
    let expected = expected_isolated(&model);
    check(&mut out, "isolated", q32, found == expected, || format!("found {found:?}, expected {expected:?}"));

    let action = AutAction::new(model.group(), model.inventory());
    match beta(&psi2, &action) {
        Ok(r) => {
            check(&mut out, "aut-invariance", q32, true, String::new);
            check(&mut out, "beta-even", q32, r.even, || format!("beta {}", r.beta));
            check(&mut out, "beta-bounds", q32, r.within_bounds, || format!("beta {} for {} pairs", r.beta, r.psi2));
            check(&mut out, "beta-swap-free", q32, r.swap_free, String::new);
        }
        Err(e) => check(&mut out, "aut-invariance", q32, false, || e.to_string()),
    }

    let (mut deviation, mut ratio) = (None, None);
    if q >= ASYMPTOTIC_FROM {
        let dev = probability_deviation(q32, &psi2);
        check(&mut out, "probability", q32, dev <= PROBABILITY_CONSTANT, || format!("q * deviation = {dev:.3}"));
        let r = psi2_ratio(&model, &psi2);
        check(&mut out, "psi2-asymptotic", q32, (PSI2_RATIO_RANGE.0..=PSI2_RATIO_RANGE.1).contains(&r), || {
            format!("ratio {r:.4}")
        });
        deviation = Some(dev);
        ratio = Some(r);
    }
    Ok(QOutcome { checks: out, deviation, ratio })
}

fn oracle_checks(q: u64, options: OracleOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let q32 = q as u32;
    let run = || -> Result<(Oracle, StructuralModel)> {
        let model = StructuralModel::new(q)?;
        let oracle = Oracle::with_options(model.group().clone(), options)?;
        Ok((oracle, model))
    };
    match run() {
        Ok((oracle, model)) => {
            let same = oracle.psi2().same_pairs(&psi2_structural(&model));
            check(&mut out, "oracle-psi2", q32, same, || "oracle and structural tables differ".into());
            check(&mut out, "oracle-labels", q32, oracle.certify_labels(), || {
                "labels differ from conjugacy classes".into()
            });
            match oracle.class_fusion(&model) {
                Ok(r) => check(&mut out, "oracle-profiles", q32, r.consistent, || "profile mismatch".into()),
                Err(e) => check(&mut out, "oracle-profiles", q32, false, || e.to_string()),
            }
        }
        Err(e) => check(&mut out, "oracle-psi2", q32, false, || e.to_string()),
    }
    out
}

/// Runs the suite. Invalid `q` never reaches here: the range is filtered
/// to prime powers `>= 4`.
pub fn run(options: &VerifyOptions) -> VerifyReport {
    let qs = crate::arith::prime_powers_in(options.lo.max(4), options.hi);
    let mut oracle_qs: Vec<u64> = ORACLE_SET.iter().copied().filter(|q| qs.contains(q)).collect();
    if options.extended {
        oracle_qs.extend(EXTENDED_ORACLE_SET);
    }
    let outcomes: Vec<QOutcome> = qs
        .par_iter()
        .map(|&q| {
            structural_checks(q).unwrap_or_else(|e| QOutcome {
                checks: vec![CheckResult { id: "setup", q: q as u32, passed: false, detail: e.to_string() }],
                deviation: None,
                ratio: None,
            })
        })
        .collect();
    let oracle_results: Vec<Vec<CheckResult>> =
        oracle_qs.iter().map(|&q| oracle_checks(q, options.oracle)).collect();

    let mut checks = Vec::new();
    let mut sup: Option<f64> = None;
    let mut range: Option<(f64, f64)> = None;
    for o in outcomes {
        checks.extend(o.checks);
        if let Some(d) = o.deviation {
            sup = Some(sup.map_or(d, |s| s.max(d)));
        }
        if let Some(r) = o.ratio {
            range = Some(range.map_or((r, r), |(a, b)| (a.min(r), b.max(r))));
        }
    }
    checks.extend(oracle_results.into_iter().flatten());
    VerifyReport {
        lo: options.lo,
        hi: options.hi,
        extended: options.extended,
        qs,
        checks,
        probability_sup: sup,
        psi2_ratio_range: range,
    }
}
