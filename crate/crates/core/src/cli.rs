//! Command implementations behind the `invgen` binary. Each returns the text
//! to emit and an exit status; the binary only parses arguments and writes.

use std::fmt::Write as _;

use serde_json::json;

use crate::autorbits::{beta, AutAction};
use crate::error::{Error, Result};
use crate::gf::GfContext;
use crate::iggraph::{
    component_bound, covering_parts, lambda_graph, lambda_power, n_lower_bound_report, DEFAULT_VERTEX_CAP,
};
use crate::oracle::{Oracle, OracleOptions};
use crate::structure::{psi2_structural, verify_2covering, Psi2Table, StructuralModel};
use crate::verify::{self, VerifyOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodChoice {
    Structural,
    Oracle,
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmdOutput {
    pub body: String,
    /// One-line summary for stderr when the body is machine-readable.
    pub summary: Option<String>,
    pub code: i32,
}

impl CmdOutput {
    fn ok(body: String) -> Self {
        CmdOutput { body, summary: None, code: 0 }
    }
}

fn unsupported(format: Format, cmd: &str) -> Error {
    Error::Usage(format!("format {format:?} is not available for `{cmd}`").to_lowercase())
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// `q` from either `--q` or `--p` and `--f`.
pub fn resolve_q(q: Option<u64>, p: Option<u64>, f: Option<u32>) -> Result<u64> {
    let q = match (q, p, f) {
        (Some(q), None, None) => {
            crate::arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
            q
        }
        (None, Some(p), f) => GfContext::new(p, f.unwrap_or(1))?.q() as u64,
        _ => return Err(Error::Usage("give either --q or --p with optional --f".into())),
    };
    if q < 4 {
        return Err(Error::FieldTooSmall(q as u32));
    }
    Ok(q)
}

/// Parses `A..B` (inclusive).
pub fn parse_range(s: &str) -> Result<(u64, u64)> {
    let bad = || Error::Usage(format!("expected a range A..B, got `{s}`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn cmd_classes(q: u64, format: Format) -> Result<CmdOutput> {
    let inv = crate::psl2::Psl2::from_order(q)?.inventory()?;
    let body = match format {
        Format::Json => pretty(&inv.to_json()),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["label", "order", "size"]).expect("in-memory write");
            for e in inv.entries() {
                w.write_record([e.label.to_string(), e.order.to_string(), e.size.to_string()])
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
        }
        Format::Table => {
            let mut s = format!("{:<16} {:>6} {:>12}\n", "label", "order", "size");
            for e in inv.entries() {
                writeln!(s, "{:<16} {:>6} {:>12}", e.label.to_string(), e.order, e.size).expect("string write");
            }
            writeln!(s, "{} classes, |S| = {}", inv.len(), inv.total_size()).expect("string write");
            s
        }
        Format::Dot => return Err(unsupported(format, "classes")),
    };
    Ok(CmdOutput::ok(body))
}

fn table_body(t: &Psi2Table, format: Format, extra: serde_json::Value) -> Result<String> {
    Ok(match format {
        Format::Json => {
            let mut v = t.to_json();
            if let (Some(obj), serde_json::Value::Object(more)) = (v.as_object_mut(), extra) {
                obj.extend(more);
            }
            pretty(&v)
        }
        Format::Csv => t.to_csv(),
        Format::Table => {
            let mut s = String::new();
            for &(i, j) in t.pairs() {
                writeln!(s, "{:<16} {}", t.labels()[i].to_string(), t.labels()[j]).expect("string write");
            }
            s
        }
        Format::Dot => return Err(unsupported(format, "psi2")),
    })
}

pub fn cmd_psi2(q: u64, method: MethodChoice, format: Format, oracle: OracleOptions) -> Result<CmdOutput> {
    let model = StructuralModel::new(q)?;
    let structural = || psi2_structural(&model);
    let run_oracle = || -> Result<Psi2Table> { Ok(Oracle::with_options(model.group().clone(), oracle)?.psi2()) };
    let (table, matched) = match method {
        MethodChoice::Structural => (structural(), None),
        MethodChoice::Oracle => (run_oracle()?, None),
        MethodChoice::Both => {
            let o = run_oracle()?;
            let s = structural();
            let same = s.same_pairs(&o);
            (s, Some(same))
        }
    };
    let mut summary = format!("count={} classes={} probability={:.6}", table.len(), table.labels().len(), table.probability());
    if let Some(m) = matched {
        write!(summary, " match={m}").expect("string write");
    }
    let extra = match matched {
        Some(m) => json!({ "method": "both", "match": m }),
        None => json!({}),
    };
    let mut body = table_body(&table, format, extra)?;
    let code = if matched == Some(false) { 1 } else { 0 };
    if format == Format::Table {
        writeln!(body, "{summary}").expect("string write");
        return Ok(CmdOutput { body, summary: None, code });
    }
    Ok(CmdOutput { body, summary: Some(summary), code })
}

pub fn cmd_graph(q: u64, power: usize, plus: bool, format: Format) -> Result<CmdOutput> {
    let model = StructuralModel::new(q)?;
    let psi2 = psi2_structural(&model);
    let mut graph = if power <= 1 {
        let mut g = lambda_graph(&psi2, plus);
        let parts = covering_parts(&g, &verify_2covering(&model));
        g.set_parts(parts);
        g
    } else {
        let b = beta(&psi2, &AutAction::new(model.group(), model.inventory()))?;
        lambda_power(&psi2, &b.partition, power, plus, DEFAULT_VERTEX_CAP)?
    };
    if power > 1 {
        if let Some(p) = graph.bipartition() {
            graph.set_parts(p);
        }
    }
    let summary = graph.summary().to_string();
    let body = match format {
        Format::Dot => graph.to_dot(),
        Format::Json => {
            let mut v = graph.to_json();
            v["summary"] = serde_json::to_value(graph.summary()).expect("plain data");
            pretty(&v)
        }
        Format::Table => {
            let mut s = String::new();
            for v in 0..graph.vertex_count() {
                let names: Vec<&str> = graph.neighbours(v).iter().map(|&w| graph.name(w)).collect();
                writeln!(s, "{}: {}", graph.name(v), names.join(" ")).expect("string write");
            }
            writeln!(s, "{summary}").expect("string write");
            return Ok(CmdOutput::ok(s));
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["vertex1", "vertex2"]).expect("in-memory write");
            for (a, b) in graph.edges() {
                w.write_record([graph.name(a), graph.name(b)]).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
        }
    };
    Ok(CmdOutput { body, summary: Some(summary), code: 0 })
}

pub fn cmd_beta(q: u64, format: Format) -> Result<CmdOutput> {
    let model = StructuralModel::new(q)?;
    let psi2 = psi2_structural(&model);
    let report = beta(&psi2, &AutAction::new(model.group(), model.inventory()))?;
    let exact = component_bound(report.beta as u64).ok();
    let lower = n_lower_bound_report(&model, &psi2).ok();
    let code = if report.consistent() { 0 } else { 1 };
    let body = match format {
        Format::Json => {
            let mut v = report.to_json(&psi2);
            v["component_bound"] = serde_json::to_value(&exact).expect("plain data");
            v["lower_bound_report"] = serde_json::to_value(&lower).expect("plain data");
            pretty(&v)
        }
        Format::Table => {
            let yes = |b: bool| if b { "ok" } else { "FAIL" };
            let mut s = format!(
                "q={} psi2={} out_order={} beta={}\nbounds={} even={} swap_free={} orbit_sizes={}\n",
                report.q,
                report.psi2,
                report.out_order,
                report.beta,
                yes(report.within_bounds),
                yes(report.even),
                yes(report.swap_free),
                yes(report.sizes_divide_out),
            );
            if let Some(b) = &exact {
                writeln!(s, "component_bound={} log2={:.3}", b.bound, b.log2).expect("string write");
            }
            if let Some(b) = &lower {
                writeln!(s, "beta_lower={} lower_bound={} log2={:.3}", b.beta_lower, b.bound, b.log2)
                    .expect("string write");
            }
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["label1", "label2", "orbit"]).expect("in-memory write");
            for (&(i, j), o) in psi2.pairs().iter().zip(&report.partition.orbit_of) {
                w.write_record([psi2.labels()[i].to_string(), psi2.labels()[j].to_string(), o.to_string()])
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
        }
        Format::Dot => return Err(unsupported(format, "beta")),
    };
    Ok(CmdOutput { body, summary: None, code })
}

pub fn cmd_verify(lo: u64, hi: u64, extended: bool, format: Format, oracle: OracleOptions) -> Result<CmdOutput> {
    let report = verify::run(&VerifyOptions { lo, hi, extended, oracle });
    let code = if report.passed() { 0 } else { 1 };
    let body = match format {
        Format::Json => pretty(&report.to_json()),
        Format::Table => {
            let mut s = String::new();
            for f in report.failures() {
                writeln!(s, "FAIL {} q={} {}", f.id, f.q, f.detail).expect("string write");
            }
            let passed = report.checks.len() - report.failures().len();
            writeln!(
                s,
                "{} {}/{} checks over {} values of q in {}..{}",
                if report.passed() { "PASS" } else { "FAIL" },
                passed,
                report.checks.len(),
                report.qs.len(),
                lo,
                hi
            )
            .expect("string write");
            if let Some(sup) = report.probability_sup {
                writeln!(s, "max q*|P - 1/2| = {sup:.4}").expect("string write");
            }
            s
        }
        _ => return Err(unsupported(format, "verify")),
    };
    Ok(CmdOutput { body, summary: None, code })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_resolution() {
        assert_eq!(resolve_q(Some(7), None, None), Ok(7));
        assert_eq!(resolve_q(None, Some(3), Some(2)), Ok(9));
        assert_eq!(resolve_q(Some(6), None, None), Err(Error::NotPrimePower(6)));
        assert_eq!(resolve_q(Some(3), None, None), Err(Error::FieldTooSmall(3)));
        assert_eq!(resolve_q(None, None, None).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4..13"), Ok((4, 13)));
        assert_eq!(parse_range("4..=13"), Ok((4, 13)));
        assert!(parse_range("13..4").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn classes_rows() {
        let out = cmd_classes(7, Format::Csv).unwrap();
        assert_eq!(out.body.lines().count(), 7);
        let out = cmd_classes(4, Format::Csv).unwrap();
        assert_eq!(out.body.lines().count(), 6);
        assert_eq!(cmd_classes(7, Format::Dot).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn psi2_both_and_cap() {
        let out = cmd_psi2(5, MethodChoice::Both, Format::Json, OracleOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.body).unwrap();
        assert_eq!((v["count"].as_u64(), v["match"].as_bool(), out.code), (Some(4), Some(true), 0));
        let err = cmd_psi2(101, MethodChoice::Oracle, Format::Json, OracleOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn graph_summary() {
        let out = cmd_graph(5, 2, true, Format::Json).unwrap();
        assert!(out.summary.unwrap().contains("components=1"));
        let out = cmd_graph(9, 1, false, Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.body).unwrap();
        assert_eq!(v["vertices"].as_array().unwrap().len(), 6);
    }
}
