//! Report serialization: canonical JSON (sorted keys), flat CSV, and a
//! Markdown summary.

use super::{PropertyCase, VerificationReport, Verdict};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Equality => "equality",
        Verdict::Fail => "fail",
        Verdict::Exploratory => "exploratory",
        Verdict::Skipped => "skipped",
    }
}

/// Canonical JSON: routed through `serde_json::Value`, whose object map is
/// a BTreeMap, so keys come out sorted and output is reproducible.
pub fn to_canonical_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Schema(e.to_string()))?;
    serde_json::to_string_pretty(&v).map_err(|e| Error::Schema(e.to_string()))
}

pub fn report_json(report: &VerificationReport) -> Result<String> {
    to_canonical_json(report)
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn report_csv(report: &VerificationReport) -> String {
    let mut out = String::from(
        "id,statement,verdict,gated,strict,lhs,rhs,slack,budget,refine_est,required,present,inputs,note\n",
    );
    for c in &report.cases {
        out.push_str(&format!(
            "{},{},{},{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{},{},{}\n",
            csv_escape(&c.id),
            c.statement,
            verdict_str(c.verdict),
            c.gated,
            c.strict,
            c.lhs,
            c.rhs,
            c.slack,
            c.budget,
            c.refine_est,
            csv_escape(&c.required_flags.join("+")),
            csv_escape(&c.present_flags.join("+")),
            csv_escape(&c.inputs),
            csv_escape(&c.note),
        ));
    }
    out
}

pub fn report_markdown(report: &VerificationReport) -> String {
    let s = &report.summary;
    let mut out = String::new();
    out.push_str(&format!(
        "# Verification report: suite `{}`, seed {}\n\n",
        report.suite, report.seed
    ));
    out.push_str(&format!(
        "grids: planar {} nodes, spatial {} polar rings; wall time {} ms\n\n",
        report.grid.resolution_2d, report.grid.resolution_3d, report.wall_time_ms
    ));
    out.push_str(&format!(
        "| total | pass | equality | fail | exploratory | skipped |\n|---|---|---|---|---|---|\n| {} | {} | {} | {} | {} | {} |\n\n",
        s.total, s.pass, s.equality, s.fail, s.exploratory, s.skipped
    ));
    let mut by_statement: BTreeMap<&str, (usize, usize, usize, usize, usize)> = BTreeMap::new();
    for c in &report.cases {
        let entry = by_statement.entry(&c.statement).or_default();
        entry.0 += 1;
        match c.verdict {
            Verdict::Pass => entry.1 += 1,
            Verdict::Equality => entry.2 += 1,
            Verdict::Fail => entry.3 += 1,
            _ => entry.4 += 1,
        }
    }
    out.push_str("| statement | cases | pass | equality | fail | other |\n|---|---|---|---|---|---|\n");
    for (statement, (total, pass, eq, fail, other)) in &by_statement {
        out.push_str(&format!(
            "| {statement} | {total} | {pass} | {eq} | {fail} | {other} |\n"
        ));
    }
    if report.summary.fail > 0 {
        out.push_str("\n## Failures\n\n");
        for c in report.cases.iter().filter(|c| c.verdict == Verdict::Fail) {
            out.push_str(&format!(
                "- `{}`: slack {:.3e} < -budget {:.3e} ({})\n",
                c.id, c.slack, c.budget, c.inputs
            ));
        }
    }
    out
}

/// One machine-greppable summary line per case, `key=value` format.
pub fn case_summary_line(c: &PropertyCase) -> String {
    format!(
        "case={} statement={} verdict={} slack={:.6e} budget={:.6e} gated={}",
        c.id,
        c.statement,
        verdict_str(c.verdict),
        c.slack,
        c.budget,
        c.gated
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_json_sorts_keys() {
        #[derive(serde::Serialize)]
        struct Demo {
            zebra: u32,
            apple: u32,
        }
        let s = to_canonical_json(&Demo { zebra: 1, apple: 2 }).unwrap();
        let apple = s.find("apple").unwrap();
        let zebra = s.find("zebra").unwrap();
        assert!(apple < zebra);
    }

    #[test]
    fn csv_escapes_commas() {
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
        assert_eq!(csv_escape("plain"), "plain");
    }
}
