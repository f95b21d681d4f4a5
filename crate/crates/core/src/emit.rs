//! Byte-exact serialization of enumerations and reports: JSON with stable
//! key order, minimal RFC-4180 CSV, and aligned text tables. Identical
//! inputs yield identical bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::family::FamilyObject;
use crate::verify::{SweepReport, TheoremReport};

/// Output format selected at the CLI.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format, Error> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::parse(other, "expected text, json, or csv")),
        }
    }
}

/// Pretty JSON with a trailing newline. Struct field order is declaration
/// order, so the bytes are stable.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Quotes a CSV field when it contains a delimiter, quote, or newline.
fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn csv_row(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",")
}

/// One enumeration member with its canonical rank.
#[derive(Serialize)]
struct RankedMember {
    rank: u64,
    parts: Vec<u64>,
}

/// Enumeration output: members in canonical rank order.
pub fn emit_members(members: &[FamilyObject], format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            for member in members {
                let _ = writeln!(out, "{member}");
            }
            out
        }
        Format::Json => {
            let rows: Vec<RankedMember> = members
                .iter()
                .map(|member| RankedMember {
                    rank: member.canonical_index().index,
                    parts: match member {
                        FamilyObject::Partition(p) => p.parts().to_vec(),
                        FamilyObject::Composition(c) => c.parts().to_vec(),
                    },
                })
                .collect();
            to_json(&rows)
        }
        Format::Csv => {
            let mut out = String::from("rank,parts\n");
            for member in members {
                let rank = member.canonical_index().index;
                out.push_str(&csv_row(&[rank.to_string(), member.to_string()]));
                out.push('\n');
            }
            out
        }
    }
}

#[derive(Serialize)]
struct CountRow<'a> {
    family: &'a str,
    count: u64,
}

/// Count output: a bare number in text, a labelled record otherwise.
pub fn emit_count(family: &str, count: u64, format: Format) -> String {
    match format {
        Format::Text => format!("{count}\n"),
        Format::Json => to_json(&CountRow { family, count }),
        Format::Csv => format!(
            "family,count\n{}\n",
            csv_row(&[family.to_string(), count.to_string()])
        ),
    }
}

fn pad(s: &str, width: usize) -> String {
    format!("{s:<width$}")
}

/// Aligned-text rendering of one report.
pub fn report_text(report: &TheoremReport) -> String {
    let mut out = String::new();
    let mut header = format!("suite: {} (n={}", report.suite, report.n);
    if let Some(m) = report.m {
        let _ = write!(header, ", m={m}");
    }
    if let Some(k) = report.k {
        let _ = write!(header, ", k={k}");
    }
    if let Some(rs) = &report.residues {
        let joined: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
        let _ = write!(header, ", R={{{}}}", joined.join(","));
    }
    let _ = writeln!(out, "{header})");

    let family_width = report
        .counts
        .iter()
        .map(|c| c.family.len())
        .chain(["family".len()])
        .max()
        .unwrap();
    let _ = writeln!(out, "{}  count", pad("family", family_width));
    for row in &report.counts {
        let _ = writeln!(out, "{}  {}", pad(&row.family, family_width), row.count);
    }

    let relation_width = report
        .relations
        .iter()
        .map(|r| r.name.len())
        .chain(["relation".len()])
        .max()
        .unwrap();
    let _ = writeln!(out, "{}  outcome", pad("relation", relation_width));
    for relation in &report.relations {
        let outcome = if relation.passed { "pass" } else { "FAIL" };
        let detail = relation
            .detail
            .as_deref()
            .map(|d| format!(" ({d})"))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{}  {outcome}{detail}",
            pad(&relation.name, relation_width)
        );
    }

    if let Some(direction) = &report.direction {
        let _ = writeln!(out, "h: {}  g: {}", direction.h, direction.g);
        let _ = writeln!(
            out,
            "direction h - g >= 0: {}",
            if direction.h_minus_g_nonnegative { "holds" } else { "violated" }
        );
        let _ = writeln!(
            out,
            "direction g - h >= 0: {}",
            if direction.g_minus_h_nonnegative { "holds" } else { "violated" }
        );
    }
    if let Some(deficiency) = report.deficiency {
        let _ = writeln!(out, "deficiency: {deficiency}");
    }
    if let Some(witness) = &report.witnesses.strictness {
        let _ = writeln!(out, "witness: {witness}");
    }
    if let Some(missing) = report.witnesses.missing_count {
        if missing > 0 {
            let _ = writeln!(
                out,
                "missing: {missing} ({})",
                report.witnesses.missing_sample.join(" ")
            );
        }
    }
    for [a, b] in &report.witnesses.collisions {
        let _ = writeln!(out, "collision: {a} and {b}");
    }
    let _ = writeln!(out, "result: {}", if report.passed { "pass" } else { "FAIL" });
    out
}

fn report_csv_rows(report: &TheoremReport, out: &mut String) {
    for row in &report.counts {
        let fields = [
            report.n.to_string(),
            report.m.map(|m| m.to_string()).unwrap_or_default(),
            report.k.map(|k| k.to_string()).unwrap_or_default(),
            report
                .residues
                .as_ref()
                .map(|rs| {
                    rs.iter()
                        .map(|r| r.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .unwrap_or_default(),
            report.suite.clone(),
            row.family.clone(),
            row.count.to_string(),
            if report.passed { "true" } else { "false" }.to_string(),
        ];
        out.push_str(&csv_row(&fields));
        out.push('\n');
    }
}

pub const SWEEP_CSV_HEADER: &str = "n,m,k,R,suite,family,count,passed";

/// One report in the requested format.
pub fn emit_report(report: &TheoremReport, format: Format) -> String {
    match format {
        Format::Text => report_text(report),
        Format::Json => to_json(report),
        Format::Csv => {
            let mut out = String::from(SWEEP_CSV_HEADER);
            out.push('\n');
            report_csv_rows(report, &mut out);
            out
        }
    }
}

/// A sweep in the requested format: per-point lines plus a summary in text,
/// the full report tree in JSON, per-family count rows in CSV.
pub fn emit_sweep(sweep: &SweepReport, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            for report in &sweep.reports {
                let mut point = format!("{} n={}", report.suite, report.n);
                if let Some(m) = report.m {
                    let _ = write!(point, " m={m}");
                }
                if let Some(k) = report.k {
                    let _ = write!(point, " k={k}");
                }
                if let Some(rs) = &report.residues {
                    let joined: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
                    let _ = write!(point, " R={{{}}}", joined.join(","));
                }
                if let Some(d) = report.deficiency {
                    let _ = write!(point, " deficiency={d}");
                }
                let _ = writeln!(
                    out,
                    "{point} {}",
                    if report.passed { "pass" } else { "FAIL" }
                );
            }
            let _ = writeln!(
                out,
                "points: {}  failures: {}  result: {}",
                sweep.points,
                sweep.failures,
                if sweep.passed { "pass" } else { "FAIL" }
            );
            out
        }
        Format::Json => to_json(sweep),
        Format::Csv => {
            let mut out = String::from(SWEEP_CSV_HEADER);
            out.push('\n');
            for report in &sweep.reports {
                report_csv_rows(report, &mut out);
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{verify_main, VerifyOptions};

    #[test]
    fn count_text_is_bare_number() {
        assert_eq!(emit_count("h:n=4,m=3", 5, Format::Text), "5\n");
    }

    #[test]
    fn csv_quotes_comma_fields() {
        assert_eq!(csv_field("2,2"), "\"2,2\"");
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn report_text_carries_deficiency_and_witness() {
        let report = verify_main(4, 3, &VerifyOptions::default()).unwrap();
        let text = report_text(&report);
        assert!(text.contains("deficiency: 1"));
        assert!(text.contains("witness: 2,2"));
        assert!(text.contains("result: pass"));
        assert!(text.contains("direction h - g >= 0: violated"));
        assert!(text.contains("direction g - h >= 0: holds"));
    }

    #[test]
    fn json_is_stable() {
        let report = verify_main(4, 3, &VerifyOptions::default()).unwrap();
        assert_eq!(to_json(&report), to_json(&report));
        let parsed: serde_json::Value = serde_json::from_str(&to_json(&report)).unwrap();
        assert_eq!(parsed["suite"], "main");
        assert_eq!(parsed["deficiency"], 1);
        // timing never reaches the serialized form
        assert!(parsed.get("elapsed").is_none());
    }
}
