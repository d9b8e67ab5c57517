//! Report rendering: CSV and JSON records at full precision, markdown at two decimals.

use std::fmt::Write as _;
use std::str::FromStr;

use mnrs_core::{
    format_fixed2, BaselineReportRow, CorpusStats, RankReport, StatusGroupSummary, TagComparison,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Records,
    Markdown,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Records => "jsonl",
            Format::Markdown => "md",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "records" | "jsonl" => Ok(Format::Records),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(Error::Usage(format!("unknown output format `{other}`"))),
        }
    }
}

/// A rendered table: header plus string cells.
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    /// Right-align flags for markdown.
    numeric: Vec<bool>,
}

impl Table {
    fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Data(format!("csv buffer: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    fn markdown(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (i, c) in r.iter().enumerate() {
                widths[i] = widths[i].max(c.chars().count()).max(3);
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, cells: &[String]| {
            out.push('|');
            for (i, c) in cells.iter().enumerate() {
                let pad = widths[i] - c.chars().count();
                if self.numeric[i] {
                    let _ = write!(out, " {}{} |", " ".repeat(pad), c);
                } else {
                    let _ = write!(out, " {}{} |", c, " ".repeat(pad));
                }
            }
            out.push('\n');
        };
        line(&mut out, &self.header);
        out.push('|');
        for (w, numeric) in widths.iter().zip(&self.numeric) {
            let dashes = "-".repeat(w.saturating_sub(1));
            if *numeric {
                let _ = write!(out, " {dashes}: |");
            } else {
                let _ = write!(out, " {dashes}- |");
            }
        }
        out.push('\n');
        for r in &self.rows {
            line(&mut out, r);
        }
        out
    }
}

fn records(values: impl IntoIterator<Item = Value>) -> Result<String> {
    let mut out = String::new();
    for v in values {
        out.push_str(&serde_json::to_string(&v)?);
        out.push('\n');
    }
    Ok(out)
}

fn full(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn two(x: Option<f64>) -> String {
    x.map(format_fixed2).unwrap_or_default()
}

/// `1289` → `1,289`.
pub fn thousands(n: u64) -> String {
    let s = n.to_string();
    let mut out = String::with_capacity(s.len() + s.len() / 3);
    for (i, c) in s.chars().enumerate() {
        if i > 0 && (s.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(c);
    }
    out
}

pub fn render_baseline_report(
    rows: &[BaselineReportRow],
    label: &str,
    fmt: Format,
) -> Result<String> {
    match fmt {
        Format::Records => records(rows.iter().map(|r| {
            json!({
                "category": r.key.category,
                "doc_type": r.key.doc_type.map(|d| d.as_str()),
                "year": r.key.year,
                "group": r.key.group,
                "n_papers": r.n_papers,
                "numerator": r.rho.numer,
                "denominator": r.rho.denom,
                "rho": r.rho_value,
                "eligible": r.eligible,
            })
        })),
        Format::Csv | Format::Markdown => {
            let md = fmt == Format::Markdown;
            let header: Vec<String> = if md {
                vec![
                    "Subject category".into(),
                    "Document type".into(),
                    "Year".into(),
                    "Papers".into(),
                    format!("Average ({label})"),
                    "Eligible".into(),
                ]
            } else {
                [
                    "category",
                    "doc_type",
                    "year",
                    "group",
                    "n_papers",
                    "numerator",
                    "denominator",
                    "rho",
                    "eligible",
                    "display",
                ]
                .map(String::from)
                .to_vec()
            };
            let rows = rows
                .iter()
                .map(|r| {
                    let dt = r
                        .key
                        .doc_type
                        .map(|d| d.as_str().to_string())
                        .unwrap_or_default();
                    let year = r.key.year.map(|y| y.to_string()).unwrap_or_default();
                    if md {
                        vec![
                            r.key.category.clone(),
                            dt,
                            year,
                            thousands(r.n_papers),
                            r.display.clone(),
                            if r.eligible { "yes" } else { "no" }.into(),
                        ]
                    } else {
                        vec![
                            r.key.category.clone(),
                            dt,
                            year,
                            r.key.group.clone(),
                            r.n_papers.to_string(),
                            r.rho.numer.to_string(),
                            r.rho.denom.to_string(),
                            r.rho_value.to_string(),
                            r.eligible.to_string(),
                            r.display.clone(),
                        ]
                    }
                })
                .collect();
            let t = Table {
                numeric: if md {
                    vec![false, false, true, true, true, false]
                } else {
                    vec![false; 10]
                },
                header,
                rows,
            };
            if md {
                Ok(t.markdown())
            } else {
                t.csv()
            }
        }
    }
}

/// `labels` are the indicator labels of the primary group followed by its companions.
pub fn render_rank_report(
    report: &RankReport,
    entity_label: &str,
    labels: &[String],
    fmt: Format,
) -> Result<String> {
    match fmt {
        Format::Records => records(report.lines.iter().enumerate().map(|(i, l)| {
            let mut m = Map::new();
            m.insert("rank".into(), json!(i + 1));
            m.insert("entity".into(), json!(l.entity));
            m.insert("n_multiplicative".into(), json!(l.n_multiplicative));
            m.insert("n_distinct".into(), json!(l.n_distinct));
            m.insert(labels[0].clone(), json!(l.mnrs));
            for (lab, v) in labels[1..].iter().zip(&l.companions) {
                m.insert(lab.clone(), json!(v));
            }
            Value::Object(m)
        })),
        Format::Csv | Format::Markdown => {
            let md = fmt == Format::Markdown;
            let mut header: Vec<String> = if md {
                vec![
                    "Rank".into(),
                    entity_label.into(),
                    "Papers (multiplicative counting)".into(),
                    "Papers (distinct counting)".into(),
                ]
            } else {
                vec![
                    "rank".into(),
                    "entity".into(),
                    "n_multiplicative".into(),
                    "n_distinct".into(),
                ]
            };
            header.extend(labels.iter().cloned());
            let num = |x: Option<f64>| if md { two(x) } else { full(x) };
            let count = |n: u64| if md { thousands(n) } else { n.to_string() };
            let rows = report
                .lines
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    let mut row = vec![
                        (i + 1).to_string(),
                        l.entity.clone(),
                        count(l.n_multiplicative),
                        count(l.n_distinct),
                        num(Some(l.mnrs)),
                    ];
                    row.extend(l.companions.iter().map(|c| num(*c)));
                    row
                })
                .collect();
            let mut numeric = vec![true, false, true, true];
            numeric.extend(labels.iter().map(|_| true));
            let t = Table {
                header,
                rows,
                numeric,
            };
            if md {
                Ok(t.markdown())
            } else {
                t.csv()
            }
        }
    }
}

/// Record key, display label, paper count and per-group means of one report row.
type ComparisonRow<'a> = (&'static str, String, Option<u64>, &'a [Option<f64>]);

pub fn render_comparison(c: &TagComparison, fmt: Format) -> Result<String> {
    let parts: [ComparisonRow<'_>; 4] = [
        ("tagged", c.tag.clone(), Some(c.tagged.n), &c.tagged.means),
        (
            "untagged",
            format!("Non-{}", c.tag),
            Some(c.untagged.n),
            &c.untagged.means,
        ),
        ("difference", "Difference".into(), None, &c.difference),
        ("total", "Total".into(), Some(c.total.n), &c.total.means),
    ];
    match fmt {
        Format::Records => records(parts.iter().map(|(key, label, n, means)| {
            let mut m = Map::new();
            m.insert("partition".into(), json!(key));
            m.insert("label".into(), json!(label));
            m.insert("n".into(), json!(n));
            for (lab, v) in c.labels.iter().zip(means.iter()) {
                m.insert(lab.clone(), json!(v));
            }
            Value::Object(m)
        })),
        Format::Csv => {
            let mut header = vec!["partition".to_string(), "label".into(), "n".into()];
            header.extend(c.labels.iter().cloned());
            let rows = parts
                .iter()
                .map(|(key, label, n, means)| {
                    let mut row = vec![
                        key.to_string(),
                        label.clone(),
                        n.map(|n| n.to_string()).unwrap_or_default(),
                    ];
                    row.extend(means.iter().map(|v| full(*v)));
                    row
                })
                .collect();
            Table {
                numeric: vec![false; 3 + c.labels.len()],
                header,
                rows,
            }
            .csv()
        }
        Format::Markdown => {
            let mut header = vec!["Tagged group".to_string()];
            header.extend(c.labels.iter().cloned());
            let rows = parts
                .iter()
                .map(|(_, label, n, means)| {
                    let name = match n {
                        Some(n) => format!("{label} (n={})", thousands(*n)),
                        None => label.clone(),
                    };
                    let mut row = vec![name];
                    row.extend(means.iter().map(|v| two(*v)));
                    row
                })
                .collect();
            let mut numeric = vec![false];
            numeric.extend(c.labels.iter().map(|_| true));
            Ok(Table {
                header,
                rows,
                numeric,
            }
            .markdown())
        }
    }
}

/// Per-status-group averages followed by the all-readers line.
pub fn render_status_groups(
    groups: &[StatusGroupSummary],
    stats: &CorpusStats,
    fmt: Format,
) -> Result<String> {
    let all_pct = stats.pct_zero_reader_papers;
    match fmt {
        Format::Records => records(
            groups
                .iter()
                .map(|g| {
                    json!({
                        "group": g.group.name(),
                        "reader_counts": g.reader_counts,
                        "average": g.average,
                        "pct_zero": g.pct_zero,
                    })
                })
                .chain(std::iter::once(json!({
                    "group": "Readers",
                    "reader_counts": stats.total_reader_counts,
                    "average": stats.mean_readers_per_paper,
                    "pct_zero": all_pct,
                }))),
        ),
        Format::Csv | Format::Markdown => {
            let md = fmt == Format::Markdown;
            let header = if md {
                vec![
                    "Mendeley status group".to_string(),
                    "Number of reader counts".into(),
                    "Average reader counts".into(),
                    "Percentage of papers with zero reader counts".into(),
                ]
            } else {
                vec![
                    "group".to_string(),
                    "reader_counts".into(),
                    "average".into(),
                    "pct_zero".into(),
                ]
            };
            let mut rows: Vec<Vec<String>> = groups
                .iter()
                .map(|g| {
                    (
                        g.group.label().to_string(),
                        g.reader_counts,
                        g.average,
                        g.pct_zero,
                    )
                })
                .chain(std::iter::once((
                    "Readers".to_string(),
                    stats.total_reader_counts,
                    stats.mean_readers_per_paper,
                    all_pct,
                )))
                .map(|(name, n, avg, pct)| {
                    if md {
                        vec![
                            name,
                            thousands(n),
                            format_fixed2(avg),
                            format!("{}%", format_fixed2(pct)),
                        ]
                    } else {
                        vec![name, n.to_string(), avg.to_string(), pct.to_string()]
                    }
                })
                .collect();
            if !md {
                // machine output uses identifiers
                for (row, g) in rows.iter_mut().zip(groups) {
                    row[0] = g.group.name().to_string();
                }
            }
            let t = Table {
                header,
                rows,
                numeric: vec![false, true, true, true],
            };
            if md {
                Ok(t.markdown())
            } else {
                t.csv()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mnrs_core::{PartitionSummary, RankLine};

    #[test]
    fn thousands_separators() {
        assert_eq!(thousands(0), "0");
        assert_eq!(thousands(385), "385");
        assert_eq!(thousands(1289), "1,289");
        assert_eq!(thousands(1089729), "1,089,729");
    }

    fn comparison() -> TagComparison {
        let part = |n, means: Vec<Option<f64>>| PartitionSummary {
            n,
            weights: vec![1.0; means.len()],
            means,
        };
        TagComparison {
            tag: "Good for teaching".into(),
            groups: vec!["BS".into(), "citations".into()],
            labels: vec!["MNRS_BS".into(), "MNCS".into()],
            tagged: part(385, vec![Some(9.24), Some(9.78)]),
            untagged: part(904, vec![Some(7.69), None]),
            total: part(1289, vec![Some(8.91), Some(9.85)]),
            difference: vec![Some(9.24 - 7.69), None],
            diagnostics: vec![],
        }
    }

    #[test]
    fn comparison_markdown_shape() {
        let md = render_comparison(&comparison(), Format::Markdown).unwrap();
        let expected = "\
| Tagged group                  | MNRS_BS | MNCS |
| ----------------------------- | ------: | ---: |
| Good for teaching (n=385)     |    9.24 | 9.78 |
| Non-Good for teaching (n=904) |    7.69 |      |
| Difference                    |    1.55 |      |
| Total (n=1,289)               |    8.91 | 9.85 |
";
        assert_eq!(md, expected);
    }

    #[test]
    fn comparison_csv_blank_cells() {
        let csv = render_comparison(&comparison(), Format::Csv).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "partition,label,n,MNRS_BS,MNCS");
        assert_eq!(lines[2], "untagged,Non-Good for teaching,904,7.69,");
        assert!(lines[3].starts_with("difference,Difference,,"));
    }

    #[test]
    fn rank_report_companion_blank() {
        let report = RankReport {
            group: "BS".into(),
            companion_groups: vec!["ED".into()],
            lines: vec![
                RankLine {
                    entity: "Cell".into(),
                    n_multiplicative: 872,
                    n_distinct: 436,
                    mnrs: 5.514,
                    companions: vec![Some(6.0)],
                },
                RankLine {
                    entity: "Nature".into(),
                    n_multiplicative: 10,
                    n_distinct: 10,
                    mnrs: 1.0,
                    companions: vec![None],
                },
            ],
        };
        let labels = ["MNRS_BS".to_string(), "MNRS_ED".to_string()];
        let csv = render_rank_report(&report, "Journal", &labels, Format::Csv).unwrap();
        assert_eq!(
            csv,
            "rank,entity,n_multiplicative,n_distinct,MNRS_BS,MNRS_ED\n1,Cell,872,436,5.514,6\n2,Nature,10,10,1,\n"
        );
        let md = render_rank_report(&report, "Journal", &labels, Format::Markdown).unwrap();
        assert!(md.contains("|    5.51 |    6.00 |"));
        assert!(md.contains("|    1.00 |         |"));
        let jl = render_rank_report(&report, "Journal", &labels, Format::Records).unwrap();
        assert!(jl.lines().nth(1).unwrap().contains(r#""MNRS_ED":null"#));
        let empty = RankReport {
            lines: vec![],
            ..report
        };
        let csv = render_rank_report(&empty, "Journal", &labels, Format::Csv).unwrap();
        assert_eq!(csv.lines().count(), 1);
    }

    #[test]
    fn format_names() {
        assert_eq!("md".parse::<Format>().unwrap(), Format::Markdown);
        assert_eq!("records".parse::<Format>().unwrap(), Format::Records);
        assert!("xml".parse::<Format>().is_err());
    }
}
