//! Frozen baseline tables and score-row files.
//!
//! Baseline files are CSV preceded by `#` metadata lines:
//!
//! ```text
//! # mnrs-baseline v1
//! # group=BS
//! # channel=readers:StudentBachelor
//! # scope=category+doc_type+year
//! # corpus=sha256:<hex>
//! category,doc_type,year,group,numerator,denominator,rho,eligible
//! Psychiatry,article,2014,BS,2167,1000,2.167,true
//! ```
//!
//! `numerator`/`denominator` are the exact reference-set sum and size; `rho`
//! is informational and ignored on reading. Pooled key parts are empty.

use std::io::Write;
use std::path::Path;

use mnrs_core::{
    BaselineEntry, BaselineTable, CellKey, CountChannel, CountingMode, DocType, KeyScope,
    Provenance, ScoreRow, TargetGroup,
};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BASELINE_MAGIC: &str = "# mnrs-baseline v1";

#[derive(Debug, Serialize, Deserialize)]
struct BaselineLine {
    category: String,
    doc_type: String,
    year: String,
    group: String,
    numerator: u64,
    denominator: u64,
    rho: f64,
    eligible: bool,
}

pub fn write_baselines<W: Write>(mut out: W, table: &BaselineTable) -> Result<()> {
    let io = |e| Error::io("<baseline output>", e);
    writeln!(out, "{BASELINE_MAGIC}").map_err(io)?;
    writeln!(out, "# group={}", table.group.name).map_err(io)?;
    writeln!(out, "# channel={}", table.group.channel.to_expr()).map_err(io)?;
    writeln!(out, "# scope={}", table.scope.as_str()).map_err(io)?;
    writeln!(out, "# corpus={}", table.provenance.corpus).map_err(io)?;
    let mut w = csv::Writer::from_writer(out);
    for (cat, cell, e) in table.cells() {
        w.serialize(BaselineLine {
            category: cat.to_string(),
            doc_type: cell
                .doc_type
                .map(|d| d.as_str().to_string())
                .unwrap_or_default(),
            year: cell.year.map(|y| y.to_string()).unwrap_or_default(),
            group: table.group.name.clone(),
            numerator: e.total,
            denominator: e.n_papers,
            rho: e.rho().to_f64(),
            eligible: e.eligible(),
        })?;
    }
    w.flush().map_err(io)?;
    Ok(())
}

pub fn read_baselines(path: &Path) -> Result<BaselineTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_baselines(&text).map_err(|e| match e {
        Error::Format(m) => Error::Format(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_baselines(text: &str) -> Result<BaselineTable> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(BASELINE_MAGIC) {
        return Err(Error::Format("not an mnrs baseline file".into()));
    }
    let (mut name, mut channel, mut scope, mut corpus) = (None, None, None, String::new());
    for line in text.lines().skip(1).take_while(|l| l.starts_with('#')) {
        let Some((k, v)) = line.trim_start_matches('#').trim().split_once('=') else {
            continue;
        };
        match k.trim() {
            "group" => name = Some(v.trim().to_string()),
            "channel" => channel = Some(CountChannel::from_expr(v)?),
            "scope" => {
                scope = Some(
                    KeyScope::parse(v)
                        .ok_or_else(|| Error::Format(format!("unknown scope `{v}`")))?,
                )
            }
            "corpus" => corpus = v.trim().to_string(),
            _ => {}
        }
    }
    let missing = |what: &str| Error::Format(format!("missing `{what}` metadata"));
    let group = TargetGroup::new(
        name.ok_or_else(|| missing("group"))?,
        channel.ok_or_else(|| missing("channel"))?,
    );
    let scope = scope.ok_or_else(|| missing("scope"))?;

    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut entries = Vec::new();
    for row in rdr.deserialize::<BaselineLine>() {
        let row = row?;
        if row.group != group.name {
            return Err(Error::Format(format!(
                "row for group `{}` in a `{}` table",
                row.group, group.name
            )));
        }
        let doc_type = match row.doc_type.as_str() {
            "" => None,
            s => Some(
                DocType::parse(s).ok_or_else(|| Error::Format(format!("bad doc_type `{s}`")))?,
            ),
        };
        let year = match row.year.as_str() {
            "" => None,
            s => Some(
                s.parse::<i32>()
                    .map_err(|_| Error::Format(format!("bad year `{s}`")))?,
            ),
        };
        entries.push((
            row.category,
            CellKey { doc_type, year },
            BaselineEntry {
                total: row.numerator,
                n_papers: row.denominator,
            },
        ));
    }
    let table = BaselineTable::from_entries(group, scope, entries)?;
    Ok(table.with_provenance(Provenance {
        corpus,
        created: None,
    }))
}

#[derive(Debug, Serialize, Deserialize)]
struct ScoreLine {
    paper_id: String,
    category: String,
    group: String,
    mode: String,
    weight: f64,
    nrs: f64,
}

/// Writes score rows as CSV with full-precision numbers.
pub fn write_scores<W: Write>(out: W, rows: &[ScoreRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(ScoreLine {
            paper_id: r.paper_id.clone(),
            category: r.category.clone(),
            group: r.group.clone(),
            mode: r.mode.as_str().to_string(),
            weight: r.weight,
            nrs: r.nrs,
        })?;
    }
    w.flush().map_err(|e| Error::io("<scores output>", e))?;
    Ok(())
}

pub fn read_scores<R: std::io::Read>(input: R) -> Result<Vec<ScoreRow>> {
    let mut rdr = csv::Reader::from_reader(input);
    rdr.deserialize::<ScoreLine>()
        .map(|row| {
            let row = row?;
            let mode = CountingMode::parse(&row.mode)
                .ok_or_else(|| Error::Format(format!("unknown counting mode `{}`", row.mode)))?;
            Ok(ScoreRow {
                paper_id: row.paper_id,
                category: row.category,
                group: row.group,
                mode,
                weight: row.weight,
                nrs: row.nrs,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use mnrs_core::{
        builtin_sector_map, compute_baselines, score_corpus, PaperRecord, StatusGroup,
    };

    fn corpus() -> Vec<PaperRecord> {
        let mut out = Vec::new();
        for (i, (cats, n)) in [(&["X", "Y"][..], 3u32), (&["X"][..], 1), (&["Y"][..], 0)]
            .into_iter()
            .enumerate()
        {
            let mut p = PaperRecord::new(
                format!("p{i}"),
                2014,
                DocType::Article,
                cats.iter().copied(),
            );
            p.readers.set(StatusGroup::StudentBachelor, n);
            p.readers.set(StatusGroup::Professor, 2);
            out.push(p);
        }
        out
    }

    #[test]
    fn baseline_file_round_trip() {
        let m = builtin_sector_map();
        for expr in ["BS", "ED", "citations"] {
            for scope in ["category+doc_type+year", "category"] {
                let scope = KeyScope::parse(scope).unwrap();
                let t = compute_baselines(&corpus(), &m.resolve(expr).unwrap(), scope)
                    .unwrap()
                    .with_provenance(Provenance {
                        corpus: "sha256:abc".into(),
                        created: None,
                    });
                let mut buf = Vec::new();
                write_baselines(&mut buf, &t).unwrap();
                let back = parse_baselines(std::str::from_utf8(&buf).unwrap()).unwrap();
                assert_eq!(back, t);
            }
        }
    }

    #[test]
    fn baseline_file_layout() {
        let m = builtin_sector_map();
        let t =
            compute_baselines(&corpus(), &m.resolve("BS").unwrap(), KeyScope::default()).unwrap();
        let mut buf = Vec::new();
        write_baselines(&mut buf, &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let expected = "# mnrs-baseline v1\n# group=BS\n# channel=readers:StudentBachelor\n\
# scope=category+doc_type+year\n# corpus=\n\
category,doc_type,year,group,numerator,denominator,rho,eligible\n\
X,article,2014,BS,4,2,2.0,true\nY,article,2014,BS,3,2,1.5,true\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn bad_baseline_files() {
        assert!(parse_baselines("category,doc_type\n").is_err());
        let zero =
            "# mnrs-baseline v1\n# group=BS\n# channel=readers:StudentBachelor\n# scope=category\n\
category,doc_type,year,group,numerator,denominator,rho,eligible\nX,,,BS,0,0,0,false\n";
        assert!(parse_baselines(zero).is_err());
        let no_scope = "# mnrs-baseline v1\n# group=BS\n# channel=readers:StudentBachelor\n";
        assert!(parse_baselines(no_scope).is_err());
    }

    #[test]
    fn score_file_round_trip() {
        let m = builtin_sector_map();
        let recs = corpus();
        for mode in CountingMode::ALL {
            let t =
                compute_baselines(&recs, &m.resolve("BS").unwrap(), KeyScope::default()).unwrap();
            let run = score_corpus(&recs, &t, mode);
            let mut buf = Vec::new();
            write_scores(&mut buf, &run.rows).unwrap();
            assert_eq!(read_scores(&buf[..]).unwrap(), run.rows);
        }
    }
}
