//! Line-delimited corpus files.
//!
//! The first line is a header, `{"format":"mnrs-corpus","version":"1"}`. Every
//! following line is one JSON object:
//!
//! ```text
//! {"id":"10.1016/j.psych.2013.05.004","year":2014,"doc_type":"article",
//!  "categories":["Psychiatry","Psychology"],"journal":"Psychiatry Res",
//!  "countries":["DE"],"institutions":[],"citations":4,"tags":[],
//!  "readers":{"Student (Bachelor)":3,"Student (Master)":2,"Researcher":3}}
//! ```
//!
//! `readers` is keyed by Mendeley status labels, old or new; legacy labels are
//! folded through the taxonomy's alias table. A missing or `null` reader block
//! means the paper was not found at Mendeley and it is kept with zero readers.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use mnrs_core::{normalize_doi, DocType, PaperRecord, ReaderCounts, SectorMap, StatusGroup};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const FORMAT_NAME: &str = "mnrs-corpus";
pub const SUPPORTED_VERSIONS: [&str; 1] = ["1"];

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    format: String,
    version: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct WireRecord {
    id: String,
    year: i32,
    doc_type: String,
    categories: Vec<String>,
    #[serde(default)]
    journal: String,
    #[serde(default)]
    countries: Vec<String>,
    #[serde(default)]
    institutions: Vec<String>,
    #[serde(default)]
    readers: Option<BTreeMap<String, i64>>,
    #[serde(default)]
    citations: Option<u64>,
    #[serde(default)]
    tags: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    attributes: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    /// 1-based line number in the file.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Duplicate {
    pub id: String,
    /// Line of the record that was dropped.
    pub superseded_line: usize,
    /// Line of the record that was kept.
    pub kept_line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadReport {
    pub records: Vec<PaperRecord>,
    pub rejects: Vec<Rejection>,
    pub duplicates: Vec<Duplicate>,
    /// Record lines read, excluding the header.
    pub lines: usize,
    /// Papers without a reader block (zero-filled).
    pub missing_reader_blocks: usize,
    /// Hex SHA-256 of the file contents.
    pub digest: String,
}

impl LoadReport {
    /// Accepted, superseded and rejected lines add up to the lines read.
    pub fn is_balanced(&self) -> bool {
        self.records.len() + self.duplicates.len() + self.rejects.len() == self.lines
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads and validates a corpus file. Parsing runs on the current rayon pool;
/// record order follows the file regardless of worker count.
pub fn load_corpus(path: &Path, schema_version: &str, taxonomy: &SectorMap) -> Result<LoadReport> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| Error::Format(format!("{}: not UTF-8: {e}", path.display())))?;
    let mut report = parse_corpus(text, schema_version, taxonomy)?;
    report.digest = sha256_hex(&bytes);
    Ok(report)
}

/// Parses corpus text; see [`load_corpus`].
pub fn parse_corpus(text: &str, schema_version: &str, taxonomy: &SectorMap) -> Result<LoadReport> {
    if !SUPPORTED_VERSIONS.contains(&schema_version) {
        return Err(Error::Format(format!(
            "unknown schema version `{schema_version}` (supported: {})",
            SUPPORTED_VERSIONS.join(", ")
        )));
    }
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("missing header line".into()))?;
    let header: Header = serde_json::from_str(header.trim_start_matches('\u{feff}'))
        .map_err(|e| Error::Format(format!("bad header line: {e}")))?;
    if header.format != FORMAT_NAME {
        return Err(Error::Format(format!(
            "not an {FORMAT_NAME} file: `{}`",
            header.format
        )));
    }
    if header.version != schema_version {
        return Err(Error::Format(format!(
            "file has schema version {}, expected {schema_version}",
            header.version
        )));
    }

    let body: Vec<&str> = lines.collect();
    let parsed: Vec<Result<(PaperRecord, bool), String>> = body
        .par_iter()
        .map(|line| parse_line(line, taxonomy))
        .collect();

    let mut report = LoadReport {
        records: Vec::with_capacity(parsed.len()),
        rejects: Vec::new(),
        duplicates: Vec::new(),
        lines: body.len(),
        missing_reader_blocks: 0,
        digest: String::new(),
    };
    let mut accepted: Vec<(usize, PaperRecord)> = Vec::with_capacity(parsed.len());
    for (i, res) in parsed.into_iter().enumerate() {
        let line = i + 2;
        match res {
            Ok((rec, missing)) => {
                report.missing_reader_blocks += usize::from(missing);
                accepted.push((line, rec));
            }
            Err(reason) => report.rejects.push(Rejection { line, reason }),
        }
    }

    // last occurrence of an id wins
    let mut last: HashMap<&str, usize> = HashMap::with_capacity(accepted.len());
    for (pos, (_, rec)) in accepted.iter().enumerate() {
        last.insert(rec.id.as_str(), pos);
    }
    let keep: Vec<bool> = accepted
        .iter()
        .enumerate()
        .map(|(pos, (_, rec))| last[rec.id.as_str()] == pos)
        .collect();
    let mut duplicates = Vec::new();
    for (pos, (line, rec)) in accepted.iter().enumerate() {
        if !keep[pos] {
            duplicates.push(Duplicate {
                id: rec.id.clone(),
                superseded_line: *line,
                kept_line: accepted[last[rec.id.as_str()]].0,
            });
        }
    }
    drop(last);
    report.duplicates = duplicates;
    report.records = accepted
        .into_iter()
        .zip(keep)
        .filter_map(|((_, rec), k)| k.then_some(rec))
        .collect();
    Ok(report)
}

fn parse_line(line: &str, taxonomy: &SectorMap) -> Result<(PaperRecord, bool), String> {
    if line.trim().is_empty() {
        return Err("blank line".into());
    }
    let w: WireRecord = serde_json::from_str(line).map_err(|e| format!("malformed record: {e}"))?;
    let id = normalize_doi(&w.id).map_err(|e| e.to_string())?;
    let doc_type =
        DocType::parse(&w.doc_type).ok_or_else(|| format!("unknown doc_type `{}`", w.doc_type))?;
    let missing = w.readers.is_none();
    let mut readers = ReaderCounts::default();
    for (label, n) in w.readers.into_iter().flatten() {
        let g = StatusGroup::from_label(&label)
            .ok_or_else(|| format!("unknown status group `{label}`"))?;
        let n = u32::try_from(n)
            .map_err(|_| format!("reader count out of range for `{label}`: {n}"))?;
        readers.add(taxonomy.canonical(g), n);
    }
    let rec = PaperRecord {
        id: id.value,
        year: w.year,
        doc_type,
        categories: w.categories.iter().map(|c| c.trim().to_string()).collect(),
        journal: w.journal.trim().to_string(),
        countries: w.countries.iter().map(|c| c.trim().to_string()).collect(),
        institutions: w
            .institutions
            .iter()
            .map(|c| c.trim().to_string())
            .collect(),
        readers,
        citations: w.citations.unwrap_or(0),
        tags: w
            .tags
            .iter()
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .map(String::from)
            .collect(),
        attributes: w.attributes,
    };
    rec.validate().map_err(|e| match e {
        mnrs_core::Error::InvalidRecord { reason, .. } => reason,
        other => other.to_string(),
    })?;
    Ok((rec, missing))
}

/// Writes records in the corpus format (schema version 1).
pub fn write_corpus<W: Write>(mut out: W, records: &[PaperRecord]) -> io::Result<()> {
    let header = Header {
        format: FORMAT_NAME.into(),
        version: SUPPORTED_VERSIONS[0].into(),
    };
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    for r in records {
        let w = WireRecord {
            id: r.id.clone(),
            year: r.year,
            doc_type: r.doc_type.as_str().into(),
            categories: r.categories.clone(),
            journal: r.journal.clone(),
            countries: r.countries.clone(),
            institutions: r.institutions.clone(),
            readers: Some(
                r.readers
                    .iter()
                    .map(|(g, n)| (g.label().to_string(), i64::from(n)))
                    .collect(),
            ),
            citations: Some(r.citations),
            tags: r.tags.iter().cloned().collect(),
            attributes: r.attributes.clone(),
        };
        serde_json::to_writer(&mut out, &w)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}
