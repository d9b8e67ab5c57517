use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::model::{DocType, PaperRecord, StatusGroup};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub n_papers: u64,
    pub n_articles: u64,
    pub n_reviews: u64,
    pub total_reader_counts: u64,
    pub mean_readers_per_paper: f64,
    pub n_zero_reader_papers: u64,
    pub pct_zero_reader_papers: f64,
}

pub fn corpus_stats(records: &[PaperRecord]) -> Result<CorpusStats> {
    if records.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut s = CorpusStats {
        n_papers: records.len() as u64,
        n_articles: 0,
        n_reviews: 0,
        total_reader_counts: 0,
        mean_readers_per_paper: 0.0,
        n_zero_reader_papers: 0,
        pct_zero_reader_papers: 0.0,
    };
    for r in records {
        match r.doc_type {
            DocType::Article => s.n_articles += 1,
            DocType::Review => s.n_reviews += 1,
        }
        let total = r.readers.total();
        s.total_reader_counts += total;
        if total == 0 {
            s.n_zero_reader_papers += 1;
        }
    }
    let n = s.n_papers as f64;
    s.mean_readers_per_paper = s.total_reader_counts as f64 / n;
    s.pct_zero_reader_papers = 100.0 * s.n_zero_reader_papers as f64 / n;
    Ok(s)
}

/// Per-status-group reader totals, averages and share of papers with no such reader.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatusGroupSummary {
    pub group: StatusGroup,
    pub reader_counts: u64,
    pub average: f64,
    pub pct_zero: f64,
}

pub fn status_group_summary(records: &[PaperRecord]) -> Result<Vec<StatusGroupSummary>> {
    if records.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let n = records.len() as f64;
    Ok(StatusGroup::CANONICAL
        .into_iter()
        .map(|g| {
            let mut total = 0u64;
            let mut zero = 0u64;
            for r in records {
                let c = r.readers.get(g);
                total += u64::from(c);
                zero += u64::from(c == 0);
            }
            StatusGroupSummary {
                group: g,
                reader_counts: total,
                average: total as f64 / n,
                pct_zero: 100.0 * zero as f64 / n,
            }
        })
        .collect())
}
