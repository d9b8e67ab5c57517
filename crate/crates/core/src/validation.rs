//! Tagged vs. untagged comparison of mean scores across target groups.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::baseline::BaselineTable;
use crate::model::PaperRecord;
use crate::scoring::{score_corpus, CountingMode, Diagnostic};

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSummary {
    /// Distinct papers in the partition.
    pub n: u64,
    /// Per group: summed row weights (the row count under multiplicative counting).
    pub weights: Vec<f64>,
    /// Per group: weighted mean score, `None` when the partition has no rows.
    pub means: Vec<Option<f64>>,
}

impl PartitionSummary {
    fn new(groups: usize) -> Self {
        PartitionSummary {
            n: 0,
            weights: vec![0.0; groups],
            means: vec![None; groups],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TagComparison {
    pub tag: String,
    pub groups: Vec<String>,
    /// Report column labels, e.g. `MNRS_BS` or `MNCS`.
    pub labels: Vec<String>,
    pub tagged: PartitionSummary,
    pub untagged: PartitionSummary,
    pub total: PartitionSummary,
    pub difference: Vec<Option<f64>>,
    pub diagnostics: Vec<Diagnostic>,
}

impl TagComparison {
    pub fn tag_found(&self) -> bool {
        self.tagged.n > 0
    }
}

/// Compares papers carrying `tag` against the other tagged papers.
///
/// Only records with at least one tag take part. Scores come from the full
/// corpus against the given (whole-corpus) baselines, so a paper's rows are
/// the same as in a plain scoring run.
pub fn compare_by_tag(
    records: &[PaperRecord],
    tag: &str,
    baselines: &[BaselineTable],
    mode: CountingMode,
) -> TagComparison {
    let tag = tag.trim();
    let g = baselines.len();
    let mut tagged = PartitionSummary::new(g);
    let mut untagged = PartitionSummary::new(g);
    let mut total = PartitionSummary::new(g);

    let mut member: BTreeMap<&str, bool> = BTreeMap::new();
    for r in records.iter().filter(|r| !r.tags.is_empty()) {
        let has = r.has_tag(tag);
        member.insert(r.id.as_str(), has);
        if has {
            tagged.n += 1;
        } else {
            untagged.n += 1;
        }
    }
    total.n = tagged.n + untagged.n;

    let mut diagnostics = Vec::new();
    for (gi, table) in baselines.iter().enumerate() {
        let run = score_corpus(records, table, mode);
        diagnostics.extend(run.diagnostics);
        // [tagged, untagged] numerators and denominators
        let mut num = [0.0f64; 2];
        let mut den = [0.0f64; 2];
        for row in &run.rows {
            let Some(&has) = member.get(row.paper_id.as_str()) else {
                continue;
            };
            let side = usize::from(!has);
            num[side] += row.weight * row.nrs;
            den[side] += row.weight;
        }
        let mean = |n: f64, d: f64| (d > 0.0).then(|| n / d);
        tagged.weights[gi] = den[0];
        tagged.means[gi] = mean(num[0], den[0]);
        untagged.weights[gi] = den[1];
        untagged.means[gi] = mean(num[1], den[1]);
        total.weights[gi] = den[0] + den[1];
        total.means[gi] = mean(num[0] + num[1], den[0] + den[1]);
    }
    let difference = tagged
        .means
        .iter()
        .zip(&untagged.means)
        .map(|(t, u)| Some((*t)? - (*u)?))
        .collect();

    TagComparison {
        tag: tag.to_string(),
        groups: baselines.iter().map(|t| t.group.name.clone()).collect(),
        labels: baselines
            .iter()
            .map(|t| t.group.indicator_label())
            .collect(),
        tagged,
        untagged,
        total,
        difference,
        diagnostics,
    }
}
