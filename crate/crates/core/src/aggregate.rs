//! Entity-level MNRS with multiplicative and distinct paper counts.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::model::PaperRecord;
use crate::scoring::ScoreRow;

/// The record field that assigns papers to entities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EntityDim {
    Journal,
    Country,
    Institution,
    /// A list-valued entry of [`PaperRecord::attributes`].
    Custom(String),
}

impl EntityDim {
    pub fn parse(s: &str) -> Option<EntityDim> {
        let s = s.trim();
        match s {
            "journal" => Some(EntityDim::Journal),
            "country" => Some(EntityDim::Country),
            "institution" => Some(EntityDim::Institution),
            _ => s
                .strip_prefix("custom:")
                .filter(|f| !f.is_empty())
                .map(|f| EntityDim::Custom(f.to_string())),
        }
    }
}

impl fmt::Display for EntityDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntityDim::Journal => f.write_str("journal"),
            EntityDim::Country => f.write_str("country"),
            EntityDim::Institution => f.write_str("institution"),
            EntityDim::Custom(name) => write!(f, "custom:{name}"),
        }
    }
}

/// Maps each paper id to its distinct, non-empty entity labels along `dim`.
pub fn entity_index(records: &[PaperRecord], dim: &EntityDim) -> BTreeMap<String, Vec<String>> {
    let mut out = BTreeMap::new();
    for r in records {
        let labels: BTreeSet<&str> = match dim {
            EntityDim::Journal => core::iter::once(r.journal.as_str()).collect(),
            EntityDim::Country => r.countries.iter().map(String::as_str).collect(),
            EntityDim::Institution => r.institutions.iter().map(String::as_str).collect(),
            EntityDim::Custom(field) => r
                .attributes
                .get(field)
                .map(|v| v.iter().map(String::as_str).collect())
                .unwrap_or_default(),
        };
        let labels: Vec<String> = labels
            .into_iter()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect();
        out.insert(r.id.clone(), labels);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub entity: String,
    pub n_multiplicative: u64,
    pub n_distinct: u64,
    pub mnrs: f64,
    pub group: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregation {
    /// Sorted by `mnrs` descending, then entity ascending.
    pub rows: Vec<AggregateRow>,
    /// Score rows whose paper maps to no entity.
    pub unmapped_rows: u64,
    pub unmapped_papers: u64,
    /// Entities dropped by the minimum-size threshold.
    pub below_threshold: u64,
}

#[derive(Default)]
struct Acc<'a> {
    rows: u64,
    distinct: u64,
    last_paper: Option<&'a str>,
    num: f64,
    den: f64,
}

/// Groups score rows by entity.
///
/// A paper mapped to several entities counts fully for each. Entities with
/// fewer than `min_distinct` distinct papers are dropped. Rows are processed
/// in `(paper_id, category)` order so the result does not depend on input order.
pub fn aggregate(
    rows: &[ScoreRow],
    entity_of: &BTreeMap<String, Vec<String>>,
    min_distinct: u64,
    group: &str,
) -> Aggregation {
    let mut sorted: Vec<&ScoreRow> = rows.iter().collect();
    sorted.sort_by(|a, b| (&a.paper_id, &a.category).cmp(&(&b.paper_id, &b.category)));

    let mut accs: BTreeMap<&str, Acc<'_>> = BTreeMap::new();
    let mut unmapped_rows = 0;
    let mut unmapped_papers = 0;
    let mut last_unmapped: Option<&str> = None;
    for row in sorted {
        let pid = row.paper_id.as_str();
        let entities = entity_of.get(pid).filter(|e| !e.is_empty());
        let Some(entities) = entities else {
            unmapped_rows += 1;
            if last_unmapped != Some(pid) {
                unmapped_papers += 1;
                last_unmapped = Some(pid);
            }
            continue;
        };
        for e in entities {
            let acc = accs.entry(e.as_str()).or_default();
            acc.rows += 1;
            if acc.last_paper != Some(pid) {
                acc.distinct += 1;
                acc.last_paper = Some(pid);
            }
            acc.num += row.weight * row.nrs;
            acc.den += row.weight;
        }
    }

    let mut below_threshold = 0;
    let mut out: Vec<AggregateRow> = Vec::with_capacity(accs.len());
    for (entity, acc) in accs {
        if acc.distinct < min_distinct {
            below_threshold += 1;
            continue;
        }
        out.push(AggregateRow {
            entity: entity.to_string(),
            n_multiplicative: acc.rows,
            n_distinct: acc.distinct,
            mnrs: if acc.den > 0.0 {
                acc.num / acc.den
            } else {
                0.0
            },
            group: group.to_string(),
        });
    }
    out.sort_by(|a, b| {
        b.mnrs
            .total_cmp(&a.mnrs)
            .then_with(|| a.entity.cmp(&b.entity))
    });
    Aggregation {
        rows: out,
        unmapped_rows,
        unmapped_papers,
        below_threshold,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankLine {
    pub entity: String,
    pub n_multiplicative: u64,
    pub n_distinct: u64,
    pub mnrs: f64,
    /// Companion groups' MNRS for the same entity, in companion order.
    pub companions: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankReport {
    pub group: String,
    pub companion_groups: Vec<String>,
    pub lines: Vec<RankLine>,
}

/// The first `top_k` entities of `rows`, joined by entity with companion groups.
///
/// An entity missing from a companion's rows gets `None` there, never zero.
pub fn rank_report(
    rows: &[AggregateRow],
    top_k: usize,
    group: &str,
    companions: &[(&str, &[AggregateRow])],
) -> RankReport {
    let lookups: Vec<BTreeMap<&str, f64>> = companions
        .iter()
        .map(|(_, c)| c.iter().map(|r| (r.entity.as_str(), r.mnrs)).collect())
        .collect();
    RankReport {
        group: group.to_string(),
        companion_groups: companions.iter().map(|(g, _)| g.to_string()).collect(),
        lines: rows
            .iter()
            .take(top_k)
            .map(|r| RankLine {
                entity: r.entity.clone(),
                n_multiplicative: r.n_multiplicative,
                n_distinct: r.n_distinct,
                mnrs: r.mnrs,
                companions: lookups
                    .iter()
                    .map(|l| l.get(r.entity.as_str()).copied())
                    .collect(),
            })
            .collect(),
    }
}
