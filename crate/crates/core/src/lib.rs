//! Target-oriented, field-normalized reader impact indicators.
//!
//! A paper's normalized reader score (NRS) is its count in one *count channel*
//! (the readers of a chosen set of Mendeley status groups, or its citations)
//! divided by the average count of its reference set: the papers sharing its
//! subject category, document type and publication year. Means of NRS values
//! over a paper set give the MNRS (or MNCS for the citation channel).
//!
//! The crate is `no_std` and only needs `alloc`. Reading corpora, writing
//! reports and running things in parallel is left to the `mnrs` crate; every
//! reduction here is exposed in a mergeable form so callers can split work.
//!
//! ```
//! use mnrs_core::{builtin_sector_map, compute_baselines, score_corpus, CountingMode,
//!     DocType, KeyScope, PaperRecord, StatusGroup};
//!
//! let map = builtin_sector_map();
//! let bs = map.resolve("BS").unwrap();
//!
//! let mut a = PaperRecord::new("p1", 2014, DocType::Article, ["Psychiatry"]);
//! a.readers.set(StatusGroup::StudentBachelor, 3);
//! let mut b = PaperRecord::new("p2", 2014, DocType::Article, ["Psychiatry"]);
//! b.readers.set(StatusGroup::StudentBachelor, 1);
//!
//! let corpus = [a, b];
//! let table = compute_baselines(&corpus, &bs, KeyScope::default()).unwrap();
//! let run = score_corpus(&corpus, &table, CountingMode::Multiplicative);
//! assert_eq!(run.rows.len(), 2);
//! assert!((run.rows[0].nrs - 1.5).abs() < 1e-12);
//! ```
#![no_std]

extern crate alloc;

mod aggregate;
mod baseline;
mod error;
mod model;
mod numeric;
mod scoring;
mod stats;
mod taxonomy;
mod validation;

pub use aggregate::{
    aggregate, entity_index, rank_report, AggregateRow, Aggregation, EntityDim, RankLine,
    RankReport,
};
pub use baseline::{
    baseline_report, compute_baselines, BaselineAccumulator, BaselineEntry, BaselineKey,
    BaselineReportRow, BaselineTable, CellKey, KeyScope, Provenance, Ratio,
};
pub use error::Error;
pub use model::{
    group_count, normalize_doi, CountChannel, DocType, NormalizedId, PaperRecord, ReaderCounts,
    StatusGroup, StatusSet, TargetGroup,
};
pub use numeric::{format_fixed2, round_half_up};
pub use scoring::{
    score_channel_suite, score_corpus, score_paper, weighted_mean, CountingMode, Diagnostic,
    PaperScores, ScoreRow, ScoreRun, FULL_COUNTING_CATEGORY,
};
pub use stats::{corpus_stats, status_group_summary, CorpusStats, StatusGroupSummary};
pub use taxonomy::{builtin_sector_map, Notice, Sector, SectorMap, TaxonomyOverride};
pub use validation::{compare_by_tag, PartitionSummary, TagComparison};

pub type Result<T, E = Error> = core::result::Result<T, E>;
