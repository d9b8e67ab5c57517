//! Normalized scores per (paper, category) under the four counting methods.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::baseline::BaselineTable;
use crate::model::{group_count, PaperRecord, TargetGroup};

/// Category label of the single per-paper row produced by full counting.
pub const FULL_COUNTING_CATEGORY: &str = "*";

/// How a paper assigned to several categories enters a mean.
///
/// * `Multiplicative`: one row per eligible category, each with weight 1.
/// * `Fractional`: the same rows, each weighted `1/k` for `k` eligible categories.
/// * `FullAveraged`: one row holding the mean of the per-category scores.
/// * `FullScaled`: as `FullAveraged`, then every row in the run is multiplied by
///   `rows / sum(nrs)` so the run's mean is one again.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "kebab-case")]
pub enum CountingMode {
    #[default]
    Multiplicative,
    Fractional,
    FullAveraged,
    FullScaled,
}

impl CountingMode {
    pub const ALL: [CountingMode; 4] = [
        CountingMode::Multiplicative,
        CountingMode::Fractional,
        CountingMode::FullAveraged,
        CountingMode::FullScaled,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CountingMode::Multiplicative => "multiplicative",
            CountingMode::Fractional => "fractional",
            CountingMode::FullAveraged => "full-averaged",
            CountingMode::FullScaled => "full-scaled",
        }
    }

    pub fn parse(s: &str) -> Option<CountingMode> {
        Self::ALL.into_iter().find(|m| m.as_str() == s.trim())
    }
}

impl fmt::Display for CountingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub paper_id: String,
    pub category: String,
    pub group: String,
    pub mode: CountingMode,
    pub weight: f64,
    pub nrs: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Diagnostic {
    /// The paper's reference set is not in the baseline table; the row was skipped.
    MissingBaseline { paper_id: String, category: String },
    /// A run over a non-empty corpus produced no rows at all.
    NoScores { group: String },
    /// Full counting with scaling had an all-zero run, so no factor exists.
    UnscalableRun { group: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::MissingBaseline { paper_id, category } => {
                write!(f, "missing baseline for {paper_id} in {category}")
            }
            Diagnostic::NoScores { group } => {
                write!(f, "no eligible reference sets for group {group}")
            }
            Diagnostic::UnscalableRun { group } => {
                write!(f, "all scores are zero for group {group}; scaling skipped")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PaperScores {
    pub rows: Vec<ScoreRow>,
    pub diagnostics: Vec<Diagnostic>,
    /// Categories skipped by the minimum constraint.
    pub ineligible: u32,
}

/// Scores one paper against a baseline table.
///
/// For `FullScaled` the returned row is unscaled; scaling is a corpus-level
/// step done by [`ScoreRun::assemble`].
pub fn score_paper(
    paper: &PaperRecord,
    baselines: &BaselineTable,
    mode: CountingMode,
) -> PaperScores {
    let group = &baselines.group;
    let count = group_count(paper, group) as f64;
    let mut out = PaperScores::default();
    let mut per_category: Vec<(&str, f64)> = Vec::with_capacity(paper.categories.len());
    for cat in &paper.categories {
        match baselines.lookup(cat, paper.doc_type, paper.year) {
            None => out.diagnostics.push(Diagnostic::MissingBaseline {
                paper_id: paper.id.clone(),
                category: cat.clone(),
            }),
            Some(e) if !e.eligible() => out.ineligible += 1,
            Some(e) => per_category.push((cat.as_str(), count / e.rho().to_f64())),
        }
    }
    if per_category.is_empty() {
        return out;
    }
    let row = |category: &str, weight: f64, nrs: f64| ScoreRow {
        paper_id: paper.id.clone(),
        category: category.to_string(),
        group: group.name.clone(),
        mode,
        weight,
        nrs,
    };
    match mode {
        CountingMode::Multiplicative | CountingMode::Fractional => {
            let weight = if mode == CountingMode::Fractional {
                1.0 / per_category.len() as f64
            } else {
                1.0
            };
            out.rows = per_category
                .iter()
                .map(|(c, nrs)| row(c, weight, *nrs))
                .collect();
        }
        CountingMode::FullAveraged | CountingMode::FullScaled => {
            let sum: f64 = per_category.iter().map(|(_, v)| v).sum();
            out.rows.push(row(
                FULL_COUNTING_CATEGORY,
                1.0,
                sum / per_category.len() as f64,
            ));
        }
    }
    out
}

/// The rows and diagnostics of one scoring run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRun {
    pub group: String,
    pub mode: CountingMode,
    /// Sorted by `(paper_id, category)`.
    pub rows: Vec<ScoreRow>,
    pub diagnostics: Vec<Diagnostic>,
    pub ineligible: u64,
    /// Factor applied under `FullScaled`.
    pub scale_factor: Option<f64>,
}

impl ScoreRun {
    /// Combines per-paper results, which must be given in corpus order.
    pub fn assemble<I>(group: &TargetGroup, mode: CountingMode, parts: I) -> ScoreRun
    where
        I: IntoIterator<Item = PaperScores>,
    {
        let mut run = ScoreRun {
            group: group.name.clone(),
            mode,
            rows: Vec::new(),
            diagnostics: Vec::new(),
            ineligible: 0,
            scale_factor: None,
        };
        let mut papers = 0u64;
        for p in parts {
            papers += 1;
            run.rows.extend(p.rows);
            run.diagnostics.extend(p.diagnostics);
            run.ineligible += u64::from(p.ineligible);
        }
        run.rows
            .sort_by(|a, b| (&a.paper_id, &a.category).cmp(&(&b.paper_id, &b.category)));
        if mode == CountingMode::FullScaled && !run.rows.is_empty() {
            let sum: f64 = run.rows.iter().map(|r| r.nrs).sum();
            if sum > 0.0 {
                let factor = run.rows.len() as f64 / sum;
                for r in &mut run.rows {
                    r.nrs *= factor;
                }
                run.scale_factor = Some(factor);
            } else {
                run.diagnostics.push(Diagnostic::UnscalableRun {
                    group: run.group.clone(),
                });
            }
        }
        if papers > 0 && run.rows.is_empty() {
            run.diagnostics.push(Diagnostic::NoScores {
                group: run.group.clone(),
            });
        }
        run
    }

    /// Unweighted mean over all rows.
    pub fn mean_nrs(&self) -> Option<f64> {
        if self.rows.is_empty() {
            return None;
        }
        Some(self.rows.iter().map(|r| r.nrs).sum::<f64>() / self.rows.len() as f64)
    }

    /// Mean with each row weighted by its counting weight.
    pub fn weighted_mean(&self) -> Option<f64> {
        weighted_mean(self.rows.iter())
    }
}

/// `Σ w·nrs / Σ w`, or `None` when there is no weight.
pub fn weighted_mean<'a, I>(rows: I) -> Option<f64>
where
    I: IntoIterator<Item = &'a ScoreRow>,
{
    let (mut num, mut den) = (0.0, 0.0);
    for r in rows {
        num += r.weight * r.nrs;
        den += r.weight;
    }
    (den > 0.0).then(|| num / den)
}

/// Scores every record; rows come back sorted by `(paper_id, category)`.
pub fn score_corpus(
    records: &[PaperRecord],
    baselines: &BaselineTable,
    mode: CountingMode,
) -> ScoreRun {
    ScoreRun::assemble(
        &baselines.group,
        mode,
        records.iter().map(|r| score_paper(r, baselines, mode)),
    )
}

/// Independent runs for several target groups over the same records.
pub fn score_channel_suite(
    records: &[PaperRecord],
    baseline_set: &BTreeMap<String, BaselineTable>,
    mode: CountingMode,
) -> BTreeMap<String, ScoreRun> {
    baseline_set
        .iter()
        .map(|(name, table)| (name.clone(), score_corpus(records, table, mode)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::{compute_baselines, BaselineEntry, KeyScope};
    use crate::model::{CountChannel, DocType, StatusGroup};
    use alloc::vec;

    fn bs() -> TargetGroup {
        TargetGroup::new(
            "BS",
            CountChannel::Readers([StatusGroup::StudentBachelor].into_iter().collect()),
        )
    }

    fn paper(id: &str, cats: &[&str], n: u32) -> PaperRecord {
        let mut p = PaperRecord::new(id, 2014, DocType::Article, cats.iter().copied());
        p.readers.set(StatusGroup::StudentBachelor, n);
        p
    }

    fn frozen(entries: &[(&str, u64, u64)]) -> BaselineTable {
        let scope = KeyScope::default();
        BaselineTable::from_entries(
            bs(),
            scope,
            entries.iter().map(|(c, t, n)| {
                (
                    c.to_string(),
                    scope.cell(DocType::Article, 2014),
                    BaselineEntry {
                        total: *t,
                        n_papers: *n,
                    },
                )
            }),
        )
        .unwrap()
    }

    #[test]
    fn worked_example_scores() {
        let t = frozen(&[("Psychiatry", 2167, 1000), ("Psychology", 2162, 1000)]);
        let p = paper(
            "10.1016/j.psych.2013.05.004",
            &["Psychiatry", "Psychology"],
            3,
        );
        let s = score_paper(&p, &t, CountingMode::Multiplicative);
        assert_eq!(s.rows.len(), 2);
        assert_eq!(s.rows[0].nrs, 3.0 / 2.167);
        assert_eq!(s.rows[1].nrs, 3.0 / 2.162);
        assert_eq!(crate::format_fixed2(s.rows[0].nrs), "1.38");
        assert_eq!(crate::format_fixed2(s.rows[1].nrs), "1.39");
    }

    #[test]
    fn fractional_weights_use_eligible_categories() {
        let t = frozen(&[("A", 2, 1), ("B", 4, 1), ("C", 1, 2)]);
        let p = paper("p", &["A", "B", "C"], 4);
        let s = score_paper(&p, &t, CountingMode::Fractional);
        assert_eq!(s.rows.len(), 2);
        assert_eq!(s.ineligible, 1);
        assert!(s.rows.iter().all(|r| r.weight == 0.5));
    }

    #[test]
    fn full_averaged_emits_one_row() {
        let t = frozen(&[("A", 2, 1), ("B", 4, 1)]);
        let s = score_paper(&paper("p", &["A", "B"], 4), &t, CountingMode::FullAveraged);
        assert_eq!(s.rows.len(), 1);
        assert_eq!(s.rows[0].category, FULL_COUNTING_CATEGORY);
        assert_eq!(s.rows[0].nrs, 1.5);
    }

    #[test]
    fn zero_count_scores_zero() {
        let t = frozen(&[("A", 2, 1)]);
        for mode in CountingMode::ALL {
            let s = score_paper(&paper("p", &["A"], 0), &t, mode);
            assert_eq!(s.rows[0].nrs, 0.0);
        }
    }

    #[test]
    fn average_paper_scores_one_in_every_mode() {
        let t = frozen(&[("A", 6, 2)]);
        for mode in CountingMode::ALL {
            let run = score_corpus(&[paper("p", &["A"], 3)], &t, mode);
            assert_eq!(run.rows[0].nrs, 1.0, "{mode}");
        }
    }

    #[test]
    fn missing_baseline_is_reported_not_zeroed() {
        let t = frozen(&[("A", 2, 1)]);
        let s = score_paper(
            &paper("p", &["A", "Z"], 2),
            &t,
            CountingMode::Multiplicative,
        );
        assert_eq!(s.rows.len(), 1);
        assert_eq!(
            s.diagnostics,
            vec![Diagnostic::MissingBaseline {
                paper_id: "p".into(),
                category: "Z".into()
            }]
        );
    }

    #[test]
    fn single_paper_corpus_is_its_own_reference() {
        let recs = [paper("p", &["A"], 7)];
        let t = compute_baselines(&recs, &bs(), KeyScope::default()).unwrap();
        let run = score_corpus(&recs, &t, CountingMode::Multiplicative);
        assert_eq!(run.rows.len(), 1);
        assert_eq!(run.rows[0].nrs, 1.0);
    }

    #[test]
    fn ineligible_everything_gives_empty_run_with_diagnostic() {
        let recs = [paper("a", &["A"], 0), paper("b", &["A"], 1)];
        let t = compute_baselines(&recs, &bs(), KeyScope::default()).unwrap();
        let run = score_corpus(&recs, &t, CountingMode::Multiplicative);
        assert!(run.rows.is_empty());
        assert_eq!(
            run.diagnostics,
            vec![Diagnostic::NoScores { group: "BS".into() }]
        );
    }

    #[test]
    fn full_scaled_restores_mean_one() {
        let recs = [
            paper("a", &["A", "B"], 6),
            paper("b", &["A"], 0),
            paper("c", &["B"], 2),
        ];
        let t = compute_baselines(&recs, &bs(), KeyScope::default()).unwrap();
        let run = score_corpus(&recs, &t, CountingMode::FullScaled);
        assert_eq!(run.rows.len(), 3);
        assert!((run.mean_nrs().unwrap() - 1.0).abs() < 1e-12);
        assert!(run.scale_factor.is_some());
    }

    #[test]
    fn rows_sorted_by_paper_then_category() {
        let recs = [paper("b", &["Y", "X"], 3), paper("a", &["X"], 1)];
        let t = compute_baselines(&recs, &bs(), KeyScope::default()).unwrap();
        let run = score_corpus(&recs, &t, CountingMode::Multiplicative);
        let keys: Vec<_> = run
            .rows
            .iter()
            .map(|r| (r.paper_id.as_str(), r.category.as_str()))
            .collect();
        assert_eq!(keys, vec![("a", "X"), ("b", "X"), ("b", "Y")]);
    }

    #[test]
    fn mode_names_round_trip() {
        for m in CountingMode::ALL {
            assert_eq!(CountingMode::parse(m.as_str()), Some(m));
        }
        assert_eq!(CountingMode::default(), CountingMode::Multiplicative);
    }
}
