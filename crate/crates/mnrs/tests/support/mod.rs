//! Synthetic corpora and a straight-line reference scorer for the integration tests.
//!
//! The oracle below shares no scoring or baseline code with the library: it reads
//! raw counts through a caller-supplied closure and recomputes reference-set
//! averages with a plain hash map.

#![allow(dead_code)]

use std::collections::HashMap;

use mnrs_core::{CountingMode, DocType, PaperRecord, StatusGroup};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CATEGORIES: [&str; 6] = [
    "Ecology",
    "Genetics",
    "Optics",
    "Psychiatry",
    "Psychology",
    "Zoology",
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Counts skewed toward zero so that some reference sets fall below the minimum.
fn skewed(rng: &mut ChaCha8Rng) -> u32 {
    match rng.gen_range(0..10) {
        0..=4 => 0,
        5..=7 => rng.gen_range(1..4),
        _ => rng.gen_range(3..20),
    }
}

pub fn random_paper(rng: &mut ChaCha8Rng, id: String, max_cats: usize) -> PaperRecord {
    let k = rng.gen_range(1..=max_cats);
    let cats: Vec<&str> = CATEGORIES.choose_multiple(rng, k).copied().collect();
    let doc_type = if rng.gen_bool(0.8) {
        DocType::Article
    } else {
        DocType::Review
    };
    let year = rng.gen_range(2013..=2014);
    let mut p = PaperRecord::new(id, year, doc_type, cats);
    for g in StatusGroup::CANONICAL {
        p.readers.set(g, skewed(rng));
    }
    p.citations = u64::from(skewed(rng)) * 2;
    p
}

pub fn random_corpus(rng: &mut ChaCha8Rng, n: usize, max_cats: usize) -> Vec<PaperRecord> {
    (0..n)
        .map(|i| random_paper(rng, format!("10.7777/syn.{i:05}"), max_cats))
        .collect()
}

pub fn bs_count(p: &PaperRecord) -> u64 {
    u64::from(p.readers.get(StatusGroup::StudentBachelor))
}

pub fn ed_count(p: &PaperRecord) -> u64 {
    [
        StatusGroup::Researcher,
        StatusGroup::AssociateProfessor,
        StatusGroup::Lecturer,
        StatusGroup::Professor,
        StatusGroup::SeniorLecturer,
    ]
    .iter()
    .map(|g| u64::from(p.readers.get(*g)))
    .sum()
}

pub fn all_count(p: &PaperRecord) -> u64 {
    StatusGroup::CANONICAL
        .iter()
        .map(|g| u64::from(p.readers.get(*g)))
        .sum()
}

pub fn citation_count(p: &PaperRecord) -> u64 {
    p.citations
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub id: String,
    pub category: String,
    pub weight: f64,
    pub nrs: f64,
}

type Key = (String, &'static str, i32);

/// Reference-set sums and sizes, one entry per (category, doc type, year).
pub fn oracle_sets(
    records: &[PaperRecord],
    count: &dyn Fn(&PaperRecord) -> u64,
) -> HashMap<Key, (u64, u64)> {
    let mut sets: HashMap<Key, (u64, u64)> = HashMap::new();
    for p in records {
        for c in &p.categories {
            let e = sets
                .entry((c.clone(), p.doc_type.as_str(), p.year))
                .or_insert((0, 0));
            e.0 += count(p);
            e.1 += 1;
        }
    }
    sets
}

/// Scores `scored` against reference sets drawn from `reference`.
pub fn oracle_scores_against(
    reference: &[PaperRecord],
    scored: &[PaperRecord],
    count: &dyn Fn(&PaperRecord) -> u64,
    mode: CountingMode,
) -> Vec<OracleRow> {
    let sets = oracle_sets(reference, count);
    let mut rows = Vec::new();
    for p in scored {
        let r = count(p) as f64;
        let mut per_cat = Vec::new();
        for c in &p.categories {
            let Some(&(sum, n)) = sets.get(&(c.clone(), p.doc_type.as_str(), p.year)) else {
                continue;
            };
            // minimum constraint: the average must be at least one
            if sum < n {
                continue;
            }
            let avg = sum as f64 / n as f64;
            per_cat.push((c.clone(), r / avg));
        }
        if per_cat.is_empty() {
            continue;
        }
        let k = per_cat.len() as f64;
        match mode {
            CountingMode::Multiplicative => {
                for (c, v) in per_cat {
                    rows.push(OracleRow {
                        id: p.id.clone(),
                        category: c,
                        weight: 1.0,
                        nrs: v,
                    });
                }
            }
            CountingMode::Fractional => {
                for (c, v) in per_cat {
                    rows.push(OracleRow {
                        id: p.id.clone(),
                        category: c,
                        weight: 1.0 / k,
                        nrs: v,
                    });
                }
            }
            CountingMode::FullAveraged | CountingMode::FullScaled => {
                let mut total = 0.0;
                for (_, v) in &per_cat {
                    total += v;
                }
                rows.push(OracleRow {
                    id: p.id.clone(),
                    category: "*".into(),
                    weight: 1.0,
                    nrs: total / k,
                });
            }
        }
    }
    if mode == CountingMode::FullScaled {
        let mut total = 0.0;
        for r in &rows {
            total += r.nrs;
        }
        if total > 0.0 {
            let f = rows.len() as f64 / total;
            for r in rows.iter_mut() {
                r.nrs *= f;
            }
        }
    }
    rows.sort_by(|a, b| (&a.id, &a.category).cmp(&(&b.id, &b.category)));
    rows
}

pub fn oracle_scores(
    records: &[PaperRecord],
    count: &dyn Fn(&PaperRecord) -> u64,
    mode: CountingMode,
) -> Vec<OracleRow> {
    oracle_scores_against(records, records, count, mode)
}

pub fn oracle_weighted_mean(rows: &[&OracleRow]) -> Option<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for r in rows {
        num += r.weight * r.nrs;
        den += r.weight;
    }
    if den > 0.0 {
        Some(num / den)
    } else {
        None
    }
}

/// Mean of multiplicative NRS values in exact arithmetic; `None` without rows.
pub fn oracle_rational_mean(
    records: &[PaperRecord],
    count: &dyn Fn(&PaperRecord) -> u64,
) -> Option<BigRational> {
    let sets = oracle_sets(records, count);
    let mut total = BigRational::from_integer(BigInt::from(0));
    let mut rows = 0u64;
    for p in records {
        for c in &p.categories {
            let (sum, n) = sets[&(c.clone(), p.doc_type.as_str(), p.year)];
            if sum < n {
                continue;
            }
            total += BigRational::new(BigInt::from(count(p)) * BigInt::from(n), BigInt::from(sum));
            rows += 1;
        }
    }
    (rows > 0).then(|| total / BigRational::from_integer(BigInt::from(rows)))
}
