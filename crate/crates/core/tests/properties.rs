use std::collections::BTreeMap;

use mnrs_core::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const CATS: [&str; 5] = ["Acoustics", "Biology", "Chemistry", "Dentistry", "Ecology"];

fn bs() -> TargetGroup {
    builtin_sector_map().resolve("BS").unwrap()
}

prop_compose! {
    fn arb_paper(idx: usize)(
        cat_mask in 1u8..32,
        year in 2013i32..2015,
        review in any::<bool>(),
        counts in proptest::collection::vec(0u32..6, 12),
        cites in 0u64..20,
        tags in proptest::collection::btree_set(prop_oneof!["T", "U"], 0..2),
        journal in 0usize..4,
    ) -> PaperRecord {
        let cats: Vec<&str> = CATS.iter().enumerate()
            .filter(|(i, _)| cat_mask & (1 << i) != 0).map(|(_, c)| *c).collect();
        let dt = if review { DocType::Review } else { DocType::Article };
        let mut p = PaperRecord::new(format!("p{idx:04}"), year, dt, cats);
        for (g, n) in StatusGroup::CANONICAL.into_iter().zip(counts) {
            p.readers.set(g, n);
        }
        p.citations = cites;
        p.tags = tags.into_iter().collect();
        p.journal = format!("J{journal}");
        p
    }
}

fn arb_corpus(max: usize) -> impl Strategy<Value = Vec<PaperRecord>> {
    (1..=max).prop_flat_map(|n| (0..n).map(arb_paper).collect::<Vec<_>>())
}

fn rational(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn group_count_is_additive_over_disjoint_sets(p in arb_paper(0), split in any::<u16>()) {
        let a = StatusSet::ALL.iter().filter(|g| split & (1 << g.index().unwrap()) != 0);
        let a: StatusSet = a.collect();
        let b: StatusSet = StatusSet::ALL.iter().filter(|g| !a.contains(*g)).collect();
        let count = |s: StatusSet| {
            if s.is_empty() { 0 } else { group_count(&p, &TargetGroup::new("x", CountChannel::Readers(s))) }
        };
        prop_assert_eq!(count(a) + count(b), count(StatusSet::ALL));
        prop_assert_eq!(count(StatusSet::ALL), p.readers.total());
    }

    #[test]
    fn doi_normalization_is_idempotent(raw in "[ ]{0,2}(https://doi.org/)?(10\\.[0-9]{4}/[A-Za-z0-9.]{1,12}|[A-Za-z:0-9]{1,10})[ ]{0,2}") {
        let once = normalize_doi(&raw).unwrap();
        let twice = normalize_doi(&once.value).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn baseline_sums_are_exact(recs in arb_corpus(40)) {
        let g = bs();
        let t = compute_baselines(&recs, &g, KeyScope::default()).unwrap();
        for (key, e) in t.entries() {
            let members: Vec<_> = recs.iter().filter(|r| {
                r.categories.contains(&key.category)
                    && Some(r.doc_type) == key.doc_type
                    && Some(r.year) == key.year
            }).collect();
            prop_assert_eq!(e.n_papers, members.len() as u64);
            let sum: u64 = members.iter().map(|r| group_count(r, &g)).sum();
            prop_assert_eq!(e.total, sum);
            prop_assert_eq!(e.eligible(), rational(e.total, e.n_papers) >= rational(1, 1));
        }
    }

    #[test]
    fn baselines_ignore_corpus_order(recs in arb_corpus(40), seed in any::<u64>()) {
        let mut shuffled = recs.clone();
        let n = shuffled.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let g = bs();
        prop_assert_eq!(
            compute_baselines(&recs, &g, KeyScope::default()).unwrap(),
            compute_baselines(&shuffled, &g, KeyScope::default()).unwrap()
        );
    }

    #[test]
    fn merging_disjoint_corpora(recs in arb_corpus(40), cut in any::<prop::sample::Index>()) {
        let g = bs();
        let k = cut.index(recs.len() + 1).max(1).min(recs.len());
        let (left, right) = recs.split_at(k);
        let whole = compute_baselines(&recs, &g, KeyScope::default()).unwrap();
        let l = compute_baselines(left, &g, KeyScope::default()).unwrap();
        let merged = if right.is_empty() {
            l
        } else {
            l.merge(&compute_baselines(right, &g, KeyScope::default()).unwrap()).unwrap()
        };
        prop_assert_eq!(whole, merged);
    }

    #[test]
    fn mean_one_exact_in_rationals(recs in arb_corpus(60)) {
        let g = bs();
        let t = compute_baselines(&recs, &g, KeyScope::default()).unwrap();
        let run = score_corpus(&recs, &t, CountingMode::Multiplicative);
        if !run.rows.is_empty() {
            // exact check: sum of R * n / total over eligible memberships
            let mut sum = rational(0, 1);
            let mut rows = 0u64;
            for r in &recs {
                for c in &r.categories {
                    let e = t.lookup(c, r.doc_type, r.year).unwrap();
                    if e.eligible() {
                        sum += rational(group_count(r, &g) * e.n_papers, e.total);
                        rows += 1;
                    }
                }
            }
            prop_assert_eq!(rows as usize, run.rows.len());
            prop_assert_eq!(sum / rational(rows, 1), rational(1, 1));
            prop_assert!((run.mean_nrs().unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn monotone_under_frozen_baselines(recs in arb_corpus(30), bump in 1u32..5) {
        let g = bs();
        let t = compute_baselines(&recs, &g, KeyScope::default()).unwrap();
        let before = score_paper(&recs[0], &t, CountingMode::Multiplicative);
        let mut p = recs[0].clone();
        p.readers.add(StatusGroup::StudentBachelor, bump);
        let after = score_paper(&p, &t, CountingMode::Multiplicative);
        prop_assert_eq!(before.rows.len(), after.rows.len());
        for (a, b) in before.rows.iter().zip(&after.rows) {
            prop_assert!(b.nrs > a.nrs);
        }
    }

    #[test]
    fn fractional_weights_sum_to_one_per_paper(recs in arb_corpus(40)) {
        let t = compute_baselines(&recs, &bs(), KeyScope::default()).unwrap();
        let run = score_corpus(&recs, &t, CountingMode::Fractional);
        let mut per_paper: BTreeMap<&str, f64> = BTreeMap::new();
        for r in &run.rows {
            prop_assert!(r.nrs >= 0.0 && r.weight > 0.0);
            *per_paper.entry(&r.paper_id).or_default() += r.weight;
        }
        for w in per_paper.values() {
            prop_assert!((w - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn aggregation_is_order_independent(recs in arb_corpus(40), seed in any::<u64>()) {
        let t = compute_baselines(&recs, &bs(), KeyScope::default()).unwrap();
        let run = score_corpus(&recs, &t, CountingMode::Multiplicative);
        let idx = entity_index(&recs, &EntityDim::Journal);
        let mut rows = run.rows.clone();
        let mut s = seed;
        for i in (1..rows.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            rows.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(aggregate(&run.rows, &idx, 1, "BS"), aggregate(&rows, &idx, 1, "BS"));
    }

    #[test]
    fn aggregation_partition_and_threshold(recs in arb_corpus(40), min in 1u64..6) {
        let t = compute_baselines(&recs, &bs(), KeyScope::default()).unwrap();
        let run = score_corpus(&recs, &t, CountingMode::Multiplicative);
        let mut idx = entity_index(&recs, &EntityDim::Journal);
        // leave one paper unmapped
        idx.remove(&recs[0].id);
        let all = aggregate(&run.rows, &idx, 1, "BS");
        let rows_in_entities: u64 = all.rows.iter().map(|r| r.n_multiplicative).sum();
        prop_assert_eq!(rows_in_entities + all.unmapped_rows, run.rows.len() as u64);
        for r in &all.rows {
            prop_assert!(r.n_distinct <= r.n_multiplicative);
            prop_assert!(r.mnrs >= 0.0);
        }
        let strict = aggregate(&run.rows, &idx, min, "BS");
        for r in &strict.rows {
            let same = all.rows.iter().find(|a| a.entity == r.entity).unwrap();
            prop_assert_eq!(same, r);
        }
        prop_assert!(strict.rows.len() <= all.rows.len());
    }

    #[test]
    fn single_entity_mean_is_one(recs in arb_corpus(60)) {
        let t = compute_baselines(&recs, &bs(), KeyScope::default()).unwrap();
        let run = score_corpus(&recs, &t, CountingMode::Multiplicative);
        let idx: BTreeMap<String, Vec<String>> =
            recs.iter().map(|r| (r.id.clone(), vec!["world".to_string()])).collect();
        let agg = aggregate(&run.rows, &idx, 1, "BS");
        if let Some(world) = agg.rows.first() {
            prop_assert!((world.mnrs - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn tag_total_is_weighted_mean_of_partitions(recs in arb_corpus(40)) {
        let tables = [
            compute_baselines(&recs, &bs(), KeyScope::default()).unwrap(),
            compute_baselines(&recs, &TargetGroup::citations(), KeyScope::default()).unwrap(),
        ];
        let c = compare_by_tag(&recs, "T", &tables, CountingMode::Multiplicative);
        prop_assert_eq!(c.tagged.n + c.untagged.n, c.total.n);
        for g in 0..2 {
            let (wt, wu) = (c.tagged.weights[g], c.untagged.weights[g]);
            if let Some(total) = c.total.means[g] {
                let expect = (c.tagged.means[g].unwrap_or(0.0) * wt
                    + c.untagged.means[g].unwrap_or(0.0) * wu) / (wt + wu);
                prop_assert!((total - expect).abs() < 1e-9);
            }
            if let (Some(t), Some(u), Some(d)) = (c.tagged.means[g], c.untagged.means[g], c.difference[g]) {
                prop_assert_eq!(d, t - u);
            }
        }
        // scoring is unaffected by the comparison
        let again = score_corpus(&recs, &tables[0], CountingMode::Multiplicative);
        prop_assert_eq!(again, score_corpus(&recs, &tables[0], CountingMode::Multiplicative));
    }
}
