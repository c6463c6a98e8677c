use std::time::Duration;

use bchforge_core::catalog::{self, CatalogRecord, CheckStatus, MergeOutcome};
use bchforge_core::{min_distance, BchCode, Distance, Method, SearchConfig};

fn measured(q: u64, m: u32, h: u64, w_max: u64) -> CatalogRecord {
    let code = BchCode::build(q, m, 3, h).unwrap();
    let report = min_distance(&code, w_max, Method::MitmSyndrome, &SearchConfig::default()).unwrap();
    CatalogRecord::from_report(&report, 0)
}

#[test]
fn best_known_examples_round_trip_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("codes.jsonl");
    let recs = [measured(2, 5, 15, 10), measured(4, 2, 7, 7), measured(8, 2, 31, 5)];
    let ds: Vec<_> = recs.iter().map(|r| (r.n, r.k, r.d)).collect();
    assert_eq!(
        ds,
        vec![(33, 13, Distance::Exact(10)), (17, 9, Distance::Exact(7)), (65, 57, Distance::Exact(5))]
    );
    for r in &recs {
        assert_eq!(catalog::add(&path, r.clone()).unwrap(), MergeOutcome::Inserted);
    }
    let back = catalog::read(&path).unwrap();
    let mut sorted = recs.to_vec();
    sorted.sort_by_key(|r| r.key());
    assert_eq!(back, sorted);

    let results = catalog::check(&back, true, Duration::from_secs(600), &SearchConfig::default());
    assert!(results.iter().all(|r| r.status == CheckStatus::Ok), "{results:?}");
}

#[test]
fn weaker_claims_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("codes.jsonl");
    let partial = measured(2, 5, 15, 6);
    assert_eq!(partial.d, Distance::Above(6));
    catalog::add(&path, partial.clone()).unwrap();
    assert_eq!(catalog::add(&path, measured(2, 5, 15, 10)).unwrap(), MergeOutcome::Replaced);
    assert!(catalog::add(&path, partial).is_err());
    assert_eq!(catalog::read(&path).unwrap()[0].d, Distance::Exact(10));
}
