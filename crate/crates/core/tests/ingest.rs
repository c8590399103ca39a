mod common;

use common::{vwa, VWA_CSV};
use geno_dirichlet::{apply_prior, parse_database, rescale_frequencies, DatabaseCounts, DirichletSpec, PriorSpec};
use proptest::prelude::*;

const TABLE_1: [u64; 9] = [1, 57, 67, 121, 170, 121, 63, 3, 1];

#[test]
fn vwa_counts_total() {
    let db = parse_database(VWA_CSV, None).unwrap();
    assert_eq!(db.counts, TABLE_1);
    assert_eq!(db.total, 604);
}

#[test]
fn five_decimal_frequencies_rescale_to_counts() {
    // normalized frequencies as a published table would print them
    let freqs: Vec<f64> = TABLE_1
        .iter()
        .map(|&c| (c as f64 / 604.0 * 1e5).round() / 1e5)
        .collect();
    let mut text = String::from("allele,frequency\n");
    for (a, f) in (13..=21).zip(&freqs) {
        text.push_str(&format!("{a},{f}\n"));
    }
    let db = parse_database(&text, Some(604)).unwrap();
    assert_eq!(db.counts, TABLE_1);
    assert_eq!(rescale_frequencies(&freqs, 604).unwrap(), TABLE_1);
}

#[test]
fn rounding_mismatch_uses_actual_sum() {
    let db = parse_database("allele,frequency\na,0.3333333\nb,0.3333333\nc,0.3333334\n", Some(10)).unwrap();
    assert_eq!(db.counts, vec![3, 3, 3]);
    assert_eq!(db.total, 9);
    let spec = apply_prior(&db, &PriorSpec::Zero).unwrap();
    assert_eq!(spec.total(), 9.0);
}

#[test]
fn spec_csv_round_trip_vwa() {
    let spec = vwa();
    let back = DirichletSpec::from_csv(&spec.to_csv()).unwrap();
    assert_eq!(back, spec);
}

fn prior_strategy() -> impl Strategy<Value = PriorSpec> {
    prop_oneof![Just(PriorSpec::Zero), Just(PriorSpec::OneOverK), Just(PriorSpec::One)]
}

proptest! {
    #[test]
    fn means_sum_to_one(counts in prop::collection::vec(1u64..10_000, 1..30), prior in prior_strategy()) {
        let labels = (0..counts.len()).map(|i| format!("a{i}")).collect();
        let db = DatabaseCounts::new("x", labels, counts).unwrap();
        let spec = apply_prior(&db, &prior).unwrap();
        let sum: f64 = spec.means().iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spec_csv_round_trip(counts in prop::collection::vec(0u64..10_000, 1..20), prior in prior_strategy()) {
        let labels = (0..counts.len()).map(|i| format!("{}.{}", 9 + i, i % 4)).collect();
        let db = DatabaseCounts::new("x", labels, counts).unwrap();
        if let Ok(spec) = apply_prior(&db, &prior) {
            let back = DirichletSpec::from_csv(&spec.to_csv()).unwrap();
            prop_assert_eq!(back.pseudo_counts(), spec.pseudo_counts());
        } else {
            prop_assert!(prior == PriorSpec::Zero && db.counts.contains(&0));
        }
    }
}
