mod common;

use common::{geno, vwa, vwa_sub4};
use geno_dirichlet::analysis::{
    compare, conditional_unknowns, distribution, enumerate_joint, mc_oracle, ComparisonReport, KlDirection,
    DEFAULT_CAP,
};
use geno_dirichlet::{prob_combined_exact, ApproxVariant};

fn report(variant: ApproxVariant, persons: usize) -> ComparisonReport {
    let spec = vwa();
    let exact = distribution(&spec, 0.02, ApproxVariant::CombinedExact, persons, DEFAULT_CAP).unwrap();
    let approx = distribution(&spec, 0.02, variant, persons, DEFAULT_CAP).unwrap();
    compare(&approx, &exact, KlDirection::ExactFirst).unwrap()
}

#[test]
fn theta_tilde_ratios_are_one_for_single_person() {
    let r = report(ApproxVariant::ThetaTilde, 1);
    assert!(r.ratios.iter().all(|x| (x - 1.0).abs() < 1e-12));
    assert!(r.kl < 1e-20);
}

#[test]
fn two_person_kl_ordering() {
    let kl = |v| report(v, 2).kl;
    let tt = kl(ApproxVariant::ThetaTilde);
    let gm = kl(ApproxVariant::GreenMortera);
    let fst = kl(ApproxVariant::Fst);
    let uaf = kl(ApproxVariant::Uaf);
    assert!(tt < gm && gm < fst && fst < uaf, "{tt} {gm} {fst} {uaf}");
}

#[test]
fn ecdf_shape() {
    for variant in [ApproxVariant::Hw, ApproxVariant::GreenMortera] {
        let r = report(variant, 2);
        assert!(r.ecdf.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
        assert_eq!(r.ecdf.last().unwrap().1, 1.0);
        let mut distinct = r.ratios.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        assert_eq!(r.ecdf.len(), distinct.len());
        assert!(!r.one_sided);
        assert!(r.flagged.is_empty());
    }
}

#[test]
fn worst_hw_ratio_sits_on_a_rare_genotype() {
    let r = report(ApproxVariant::Hw, 2);
    let (worst, _) = r
        .scatter
        .iter()
        .max_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs()))
        .unwrap();
    let mut probs: Vec<f64> = r.scatter.iter().map(|p| p.0).collect();
    probs.sort_by(f64::total_cmp);
    let median = probs[probs.len() / 2];
    assert!(*worst < median);
}

#[test]
fn conditionals_normalize() {
    let spec = vwa();
    for known in ["17/17", "14/16,16/17", "13/21,14/16,15/15"] {
        let k = geno(known, &spec);
        for variant in ApproxVariant::ALL {
            let d = conditional_unknowns(&k, &spec, 0.02, variant, 1, DEFAULT_CAP).unwrap();
            assert!(d.residual.abs() < 1e-10);
        }
    }
    let small = vwa_sub4();
    let k = geno("13/14", &small);
    let d = conditional_unknowns(&k, &small, 0.02, ApproxVariant::CombinedExact, 2, DEFAULT_CAP).unwrap();
    assert_eq!(d.len(), 100);
    assert!(d.residual.abs() < 1e-10);
}

#[test]
fn oracle_agrees_for_two_persons() {
    let spec = vwa();
    let g = geno("14/16,16/17", &spec);
    let exact = prob_combined_exact(&g, &spec, 0.02).unwrap().value();
    let est = mc_oracle(&g, &spec, 0.02, 10_000_000, 2024).unwrap();
    assert!(est.z_score(exact).abs() < 3.0, "{est:?} vs {exact}");
}

#[test]
fn enumeration_has_no_duplicates() {
    let mut all = enumerate_joint(9, 2, DEFAULT_CAP).unwrap();
    let n = all.len();
    all.dedup();
    assert_eq!(all.len(), n);
}
