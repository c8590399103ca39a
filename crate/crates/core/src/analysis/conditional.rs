use rayon::prelude::*;

use crate::approx::{prob_model, ApproxVariant};
use crate::engine::{check_theta, log_sum_exp};
use crate::error::Result;
use crate::genotype::JointGenotype;
use crate::ingest::DirichletSpec;

use super::{check_residual, enumerate_joint, DistEntry, GenotypeDistribution};

/// Distribution of the genotypes of `unknowns` further persons given the profiled `known` ones:
/// `P(u | known) = P(known, u) / sum_u' P(known, u')`.
///
/// Every known profile stays in the conditioning set, including profiles of persons
/// who are not contributors under the hypothesis being evaluated.
pub fn conditional_unknowns(
    known: &JointGenotype,
    spec: &DirichletSpec,
    theta: f64,
    variant: ApproxVariant,
    unknowns: usize,
    cap: u64,
) -> Result<GenotypeDistribution> {
    check_theta(theta)?;
    let candidates = enumerate_joint(spec.num_alleles(), unknowns, cap)?;
    let joint_ln = candidates
        .par_iter()
        .map(|u| prob_model(&known.join(u), spec, theta, variant).map(|p| p.ln()))
        .collect::<Result<Vec<f64>>>()?;
    let norm = log_sum_exp(&joint_ln);
    let entries: Vec<DistEntry> = candidates
        .into_iter()
        .zip(joint_ln)
        .map(|(genotype, ln)| {
            let ln_probability = ln - norm;
            DistEntry {
                genotype,
                probability: ln_probability.exp(),
                ln_probability,
            }
        })
        .collect();
    let sum: f64 = entries.iter().map(|e| e.probability).sum();
    let residual = check_residual(sum, "conditional distribution")?;
    Ok(GenotypeDistribution {
        variant,
        theta,
        total: spec.total(),
        persons: unknowns,
        alleles: spec.alleles().to_vec(),
        entries,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::vwa;
    use super::super::{distribution, DEFAULT_CAP};
    use super::*;

    fn max_abs_diff(a: &GenotypeDistribution, b: &GenotypeDistribution) -> f64 {
        a.probabilities()
            .zip(b.probabilities())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn hw_conditioning_is_void() {
        let spec = vwa();
        let known = JointGenotype::parse("14/16,16/17,15/15", spec.alleles()).unwrap();
        let cond = conditional_unknowns(&known, &spec, 0.02, ApproxVariant::Hw, 1, DEFAULT_CAP).unwrap();
        let plain = distribution(&spec, 0.02, ApproxVariant::Hw, 1, DEFAULT_CAP).unwrap();
        assert!(max_abs_diff(&cond, &plain) < 1e-12);
    }

    #[test]
    fn seen_allele_more_likely() {
        let spec = vwa();
        let known = JointGenotype::parse("17/17", spec.alleles()).unwrap();
        let cond = conditional_unknowns(&known, &spec, 0.02, ApproxVariant::ThetaTilde, 1, DEFAULT_CAP).unwrap();
        let plain = distribution(&spec, 0.02, ApproxVariant::ThetaTilde, 1, DEFAULT_CAP).unwrap();
        let idx = cond.entries.iter().position(|e| e.genotype == known).unwrap();
        assert!(cond.entries[idx].probability > plain.entries[idx].probability);
    }

    #[test]
    fn dropping_a_known_profile_matters() {
        let spec = vwa();
        let known = JointGenotype::parse("14/16,16/17,15/15", spec.alleles()).unwrap();
        let full = conditional_unknowns(&known, &spec, 0.02, ApproxVariant::ThetaTilde, 1, DEFAULT_CAP).unwrap();
        let fewer = conditional_unknowns(&known.without(2).unwrap(), &spec, 0.02, ApproxVariant::ThetaTilde, 1, DEFAULT_CAP).unwrap();
        assert!(max_abs_diff(&full, &fewer) > 1e-12);
        assert!(full.residual.abs() < 1e-10);
    }
}
