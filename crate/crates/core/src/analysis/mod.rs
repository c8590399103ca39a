//! Exhaustive joint-genotype studies: full model distributions, comparisons against
//! the exact combined model, conditional distributions of unknown persons, and a
//! Monte-Carlo check of the exact model.

mod compare;
mod conditional;
mod oracle;

use std::io::Write;

use rayon::prelude::*;

use crate::approx::{prob_model, ApproxVariant};
use crate::engine::check_theta;
use crate::error::{Error, Result};
use crate::genotype::{Genotype, JointGenotype};
use crate::ingest::DirichletSpec;

pub use compare::{compare, ecdf, kl_divergence, ComparisonReport, KlDirection};
pub use conditional::conditional_unknowns;
pub use oracle::{mc_oracle, McEstimate};

pub const DEFAULT_CAP: u64 = 10_000_000;

/// A distribution is rejected when its probabilities miss 1 by more than this.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct DistEntry {
    pub genotype: JointGenotype,
    pub probability: f64,
    pub ln_probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenotypeDistribution {
    pub variant: ApproxVariant,
    pub theta: f64,
    /// Pseudo-count total of the Dirichlet posterior used.
    pub total: f64,
    pub persons: usize,
    pub alleles: Vec<String>,
    pub entries: Vec<DistEntry>,
    /// `sum(p) - 1`.
    pub residual: f64,
}

impl GenotypeDistribution {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.probability)
    }

    /// Writes `genotype,probability,log_probability` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["genotype", "probability", "log_probability"])?;
        for e in &self.entries {
            w.write_record([
                e.genotype.display(&self.alleles).to_string(),
                e.probability.to_string(),
                e.ln_probability.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    fn same_enumeration(&self, other: &GenotypeDistribution) -> bool {
        self.alleles == other.alleles
            && self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.genotype == b.genotype)
    }
}

/// Number of ordered joint genotypes of `persons` people over `num_alleles` alleles.
pub fn joint_count(num_alleles: usize, persons: usize) -> u128 {
    let pairs = (num_alleles * (num_alleles + 1) / 2) as u128;
    (0..persons).try_fold(1u128, |acc, _| acc.checked_mul(pairs)).unwrap_or(u128::MAX)
}

/// All ordered joint genotypes, lexicographic in allele indices with person 1 most significant.
pub fn enumerate_joint(num_alleles: usize, persons: usize, cap: u64) -> Result<Vec<JointGenotype>> {
    if num_alleles == 0 || persons == 0 {
        return Err(Error::validation("enumeration needs at least one allele and one person"));
    }
    let count = joint_count(num_alleles, persons);
    if count > cap as u128 {
        return Err(Error::CapExceeded { count, cap });
    }
    let pairs: Vec<Genotype> = (0..num_alleles)
        .flat_map(|a| (a..num_alleles).map(move |b| Genotype::new(a, b)))
        .collect();

    let mut out = Vec::with_capacity(count as usize);
    let mut digits = vec![0usize; persons];
    loop {
        let persons_vec = digits.iter().map(|&d| pairs[d]).collect();
        out.push(JointGenotype::new(persons_vec)?);
        let mut i = persons;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < pairs.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn check_residual(sum: f64, what: &str) -> Result<f64> {
    let residual = sum - 1.0;
    if residual.is_nan() || residual.abs() > RESIDUAL_TOLERANCE {
        return Err(Error::Inconsistent(format!(
            "{what} sums to {sum} (residual {residual:e})"
        )));
    }
    Ok(residual)
}

/// Evaluates `variant` on every joint genotype of `persons` people.
pub fn distribution(
    spec: &DirichletSpec,
    theta: f64,
    variant: ApproxVariant,
    persons: usize,
    cap: u64,
) -> Result<GenotypeDistribution> {
    check_theta(theta)?;
    let genotypes = enumerate_joint(spec.num_alleles(), persons, cap)?;
    let entries = genotypes
        .into_par_iter()
        .map(|genotype| {
            let p = prob_model(&genotype, spec, theta, variant)?;
            Ok(DistEntry {
                genotype,
                probability: p.value(),
                ln_probability: p.ln(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sum: f64 = entries.iter().map(|e| e.probability).sum();
    let residual = check_residual(sum, &format!("{variant} distribution for {persons} person(s)"))?;
    Ok(GenotypeDistribution {
        variant,
        theta,
        total: spec.total(),
        persons,
        alleles: spec.alleles().to_vec(),
        entries,
        residual,
    })
}
