use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::engine::{check_theta, theta_from_summary};
use crate::error::{Error, Result};
use crate::genotype::{summarize, JointGenotype};
use crate::ingest::DirichletSpec;

pub const MIN_SAMPLES: u64 = 1_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl McEstimate {
    pub fn z_score(&self, exact: f64) -> f64 {
        (self.estimate - exact) / self.std_error
    }
}

/// Monte-Carlo estimate of the combined model: the substructure-corrected probability of `g`
/// averaged over frequency vectors drawn from the Dirichlet posterior.
///
/// Draws use ChaCha8 seeded with `seed` and normalized `Gamma(s_k, 1)` variates, so a seed
/// fixes the result on every platform.
pub fn mc_oracle(
    g: &JointGenotype,
    spec: &DirichletSpec,
    theta: f64,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_theta(theta)?;
    if samples < MIN_SAMPLES {
        return Err(Error::validation(format!(
            "Monte-Carlo oracle needs at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let summary = summarize(g, spec.num_alleles())?;
    let gammas = spec
        .pseudo_counts()
        .iter()
        .map(|&s| Gamma::new(s, 1.0).map_err(|e| Error::validation(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut freqs = vec![0.0; gammas.len()];

    // Welford
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for n in 1..=samples {
        let mut total = 0.0;
        for (f, gamma) in freqs.iter_mut().zip(&gammas) {
            *f = gamma.sample(&mut rng);
            total += *f;
        }
        for f in freqs.iter_mut() {
            *f /= total;
        }
        let x = theta_from_summary(&summary, &freqs, theta).value();
        let delta = x - mean;
        mean += delta / n as f64;
        m2 += delta * (x - mean);
    }
    let variance = m2 / (samples - 1) as f64;
    Ok(McEstimate {
        estimate: mean,
        std_error: (variance / samples as f64).sqrt(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::vwa;
    use super::*;
    use crate::engine::prob_uaf;

    #[test]
    fn deterministic_per_seed() {
        let spec = vwa();
        let g = JointGenotype::parse("14/16", spec.alleles()).unwrap();
        let a = mc_oracle(&g, &spec, 0.02, 5_000, 7).unwrap();
        let b = mc_oracle(&g, &spec, 0.02, 5_000, 7).unwrap();
        assert_eq!(a, b);
        let c = mc_oracle(&g, &spec, 0.02, 5_000, 8).unwrap();
        assert_ne!(a.estimate, c.estimate);
    }

    #[test]
    fn theta_zero_matches_uaf() {
        let spec = vwa();
        let g = JointGenotype::parse("14/16", spec.alleles()).unwrap();
        let est = mc_oracle(&g, &spec, 0.0, 1_000_000, 11).unwrap();
        let exact = prob_uaf(&g, &spec).unwrap().value();
        assert!(est.z_score(exact).abs() < 3.0, "{est:?} vs {exact}");
    }

    #[test]
    fn rejects_small_sample_counts() {
        let spec = vwa();
        let g = JointGenotype::parse("14/16", spec.alleles()).unwrap();
        assert!(mc_oracle(&g, &spec, 0.02, 999, 1).is_err());
        assert!(mc_oracle(&g, &spec, 1.0, 1_000, 1).is_err());
    }
}
