//! Joint genotype probabilities for unrelated persons at a single forensic locus under
//! Hardy-Weinberg, Balding-Nichols substructure, uncertain allele frequencies (a Dirichlet
//! posterior built from an allele database), and the exact combination of the last two.
//!
//! The [`approx`] module holds the closed-form theta transformations that approximate the
//! combined model, and [`analysis`] compares every model against the exact one over all
//! joint genotypes of one or two persons.

pub mod analysis;
pub mod approx;
pub mod cli;
pub mod engine;
pub mod error;
pub mod genotype;
pub mod ingest;
pub mod stirling;

pub use approx::{prob_model, theta_gm, theta_tilde, ApproxVariant};
pub use engine::{
    prob_combined_exact, prob_hw, prob_theta, prob_uaf, rising_factorial_log, Probability, ThetaConfig,
};
pub use error::{Error, Result};
pub use genotype::{summarize, AlleleCountSummary, Genotype, JointGenotype};
pub use ingest::{apply_prior, parse_database, rescale_frequencies, DatabaseCounts, DirichletSpec, PriorSpec};
pub use stirling::{stirling_table, StirlingTable};
