//! Joint genotype probabilities for unrelated persons at one locus.
//!
//! Four models are provided:
//!
//! * [`prob_hw`]: Hardy-Weinberg with known frequencies, `2^h prod_k p_k^{a_k}`.
//! * [`prob_theta`]: Balding-Nichols substructure correction with known frequencies,
//!   `2^h prod_k prod_{j<a_k} (j + phi p_k) / prod_{j<2I} (j + phi)`, `phi = (1 - theta) / theta`.
//! * [`prob_uaf`]: frequencies averaged over a Dirichlet posterior (Dirichlet-multinomial).
//! * [`prob_combined_exact`]: the substructure-corrected probability averaged over the
//!   Dirichlet posterior. Each `prod_{j<a} (j + phi p)` is expanded as `sum_j c(j, a) (phi p)^j`
//!   and the Dirichlet moments `E[prod p_k^{j_k}] = prod_k s_k^(j_k) / s^(J)` (rising factorials)
//!   are taken term by term.
//!
//! Everything is accumulated in log space. All terms in the expansion are positive so a
//! log-sum-exp reduction loses nothing to cancellation.

use std::f64::consts::LN_2;

use crate::approx;
use crate::error::{Error, Result};
use crate::genotype::{summarize, AlleleCountSummary, JointGenotype};
use crate::ingest::DirichletSpec;
use crate::stirling::shared_table;

/// Tolerance on the sum of a frequency vector passed to the known-frequency models.
pub const FREQ_SUM_TOLERANCE: f64 = 1e-9;

/// A probability held by its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability {
    ln: f64,
}

impl Probability {
    pub const ZERO: Probability = Probability { ln: f64::NEG_INFINITY };
    pub const ONE: Probability = Probability { ln: 0.0 };

    pub fn from_ln(ln: f64) -> Self {
        Self { ln }
    }

    pub fn value(&self) -> f64 {
        self.ln.exp()
    }

    pub fn ln(&self) -> f64 {
        self.ln
    }

    pub fn is_zero(&self) -> bool {
        self.ln == f64::NEG_INFINITY
    }
}

/// Substructure parameter together with the size of the allele database.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaConfig {
    theta: f64,
    db_size: f64,
}

impl ThetaConfig {
    /// `db_size` may be `f64::INFINITY` for exactly known frequencies.
    pub fn new(theta: f64, db_size: f64) -> Result<Self> {
        check_theta(theta)?;
        if db_size.is_nan() || db_size <= 0.0 {
            return Err(Error::validation(format!("database size must be positive, got {db_size}")));
        }
        Ok(Self { theta, db_size })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn db_size(&self) -> f64 {
        self.db_size
    }

    /// `(1 - theta) / theta`, undefined at `theta = 0`.
    pub fn phi(&self) -> Option<f64> {
        phi(self.theta)
    }

    pub fn theta_tilde(&self) -> f64 {
        approx::theta_tilde(self.theta, self.db_size)
    }

    pub fn theta_gm(&self) -> Result<f64> {
        approx::theta_gm(self.theta, self.db_size)
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if (0.0..1.0).contains(&theta) {
        Ok(())
    } else {
        Err(Error::validation(format!("theta must lie in [0, 1), got {theta}")))
    }
}

fn phi(theta: f64) -> Option<f64> {
    (theta > 0.0).then(|| (1.0 - theta) / theta)
}

fn check_freqs(freqs: &[f64], g: &JointGenotype) -> Result<AlleleCountSummary> {
    let sum: f64 = freqs.iter().sum();
    if (sum - 1.0).abs() > FREQ_SUM_TOLERANCE || freqs.iter().any(|p| p.is_nan() || *p < 0.0) {
        return Err(Error::validation(format!(
            "allele frequencies must be non-negative and sum to 1 (sum = {sum})"
        )));
    }
    summarize(g, freqs.len())
}

/// `ln(x (x+1) ... (x+n-1))`.
pub fn rising_factorial_log(x: f64, n: u32) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::validation(format!("rising factorial needs x > 0, got {x}")));
    }
    Ok(ln_rising(x, n))
}

fn ln_rising(x: f64, n: u32) -> f64 {
    (0..n).map(|j| (x + j as f64).ln()).sum()
}

/// `ln sum_i exp(x_i)` for finite or `-inf` inputs.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

pub fn prob_hw(g: &JointGenotype, freqs: &[f64]) -> Result<Probability> {
    let summary = check_freqs(freqs, g)?;
    Ok(hw_from_summary(&summary, freqs))
}

fn hw_from_summary(summary: &AlleleCountSummary, freqs: &[f64]) -> Probability {
    let mut ln = summary.het_count as f64 * LN_2;
    for (k, a) in summary.present() {
        ln += a as f64 * freqs[k].ln();
    }
    Probability::from_ln(ln)
}

pub fn prob_theta(g: &JointGenotype, freqs: &[f64], theta: f64) -> Result<Probability> {
    check_theta(theta)?;
    let summary = check_freqs(freqs, g)?;
    Ok(theta_from_summary(&summary, freqs, theta))
}

pub(crate) fn theta_from_summary(summary: &AlleleCountSummary, freqs: &[f64], theta: f64) -> Probability {
    let Some(phi) = phi(theta) else {
        return hw_from_summary(summary, freqs);
    };
    let mut ln = summary.het_count as f64 * LN_2;
    for (k, a) in summary.present() {
        let x = phi * freqs[k];
        ln += (0..a).map(|j| (j as f64 + x).ln()).sum::<f64>();
    }
    ln -= ln_rising(phi, summary.total_alleles);
    Probability::from_ln(ln)
}

pub fn prob_uaf(g: &JointGenotype, spec: &DirichletSpec) -> Result<Probability> {
    let summary = summarize(g, spec.num_alleles())?;
    Ok(uaf_from_summary(&summary, spec))
}

fn uaf_from_summary(summary: &AlleleCountSummary, spec: &DirichletSpec) -> Probability {
    let s = spec.pseudo_counts();
    let mut ln = summary.het_count as f64 * LN_2;
    for (k, a) in summary.present() {
        ln += ln_rising(s[k], a);
    }
    ln -= ln_rising(spec.total(), summary.total_alleles);
    Probability::from_ln(ln)
}

pub fn prob_combined_exact(g: &JointGenotype, spec: &DirichletSpec, theta: f64) -> Result<Probability> {
    check_theta(theta)?;
    let summary = summarize(g, spec.num_alleles())?;
    let Some(phi) = phi(theta) else {
        return Ok(uaf_from_summary(&summary, spec));
    };
    let table = shared_table(summary.max_multiplicity() as usize)?;
    let s = spec.pseudo_counts();
    let ln_phi = phi.ln();

    // per present allele k: ln c(j, a_k) + j ln phi + ln s_k^(j) for j = 1..=a_k
    let parts: Vec<Vec<f64>> = summary
        .present()
        .map(|(k, a)| {
            let mut rising = 0.0;
            (1..=a)
                .map(|j| {
                    rising += (s[k] + (j - 1) as f64).ln();
                    table.ln(j as usize, a as usize) + j as f64 * ln_phi + rising
                })
                .collect()
        })
        .collect();

    let total_alleles = summary.total_alleles as usize;
    let mut ln_total_rising = Vec::with_capacity(total_alleles + 1);
    let mut acc = 0.0;
    ln_total_rising.push(acc);
    for j in 0..total_alleles {
        acc += (spec.total() + j as f64).ln();
        ln_total_rising.push(acc);
    }

    let n_terms: usize = parts.iter().map(Vec::len).product();
    let mut terms = Vec::with_capacity(n_terms);
    // odometer over (j_1, ..., j_m) with digit i in 0..parts[i].len() standing for j = digit + 1
    let mut digits = vec![0usize; parts.len()];
    loop {
        let mut ln = 0.0;
        let mut big_j = 0;
        for (part, &d) in parts.iter().zip(&digits) {
            ln += part[d];
            big_j += d + 1;
        }
        terms.push(ln - ln_total_rising[big_j]);

        let mut i = 0;
        while i < digits.len() {
            digits[i] += 1;
            if digits[i] < parts[i].len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == digits.len() {
            break;
        }
    }

    let ln = summary.het_count as f64 * LN_2 + log_sum_exp(&terms) - ln_rising(phi, summary.total_alleles);
    Ok(Probability::from_ln(ln))
}
