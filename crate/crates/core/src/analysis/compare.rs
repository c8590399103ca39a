use std::io::Write;
use std::str::FromStr;

use crate::approx::ApproxVariant;
use crate::error::{Error, Result};

use super::GenotypeDistribution;

/// Argument order of the KL divergence reported by [`compare`].
///
/// `ExactFirst` computes `D(exact || approx)`; this is the order that reproduces the
/// published single- and two-person divergences for the vWA study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KlDirection {
    #[default]
    ExactFirst,
    ApproxFirst,
}

impl FromStr for KlDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-first" => Ok(KlDirection::ExactFirst),
            "approx-first" => Ok(KlDirection::ApproxFirst),
            other => Err(Error::validation(format!(
                "unknown KL direction '{other}', expected exact-first or approx-first"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub variant: ApproxVariant,
    pub reference: ApproxVariant,
    /// approx / exact, in enumeration order.
    pub ratios: Vec<f64>,
    pub min: f64,
    pub max: f64,
    /// `(ratio, cumulative fraction)` at each distinct ratio value.
    pub ecdf: Vec<(f64, f64)>,
    pub kl: f64,
    pub kl_direction: KlDirection,
    /// `(exact probability, ratio)`.
    pub scatter: Vec<(f64, f64)>,
    /// Entries whose ratio involved a zero probability.
    pub flagged: Vec<usize>,
    /// Set when all ratios sit on one side of 1.
    pub one_sided: bool,
}

impl ComparisonReport {
    /// Writes `genotype,prob_exact,prob_approx,ratio` rows.
    pub fn write_ratios_csv<W: Write>(
        &self,
        approx: &GenotypeDistribution,
        exact: &GenotypeDistribution,
        out: W,
    ) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["genotype", "prob_exact", "prob_approx", "ratio"])?;
        for ((a, e), r) in approx.entries.iter().zip(&exact.entries).zip(&self.ratios) {
            w.write_record([
                e.genotype.display(&exact.alleles).to_string(),
                e.probability.to_string(),
                a.probability.to_string(),
                r.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_ecdf_csv<W: Write>(&self, out: W) -> Result<()> {
        write_pairs(out, ["ratio", "cumfrac"], &self.ecdf)
    }

    pub fn write_scatter_csv<W: Write>(&self, out: W) -> Result<()> {
        write_pairs(out, ["prob_exact", "ratio"], &self.scatter)
    }

    /// `metric,value` rows: min, max, kl, residual.
    pub fn write_summary_csv<W: Write>(&self, residual: f64, out: W) -> Result<()> {
        let rows = [
            ("min", self.min),
            ("max", self.max),
            ("kl", self.kl),
            ("residual", residual),
        ];
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["metric", "value"])?;
        for (k, v) in rows {
            w.write_record([k.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn write_pairs<W: Write>(out: W, header: [&str; 2], pairs: &[(f64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for (a, b) in pairs {
        w.write_record([a.to_string(), b.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Unweighted empirical CDF: one step per distinct value, ending at 1.
pub fn ecdf(values: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, v) in sorted.iter().enumerate() {
        let frac = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == *v => last.1 = frac,
            _ => out.push((*v, frac)),
        }
    }
    out
}

/// `D(p || q)` in nats over a shared enumeration.
///
/// Evaluated as `sum p (q/p - 1 - ln(q/p))`, which equals `sum p ln(p/q)` for normalized
/// inputs and is non-negative term by term, so near-identical distributions do not
/// produce rounding-level negative divergences. Returns `+inf` when `q` vanishes where
/// `p` does not.
pub fn kl_divergence(p: &GenotypeDistribution, q: &GenotypeDistribution) -> Result<f64> {
    if !p.same_enumeration(q) {
        return Err(Error::validation("KL divergence needs distributions over the same enumeration"));
    }
    let mut kl = 0.0;
    for (a, b) in p.entries.iter().zip(&q.entries) {
        if a.probability == 0.0 {
            continue;
        }
        if b.probability == 0.0 {
            return Ok(f64::INFINITY);
        }
        let d = b.ln_probability - a.ln_probability;
        kl += a.probability * (d.exp_m1() - d);
    }
    Ok(kl)
}

/// Ratios, ECDF, scatter data and KL divergence of `approx` against `exact`.
pub fn compare(
    approx: &GenotypeDistribution,
    exact: &GenotypeDistribution,
    direction: KlDirection,
) -> Result<ComparisonReport> {
    if !approx.same_enumeration(exact) || approx.persons != exact.persons {
        return Err(Error::validation("compared distributions use different genotype enumerations"));
    }
    let mut flagged = Vec::new();
    let ratios: Vec<f64> = approx
        .entries
        .iter()
        .zip(&exact.entries)
        .enumerate()
        .map(|(i, (a, e))| match (a.probability == 0.0, e.probability == 0.0) {
            (false, false) => (a.ln_probability - e.ln_probability).exp(),
            (true, false) => {
                flagged.push(i);
                0.0
            }
            (false, true) => {
                flagged.push(i);
                f64::INFINITY
            }
            (true, true) => {
                flagged.push(i);
                1.0
            }
        })
        .collect();
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let kl = match direction {
        KlDirection::ExactFirst => kl_divergence(exact, approx)?,
        KlDirection::ApproxFirst => kl_divergence(approx, exact)?,
    };
    let scatter = exact
        .entries
        .iter()
        .zip(&ratios)
        .map(|(e, &r)| (e.probability, r))
        .collect();
    Ok(ComparisonReport {
        variant: approx.variant,
        reference: exact.variant,
        ecdf: ecdf(&ratios),
        ratios,
        min,
        max,
        kl,
        kl_direction: direction,
        scatter,
        flagged,
        one_sided: !(min <= 1.0 && 1.0 <= max),
    })
}
