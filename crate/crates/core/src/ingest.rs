//! Allele databases and the Dirichlet posterior built from them.
//!
//! A database is a single-locus CSV with either integer counts (`allele,count`)
//! or normalized frequencies (`allele,frequency`). Frequency tables are turned
//! into counts by scaling with the database size and rounding, which is how
//! published frequency tables are usually converted back into allele counts.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use log::warn;

use crate::error::{Error, Result};

/// Tolerance on the sum of frequencies in a frequency table; published tables are
/// rounded to a few decimals and rarely sum to exactly 1.
pub const FREQUENCY_SUM_TOLERANCE: f64 = 1e-3;

/// Observed allele counts at one locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatabaseCounts {
    pub locus: String,
    pub alleles: Vec<String>,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl DatabaseCounts {
    pub fn new(locus: impl Into<String>, alleles: Vec<String>, counts: Vec<u64>) -> Result<Self> {
        if alleles.is_empty() {
            return Err(Error::validation("database has no alleles"));
        }
        if alleles.len() != counts.len() {
            return Err(Error::validation(format!(
                "{} allele labels but {} counts",
                alleles.len(),
                counts.len()
            )));
        }
        let mut seen = HashSet::new();
        for a in &alleles {
            if !seen.insert(a.as_str()) {
                return Err(Error::validation(format!("duplicate allele label '{a}'")));
            }
        }
        let total = counts.iter().sum();
        Ok(Self {
            locus: locus.into(),
            alleles,
            counts,
            total,
        })
    }

    pub fn num_alleles(&self) -> usize {
        self.alleles.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    Count,
    Frequency,
}

/// Parses a single-locus database.
///
/// `db_size` is required for `allele,frequency` tables and is the number of
/// alleles the frequencies are rescaled to. For `allele,count` tables it is
/// ignored.
pub fn parse_database(csv_text: &str, db_size: Option<u64>) -> Result<DatabaseCounts> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(csv_text.as_bytes());

    let mut records = reader.records();
    let header = match records.next() {
        Some(r) => r?,
        None => return Err(Error::Parse { line: 1, message: "empty database".into() }),
    };
    let column = match (header.get(0), header.get(1), header.len()) {
        (Some(a), Some(c), 2) if a.eq_ignore_ascii_case("allele") => {
            if c.eq_ignore_ascii_case("count") {
                Column::Count
            } else if c.eq_ignore_ascii_case("frequency") {
                Column::Frequency
            } else {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("unknown value column '{c}', expected 'count' or 'frequency'"),
                });
            }
        }
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: "expected header 'allele,count' or 'allele,frequency'".into(),
            })
        }
    };

    let mut alleles = Vec::new();
    let mut counts = Vec::new();
    let mut freqs = Vec::new();
    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let label = &record[0];
        if label.is_empty() {
            return Err(Error::Parse { line, message: "empty allele label".into() });
        }
        let value = &record[1];
        match column {
            Column::Count => {
                let n: i64 = value.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("count '{value}' is not an integer"),
                })?;
                if n < 0 {
                    return Err(Error::validation(format!(
                        "line {line}: negative count {n} for allele '{label}'"
                    )));
                }
                counts.push(n as u64);
            }
            Column::Frequency => {
                let f: f64 = value.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("frequency '{value}' is not a number"),
                })?;
                if !(0.0..=1.0).contains(&f) {
                    return Err(Error::validation(format!(
                        "line {line}: frequency {f} for allele '{label}' outside [0, 1]"
                    )));
                }
                freqs.push(f);
            }
        }
        alleles.push(label.to_string());
    }

    if column == Column::Frequency {
        let size = db_size.ok_or_else(|| {
            Error::validation("frequency databases need a database size (--db-size)")
        })?;
        counts = rescale_frequencies(&freqs, size)?;
        let total: u64 = counts.iter().sum();
        if total != size {
            warn!("rounded counts sum to {total}, not the nominal database size {size}; using {total}");
        }
    }
    DatabaseCounts::new("", alleles, counts)
}

/// Converts normalized frequencies to integer counts, rounding half away from zero.
pub fn rescale_frequencies(freqs: &[f64], db_size: u64) -> Result<Vec<u64>> {
    if db_size == 0 {
        return Err(Error::validation("database size must be at least 1"));
    }
    let sum: f64 = freqs.iter().sum();
    if (sum - 1.0).abs() > FREQUENCY_SUM_TOLERANCE {
        return Err(Error::validation(format!("frequencies sum to {sum}, not 1")));
    }
    freqs
        .iter()
        .map(|&f| {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::validation(format!("frequency {f} outside [0, 1]")));
            }
            Ok((f * db_size as f64).round() as u64)
        })
        .collect()
}

/// Dirichlet prior pseudo-counts added to the observed counts.
#[derive(Debug, Clone, PartialEq)]
pub enum PriorSpec {
    Zero,
    OneOverK,
    One,
    Explicit(Vec<f64>),
}

impl PriorSpec {
    fn values(&self, k: usize) -> Result<Vec<f64>> {
        match self {
            PriorSpec::Zero => Ok(vec![0.0; k]),
            PriorSpec::OneOverK => Ok(vec![1.0 / k as f64; k]),
            PriorSpec::One => Ok(vec![1.0; k]),
            PriorSpec::Explicit(v) => {
                if v.len() != k {
                    return Err(Error::validation(format!(
                        "explicit prior has {} values for {k} alleles",
                        v.len()
                    )));
                }
                if let Some(bad) = v.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
                    return Err(Error::validation(format!("prior value {bad} is not a non-negative number")));
                }
                Ok(v.clone())
            }
        }
    }
}

impl FromStr for PriorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(PriorSpec::Zero),
            "uniform-k" => Ok(PriorSpec::OneOverK),
            "one" => Ok(PriorSpec::One),
            other => Err(Error::validation(format!(
                "unknown prior '{other}', expected zero, uniform-k or one"
            ))),
        }
    }
}

/// Dirichlet distribution over the allele frequencies of one locus.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletSpec {
    alleles: Vec<String>,
    pseudo_counts: Vec<f64>,
    total: f64,
    means: Vec<f64>,
}

impl DirichletSpec {
    pub fn new(alleles: Vec<String>, pseudo_counts: Vec<f64>) -> Result<Self> {
        if alleles.is_empty() || alleles.len() != pseudo_counts.len() {
            return Err(Error::validation("allele labels and pseudo-counts must be non-empty and of equal length"));
        }
        if let Some(i) = pseudo_counts.iter().position(|&s| !(s.is_finite() && s > 0.0)) {
            return Err(Error::validation(format!(
                "Dirichlet parameter for allele '{}' is {}; all parameters must be positive \
                 (use a non-zero prior or drop the allele)",
                alleles[i], pseudo_counts[i]
            )));
        }
        let total: f64 = pseudo_counts.iter().sum();
        let means = pseudo_counts.iter().map(|s| s / total).collect();
        Ok(Self {
            alleles,
            pseudo_counts,
            total,
            means,
        })
    }

    pub fn alleles(&self) -> &[String] {
        &self.alleles
    }

    pub fn pseudo_counts(&self) -> &[f64] {
        &self.pseudo_counts
    }

    /// Sum of the pseudo-counts, `s`.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Posterior mean allele frequencies `s_k / s`.
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn num_alleles(&self) -> usize {
        self.alleles.len()
    }

    pub fn allele_index(&self, label: &str) -> Option<usize> {
        self.alleles.iter().position(|a| a == label)
    }

    /// Writes `allele,pseudo_count` CSV. Values use shortest round-trip formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("allele,pseudo_count\n");
        for (a, s) in self.alleles.iter().zip(&self.pseudo_counts) {
            writeln!(out, "{a},{s}").unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "allele" || &headers[1] != "pseudo_count" {
            return Err(Error::Parse { line: 1, message: "expected header 'allele,pseudo_count'".into() });
        }
        let mut alleles = Vec::new();
        let mut values = Vec::new();
        for record in reader.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let v: f64 = record[1].parse().map_err(|_| Error::Parse {
                line,
                message: format!("pseudo-count '{}' is not a number", &record[1]),
            })?;
            alleles.push(record[0].to_string());
            values.push(v);
        }
        Self::new(alleles, values)
    }
}

/// Combines observed counts with a prior: `s_k = alpha_k + m_k`.
pub fn apply_prior(db: &DatabaseCounts, prior: &PriorSpec) -> Result<DirichletSpec> {
    let alpha = prior.values(db.num_alleles())?;
    let pseudo = alpha
        .iter()
        .zip(&db.counts)
        .map(|(a, &m)| a + m as f64)
        .collect();
    DirichletSpec::new(db.alleles.clone(), pseudo)
}

#[cfg(test)]
mod tests {
    use super::*;

    const VWA: &str = "allele,count\n13,1\n14,57\n15,67\n16,121\n17,170\n18,121\n19,63\n20,3\n21,1\n";

    #[test]
    fn parses_vwa_table() {
        let db = parse_database(VWA, None).unwrap();
        assert_eq!(db.total, 604);
        assert_eq!(db.num_alleles(), 9);
        assert_eq!(db.alleles[4], "17");
        assert_eq!(db.counts[4], 170);
    }

    #[test]
    fn single_allele_locus() {
        let db = parse_database("allele,count\n10,5\n", None).unwrap();
        assert_eq!(db.num_alleles(), 1);
        assert_eq!(db.total, 5);
    }

    #[test]
    fn crlf_line_endings() {
        let db = parse_database("allele,count\r\n10,5\r\n11,6\r\n", None).unwrap();
        assert_eq!(db.counts, vec![5, 6]);
    }

    #[test]
    fn frequencies_rescaled() {
        let db = parse_database("allele,frequency\na,0.5\nb,0.5\n", Some(100)).unwrap();
        assert_eq!(db.counts, vec![50, 50]);
        assert_eq!(db.total, 100);
    }

    #[test]
    fn frequencies_need_db_size() {
        assert!(matches!(
            parse_database("allele,frequency\na,1.0\n", None),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn malformed_row_reports_line() {
        match parse_database("allele,count\n10,5\n11,x\n", None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match parse_database("allele,count\n10,5,7\n", None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_and_negative_rejected() {
        assert!(matches!(
            parse_database("allele,count\n10,5\n10,6\n", None),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse_database("allele,count\n10,-5\n", None),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn bad_header() {
        assert!(matches!(parse_database("a,b\n1,2\n", None), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_database("", None), Err(Error::Parse { .. })));
    }

    #[test]
    fn rescale_examples() {
        assert_eq!(rescale_frequencies(&[1.0], 604).unwrap(), vec![604]);
        let f17 = 170.0 / 604.0;
        assert_eq!(rescale_frequencies(&[f17, 1.0 - f17], 604).unwrap()[0], 170);
        // ties go away from zero
        assert_eq!(rescale_frequencies(&[0.25, 0.75], 2).unwrap(), vec![1, 2]);
        assert!(rescale_frequencies(&[0.5, 0.4], 10).is_err());
        assert!(rescale_frequencies(&[1.0], 0).is_err());
    }

    #[test]
    fn zero_prior_keeps_counts() {
        let db = parse_database(VWA, None).unwrap();
        let spec = apply_prior(&db, &PriorSpec::Zero).unwrap();
        assert_eq!(spec.total(), 604.0);
        assert_eq!(spec.means()[4], 170.0 / 604.0);
        for (s, &m) in spec.pseudo_counts().iter().zip(&db.counts) {
            assert_eq!(*s, m as f64);
        }
    }

    #[test]
    fn prior_one_and_one_over_k() {
        let db = DatabaseCounts::new("x", vec!["a".into(), "b".into()], vec![0, 10]).unwrap();
        let spec = apply_prior(&db, &PriorSpec::One).unwrap();
        assert_eq!(spec.pseudo_counts(), &[1.0, 11.0]);
        assert_eq!(spec.total(), 12.0);

        let db = DatabaseCounts::new("x", vec!["a".into(), "b".into()], vec![10, 10]).unwrap();
        let spec = apply_prior(&db, &PriorSpec::OneOverK).unwrap();
        assert_eq!(spec.pseudo_counts(), &[10.5, 10.5]);
        assert_eq!(spec.means(), &[0.5, 0.5]);
    }

    #[test]
    fn zero_prior_with_zero_count_names_allele() {
        let db = DatabaseCounts::new("x", vec!["a".into(), "9.3".into()], vec![4, 0]).unwrap();
        let err = apply_prior(&db, &PriorSpec::Zero).unwrap_err();
        assert!(err.to_string().contains("'9.3'"), "{err}");
    }

    #[test]
    fn explicit_prior_checks_length() {
        let db = DatabaseCounts::new("x", vec!["a".into(), "b".into()], vec![1, 2]).unwrap();
        assert!(apply_prior(&db, &PriorSpec::Explicit(vec![1.0])).is_err());
        assert!(apply_prior(&db, &PriorSpec::Explicit(vec![1.0, -1.0])).is_err());
        let spec = apply_prior(&db, &PriorSpec::Explicit(vec![0.5, 0.25])).unwrap();
        assert_eq!(spec.pseudo_counts(), &[1.5, 2.25]);
    }

    #[test]
    fn prior_names() {
        assert_eq!("uniform-k".parse::<PriorSpec>().unwrap(), PriorSpec::OneOverK);
        assert!("half".parse::<PriorSpec>().is_err());
    }
}
