use std::fmt;

use crate::error::{Error, Result};

/// Unordered allele pair carried by one person, stored as allele indices with `first <= second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Genotype {
    first: usize,
    second: usize,
}

impl Genotype {
    pub fn new(a: usize, b: usize) -> Self {
        Self {
            first: a.min(b),
            second: a.max(b),
        }
    }

    pub fn alleles(&self) -> (usize, usize) {
        (self.first, self.second)
    }

    pub fn is_heterozygous(&self) -> bool {
        self.first != self.second
    }
}

/// Genotypes of `I` labeled persons at one locus.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JointGenotype {
    persons: Vec<Genotype>,
}

impl JointGenotype {
    pub fn new(persons: Vec<Genotype>) -> Result<Self> {
        if persons.is_empty() {
            return Err(Error::validation("a joint genotype needs at least one person"));
        }
        Ok(Self { persons })
    }

    pub fn persons(&self) -> &[Genotype] {
        &self.persons
    }

    pub fn num_persons(&self) -> usize {
        self.persons.len()
    }

    /// Concatenation of two joint genotypes, `self` first.
    pub fn join(&self, other: &JointGenotype) -> JointGenotype {
        let mut persons = self.persons.clone();
        persons.extend_from_slice(&other.persons);
        JointGenotype { persons }
    }

    /// Copy with person `index` removed; `None` if that would leave nobody.
    pub fn without(&self, index: usize) -> Option<JointGenotype> {
        if self.persons.len() <= 1 || index >= self.persons.len() {
            return None;
        }
        let mut persons = self.persons.clone();
        persons.remove(index);
        Some(JointGenotype { persons })
    }

    /// Parses `a/b` pairs separated by `,` or `;`, e.g. `14/16,16/17`.
    pub fn parse(text: &str, alleles: &[String]) -> Result<Self> {
        let lookup = |label: &str, token: &str| {
            alleles.iter().position(|a| a == label).ok_or_else(|| {
                Error::validation(format!("unknown allele '{label}' in genotype '{token}'"))
            })
        };
        let mut persons = Vec::new();
        for token in text.split([',', ';']) {
            let token = token.trim();
            let (a, b) = token.split_once('/').ok_or_else(|| {
                Error::validation(format!("genotype '{token}' is not of the form a/b"))
            })?;
            let (a, b) = (a.trim(), b.trim());
            if a.is_empty() || b.is_empty() || b.contains('/') {
                return Err(Error::validation(format!("genotype '{token}' is not of the form a/b")));
            }
            persons.push(Genotype::new(lookup(a, token)?, lookup(b, token)?));
        }
        Self::new(persons)
    }

    /// Renders with `;` between persons so the string can sit unquoted in a CSV field.
    pub fn display<'a>(&'a self, alleles: &'a [String]) -> impl fmt::Display + 'a {
        DisplayJoint { g: self, alleles }
    }
}

struct DisplayJoint<'a> {
    g: &'a JointGenotype,
    alleles: &'a [String],
}

impl fmt::Display for DisplayJoint<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.g.persons.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{}/{}", self.alleles[p.first], self.alleles[p.second])?;
        }
        Ok(())
    }
}

/// Allele multiplicities of a joint genotype.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlleleCountSummary {
    pub counts: Vec<u32>,
    pub total_alleles: u32,
    pub het_count: u32,
}

impl AlleleCountSummary {
    /// Allele indices with a non-zero count, paired with the count.
    pub fn present(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(k, &a)| (k, a))
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }
}

pub fn summarize(g: &JointGenotype, num_alleles: usize) -> Result<AlleleCountSummary> {
    let mut counts = vec![0u32; num_alleles];
    let mut het_count = 0;
    for p in &g.persons {
        if p.second >= num_alleles {
            return Err(Error::validation(format!(
                "allele index {} outside a locus of {num_alleles} alleles",
                p.second
            )));
        }
        counts[p.first] += 1;
        counts[p.second] += 1;
        het_count += u32::from(p.is_heterozygous());
    }
    Ok(AlleleCountSummary {
        counts,
        total_alleles: 2 * g.persons.len() as u32,
        het_count,
    })
}
