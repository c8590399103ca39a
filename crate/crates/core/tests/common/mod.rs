#![allow(dead_code)]

use geno_dirichlet::{apply_prior, parse_database, DirichletSpec, JointGenotype, PriorSpec};

pub const VWA_CSV: &str = include_str!("../../data/vwa.csv");

pub fn vwa() -> DirichletSpec {
    apply_prior(&parse_database(VWA_CSV, None).unwrap(), &PriorSpec::Zero).unwrap()
}

/// First four vWA alleles with their counts, for three-person enumerations.
pub fn vwa_sub4() -> DirichletSpec {
    let spec = vwa();
    DirichletSpec::new(spec.alleles()[..4].to_vec(), spec.pseudo_counts()[..4].to_vec()).unwrap()
}

pub fn geno(text: &str, spec: &DirichletSpec) -> JointGenotype {
    JointGenotype::parse(text, spec.alleles()).unwrap()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Combined exact probability by brute-force polynomial expansion: multiply out
/// prod_{j<a_k} (j + phi p_k) directly and replace each monomial by its Dirichlet moment,
/// all in linear arithmetic. Shares no code with the engine's Stirling / log-space route.
pub fn combined_by_expansion(g: &JointGenotype, spec: &DirichletSpec, theta: f64) -> f64 {
    let k = spec.num_alleles();
    let mut counts = vec![0usize; k];
    let mut het = 0;
    for p in g.persons() {
        let (a, b) = p.alleles();
        counts[a] += 1;
        counts[b] += 1;
        if a != b {
            het += 1;
        }
    }
    let phi = (1.0 - theta) / theta;
    let s = spec.pseudo_counts();
    let total: f64 = s.iter().sum();

    // per allele: polynomial in (phi p_k), coefficient list indexed by power
    let polys: Vec<(usize, Vec<f64>)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .map(|(idx, &a)| {
            let mut poly = vec![1.0];
            for j in 0..a {
                let mut next = vec![0.0; poly.len() + 1];
                for (d, c) in poly.iter().enumerate() {
                    next[d] += c * j as f64;
                    next[d + 1] += c;
                }
                poly = next;
            }
            (idx, poly)
        })
        .collect();

    fn rising(x: f64, n: usize) -> f64 {
        (0..n).map(|i| x + i as f64).product()
    }

    let mut sum = 0.0;
    let mut powers = vec![0usize; polys.len()];
    loop {
        let mut term = 1.0;
        let mut big_j = 0;
        for ((idx, poly), &d) in polys.iter().zip(&powers) {
            term *= poly[d] * phi.powi(d as i32) * rising(s[*idx], d);
            big_j += d;
        }
        sum += term / rising(total, big_j);
        let mut i = 0;
        while i < powers.len() {
            powers[i] += 1;
            if powers[i] < polys[i].1.len() {
                break;
            }
            powers[i] = 0;
            i += 1;
        }
        if i == powers.len() {
            break;
        }
    }
    let two_i = 2 * g.num_persons();
    2f64.powi(het) * sum / rising(phi, two_i)
}
