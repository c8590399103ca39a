//! Python bindings for `geno_dirichlet`.
//!
//! Genotypes are passed as strings in the CLI notation (`"14/16,16/17"`), models by their
//! CLI names (`hw`, `uaf`, `fst`, `theta-tilde`, `gm`, `exact`).

use geno_dirichlet::analysis::{self, KlDirection, DEFAULT_CAP};
use geno_dirichlet::cli::{load_spec, RunConfig};
use geno_dirichlet::{self as core, ApproxVariant, Error, JointGenotype, PriorSpec};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    if e.is_internal() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(text: &str) -> PyResult<T> {
    text.parse().map_err(to_py)
}

/// Dirichlet distribution over the allele frequencies of one locus.
#[pyclass(name = "DirichletSpec", module = "geno_dirichlet_py", frozen)]
struct PySpec {
    inner: core::DirichletSpec,
}

impl PySpec {
    fn genotype(&self, text: &str) -> PyResult<JointGenotype> {
        JointGenotype::parse(text, self.inner.alleles()).map_err(to_py)
    }
}

#[pymethods]
impl PySpec {
    #[new]
    fn new(alleles: Vec<String>, pseudo_counts: Vec<f64>) -> PyResult<Self> {
        let inner = core::DirichletSpec::new(alleles, pseudo_counts).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Loads an `allele,count` or `allele,frequency` table and applies a prior
    /// (`zero`, `uniform-k` or `one`).
    #[staticmethod]
    #[pyo3(signature = (path, prior = "zero", db_size = None))]
    fn load(path: &str, prior: &str, db_size: Option<u64>) -> PyResult<Self> {
        let mut cfg = RunConfig::new(path);
        cfg.prior = parse::<PriorSpec>(prior)?;
        cfg.db_size_override = db_size;
        Ok(Self { inner: load_spec(&cfg).map_err(to_py)? })
    }

    #[getter]
    fn alleles(&self) -> Vec<String> {
        self.inner.alleles().to_vec()
    }

    #[getter]
    fn pseudo_counts(&self) -> Vec<f64> {
        self.inner.pseudo_counts().to_vec()
    }

    #[getter]
    fn means(&self) -> Vec<f64> {
        self.inner.means().to_vec()
    }

    #[getter]
    fn total(&self) -> f64 {
        self.inner.total()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __len__(&self) -> usize {
        self.inner.num_alleles()
    }

    fn __repr__(&self) -> String {
        format!("DirichletSpec({} alleles, total={})", self.inner.num_alleles(), self.inner.total())
    }
}

/// Probability of a joint genotype under one model.
#[pyfunction]
#[pyo3(signature = (spec, genotype, theta, variant = "exact", log = false))]
fn prob(spec: &PySpec, genotype: &str, theta: f64, variant: &str, log: bool) -> PyResult<f64> {
    let g = spec.genotype(genotype)?;
    let p = core::prob_model(&g, &spec.inner, theta, parse(variant)?).map_err(to_py)?;
    Ok(if log { p.ln() } else { p.value() })
}

#[pyfunction]
fn theta_tilde(theta: f64, db_size: f64) -> f64 {
    core::theta_tilde(theta, db_size)
}

#[pyfunction]
fn theta_gm(theta: f64, db_size: f64) -> PyResult<f64> {
    core::theta_gm(theta, db_size).map_err(to_py)
}

/// Row `n` of the unsigned Stirling numbers of the first kind.
#[pyfunction]
fn stirling_row(n: usize) -> PyResult<Vec<u128>> {
    Ok(core::stirling_table(n).map_err(to_py)?.row(n).to_vec())
}

fn rows(spec: &PySpec, d: &analysis::GenotypeDistribution) -> Vec<(String, f64)> {
    d.entries
        .iter()
        .map(|e| (e.genotype.display(spec.inner.alleles()).to_string(), e.probability))
        .collect()
}

/// Every joint genotype of `persons` people with its probability, in enumeration order.
#[pyfunction]
#[pyo3(signature = (spec, theta, variant = "exact", persons = 1, cap = DEFAULT_CAP))]
fn distribution(
    py: Python<'_>,
    spec: &PySpec,
    theta: f64,
    variant: &str,
    persons: usize,
    cap: u64,
) -> PyResult<Vec<(String, f64)>> {
    let variant = parse(variant)?;
    let d = py
        .detach(|| analysis::distribution(&spec.inner, theta, variant, persons, cap))
        .map_err(to_py)?;
    Ok(rows(spec, &d))
}

/// Ratios of `variant` to the exact model with their range, ECDF and KL divergence.
#[pyfunction]
#[pyo3(signature = (spec, theta, variant, persons = 1, kl_direction = "exact-first", cap = DEFAULT_CAP))]
fn compare<'py>(
    py: Python<'py>,
    spec: &PySpec,
    theta: f64,
    variant: &str,
    persons: usize,
    kl_direction: &str,
    cap: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let variant: ApproxVariant = parse(variant)?;
    let direction: KlDirection = parse(kl_direction)?;
    let report = py
        .detach(|| {
            let exact = analysis::distribution(&spec.inner, theta, ApproxVariant::CombinedExact, persons, cap)?;
            let approx = analysis::distribution(&spec.inner, theta, variant, persons, cap)?;
            analysis::compare(&approx, &exact, direction)
        })
        .map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("variant", report.variant.name())?;
    out.set_item("min", report.min)?;
    out.set_item("max", report.max)?;
    out.set_item("kl", report.kl)?;
    out.set_item("kl_direction", kl_direction)?;
    out.set_item("ratios", report.ratios)?;
    out.set_item("ecdf", report.ecdf)?;
    out.set_item("scatter", report.scatter)?;
    out.set_item("one_sided", report.one_sided)?;
    Ok(out)
}

/// Distribution of `unknowns` further genotypes given the profiled `known` persons.
#[pyfunction]
#[pyo3(signature = (spec, known, theta, variant = "theta-tilde", unknowns = 1, cap = DEFAULT_CAP))]
fn conditional(
    py: Python<'_>,
    spec: &PySpec,
    known: &str,
    theta: f64,
    variant: &str,
    unknowns: usize,
    cap: u64,
) -> PyResult<Vec<(String, f64)>> {
    let known = spec.genotype(known)?;
    let variant = parse(variant)?;
    let d = py
        .detach(|| analysis::conditional_unknowns(&known, &spec.inner, theta, variant, unknowns, cap))
        .map_err(to_py)?;
    Ok(rows(spec, &d))
}

/// Monte-Carlo estimate of the exact model; returns `(estimate, std_error)`.
#[pyfunction]
#[pyo3(signature = (spec, genotype, theta, samples = 1_000_000, seed = 0))]
fn mc_oracle(
    py: Python<'_>,
    spec: &PySpec,
    genotype: &str,
    theta: f64,
    samples: u64,
    seed: u64,
) -> PyResult<(f64, f64)> {
    let g = spec.genotype(genotype)?;
    let est = py
        .detach(|| analysis::mc_oracle(&g, &spec.inner, theta, samples, seed))
        .map_err(to_py)?;
    Ok((est.estimate, est.std_error))
}

#[pymodule]
fn geno_dirichlet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpec>()?;
    m.add("VARIANTS", ApproxVariant::ALL.iter().map(|v| v.name()).collect::<Vec<_>>())?;
    m.add_function(wrap_pyfunction!(prob, m)?)?;
    m.add_function(wrap_pyfunction!(theta_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(theta_gm, m)?)?;
    m.add_function(wrap_pyfunction!(stirling_row, m)?)?;
    m.add_function(wrap_pyfunction!(distribution, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(conditional, m)?)?;
    m.add_function(wrap_pyfunction!(mc_oracle, m)?)?;
    Ok(())
}
