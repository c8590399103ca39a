//! Command-line front end.
//!
//! Every subcommand writes plot-ready CSV into `--out` and a short human-readable
//! report to stdout. Exit codes: 0 success, 1 bad input or I/O failure, 2 bad
//! command-line usage, 3 an engine consistency check failed.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{self, compare, conditional_unknowns, distribution, mc_oracle, KlDirection};
use crate::approx::{theta_gm, theta_tilde, ApproxVariant};
use crate::engine::{check_theta, prob_combined_exact};
use crate::error::{Error, Result};
use crate::genotype::JointGenotype;
use crate::ingest::{apply_prior, parse_database, rescale_frequencies, DatabaseCounts, DirichletSpec, PriorSpec};

pub const CAP_ENV: &str = "GENO_DIRICHLET_CAP";

pub const EXIT_USER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "geno-dirichlet", version, about = "Joint genotype probabilities with substructure and uncertain allele frequencies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Probability of every joint genotype under each variant.
    Dist(RunArgs),
    /// Compare variants against the exact combined model.
    Compare(RunArgs),
    /// Print the transformed theta values for a database size.
    Theta(ThetaArgs),
    /// Distribution of unknown persons given profiled ones.
    Conditional {
        #[command(flatten)]
        run: RunArgs,
        /// Known profiles, e.g. `14/16,16/17,15/15`.
        #[arg(long)]
        known: String,
    },
    /// Check the exact model against a Monte-Carlo estimate for one genotype.
    Oracle {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        genotype: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Allele database CSV (`allele,count` or `allele,frequency`).
    #[arg(long)]
    db: PathBuf,
    #[arg(long, default_value = "zero", value_parser = ["zero", "uniform-k", "one"])]
    prior: String,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Rescale the database to this many alleles (required for frequency tables).
    #[arg(long)]
    db_size: Option<String>,
    /// Persons to enumerate (unknowns for `conditional`).
    #[arg(long, default_value_t = 1)]
    persons: usize,
    /// Comma-separated list of hw, uaf, fst, theta-tilde, gm, exact.
    #[arg(long, value_delimiter = ',')]
    variants: Vec<String>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cap: Option<u64>,
    /// Also condition on each leave-one-out subset of the known profiles.
    #[arg(long)]
    subsets: bool,
    #[arg(long, default_value = "exact-first", value_parser = ["exact-first", "approx-first"])]
    kl_direction: String,
}

#[derive(Debug, Args)]
struct ThetaArgs {
    #[arg(value_name = "THETA")]
    theta_pos: Option<f64>,
    /// Database size, or `inf`.
    #[arg(value_name = "DB_SIZE")]
    db_size_pos: Option<String>,
    #[arg(long, conflicts_with = "theta_pos")]
    theta: Option<f64>,
    #[arg(long, conflicts_with = "db_size_pos")]
    db_size: Option<String>,
}

/// Resolved settings shared by the database-driven subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub db_path: PathBuf,
    pub prior: PriorSpec,
    pub theta: f64,
    pub db_size_override: Option<u64>,
    pub persons: usize,
    pub variants: Vec<ApproxVariant>,
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub cap: u64,
    pub subsets: bool,
    pub kl_direction: KlDirection,
}

impl RunConfig {
    /// Config with the default settings for `db_path`.
    pub fn new(db_path: impl Into<PathBuf>) -> Self {
        Self {
            db_path: db_path.into(),
            prior: PriorSpec::Zero,
            theta: 0.0,
            db_size_override: None,
            persons: 1,
            variants: vec![ApproxVariant::CombinedExact],
            out_dir: PathBuf::from("."),
            seed: None,
            cap: analysis::DEFAULT_CAP,
            subsets: false,
            kl_direction: KlDirection::ExactFirst,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_theta(self.theta)?;
        if self.persons == 0 {
            return Err(Error::validation("--persons must be at least 1"));
        }
        if self.variants.is_empty() {
            return Err(Error::validation("at least one variant is needed"));
        }
        Ok(())
    }

    fn from_args(args: RunArgs, default_variants: &[ApproxVariant]) -> Result<Self> {
        let variants = if args.variants.is_empty() {
            default_variants.to_vec()
        } else {
            args.variants
                .iter()
                .map(|v| v.trim().parse())
                .collect::<Result<Vec<_>>>()?
        };
        let db_size_override = match args.db_size.as_deref() {
            None => None,
            Some(text) => match parse_size(text)? {
                s if s.is_finite() && s >= 1.0 && s.fract() == 0.0 => Some(s as u64),
                s => {
                    return Err(Error::validation(format!(
                        "--db-size must be a positive integer here, got {s}"
                    )))
                }
            },
        };
        let cap = match args.cap {
            Some(c) => c,
            None => match std::env::var(CAP_ENV) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| Error::validation(format!("{CAP_ENV}='{v}' is not an integer")))?,
                Err(_) => analysis::DEFAULT_CAP,
            },
        };
        let cfg = Self {
            db_path: args.db,
            prior: args.prior.parse()?,
            theta: args.theta,
            db_size_override,
            persons: args.persons,
            variants,
            out_dir: args.out,
            seed: args.seed,
            cap,
            subsets: args.subsets,
            kl_direction: args.kl_direction.parse()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_size(text: &str) -> Result<f64> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    match t.parse::<f64>() {
        Ok(v) if v > 0.0 => Ok(v),
        _ => Err(Error::validation(format!("database size '{text}' is not a positive number or 'inf'"))),
    }
}

/// `%g`-style rendering with six significant figures.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, e) = s.split_once('e').unwrap();
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{e}")
    }
}

/// Loads the database named in `cfg` and applies its prior.
pub fn load_spec(cfg: &RunConfig) -> Result<DirichletSpec> {
    let text = fs::read_to_string(&cfg.db_path)
        .map_err(|e| Error::validation(format!("cannot read {}: {e}", cfg.db_path.display())))?;
    let mut db = parse_database(&text, cfg.db_size_override)?;
    db.locus = cfg
        .db_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    // an explicit size on a count table rescales it
    if let Some(size) = cfg.db_size_override {
        if db.total != size && db.total > 0 {
            let freqs: Vec<f64> = db.counts.iter().map(|&m| m as f64 / db.total as f64).collect();
            let counts = rescale_frequencies(&freqs, size)?;
            db = DatabaseCounts::new(db.locus, db.alleles, counts)?;
        }
    }
    apply_prior(&db, &cfg.prior)
}

fn create_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::validation(format!("cannot create {}: {e}", dir.display())))
}

fn out_file(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let f = File::create(&path).map_err(|e| Error::validation(format!("cannot write {}: {e}", path.display())))?;
    Ok(BufWriter::new(f))
}

/// Writes `dist_<variant>.csv` for every configured variant.
pub fn cmd_dist(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let spec = load_spec(cfg)?;
    create_out_dir(&cfg.out_dir)?;
    let mut written = Vec::new();
    for &variant in &cfg.variants {
        let d = distribution(&spec, cfg.theta, variant, cfg.persons, cfg.cap)?;
        let name = format!("dist_{variant}.csv");
        d.write_csv(out_file(&cfg.out_dir, &name)?)?;
        writeln!(stdout, "{variant}: {} genotypes, residual {}", d.len(), sig6(d.residual))?;
        written.push(cfg.out_dir.join(name));
    }
    Ok(written)
}

/// One line of the comparison summary.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub variant: ApproxVariant,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub kl: f64,
}

/// Compares every configured variant with the exact combined model.
pub fn cmd_compare(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<Vec<SummaryRow>> {
    cfg.validate()?;
    let spec = load_spec(cfg)?;
    create_out_dir(&cfg.out_dir)?;
    let exact = distribution(&spec, cfg.theta, ApproxVariant::CombinedExact, cfg.persons, cfg.cap)?;
    let mut rows = Vec::new();
    let mut summary = csv::Writer::from_writer(out_file(&cfg.out_dir, "summary.csv")?);
    summary.write_record(["variant", "min_ratio", "max_ratio", "kl"])?;
    writeln!(stdout, "variant,min_ratio,max_ratio,kl")?;
    for &variant in cfg.variants.iter().filter(|v| **v != ApproxVariant::CombinedExact) {
        let approx = distribution(&spec, cfg.theta, variant, cfg.persons, cfg.cap)?;
        let report = compare(&approx, &exact, cfg.kl_direction)?;
        report.write_ratios_csv(&approx, &exact, out_file(&cfg.out_dir, &format!("ratios_{variant}.csv"))?)?;
        report.write_ecdf_csv(out_file(&cfg.out_dir, &format!("ecdf_{variant}.csv"))?)?;
        report.write_scatter_csv(out_file(&cfg.out_dir, &format!("scatter_{variant}.csv"))?)?;
        report.write_summary_csv(approx.residual, out_file(&cfg.out_dir, &format!("summary_{variant}.csv"))?)?;
        summary.write_record([
            variant.to_string(),
            report.min.to_string(),
            report.max.to_string(),
            report.kl.to_string(),
        ])?;
        writeln!(stdout, "{variant},{},{},{}", sig6(report.min), sig6(report.max), sig6(report.kl))?;
        if !report.flagged.is_empty() {
            writeln!(stdout, "  {} ratio(s) involve a zero probability", report.flagged.len())?;
        }
        rows.push(SummaryRow {
            variant,
            min_ratio: report.min,
            max_ratio: report.max,
            kl: report.kl,
        });
    }
    summary.flush()?;
    Ok(rows)
}

/// Transformed theta values at full precision and four decimals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaReport {
    pub theta: f64,
    pub db_size: f64,
    pub theta_tilde: f64,
    pub theta_gm: Option<f64>,
}

pub fn cmd_theta(theta: f64, db_size: f64, stdout: &mut dyn Write) -> Result<ThetaReport> {
    check_theta(theta)?;
    if db_size.is_nan() || db_size <= 0.0 {
        return Err(Error::validation("database size must be positive"));
    }
    let report = ThetaReport {
        theta,
        db_size,
        theta_tilde: theta_tilde(theta, db_size),
        theta_gm: db_size.is_finite().then(|| theta_gm(theta, db_size)).transpose()?,
    };
    writeln!(stdout, "theta       = {theta} ({theta:.4})")?;
    writeln!(stdout, "s           = {db_size}")?;
    let tt = report.theta_tilde;
    writeln!(stdout, "theta_tilde = {tt} ({tt:.4})")?;
    match report.theta_gm {
        Some(gm) => writeln!(stdout, "theta_gm    = {gm} ({gm:.4})")?,
        None => writeln!(stdout, "theta_gm    = not applicable (infinite database)")?,
    }
    Ok(report)
}

/// Conditional distributions of the unknowns given `known`, and optionally given each
/// leave-one-out subset of `known`.
pub fn cmd_conditional(cfg: &RunConfig, known: &str, stdout: &mut dyn Write) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let spec = load_spec(cfg)?;
    let known = JointGenotype::parse(known, spec.alleles())?;
    create_out_dir(&cfg.out_dir)?;
    let mut written = Vec::new();
    for &variant in &cfg.variants {
        let plain = distribution(&spec, cfg.theta, variant, cfg.persons, cfg.cap)?;
        let mut sets = vec![(format!("conditional_{variant}.csv"), known.clone())];
        if cfg.subsets {
            for i in 0..known.num_persons() {
                if let Some(sub) = known.without(i) {
                    sets.push((format!("conditional_{variant}_without_{}.csv", i + 1), sub));
                }
            }
        }
        for (name, given) in sets {
            let d = conditional_unknowns(&given, &spec, cfg.theta, variant, cfg.persons, cfg.cap)?;
            d.write_csv(out_file(&cfg.out_dir, &name)?)?;
            let diff = d
                .probabilities()
                .zip(plain.probabilities())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            writeln!(
                stdout,
                "{name}: given {}, max |P(u|known) - P(u)| = {}",
                given.display(spec.alleles()),
                sig6(diff)
            )?;
            written.push(cfg.out_dir.join(name));
        }
    }
    Ok(written)
}

/// Exact combined probability of one genotype next to its Monte-Carlo estimate.
pub fn cmd_oracle(cfg: &RunConfig, genotype: &str, samples: u64, stdout: &mut dyn Write) -> Result<analysis::McEstimate> {
    cfg.validate()?;
    let spec = load_spec(cfg)?;
    let g = JointGenotype::parse(genotype, spec.alleles())?;
    let exact = prob_combined_exact(&g, &spec, cfg.theta)?.value();
    let est = mc_oracle(&g, &spec, cfg.theta, samples, cfg.seed.unwrap_or(0))?;
    writeln!(stdout, "genotype  {}", g.display(spec.alleles()))?;
    writeln!(stdout, "exact     {exact}")?;
    writeln!(stdout, "estimate  {}", est.estimate)?;
    writeln!(stdout, "std_error {}", est.std_error)?;
    writeln!(stdout, "z         {}", sig6(est.z_score(exact)))?;
    Ok(est)
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    use ApproxVariant::*;
    match cli.command {
        Command::Dist(args) => {
            cmd_dist(&RunConfig::from_args(args, &[CombinedExact])?, stdout)?;
        }
        Command::Compare(args) => {
            cmd_compare(&RunConfig::from_args(args, &[Hw, Uaf, Fst, ThetaTilde, GreenMortera])?, stdout)?;
        }
        Command::Theta(args) => {
            let theta = args
                .theta_pos
                .or(args.theta)
                .ok_or_else(|| Error::validation("theta is required"))?;
            let size = args
                .db_size_pos
                .or(args.db_size)
                .ok_or_else(|| Error::validation("database size is required"))?;
            cmd_theta(theta, parse_size(&size)?, stdout)?;
        }
        Command::Conditional { run, known } => {
            cmd_conditional(&RunConfig::from_args(run, &[ThetaTilde])?, &known, stdout)?;
        }
        Command::Oracle { run, genotype, samples } => {
            cmd_oracle(&RunConfig::from_args(run, &[CombinedExact])?, &genotype, samples, stdout)?;
        }
    }
    Ok(())
}

/// Parses `args` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match dispatch(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_internal() {
                EXIT_INTERNAL
            } else {
                EXIT_USER
            }
        }
    }
}
