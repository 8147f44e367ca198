//! Command-line front end: catalog inspection, linearization, convolution,
//! moment table generation, and identity verification, with exact JSON/CSV
//! output.
//!
//! Exit codes: 0 success, 1 verification found violations, 2 usage or data
//! error. Scalars are always emitted in their exact text form; `--approx`
//! adds a decimal rendering column that carries no correctness guarantee.

mod bellsuite;
mod cache;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hypermoment::hypergroup::CatalogEntry;
use hypermoment::moments::{moment_table, verify_binomial};
use hypermoment::multiindex::MultiIndex;
use hypermoment::{
    Hypergroup, Measure, MomentSeed, MomentTable, RecurrenceSpec, Scalar, VerificationReport,
};

#[derive(Parser)]
#[command(
    name = "hypermoment",
    version,
    about = "Polynomial hypergroups, exact linearization, and moment function sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in hypergroup catalog
    Catalog {
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Print the linearization measure delta_n * delta_m
    Linearize {
        #[command(flatten)]
        source: SourceArgs,
        /// First index
        #[arg(long)]
        n: u32,
        /// Second index
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Convolve two measures given as JSON files
    Convolve {
        #[command(flatten)]
        source: SourceArgs,
        /// Left measure JSON file
        #[arg(long, value_name = "FILE")]
        mu: PathBuf,
        /// Right measure JSON file
        #[arg(long, value_name = "FILE")]
        nu: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generate the moment table for a seed file
    Moments {
        #[command(flatten)]
        source: SourceArgs,
        /// Seed JSON file with all values phi_alpha(1)
        #[arg(long, value_name = "FILE")]
        seed: PathBuf,
        /// Largest n to tabulate
        #[arg(long)]
        nmax: u32,
        /// Add a non-authoritative decimal rendering column
        #[arg(long)]
        approx: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the binomial identity for a generated or external table
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        data: VerifyData,
        /// Largest n to check
        #[arg(long)]
        nmax: u32,
        /// Largest m to check
        #[arg(long)]
        mmax: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the group-case oracle suite
    BellCheck {
        /// Family rank for the binomial-identity oracles (default: a fixed
        /// battery covering ranks 1 and 2)
        #[arg(long)]
        rank: Option<usize>,
        /// Family order for the binomial-identity oracles
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Built-in hypergroup name (see `catalog`)
    #[arg(long, value_name = "NAME")]
    hypergroup: Option<String>,
    /// Custom recurrence spec JSON file
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct VerifyData {
    /// Generate the table from this seed file, then verify it
    #[arg(long, value_name = "FILE")]
    seed: Option<PathBuf>,
    /// Verify an existing table JSON file
    #[arg(long, value_name = "FILE")]
    table: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = DataFormat::Json)]
    format: DataFormat,
    /// Write output to FILE instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DataFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Catalog { format } => cmd_catalog(format),
        Command::Linearize {
            source,
            n,
            m,
            output,
        } => cmd_linearize(source, n, m, output),
        Command::Convolve {
            source,
            mu,
            nu,
            output,
        } => cmd_convolve(source, mu, nu, output),
        Command::Moments {
            source,
            seed,
            nmax,
            approx,
            output,
        } => cmd_moments(source, seed, nmax, approx, output),
        Command::Verify {
            source,
            data,
            nmax,
            mmax,
            output,
        } => cmd_verify(source, data, nmax, mmax, output),
        Command::BellCheck {
            rank,
            order,
            format,
        } => cmd_bell_check(rank, order, format),
    }
}

// ---- hypergroup setup and cache wiring ----

impl SourceArgs {
    fn load_spec(&self) -> Result<RecurrenceSpec> {
        if let Some(name) = &self.hypergroup {
            return Ok(RecurrenceSpec::from_name(name)?);
        }
        let path = self.spec.as_ref().expect("clap requires one source");
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading spec file {}", path.display()))?;
        let spec: RecurrenceSpec = serde_json::from_str(&text)
            .with_context(|| format!("parsing spec file {}", path.display()))?;
        Ok(spec)
    }
}

/// Loads and validates the spec through `depth`, builds the hypergroup, and
/// preloads any persisted linearization cache.
///
/// For custom tables the validation depth is clamped to the declared range;
/// if the run then needs a deeper coefficient, the operation itself reports
/// `CoefficientUnavailable`.
fn prepare_hypergroup(source: &SourceArgs, depth: u32) -> Result<Hypergroup> {
    let spec = source.load_spec()?;
    let depth = match spec.n_max() {
        Some(declared) => depth.min(declared),
        None => depth,
    };
    let report = spec.validate(depth)?;
    if !report.is_valid() {
        let listed: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        bail!("invalid recurrence spec: {}", listed.join("; "));
    }
    let hypergroup = Hypergroup::new(spec);
    if let Some(dir) = cache_dir() {
        cache::load(&dir, &hypergroup);
    }
    Ok(hypergroup)
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(cache::CACHE_DIR_VAR).map(PathBuf::from)
}

fn persist_cache(hypergroup: &Hypergroup) {
    if let Some(dir) = cache_dir() {
        cache::save(&dir, hypergroup);
    }
}

// ---- output plumbing ----

fn emit(output: &OutputArgs, bytes: &[u8]) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, bytes)
            .with_context(|| format!("writing output file {}", path.display())),
        None => {
            std::io::stdout()
                .write_all(bytes)
                .context("writing to stdout")
        }
    }
}

fn json_line<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec(value).context("serializing output")?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_bytes<F>(fill: F) -> Result<Vec<u8>>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut writer = csv::Writer::from_writer(Vec::new());
    fill(&mut writer).context("writing csv")?;
    writer.into_inner().context("flushing csv")
}

fn measure_bytes(measure: &Measure, format: DataFormat) -> Result<Vec<u8>> {
    match format {
        DataFormat::Json => json_line(measure),
        DataFormat::Csv => csv_bytes(|w| {
            w.write_record(["k", "weight"])?;
            for (k, weight) in measure.iter() {
                w.write_record([k.to_string(), weight.to_string()])?;
            }
            Ok(())
        }),
    }
}

/// Table output mirroring the library's JSON schema, with an optional
/// approximate-decimal column.
#[derive(Serialize)]
struct TableRowOut<'a> {
    alpha: &'a MultiIndex,
    n: u32,
    value: &'a Scalar,
    #[serde(skip_serializing_if = "Option::is_none")]
    approx: Option<String>,
}

#[derive(Serialize)]
struct TableOut<'a> {
    rank: usize,
    order: u32,
    n_max: u32,
    rows: Vec<TableRowOut<'a>>,
}

fn table_bytes(table: &MomentTable, approx: bool, format: DataFormat) -> Result<Vec<u8>> {
    let mut rows = Vec::new();
    for (alpha, row) in table.rows() {
        for (n, value) in row.iter().enumerate() {
            rows.push(TableRowOut {
                alpha,
                n: n as u32,
                value,
                approx: approx.then(|| value.to_approx_string()),
            });
        }
    }
    match format {
        DataFormat::Json => json_line(&TableOut {
            rank: table.rank(),
            order: table.order(),
            n_max: table.n_max(),
            rows,
        }),
        DataFormat::Csv => csv_bytes(|w| {
            if approx {
                w.write_record(["alpha", "n", "value", "approx"])?;
            } else {
                w.write_record(["alpha", "n", "value"])?;
            }
            for row in &rows {
                let mut record = vec![
                    row.alpha.to_string(),
                    row.n.to_string(),
                    row.value.to_string(),
                ];
                if let Some(approx) = &row.approx {
                    record.push(approx.clone());
                }
                w.write_record(&record)?;
            }
            Ok(())
        }),
    }
}

fn report_bytes(report: &VerificationReport, format: DataFormat) -> Result<Vec<u8>> {
    match format {
        DataFormat::Json => json_line(report),
        DataFormat::Csv => csv_bytes(|w| {
            w.write_record(["alpha", "n", "m", "lhs", "rhs"])?;
            for v in &report.violations {
                w.write_record([
                    v.alpha.to_string(),
                    v.n.to_string(),
                    v.m.to_string(),
                    v.lhs.to_string(),
                    v.rhs.to_string(),
                ])?;
            }
            Ok(())
        }),
    }
}

// ---- commands ----

fn cmd_catalog(format: TextFormat) -> Result<u8> {
    match format {
        TextFormat::Text => {
            for entry in CatalogEntry::ALL {
                println!("{:<12}{}", entry.name(), entry.describe());
            }
        }
        TextFormat::Json => {
            #[derive(Serialize)]
            struct Entry {
                name: &'static str,
                coefficients: &'static str,
            }
            let listing: Vec<Entry> = CatalogEntry::ALL
                .iter()
                .map(|e| Entry {
                    name: e.name(),
                    coefficients: e.describe(),
                })
                .collect();
            println!("{}", serde_json::to_string(&listing)?);
        }
    }
    Ok(0)
}

fn cmd_linearize(source: SourceArgs, n: u32, m: u32, output: OutputArgs) -> Result<u8> {
    let hypergroup = prepare_hypergroup(&source, n + m)?;
    let measure = hypergroup.linearize(n, m)?;
    emit(&output, &measure_bytes(&measure, output.format)?)?;
    persist_cache(&hypergroup);
    Ok(0)
}

fn cmd_convolve(source: SourceArgs, mu: PathBuf, nu: PathBuf, output: OutputArgs) -> Result<u8> {
    let mu: Measure = read_json(&mu)?;
    let nu: Measure = read_json(&nu)?;
    let depth = mu.support_max().unwrap_or(0) + nu.support_max().unwrap_or(0);
    let hypergroup = prepare_hypergroup(&source, depth)?;
    let result = hypergroup.convolve(&mu, &nu)?;
    emit(&output, &measure_bytes(&result, output.format)?)?;
    persist_cache(&hypergroup);
    Ok(0)
}

fn cmd_moments(
    source: SourceArgs,
    seed: PathBuf,
    nmax: u32,
    approx: bool,
    output: OutputArgs,
) -> Result<u8> {
    let seed: MomentSeed = read_json(&seed)?;
    let hypergroup = prepare_hypergroup(&source, nmax)?;
    let table = moment_table(&hypergroup, &seed, nmax)?;
    emit(&output, &table_bytes(&table, approx, output.format)?)?;
    Ok(0)
}

fn cmd_verify(
    source: SourceArgs,
    data: VerifyData,
    nmax: u32,
    mmax: u32,
    output: OutputArgs,
) -> Result<u8> {
    let depth = nmax + mmax;
    let hypergroup = prepare_hypergroup(&source, depth)?;
    let table = match (&data.seed, &data.table) {
        (Some(seed_path), None) => {
            let seed: MomentSeed = read_json(seed_path)?;
            moment_table(&hypergroup, &seed, depth)?
        }
        (None, Some(table_path)) => read_json(table_path)?,
        _ => unreachable!("clap requires exactly one of --seed/--table"),
    };
    let report = verify_binomial(&hypergroup, &table, nmax, mmax)?;
    emit(&output, &report_bytes(&report, output.format)?)?;
    eprintln!(
        "checked {} identities, {} violations",
        report.checked,
        report.violations.len()
    );
    persist_cache(&hypergroup);
    Ok(if report.passed() { 0 } else { 1 })
}

fn cmd_bell_check(rank: Option<usize>, order: Option<u32>, format: TextFormat) -> Result<u8> {
    let shape = if rank.is_none() && order.is_none() {
        None
    } else {
        let rank = rank.unwrap_or(1);
        let order = order.unwrap_or(4);
        if rank == 0 || !(1..=8).contains(&order) || rank > 3 {
            bail!("supported bell-check shapes: rank 1..=3, order 1..=8");
        }
        Some((rank, order))
    };
    let results = bellsuite::run_suite(shape);
    match format {
        TextFormat::Text => {
            for r in &results {
                println!(
                    "{:<48} {} (checked {}, violations {})",
                    r.name,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.checked,
                    r.violations
                );
            }
        }
        TextFormat::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                oracle: &'a str,
                passed: bool,
                checked: u64,
                violations: u64,
            }
            let listing: Vec<Out> = results
                .iter()
                .map(|r| Out {
                    oracle: r.name,
                    passed: r.passed,
                    checked: r.checked,
                    violations: r.violations,
                })
                .collect();
            println!("{}", serde_json::to_string(&listing)?);
        }
    }
    Ok(if results.iter().all(|r| r.passed) { 0 } else { 1 })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
