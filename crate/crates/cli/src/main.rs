//! `blowup`: generate the universal blow-up series, run the identity
//! catalog, diff against the reference table, evaluate moment data and
//! time the engine.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 generation failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use blowup_core::blowup::{golden_diff, GoldenTable, SERIES_SELECTORS};
use blowup_core::json::TSeriesJson;
use blowup_core::pairing::EvalRequest;
use blowup_core::verify::{self, Catalog, VerifyConfig, MIN_VERIFY_ORDER};
use blowup_core::{BlowupSeriesSet, Error, Normalization, Rational, TSeries, XPoly};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "blowup", version, about = "Universal blow-up series: generation and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Latex,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormArg {
    Plain,
    Factorial,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Plain => Normalization::Plain,
            NormArg::Factorial => Normalization::Factorial,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print one series.
    Gen {
        #[arg(long)]
        series: String,
        #[arg(long, default_value_t = 28)]
        order: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_enum, default_value_t = NormArg::Factorial)]
        normalization: NormArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the identity catalog; one JSON report per line.
    Verify {
        #[arg(long, default_value_t = 28)]
        order: i64,
        #[arg(long, default_value_t = 16)]
        bivariate_order: i64,
        #[arg(long, default_value_t = 12)]
        mirror_order: i64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Restrict to the named identities (repeatable).
        #[arg(long)]
        identity: Vec<String>,
        /// Perturb a generated coefficient, `B:8` or `S:5` (testing aid).
        #[arg(long)]
        inject_fault: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Diff the generated series against the embedded reference table.
    Table {
        #[arg(long, default_value_t = 16)]
        order: i64,
        /// Perturb a generated coefficient, `B:8` or `S:5` (testing aid).
        #[arg(long)]
        inject_fault: Option<String>,
    },
    /// Evaluate the blow-up formulas on moment data.
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = NormArg::Plain)]
        normalization: NormArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Time generation and each catalog identity.
    Bench {
        #[arg(long, default_value_t = 28)]
        order: i64,
        #[arg(long, default_value_t = 16)]
        bivariate_order: i64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

enum Failure {
    Verification(String),
    Usage(String),
    Generation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Generation(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Usage(m) | Failure::Generation(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Generation { .. } => Failure::Generation(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen { series, order, format, normalization, output } => {
            run_gen(&series, order, format, normalization.into(), output)
        }
        Command::Verify { order, bivariate_order, mirror_order, jobs, identity, inject_fault, output } => {
            let config = VerifyConfig { order, bivariate_order, mirror_order, jobs, identities: identity };
            run_verify(&config, inject_fault.as_deref(), output)
        }
        Command::Table { order, inject_fault } => run_table(order, inject_fault.as_deref()),
        Command::Eval { input, normalization, output } => run_eval(&input, normalization.into(), output),
        Command::Bench { order, bivariate_order, format } => run_bench(order, bivariate_order, format),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("blowup: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn emit(text: &str, output: Option<PathBuf>) -> CliResult<()> {
    match output {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parses `NAME:N` and returns `(name, n)` for `B` or `S`.
fn parse_fault(spec: &str) -> CliResult<(String, i64)> {
    let bad = || Failure::Usage(format!("fault must look like B:8 or S:5, got {spec:?}"));
    let (name, n) = spec.split_once(':').ok_or_else(bad)?;
    let n: i64 = n.parse().map_err(|_| bad())?;
    if !matches!(name, "B" | "S") || n < 0 {
        return Err(bad());
    }
    Ok((name.to_string(), n))
}

/// Adds 1 to the factorial-normalized constant part of `t^n`.
fn perturb(series: &TSeries, n: i64) -> TSeries {
    let bump = Rational::factorial(n as u32).recip().expect("nonzero");
    series + &TSeries::monomial(XPoly::constant(bump), n, series.order())
}

/// The set at `order`, built from possibly perturbed generators.
fn build_set(order: i64, fault: Option<&str>) -> CliResult<BlowupSeriesSet> {
    let Some(spec) = fault else {
        return Ok(BlowupSeriesSet::generate(order)?);
    };
    let (name, n) = parse_fault(spec)?;
    let (b, s) = blowup_core::blowup::generate_bs(order + 2)?;
    let (b, s) = if name == "B" { (perturb(&b, n), s) } else { (b, perturb(&s, n)) };
    Ok(BlowupSeriesSet::from_generators(&b, &s)?.truncate(order))
}

/// The term for `c t^n`, with a single negative monomial pulled out as a sign.
fn latex_term(n: i64, c: &XPoly, normalization: Normalization) -> (bool, String) {
    let monomial = c.coeffs().iter().filter(|a| !a.is_zero()).count() == 1;
    let negative = monomial && c.coeffs().iter().any(|a| a.is_negative());
    let body = if negative {
        (-c).to_string()
    } else if monomial {
        c.to_string()
    } else {
        format!("({c})")
    };
    let term = match (n, normalization) {
        (0, _) => body,
        (_, Normalization::Factorial) => format!("{body}\\,\\frac{{t^{{{n}}}}}{{{n}!}}"),
        (_, Normalization::Plain) => format!("{body}\\,t^{{{n}}}"),
    };
    (negative, term)
}

fn format_series(name: &str, series: &TSeries, format: Format, normalization: Normalization) -> CliResult<String> {
    let json = TSeriesJson::encode(series, normalization)?;
    let mut out = String::new();
    match format {
        Format::Json => {
            out = serde_json::to_string(&json).expect("serializable");
            out.push('\n');
        }
        Format::Latex => {
            let terms: Vec<(bool, String)> = json
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| latex_term(json.valuation + k as i64, c, normalization))
                .collect();
            writeln!(out, "{name}(t) &=").unwrap();
            if terms.is_empty() {
                writeln!(out, "0").unwrap();
            }
            for (i, (negative, term)) in terms.iter().enumerate() {
                let sep = match (i, negative) {
                    (0, false) => "",
                    (0, true) => "-",
                    (_, false) => "+ ",
                    (_, true) => "- ",
                };
                writeln!(out, "{sep}{term}").unwrap();
            }
            writeln!(out, "+ O(t^{{{}}})", series.order() + 1).unwrap();
        }
        Format::Table => {
            let label = match normalization {
                Normalization::Factorial => "n!*coeff",
                Normalization::Plain => "coeff",
            };
            writeln!(out, "n\t{label}").unwrap();
            for (k, c) in json.coeffs.iter().enumerate() {
                writeln!(out, "{}\t{c}", json.valuation + k as i64).unwrap();
            }
        }
    }
    Ok(out)
}

fn run_gen(name: &str, order: i64, format: Format, normalization: Normalization, output: Option<PathBuf>) -> CliResult<()> {
    if !SERIES_SELECTORS.contains(&name) {
        return Err(Failure::Usage(format!(
            "unknown series {name:?}; expected one of {}",
            SERIES_SELECTORS.join(", ")
        )));
    }
    if order < 0 {
        return Err(Failure::Usage(format!("order must be >= 0, got {order}")));
    }
    let set = BlowupSeriesSet::generate(order)?;
    let text = format_series(name, set.select(name)?, format, normalization)?;
    emit(&text, output)
}

fn verify_reports(config: &VerifyConfig, fault: Option<&str>) -> CliResult<Vec<blowup_core::VerificationReport>> {
    if config.order < MIN_VERIFY_ORDER {
        return Err(Failure::Usage(format!(
            "verify needs --order >= {MIN_VERIFY_ORDER}, got {}",
            config.order
        )));
    }
    if config.jobs == 0 {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    if fault.is_none() {
        return Ok(verify::verify_all(config)?);
    }
    for id in &config.identities {
        if Catalog::get(id).is_none() {
            return Err(Failure::Usage(format!("unknown identity {id:?}")));
        }
    }
    let needed = config.order.max(config.bivariate_order).max(config.mirror_order);
    let set = build_set(needed + Catalog::headroom(&config.identities), fault)?;
    Ok(verify::verify_set(&set, config)?)
}

fn run_verify(config: &VerifyConfig, fault: Option<&str>, output: Option<PathBuf>) -> CliResult<()> {
    let reports = verify_reports(config, fault)?;
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_json());
        text.push('\n');
    }
    emit(&text, output)?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.identity.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("failed: {}", failed.join(", "))))
    }
}

fn run_table(order: i64, fault: Option<&str>) -> CliResult<()> {
    let needed = GoldenTable::embedded().max_order();
    if order < needed {
        return Err(Failure::Usage(format!("table needs --order >= {needed}, got {order}")));
    }
    let set = build_set(order, fault)?;
    let diffs = golden_diff(&set)?;
    println!("reference table sha256 {}", GoldenTable::hash());
    for (row, series) in GoldenTable::embedded().rows() {
        let bad = diffs.iter().filter(|d| d.row == row).count();
        let status = if bad == 0 { "ok" } else { "MISMATCH" };
        println!("{row}\tthrough t^{}\t{status}", series.order());
    }
    for d in &diffs {
        println!(
            "diff {} (as {}) t^{}/{}!: expected {} got {}",
            d.row, d.member, d.n, d.n, d.expected, d.actual
        );
    }
    if diffs.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} table entries differ", diffs.len())))
    }
}

fn run_eval(input: &PathBuf, normalization: Normalization, output: Option<PathBuf>) -> CliResult<()> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", input.display())))?;
    let request = EvalRequest::parse(&text)?;
    let result = request.evaluate()?;
    let mut json = result.to_json(normalization)?;
    json.push('\n');
    emit(&json, output)
}

fn run_bench(order: i64, bivariate_order: i64, format: Format) -> CliResult<()> {
    if order < 4 {
        return Err(Failure::Usage(format!("bench needs --order >= 4, got {order}")));
    }
    let config = VerifyConfig { order, bivariate_order, ..VerifyConfig::default() };
    let mut rows: Vec<(String, i64, f64)> = Vec::new();

    let started = Instant::now();
    let needed = order.max(config.bivariate_order.min(order)).max(config.mirror_order.min(order));
    let set = BlowupSeriesSet::generate(needed + Catalog::headroom(&[]))?;
    rows.push(("generate".into(), set.order, started.elapsed().as_secs_f64() * 1e3));

    for desc in Catalog::descriptors() {
        let target = match desc.target {
            verify::Target::Main => order,
            verify::Target::Bivariate => bivariate_order.min(order),
            verify::Target::Mirror => config.mirror_order.min(order),
            verify::Target::Fixed(n) => n,
        };
        let started = Instant::now();
        verify::check(desc, &set, target)?;
        rows.push((desc.id.to_string(), target, started.elapsed().as_secs_f64() * 1e3));
    }

    let mut out = String::new();
    match format {
        Format::Json => {
            for (name, ord, ms) in &rows {
                let row = serde_json::json!({"step": name, "order": ord, "ms": ms});
                writeln!(out, "{row}").unwrap();
            }
        }
        Format::Table | Format::Latex => {
            writeln!(out, "step\torder\tms").unwrap();
            for (name, ord, ms) in &rows {
                writeln!(out, "{name}\t{ord}\t{ms:.3}").unwrap();
            }
        }
    }
    print!("{out}");
    Ok(())
}
