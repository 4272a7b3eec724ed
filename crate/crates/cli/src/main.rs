mod output;

use std::collections::BTreeSet;
use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, Sign};
use serde::{Deserialize, Serialize};

use etacheck::arith::residue;
use etacheck::congruences::{
    all_as_expected, lookup, registry, run_many, CheckOutcome, Profile, Status, Tables,
    DEFAULT_ORDER_CEILING,
};
use etacheck::partitions::{
    bounded_frequency_numbers, distinct_part_numbers, frequency_set_numbers, partition_numbers,
    regular_numbers,
};
use etacheck::tau::tau_table;
use etacheck::{eta_product, eta_product_mod, Error, EtaProductSpec, Route};

use output::{Format, Table};

/// Environment variable holding the hard ceiling on series order.
const CEILING_VAR: &str = "ETACHECK_MAX_ORDER";

/// Counterexamples printed per check in table output.
const SHOWN: usize = 5;

#[derive(Parser)]
#[command(name = "etacheck", version, about = "Eta-product expansions, tau_k tables and congruence checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print tau_k(n) for 1 <= n <= max-n.
    Tau {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long)]
        max_n: usize,
        /// Reduce values into [0, modulus).
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long, value_enum, default_value = "series")]
        route: RouteArg,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Print a partition counting function for 0 <= n <= max-n.
    Partition {
        /// p: all, q: distinct parts, d: frequencies <= t, R: t-regular, F: frequencies in --set.
        #[arg(long = "fn", value_enum, ignore_case = true)]
        function: PartitionFn,
        #[arg(long)]
        t: Option<u64>,
        /// Allowed frequencies for F, comma separated.
        #[arg(long, value_delimiter = ',')]
        set: Vec<u64>,
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Expand an eta product given as "delta; c1^e1 c2^e2 ...".
    Series {
        #[arg(long, allow_hyphen_values = true)]
        spec: String,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Run congruence checks; exits 1 if any outcome is unexpected.
    Verify {
        /// Check id, repeatable. Defaults to the whole catalog.
        #[arg(long = "check")]
        checks: Vec<String>,
        /// Overrides the profile limit for every selected check.
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long, value_enum, default_value = "quick")]
        profile: ProfileArg,
        /// Require this status instead of the catalog expectation.
        #[arg(long, value_enum)]
        expect: Option<ExpectArg>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// List the check catalog.
    Checks {
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Time the exact expansion of tau_24 and the partition generating function.
    Bench {
        #[arg(long)]
        order: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Series,
    Recurrence,
    PartitionSum,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Series => Route::Series,
            RouteArg::Recurrence => Route::Recurrence,
            RouteArg::PartitionSum => Route::PartitionSum,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpectArg {
    Pass,
    Fail,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PartitionFn {
    #[value(name = "p")]
    P,
    #[value(name = "q")]
    Q,
    #[value(name = "d")]
    D,
    #[value(name = "R")]
    R,
    #[value(name = "F")]
    F,
}

#[derive(Serialize, Deserialize)]
struct TauOut {
    k: i64,
    route: Route,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<u64>,
    values: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct PartitionOut {
    function: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    set: Vec<u64>,
    values: Vec<String>,
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn ceiling() -> Result<usize, Failure> {
    match std::env::var(CEILING_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{CEILING_VAR} must be a nonnegative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_ORDER_CEILING),
    }
}

fn check_order(order: usize) -> Result<(), Failure> {
    let ceiling = ceiling()?;
    if order > ceiling {
        return Err(Error::OrderCeiling { order, ceiling }.into());
    }
    Ok(())
}

fn check_modulus(m: Option<u64>) -> Result<(), Failure> {
    match m {
        Some(m) if m < 2 => Err(Error::InvalidModulus(m).into()),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Tau { k, max_n, modulus, route, format } => {
            check_modulus(modulus)?;
            check_order(max_n)?;
            let table = tau_table(k, max_n, route.into())?;
            let values: Vec<String> = table
                .values()
                .iter()
                .map(|v| modulus.map_or_else(|| v.to_string(), |m| residue(v, m).to_string()))
                .collect();
            let json = TauOut { k, route: table.route(), modulus, values: values.clone() };
            emit(&mut out, format, "tau", 1, &values, &json)?;
        }
        Command::Partition { function, t, set, max_n, format } => {
            check_order(max_n)?;
            let need_t = || t.ok_or_else(|| usage("--t is required for this function"));
            if function != PartitionFn::F && !set.is_empty() {
                return Err(usage("--set only applies to --fn F"));
            }
            let values = match function {
                PartitionFn::P => partition_numbers(max_n),
                PartitionFn::Q => distinct_part_numbers(max_n),
                PartitionFn::D => bounded_frequency_numbers(need_t()?, max_n)?,
                PartitionFn::R => regular_numbers(need_t()?, max_n)?,
                PartitionFn::F => {
                    if set.is_empty() {
                        return Err(usage("--set is required for --fn F"));
                    }
                    frequency_set_numbers(&set.iter().copied().collect::<BTreeSet<_>>(), max_n)?
                }
            };
            let values: Vec<String> = values.iter().map(BigInt::to_string).collect();
            let name = function.to_possible_value().unwrap().get_name().to_string();
            let t = if matches!(function, PartitionFn::D | PartitionFn::R) { t } else { None };
            let mut set = set;
            set.sort_unstable();
            set.dedup();
            let json = PartitionOut { function: name, t, set, values: values.clone() };
            emit(&mut out, format, "value", 0, &values, &json)?;
        }
        Command::Series { spec, order, modulus, format } => {
            check_modulus(modulus)?;
            check_order(order)?;
            let parsed: EtaProductSpec = spec.parse().map_err(|e| spec_diagnostic(&spec, e))?;
            match modulus {
                Some(m) => {
                    let s = eta_product_mod(&parsed, order, m)?;
                    let values: Vec<String> = s.coeffs().iter().map(u64::to_string).collect();
                    emit(&mut out, format, "coeff", 0, &values, &s)?;
                }
                None => {
                    let s = eta_product(&parsed, order);
                    let values: Vec<String> = s.coeffs().iter().map(BigInt::to_string).collect();
                    emit(&mut out, format, "coeff", 0, &values, &s)?;
                }
            }
        }
        Command::Verify { checks, limit, profile, expect, format } => {
            let profile = match profile {
                ProfileArg::Quick => Profile::Quick,
                ProfileArg::Full => Profile::Full,
            };
            let infos = if checks.is_empty() {
                registry().iter().collect()
            } else {
                checks.iter().map(|id| lookup(id)).collect::<Result<Vec<_>, _>>()?
            };
            let runs: Vec<(&str, u64)> = infos.iter().map(|c| (c.id, limit.unwrap_or(c.limit(profile)))).collect();
            let mut outcomes = run_many(&Tables::new(ceiling()?), &runs)?;
            if let Some(e) = expect {
                let e = match e {
                    ExpectArg::Pass => Status::Pass,
                    ExpectArg::Fail => Status::Fail,
                };
                for o in &mut outcomes {
                    o.expected = e;
                    o.as_expected = o.status == e;
                }
            }
            write_outcomes(&mut out, format, &outcomes)?;
            if !all_as_expected(&outcomes) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Checks { format } => {
            let mut table = Table::new(vec!["id", "expected", "quick", "full", "params", "claim"]);
            for c in registry() {
                table.push(vec![
                    c.id.to_string(),
                    status(c.expected).to_string(),
                    c.quick_limit.to_string(),
                    c.full_limit.to_string(),
                    c.params.join(" "),
                    c.claim.to_string(),
                ]);
            }
            match format {
                Format::Table => {
                    for c in registry() {
                        writeln!(out, "{:<12} {}", c.id, c.description)?;
                        writeln!(out, "{:<12} {}", "", c.claim)?;
                    }
                }
                Format::Csv => table.write_csv(&mut out)?,
                Format::Json => {
                    let list: Vec<_> = registry()
                        .iter()
                        .map(|c| {
                            serde_json::json!({
                                "id": c.id,
                                "description": c.description,
                                "claim": c.claim,
                                "expected": c.expected,
                                "params": c.params,
                                "quick_limit": c.quick_limit,
                                "full_limit": c.full_limit,
                            })
                        })
                        .collect();
                    writeln!(out, "{}", serde_json::to_string(&list).expect("plain data"))?;
                }
            }
        }
        Command::Bench { order } => {
            if order == 0 {
                return Err(usage("--order must be at least 1"));
            }
            check_order(order)?;
            let mut table = Table::new(vec!["spec", "order", "ms", "checksum"]);
            for spec in [EtaProductSpec::tau(24), EtaProductSpec::eta_power(-1)] {
                let start = Instant::now();
                let s = eta_product(&spec, order);
                let ms = start.elapsed().as_secs_f64() * 1e3;
                table.push(vec![
                    spec.to_string(),
                    order.to_string(),
                    format!("{ms:.3}"),
                    format!("{:016x}", checksum(s.coeffs())),
                ]);
            }
            table.write_aligned(&mut out)?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn emit(
    out: &mut impl Write,
    format: Format,
    column: &'static str,
    first: usize,
    values: &[String],
    json: &impl Serialize,
) -> Result<(), Failure> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(json).expect("plain data"))?,
        Format::Table | Format::Csv => {
            let mut table = Table::new(vec!["n", column]);
            for (i, v) in values.iter().enumerate() {
                table.push(vec![(first + i).to_string(), v.clone()]);
            }
            if format == Format::Csv {
                table.write_csv(out)?;
            } else {
                table.write_aligned(out)?;
            }
        }
    }
    Ok(())
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
    }
}

fn count(v: Option<u64>) -> String {
    v.map_or_else(|| "-".to_string(), |c| c.to_string())
}

fn write_outcomes(out: &mut impl Write, format: Format, outcomes: &[CheckOutcome]) -> Result<(), Failure> {
    if format == Format::Json {
        writeln!(out, "{}", serde_json::to_string(outcomes).expect("plain data"))?;
        return Ok(());
    }
    let mut table = Table::new(vec![
        "id", "status", "expected", "verdict", "lo", "hi", "failures", "applicable", "vacuous", "ms",
    ]);
    for o in outcomes {
        table.push(vec![
            o.id.clone(),
            status(o.status).to_string(),
            status(o.expected).to_string(),
            if o.as_expected { "ok" } else { "UNEXPECTED" }.to_string(),
            o.range.0.to_string(),
            o.range.1.to_string(),
            o.failures.to_string(),
            count(o.applicable),
            count(o.not_applicable),
            o.elapsed_ms.to_string(),
        ]);
    }
    if format == Format::Csv {
        table.write_csv(out)?;
        return Ok(());
    }
    table.write_aligned(out)?;
    for o in outcomes.iter().filter(|o| o.failures > 0) {
        writeln!(out, "\n{} counterexamples ({} total):", o.id, o.failures)?;
        for c in o.counterexamples.iter().take(SHOWN) {
            let tags: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(out, "  n={} lhs={} rhs={} {}", c.n, c.lhs, c.rhs, tags.join(" "))?;
        }
    }
    let unexpected = outcomes.iter().filter(|o| !o.as_expected).count();
    writeln!(out, "\n{} checks, {} unexpected", outcomes.len(), unexpected)?;
    Ok(())
}

/// Points at the offending byte of a spec that failed to parse.
fn spec_diagnostic(spec: &str, e: Error) -> Failure {
    match e {
        Error::SpecParse { pos, ref message } => {
            let col = spec[..pos.min(spec.len())].chars().count();
            usage(format!("{message} at position {pos}\n  {spec}\n  {}^", " ".repeat(col)))
        }
        other => other.into(),
    }
}

/// Coefficients folded mod 2^64, weighted by position.
fn checksum(coeffs: &[BigInt]) -> u64 {
    coeffs.iter().enumerate().fold(0u64, |acc, (i, c)| {
        let low = c.iter_u64_digits().next().unwrap_or(0);
        let low = if c.sign() == Sign::Minus { low.wrapping_neg() } else { low };
        acc.wrapping_add(low.wrapping_mul(i as u64 + 1))
    })
}
