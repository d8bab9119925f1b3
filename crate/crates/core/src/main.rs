use std::io::{Read, Write};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde::Serialize;

use monochrome::construct::{self, ConstructConfig};
use monochrome::digits::expand;
use monochrome::verify::{self, laws, CombinationMode, SearchConfig, UniverseSpec};
use monochrome::{Error, PrimeTable, Rational, Registry};

#[derive(Parser)]
#[command(name = "monochrome", version, about = "Colourings of the positive rationals and monochromatic sum-product configurations")]
struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Number of primes available for primorial bases.
    #[arg(long, global = true, default_value_t = monochrome::primes::DEFAULT_PRIME_COUNT)]
    prime_table: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Colour one value (`a,b` for pair colourings).
    Colour {
        #[arg(long)]
        colouring: String,
        value: String,
    },
    /// Digits of a value in base P_n.
    Expand {
        value: String,
        #[arg(long)]
        base_index: usize,
    },
    /// Certificate for a sequence read one term per line.
    Check {
        #[arg(long)]
        colouring: String,
        #[arg(long, default_value = "pairwise")]
        mode: String,
        /// File to read (default: stdin).
        #[arg(long)]
        input: Option<std::path::PathBuf>,
    },
    /// Bounded search for monochromatic configurations.
    Search {
        #[arg(long)]
        colouring: String,
        #[arg(long, default_value = "pairwise")]
        mode: String,
        #[arg(long, default_value_t = 2)]
        target: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[command(flatten)]
        universe: UniverseArgs,
    },
    /// Terms whose finite sums and products share one mu colour.
    Construct {
        #[arg(long)]
        terms: usize,
        #[arg(long, default_value_t = construct::DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = construct::DEFAULT_BASE_TERMS)]
        base_terms: usize,
        #[arg(long, default_value_t = construct::DEFAULT_MAX_BLOCK)]
        max_block: usize,
    },
    /// Seeded checks of the digit laws.
    Properties {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
}

#[derive(Args)]
struct UniverseArgs {
    #[arg(long, default_value_t = 32)]
    numerator_bound: u64,
    #[arg(long, default_value_t = 1)]
    denominator_bound: u64,
    #[arg(long, default_value_t = 1)]
    prime_index: usize,
    #[arg(long)]
    integers_only: bool,
}

#[derive(Serialize)]
struct ColourOut<'a> {
    input: &'a str,
    colour: String,
}

#[derive(Serialize)]
struct ExpandOut<'a> {
    input: &'a str,
    base_index: usize,
    leading: i64,
    trailing: i64,
    positional: String,
    digits: serde_json::Value,
}

enum Failure {
    Usage(String),
    Budget(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExhausted { .. } => Failure::Budget(e.to_string()),
            Error::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Output {
    json: String,
    exhausted: bool,
}

fn render<T: Serialize>(value: &T, pretty: bool) -> Result<String, Failure> {
    let s = if pretty { serde_json::to_string_pretty(value) } else { serde_json::to_string(value) };
    s.map_err(|e| Failure::Internal(e.to_string()))
}

fn read_sequence(input: Option<&std::path::Path>) -> Result<Vec<Rational>, Failure> {
    let text = match input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
            s
        }
    };
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(line.parse().map_err(|e| Failure::Usage(format!("line {}: {e}", n + 1)))?);
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let table = Arc::new(PrimeTable::new(cli.prime_table));
    let registry = Registry::standard(table.clone());
    let done = |json| Ok(Output { json, exhausted: false });
    match &cli.command {
        Command::Colour { colouring, value } => {
            let colour = if let Some(pair) = registry.get_pair(colouring) {
                let (a, b) = value
                    .split_once(',')
                    .ok_or_else(|| Failure::Usage(format!("`{colouring}` needs a pair `a,b`")))?;
                let parse = |s: &str| {
                    s.trim()
                        .parse::<BigUint>()
                        .map_err(|_| Failure::Usage(format!("`{s}` is not a natural number")))
                };
                pair.colour_pair(&parse(a)?, &parse(b)?)?.to_string()
            } else {
                let c = registry.get(colouring)?;
                let x: Rational = value.parse()?;
                c.key(&x)?
            };
            done(render(&ColourOut { input: value, colour }, cli.pretty)?)
        }
        Command::Expand { value, base_index } => {
            let x: Rational = value.parse()?;
            let e = expand(&x, *base_index, &table)?;
            let out = ExpandOut {
                input: value,
                base_index: *base_index,
                leading: e.leading(),
                trailing: e.trailing(),
                positional: e.positional(),
                digits: e.to_json()["digits"].clone(),
            };
            done(render(&out, cli.pretty)?)
        }
        Command::Check { colouring, mode, input } => {
            let c = registry.get(colouring)?;
            let mode: CombinationMode = mode.parse()?;
            let xs = read_sequence(input.as_deref())?;
            done(render(&verify::check(c.as_ref(), &xs, mode)?, cli.pretty)?)
        }
        Command::Search { colouring, mode, target, budget, universe } => {
            let c = registry.get(colouring)?;
            let mode: CombinationMode = mode.parse()?;
            let spec = UniverseSpec {
                prime_index_bound: universe.prime_index,
                numerator_bound: universe.numerator_bound,
                denominator_bound: universe.denominator_bound,
                integers_only: universe.integers_only,
            };
            let elements = spec.elements(&table)?;
            let config = SearchConfig { target_size: *target, budget: *budget, workers: cli.workers };
            let outcome = verify::search(c.as_ref(), &elements, mode, &config)?;
            Ok(Output { exhausted: !outcome.summary.exhaustive, json: render(&outcome, cli.pretty)? })
        }
        Command::Construct { terms, budget, base_terms, max_block } => {
            let config = ConstructConfig {
                budget: *budget,
                base_terms: *base_terms,
                max_block: *max_block,
                workers: cli.workers,
            };
            let table = construct::table_for(config.base_terms.max(*terms))?;
            done(render(&construct::extend_sum_closed(*terms, &config, table)?, cli.pretty)?)
        }
        Command::Properties { seed, samples } => {
            if *samples == 0 {
                return Err(Failure::Usage("samples must be at least 1".into()));
            }
            let ops = laws::StandardDigits { table };
            done(render(&laws::property_suite(*seed, *samples, &ops), cli.pretty)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            let _ = writeln!(std::io::stdout().lock(), "{}", out.json);
            if out.exhausted {
                eprintln!("budget exhausted before the search finished");
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
