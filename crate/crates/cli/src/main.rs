use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use tribadic_cli::commands::{self, Outcome, UsageError};
use tribadic_cli::output::{Format, OutputRecord, USAGE_EXIT};

/// p-adic valuations of Tribonacci numbers: per-prime classification,
/// witness tables, closed-form law verification and range scans.
#[derive(Parser, Debug)]
#[command(name = "tribadic", version, about)]
struct Cli {
    /// Output encoding
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Working p-adic precision K
    #[arg(long, default_value_t = 24, global = true)]
    precision: u32,

    /// Worker threads for table and scan
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide the integer and rational forms of the conjecture at one prime
    Classify {
        #[arg(long)]
        prime: u64,
        /// Skip locating the zero of each interpolant
        #[arg(long)]
        no_zeros: bool,
    },
    /// Failure witnesses (p, N, ell, u) for every prime up to --max
    Table {
        #[arg(long, default_value_t = 600)]
        max: u64,
        /// Recheck every row of the embedded witness table
        #[arg(long = "validate-paper")]
        validate_embedded: bool,
    },
    /// Check a valuation law against direct computation
    Verify {
        /// Built-in name (p2, p3, p83, ...) or a JSON file
        #[arg(long)]
        spec: String,
        #[arg(long, default_value = "1..10000")]
        range: String,
        /// Largest ν_p(n - a) of the extra CRT-generated points; 0 disables them
        #[arg(long, default_value_t = 8)]
        adversarial_depth: u32,
        /// Print the formula as JSON and exit
        #[arg(long)]
        dump: bool,
    },
    /// Locate the zero of one interpolant
    Zero {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        ell: i64,
        #[arg(long, default_value_t = 1)]
        multiplier: u64,
    },
    /// Verdict counts over all primes up to --max
    Scan {
        #[arg(long, default_value_t = 600)]
        max: u64,
    },
}

fn params(cli: &Cli) -> (String, BTreeMap<String, String>) {
    let mut m = BTreeMap::new();
    m.insert("precision".to_string(), cli.precision.to_string());
    let name = match &cli.command {
        Command::Classify { prime, no_zeros } => {
            m.insert("prime".into(), prime.to_string());
            m.insert("no_zeros".into(), no_zeros.to_string());
            "classify"
        }
        Command::Table { max, validate_embedded } => {
            m.insert("max".into(), max.to_string());
            m.insert("validate_embedded".into(), validate_embedded.to_string());
            "table"
        }
        Command::Verify {
            spec,
            range,
            adversarial_depth,
            ..
        } => {
            m.insert("spec".into(), spec.clone());
            m.insert("range".into(), range.clone());
            m.insert("adversarial_depth".into(), adversarial_depth.to_string());
            "verify"
        }
        Command::Zero { prime, ell, multiplier } => {
            m.insert("prime".into(), prime.to_string());
            m.insert("ell".into(), ell.to_string());
            m.insert("multiplier".into(), multiplier.to_string());
            "zero"
        }
        Command::Scan { max } => {
            m.insert("max".into(), max.to_string());
            "scan"
        }
    };
    (name.to_string(), m)
}

fn run(cli: &Cli) -> Result<Option<Outcome>, UsageError> {
    let k = cli.precision;
    Ok(Some(match &cli.command {
        Command::Classify { prime, no_zeros } => commands::classify(*prime, k, !no_zeros)?,
        Command::Table { max, validate_embedded } => commands::table(*max, k, *validate_embedded)?,
        Command::Verify {
            spec,
            range,
            adversarial_depth,
            dump,
        } => {
            let spec = commands::load_spec(spec)?;
            if *dump {
                println!("{}", serde_json::to_string_pretty(&spec).expect("serializable spec"));
                return Ok(None);
            }
            let range = commands::parse_range(range).map_err(UsageError)?;
            commands::verify(&spec, range, *adversarial_depth)?
        }
        Command::Zero { prime, ell, multiplier } => commands::zero(*prime, *ell, k, *multiplier)?,
        Command::Scan { max } => commands::scan(*max, k)?,
    }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_EXIT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_EXIT as u8);
        }
    }
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(Some(o)) => o,
        Ok(None) => return ExitCode::SUCCESS,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(USAGE_EXIT as u8);
        }
    };
    let (command, params) = params(&cli);
    let record = OutputRecord {
        command,
        params,
        status: outcome.status,
        payload: outcome.payload,
        precision_used: outcome.precision_used,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    print!("{}", record.render(cli.format));
    ExitCode::from(record.status.exit_code() as u8)
}
