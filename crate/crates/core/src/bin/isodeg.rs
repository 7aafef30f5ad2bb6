use std::io::Write;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use isodeg::output::{self, Format, GroupName, IqMode, OutputRecord, SpaceName};
use isodeg::verify::{self, VerifyOptions};
use isodeg::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_REFUSED: u8 = 2;
const EXIT_VERIFY: u8 = 3;

/// Group-theoretic bounds on degrees of prime isogenies of rational elliptic curves.
#[derive(Parser, Debug)]
#[command(name = "isodeg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal orbit sizes per allowed image and the resulting degree lower bound at p.
    Degrees {
        #[arg(long)]
        prime: u64,
        /// Non-residue used to build the Cartan groups (defaults to the smallest).
        #[arg(long)]
        epsilon: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Primes that can occur as isogeny degrees over fields of degree at most d.
    #[command(group(ArgGroup::new("mode").required(true).args(["upper_bound", "assume_uniformity"])))]
    Iq {
        #[arg(long)]
        d: u64,
        /// Unconditional containing set.
        #[arg(long)]
        upper_bound: bool,
        /// Exact set, conditional on Serre uniformity.
        #[arg(long)]
        assume_uniformity: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the invariant and oracle suites.
    Verify {
        #[arg(long, default_value_t = 31)]
        pmax: u64,
        #[arg(long, default_value_t = 50)]
        dmax: u64,
        #[arg(long)]
        skip_oracle: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Orbit partitions of a catalog group on lines and/or nonzero vectors.
    Orbits {
        #[arg(long)]
        prime: u64,
        #[arg(long, value_enum)]
        group: GroupName,
        /// Exponent for cns-power and cns-plus-power.
        #[arg(long, default_value_t = 1)]
        exponent: u32,
        #[arg(long, value_enum, default_value_t = SpaceName::Both)]
        space: SpaceName,
        #[arg(long)]
        epsilon: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InBaseSet { .. } => EXIT_REFUSED,
        Error::Inconsistent(_) => EXIT_VERIFY,
        _ => EXIT_USAGE,
    }
}

fn emit(record: &OutputRecord, format: Format) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(record.render(format).as_bytes());
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Degrees { prime, epsilon, format } => {
            emit(&output::degrees_record(prime, epsilon)?, format);
            Ok(0)
        }
        Command::Iq { d, upper_bound, format, .. } => {
            let mode = if upper_bound { IqMode::UpperBound } else { IqMode::AssumeUniformity };
            emit(&output::iq_record(d, mode)?, format);
            Ok(0)
        }
        Command::Verify { pmax, dmax, skip_oracle, format } => {
            let report = verify::run(VerifyOptions { p_max: pmax, d_max: dmax, skip_oracle })?;
            emit(&output::verify_record(&report), format);
            Ok(if report.passed { 0 } else { EXIT_VERIFY })
        }
        Command::Orbits { prime, group, exponent, space, epsilon, format } => {
            emit(&output::orbits_record(prime, group, exponent, space, epsilon)?, format);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
