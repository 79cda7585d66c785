use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

/// Exact Donaldson and Seiberg-Witten computations on fixture manifolds.
#[derive(Debug, Parser)]
#[command(name = "dsw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare the Donaldson series with Witten's formula below degree c + 2.
    Verify {
        /// Fixture path; names of built-ins work without a file on disk.
        fixture: String,
        /// Emit the report as JSON instead of CHECK lines.
        #[arg(long)]
        json: bool,
    },
    /// Print D^w(h^{delta-2m} x^m) as a polynomial in h.
    Moment {
        fixture: String,
        #[arg(long)]
        delta: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
    },
    /// Level-one link pairing for a basic class and the fixture's Lambda.
    Pairing {
        fixture: String,
        #[arg(long)]
        delta: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
        /// Index of the basic class.
        #[arg(long, default_value_t = 0)]
        class: usize,
        /// Homology class to evaluate at, comma separated; defaults to all ones.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        h: Option<Vec<i64>>,
        /// Also evaluate the raw Segre double sum and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Brute-force the binomial, Jacobi and Segre identities.
    FuzzIdentities {
        #[arg(long, default_value_t = 8)]
        d_max: u32,
    },
    /// List the built-in fixtures.
    Catalog,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { fixture, json } => commands::verify(&fixture, json),
        Command::Moment { fixture, delta, m } => commands::moment(&fixture, delta, m),
        Command::Pairing {
            fixture,
            delta,
            m,
            class,
            h,
            oracle,
        } => commands::pairing(&fixture, delta, m, class, h, oracle),
        Command::FuzzIdentities { d_max } => commands::fuzz_identities(d_max),
        Command::Catalog => commands::catalog(),
    };
    match outcome {
        Ok(report) => {
            print!("{}", report.text);
            if report.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
