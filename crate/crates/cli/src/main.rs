mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use tripillai_core::exec::Exec;

use commands::{BoundsArgs, CfArgs, PadicArgs, PeriodArgs, ReduceArgs, SearchArgs, VerifyArgs};
use output::{Format, RecordFormat, Sink};

/// Bounds, reductions and exhaustive search for T_n - 2^x 3^y = c.
#[derive(Parser, Debug)]
#[command(name = "tripillai", version)]
struct Cli {
    /// Flat key = value file of flag defaults; flags on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (0 = all cores, 1 = sequential).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Directory for the JSON report, text table and records.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// What to print on stdout.
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Format of the record file written under --out.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    records: RecordFormat,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Chains of absolute bounds from linear forms in logarithms.
    Bounds(BoundsArgs),
    /// Lattice, continued-fraction and p-adic reduction of the bounds.
    Reduce(ReduceArgs),
    /// Exhaustive search of a box, grouped by c.
    Search(SearchArgs),
    /// Caps on the 2- and 3-adic valuations of T_(n+d) - T_n.
    Padic(PadicArgs),
    /// Periods of T_n modulo m.
    Period(PeriodArgs),
    /// Continued fraction and Legendre constant a(M).
    Cf(CfArgs),
    /// Runs every check of the classification.
    VerifyPaper(VerifyArgs),
}

fn parse() -> Result<Cli, ExitCode> {
    let argv: Vec<_> = std::env::args_os().collect();
    let cmd = Cli::command().args_override_self(true);
    let first = cmd.clone().try_get_matches_from(&argv).unwrap_or_else(|e| e.exit());
    let matches = match first.get_one::<PathBuf>("config") {
        None => first,
        Some(path) => {
            let extra = config::load(path).and_then(|entries| config::extra_args(&cmd, &first, &entries)).map_err(|e| {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            })?;
            cmd.try_get_matches_from(argv.into_iter().chain(extra)).unwrap_or_else(|e| e.exit())
        }
    };
    Ok(Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit()))
}

fn main() -> ExitCode {
    let cli = match parse() {
        Ok(c) => c,
        Err(code) => return code,
    };
    let exec = Exec::with_threads(cli.threads);
    let result = match &cli.cmd {
        Cmd::Bounds(a) => commands::bounds(a),
        Cmd::Reduce(a) => commands::reduce_cmd(a, exec),
        Cmd::Search(a) => commands::search(a, exec),
        Cmd::Padic(a) => commands::padic(a, exec),
        Cmd::Period(a) => commands::period(a),
        Cmd::Cf(a) => commands::cf(a),
        Cmd::VerifyPaper(a) => commands::verify_paper(a, exec),
    };
    let sink = Sink { out: cli.out.as_deref(), format: cli.format, records: cli.records };
    match result.and_then(|o| sink.emit(&o).map(|_| o.passed)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
