use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ehall_cli::commands::{self, CliError};
use ehall_cli::config::{parse_window, FieldMode, Format, RunConfig};
use ehall_cli::suites::SUITES;
use ehall_core::lattice::Window;

/// Exact computations in the elliptic Hall algebra.
#[derive(Parser)]
#[command(name = "ehall", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// Specialize sigma to this rational (needs --sigmabar too)
    #[arg(long, global = true)]
    sigma: Option<String>,
    /// Specialize sigma-bar to this rational (needs --sigma too)
    #[arg(long, global = true)]
    sigmabar: Option<String>,
    /// Degree window LO..HI
    #[arg(long, global = true, default_value = "-2..2", value_parser = window)]
    window: Window,
    /// Largest rank of the shuffle model
    #[arg(long, global = true, default_value_t = 6)]
    rank_bound: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses every core, 1 runs sequentially
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, default_value = "text", value_parser = format)]
    format: Format,
    /// Check every rewriting step in the shuffle model
    #[arg(long, global = true)]
    paranoid: bool,
}

fn window(s: &str) -> Result<Window, String> {
    parse_window(s).map_err(|e| e.to_string())
}

fn format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: ehall_cli::config::ConfigError| e.to_string())
}

#[derive(Subcommand)]
enum Cmd {
    /// Normal form of an expression such as "[u(1,1), u(1,-1)]"
    Eval { expr: String },
    /// Run verification suites (all when none are named)
    Verify {
        #[arg(value_name = "SUITE")]
        suites: Vec<String>,
        /// List the suite names and exit
        #[arg(long)]
        list: bool,
    },
    /// Convex-path counts and shuffle ranks per bidegree
    Dims {
        #[arg(long, default_value_t = 3)]
        max_rank: i64,
    },
    /// Minimal paths of weight (R, D)
    Minpath {
        #[arg(allow_hyphen_values = true)]
        r: i64,
        #[arg(allow_hyphen_values = true)]
        d: i64,
    },
    /// Convex paths of weight (R, D) with segment degrees in the window
    Paths {
        #[arg(allow_hyphen_values = true)]
        r: i64,
        #[arg(allow_hyphen_values = true)]
        d: i64,
    },
    /// Truncated coproduct of an expression
    Coproduct {
        expr: String,
        /// Keep tensor factors of degree at most N in absolute value
        #[arg(long, default_value_t = 2)]
        truncation: i64,
    },
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    let o = cli.opts;
    let field = FieldMode::from_flags(o.sigma.as_deref(), o.sigmabar.as_deref()).map_err(|e| CliError::Other(e.to_string()))?;
    let cfg = RunConfig {
        field,
        window: o.window,
        rank_bound: o.rank_bound,
        seed: o.seed,
        jobs: o.jobs,
        format: o.format,
        paranoid: o.paranoid,
    };
    match cli.cmd {
        Cmd::Eval { expr } => commands::eval(&cfg, &expr, out).map(|_| true),
        Cmd::Verify { list: true, .. } => {
            for s in SUITES {
                writeln!(out, "{s}")?;
            }
            Ok(true)
        }
        Cmd::Verify { suites, .. } => commands::verify(&cfg, &suites, out),
        Cmd::Dims { max_rank } => commands::dims(&cfg, max_rank, out).map(|_| true),
        Cmd::Minpath { r, d } => commands::minpath(&cfg, r, d, out).map(|_| true),
        Cmd::Paths { r, d } => commands::paths(&cfg, r, d, out).map(|_| true),
        Cmd::Coproduct { expr, truncation } => commands::coproduct(&cfg, &expr, truncation, out).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
