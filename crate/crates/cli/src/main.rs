use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bpec_cli::commands::{self, Figure};
use bpec_cli::config::{parse_number, EtaGrid, FileConfig, Number, RunConfig, SchemeArg};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bpec", version, about = "Rate regions and coding simulations for the two-mode broadcast erasure channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Outer-bound regions, their vertices and the achievable sum-rates at one point.
    Region {
        /// Positional shorthand for --delta-a --delta-b --eta.
        #[arg(value_parser = parse_number, num_args = 0..=3)]
        point: Vec<f64>,
    },
    /// Sum-rate curves over a grid of eta values, as CSV.
    Sweep,
    /// Monte Carlo simulation of one coding scheme.
    Simulate,
    /// Data behind one of the standard figures.
    Figure {
        #[arg(value_enum)]
        name: Figure,
    },
}

#[derive(Args)]
struct Opts {
    /// JSON file with any of the settings below (snake_case keys); flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Erasure probability of mode A [default: 0.75].
    #[arg(long, global = true, value_parser = parse_number)]
    delta_a: Option<f64>,
    /// Erasure probability of mode B [default: 0].
    #[arg(long, global = true, value_parser = parse_number)]
    delta_b: Option<f64>,
    /// Erasure probability of the transient slots [default: delta-b].
    #[arg(long, global = true, value_parser = parse_number)]
    delta_t: Option<f64>,
    /// Fraction of the block in mode A; fractions like 32/35 are accepted [default: 32/35].
    #[arg(long, global = true, value_parser = parse_number)]
    eta: Option<f64>,
    /// Grid start:stop:step for sweep [default: 0:1:0.01].
    #[arg(long, global = true)]
    eta_grid: Option<EtaGrid>,
    /// Blocklength in slots [default: 100000].
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Transient length in slots [default: ceil(n^(2/3))].
    #[arg(long, global = true)]
    n_t: Option<usize>,
    /// Coding scheme [default: inter].
    #[arg(long, global = true, value_enum)]
    scheme: Option<SchemeArg>,
    /// Monte Carlo trials [default: 200].
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Master seed [default: 1].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Guard coefficient c; messages leave ceil(c n^(2/3)) slots spare [default: 1].
    #[arg(long, global = true, value_parser = parse_number)]
    guard_coeff: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format [default: text for region, csv for sweep and figure, json for simulate].
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

impl Opts {
    fn file_config(&self) -> Result<FileConfig> {
        let flags = FileConfig {
            delta_a: self.delta_a.map(Number),
            delta_b: self.delta_b.map(Number),
            delta_t: self.delta_t.map(Number),
            eta: self.eta.map(Number),
            eta_grid: self.eta_grid,
            n: self.n,
            n_t: self.n_t,
            scheme: self.scheme,
            trials: self.trials,
            seed: self.seed,
            guard_coeff: self.guard_coeff.map(Number),
        };
        let base = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Ok(base.merged(flags))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn run(cli: Cli) -> Result<()> {
    let mut file = cli.opts.file_config()?;
    let out = cli.opts.out.as_deref();
    match cli.command {
        Command::Region { point } => {
            match point[..] {
                [] => {}
                [a, b, e] => {
                    file.delta_a = Some(Number(a));
                    file.delta_b = Some(Number(b));
                    file.eta = Some(Number(e));
                }
                _ => bail!("region takes either no positional arguments or DELTA_A DELTA_B ETA"),
            }
            let cfg = RunConfig::resolve(file)?;
            let report = commands::cmd_region(&cfg.params()?)?;
            match cli.opts.format.unwrap_or(Format::Text) {
                Format::Text => emit(out, &commands::region_text(&report)),
                Format::Json => emit(out, &json(&report)?),
                Format::Csv => bail!("region has no CSV form; use text or json"),
            }
        }
        Command::Sweep => {
            let cfg = RunConfig::resolve(file)?;
            let rows = commands::cmd_sweep(cfg.delta_a, cfg.delta_b, &cfg.eta_grid)?;
            match cli.opts.format.unwrap_or(Format::Csv) {
                Format::Json => emit(out, &json(&rows)?),
                _ => emit(out, &commands::sweep_csv(&rows)),
            }
        }
        Command::Simulate => {
            let cfg = RunConfig::resolve(file)?;
            let report = commands::cmd_simulate(&cfg)?;
            match cli.opts.format.unwrap_or(Format::Json) {
                Format::Text => emit(out, &commands::simulate_text(&report)),
                Format::Json => emit(out, &json(&report)?),
                Format::Csv => bail!("simulate has no CSV form; use text or json"),
            }
        }
        Command::Figure { name } => emit(out, &commands::cmd_figure(name)?),
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
