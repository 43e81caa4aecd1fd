//! `capregion`: exact service capacity regions from the command line.
//!
//! Exit codes: 0 success or agreement, 1 demand outside the region, 2 a
//! verified discrepancy between a closed form and the LP, 3 usage, config
//! or internal errors.

mod config;
mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use capregion::schedulers::{systematic_nodes, waterfill, NodeLoads, WaterfillOutcome};
use capregion::verify::{closed_form_chain, closed_form_support, compare_config, describe, seeded_directions};
use capregion::{max_weighted_sum, membership, trace_boundary_2d, Alloc, Config, Demand, Rational, Scalar};
use clap::{Parser, Subcommand, ValueEnum};

use crate::config::CodeEntry;

const OUTSIDE: u8 = 1;
const DISCREPANCY: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "capregion", version, about = "Exact service capacity regions of coded storage systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Boundary vertices for K = 2, or a support-function table for other K
    Region {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for the extra directions of the support table
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide whether a demand vector is servable and print an allocation
    Member {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated rates, e.g. 3/2,1
        #[arg(long)]
        demand: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Waterfilling allocation on a systematic MDS code
    Waterfill {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        demand: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the closed form against the LP and print a JSON report
    Compare {
        #[arg(long, conflicts_with = "code")]
        config: Option<PathBuf>,
        /// Code given inline: mds N K, simplex K, hybrid A B C, replication C1 C2 ..
        code: Vec<String>,
        /// Node capacity for inline codes
        #[arg(long, default_value = "1")]
        mu: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random directions added to the support comparison when K != 2
        #[arg(long, default_value_t = 8)]
        directions: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write an SVG of a two-file region with any closed-form overlay
    Plot {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("stdout: {e}")),
    }
}

fn demand_for(config: &Config, text: &str) -> Result<Demand, String> {
    let rates = config::parse_demand(text)?;
    if rates.len() != config.k() {
        return Err(format!("demand has {} entries, the system stores {} files", rates.len(), config.k()));
    }
    Demand::new(rates).map_err(|e| e.to_string())
}

fn allocation_csv(config: &Config, alloc: &Alloc) -> String {
    let labels = config.code().labels();
    let mut out = String::from("file,recovering_set,share\n");
    for (file, row) in alloc.shares().iter().enumerate() {
        for (set, share) in config.recovery().sets(file).iter().zip(row) {
            if share == &Rational::from_int(0) {
                continue;
            }
            let nodes: Vec<&str> = set.iter().map(|&v| labels[v].as_str()).collect();
            out.push_str(&format!("{},{},{share}\n", file + 1, nodes.join(" ")));
        }
    }
    out
}

fn loads_csv(config: &Config, loads: &NodeLoads<Rational>) -> String {
    let mut out = String::from("node,load\n");
    for (label, load) in config.code().labels().iter().zip(loads.loads()) {
        out.push_str(&format!("{label},{load}\n"));
    }
    out
}

fn plot(config: &Config) -> Result<String, String> {
    let lp = trace_boundary_2d(config).map_err(|e| format!("svg output: {e}"))?;
    let closed = closed_form_chain(config).ok();
    Ok(svg::render(&describe(config.code()), config.mu(), &lp, closed.as_ref()))
}

fn region(config: &Config, format: Format, seed: u64) -> Result<String, String> {
    match format {
        Format::Svg => plot(config),
        Format::Csv if config.k() == 2 => Ok(trace_boundary_2d(config).map_err(|e| e.to_string())?.to_csv()),
        Format::Csv => {
            let k = config.k();
            let header: Vec<String> = (1..=k).map(|i| format!("w{i}")).collect();
            let mut out = format!("{},max\n", header.join(","));
            for w in seeded_directions::<Rational>(k, 4, seed) {
                let value = max_weighted_sum(config, &w).map_err(|e| e.to_string())?;
                let parts: Vec<String> = w.iter().map(ToString::to_string).collect();
                out.push_str(&format!("{},{value}\n", parts.join(",")));
            }
            Ok(out)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Region {
            config,
            format,
            out,
            seed,
        } => {
            let config = config::load(&config)?;
            emit(out.as_deref(), &region(&config, format, seed)?)?;
            Ok(0)
        }
        Command::Plot { config, out } => {
            let config = config::load(&config)?;
            emit(Some(&out), &plot(&config)?)?;
            Ok(0)
        }
        Command::Member { config, demand, out } => {
            let config = config::load(&config)?;
            let demand = demand_for(&config, &demand)?;
            match membership(&config, &demand).map_err(|e| e.to_string())? {
                Some(alloc) => {
                    emit(out.as_deref(), &allocation_csv(&config, &alloc))?;
                    Ok(0)
                }
                None => {
                    eprintln!("outside region: no allocation serves this demand within μ = {}", config.mu());
                    Ok(OUTSIDE)
                }
            }
        }
        Command::Waterfill { config, demand, out } => {
            let config = config::load(&config)?;
            if systematic_nodes(&config).is_none() {
                return Err("waterfill needs a systematic MDS code".into());
            }
            let demand = demand_for(&config, &demand)?;
            match waterfill(&config, &demand).map_err(|e| e.to_string())? {
                WaterfillOutcome::Served { allocation, loads } => {
                    let text = format!("{}\n{}", allocation_csv(&config, &allocation), loads_csv(&config, &loads));
                    emit(out.as_deref(), &text)?;
                    Ok(0)
                }
                WaterfillOutcome::Infeasible { unserved, loads } => {
                    emit(out.as_deref(), &loads_csv(&config, &loads))?;
                    let units = unserved.clone() / config.mu().clone();
                    eprintln!("infeasible: unserved residual {unserved} ({units}μ) after saturation");
                    Ok(OUTSIDE)
                }
            }
        }
        Command::Compare {
            config,
            code,
            mu,
            seed,
            directions,
            out,
        } => {
            let config = match config {
                Some(path) => config::load(&path)?,
                None => {
                    let entry = CodeEntry::from_words(&code)?;
                    let spec = entry.build().map_err(|e| e.to_string())?;
                    Config::new(spec, config::parse_mu(&mu)?).map_err(|e| e.to_string())?
                }
            };
            if config.k() != 2 {
                // fail early with a clear message when no closed form exists
                closed_form_support(&config, &vec![Rational::from_int(1); config.k()]).map_err(|e| e.to_string())?;
            }
            let report = compare_config(&config, seed, directions).map_err(|e| e.to_string())?;
            let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
            emit(out.as_deref(), &format!("{json}\n"))?;
            if report.agrees() {
                Ok(0)
            } else {
                if let Some(worst) = report.worst() {
                    let at: Vec<String> = worst.point.iter().map(ToString::to_string).collect();
                    eprintln!(
                        "discrepancy: max gap {} at ({}), closed form {} vs LP {}",
                        report.max_abs_gap,
                        at.join(", "),
                        worst.closed_form,
                        worst.lp
                    );
                }
                Ok(DISCREPANCY)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}
