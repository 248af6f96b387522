//! Command-line driver: constructions and experiments with machine-readable
//! output. Exit codes: 0 all assertions pass, 1 an assertion failed, 2 usage
//! or input error. The same argv and seed always produce byte-identical
//! output files.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;
use tilelab::carleson::LacunarySequence;
use tilelab::setmodel::{indicator, DyadicSet};
use tilelab::tfr::{TfrForest, TfrNode};
use tilelab::tilealg::{classify_tiles, foliate_universe, TileUniverse, UniverseOpts};
use tilelab::verify::{
    foliation_overlap_check, load_golden, lower_bound_experiment, main_lemma_check, packing_check,
    tfr_invariant_check, upper_bound_experiment, walsh_sharpness_experiment, zygmund_experiment,
    ExperimentReport, SetKind,
};

#[derive(Parser)]
#[command(
    name = "tilelab",
    version,
    about = "Tile combinatorics and Carleson-operator experiments"
)]
struct Cli {
    /// Cap the worker thread pool (results are independent of this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the regularization forest of a set as JSON.
    Tfr(TfrArgs),
    /// Carleson operator ratio experiments.
    Carleson {
        #[command(subcommand)]
        which: CarlesonCmd,
    },
    /// Lacunary exponential-sum sharpness sweep.
    Zygmund(ZygmundArgs),
    /// Walsh-analogue sharpness sweep.
    Walsh(WalshArgs),
    /// Combinatorial fuzz checks.
    Check {
        #[command(subcommand)]
        which: CheckCmd,
    },
    /// Tile-universe constructions over a set.
    Tiles {
        #[command(subcommand)]
        which: TilesCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Output {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct TfrArgs {
    /// Set specification file: {"level": L, "cells": [..]}.
    #[arg(long)]
    set: PathBuf,
    /// Which level family's forest to dump.
    #[arg(long)]
    k: u32,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CarlesonCmd {
    /// Lower band for the sup of modulated partial sums of an indicator.
    Lower {
        /// Inclusive range of the measure exponent, e.g. 4..10.
        #[arg(long, value_parser = parse_range)]
        n: (u32, u32),
        #[arg(long, default_value_t = 16)]
        grid: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Upper band for the adjoint of the linearized operator.
    Upper {
        #[arg(long, default_value_t = 200)]
        trials: u32,
        #[arg(long, default_value_t = 14)]
        grid: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct ZygmundArgs {
    /// Inclusive range of the measure exponent N, e.g. 3..6.
    #[arg(long, value_parser = parse_range)]
    n: (u32, u32),
    /// Inclusive range of the frequency-excess exponent s (M = 2^s N).
    #[arg(long, value_parser = parse_range)]
    s: (u32, u32),
    /// Structure of the test set.
    #[arg(long, value_enum, default_value = "cantor")]
    set_kind: KindArg,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Interval,
    Cantor,
}

#[derive(Args)]
struct WalshArgs {
    /// Inclusive range of the truncation exponent, e.g. 4..10.
    #[arg(long, value_parser = parse_range)]
    n: (u32, u32),
    #[arg(long, default_value_t = 16)]
    grid: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// E(P) disjointness and exact interval packing over random antichains.
    Packing {
        #[arg(long, default_value_t = 10_000)]
        trials: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Layer-1 top overlap bound over random and adversarial universes.
    Foliation {
        #[arg(long, default_value_t = 1_000)]
        trials: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Weighted tree L² inequality on generated instances.
    MainLemma {
        #[arg(long, default_value_t = 200)]
        trials: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Invariants of the regularization recursion on seeded random sets.
    TfrInvariants {
        #[arg(long, default_value_t = 100)]
        sets: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum TilesCmd {
    /// Split the universe over a set into cluster / separated / zero tiles.
    Classify(TilesArgs),
    /// Grade the separated tiles into foliated tree layers.
    Foliate(TilesArgs),
}

#[derive(Args)]
struct TilesArgs {
    /// Set specification file: {"level": L, "cells": [..]}.
    #[arg(long)]
    set: PathBuf,
    #[arg(long, default_value_t = 12)]
    grid: u32,
    /// Keep only scales 10 apart.
    #[arg(long)]
    scale_separated: bool,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let parse_one = |t: &str| t.parse::<u32>().map_err(|e| e.to_string());
    match s.split_once("..") {
        Some((a, b)) => {
            let (lo, hi) = (parse_one(a)?, parse_one(b)?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            Ok((lo, hi))
        }
        None => {
            let v = parse_one(s)?;
            Ok((v, v))
        }
    }
}

/// JSON shape of a dumped recursion node; schema: word is the {U,L} branch
/// label, alpha the selected threshold, intervals the node's tiles.
#[derive(Serialize)]
struct NodeDump {
    word: String,
    alpha: Option<u64>,
    intervals: Vec<IntervalDump>,
    #[serde(skip_serializing_if = "Option::is_none")]
    child_u: Option<Box<NodeDump>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    child_l: Option<Box<NodeDump>>,
}

#[derive(Serialize)]
struct IntervalDump {
    level: u32,
    index: u64,
}

#[derive(Serialize)]
struct ForestDump {
    k: u32,
    roots: Vec<RootDump>,
}

#[derive(Serialize)]
struct RootDump {
    root: IntervalDump,
    tree: NodeDump,
}

fn dump_node(node: &TfrNode) -> NodeDump {
    NodeDump {
        word: node.word.clone(),
        alpha: node.alpha,
        intervals: node
            .c_set
            .iter()
            .map(|j| IntervalDump {
                level: j.level,
                index: j.index,
            })
            .collect(),
        child_u: node.child_u.as_deref().map(|c| Box::new(dump_node(c))),
        child_l: node.child_l.as_deref().map(|c| Box::new(dump_node(c))),
    }
}

fn dump_forest(forest: &TfrForest) -> ForestDump {
    ForestDump {
        k: forest.k,
        roots: forest
            .roots
            .iter()
            .map(|(iv, root)| RootDump {
                root: IntervalDump {
                    level: iv.level,
                    index: iv.index,
                },
                tree: dump_node(&root.tree),
            })
            .collect(),
    }
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            use std::io::Write;
            // Ignore EPIPE so `tilelab ... | head` exits quietly.
            let _ = writeln!(std::io::stdout(), "{text}");
            Ok(())
        }
    }
}

fn emit(report: &ExperimentReport, output: &Output) -> Result<ExitCode, String> {
    let text = match output.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    write_out(&output.out, &text)?;
    if report.pass {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{}: assertion failed (a ratio left its band)", report.name);
        Ok(ExitCode::from(1))
    }
}

fn load_set(path: &PathBuf) -> Result<DyadicSet, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn build_universe(f: &DyadicSet, grid: u32, scale_separated: bool) -> Result<TileUniverse, String> {
    if !(8..=22).contains(&grid) {
        return Err(format!("grid level {grid} outside 8..=22"));
    }
    let seq = LacunarySequence::powers_of_two(32).truncate_to_band(grid);
    let chi = indicator(f, grid).map_err(|e| e.to_string())?;
    let nfun = tilelab::carleson::linearize(&chi, &seq);
    TileUniverse::build(
        f,
        &seq,
        &nfun,
        UniverseOpts {
            k_min: 5,
            k_max: grid - 2,
            band_max: 1 << (grid - 2),
            scale_separated,
        },
    )
    .map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    if let Some(n) = cli.threads {
        tilelab::parallel::limit_threads(n);
    }
    let golden = || load_golden().map_err(|e| format!("golden bands: {e}"));
    match cli.command {
        Command::Tfr(args) => {
            let f = load_set(&args.set)?;
            let forests = tilelab::tfr::tfr_global(&f).map_err(|e| e.to_string())?;
            let forest = forests
                .iter()
                .find(|fo| fo.k == args.k)
                .ok_or_else(|| format!("no level-{} forest (k_F exceeded?)", args.k))?;
            let text = serde_json::to_string_pretty(&dump_forest(forest)).expect("dump serializes");
            write_out(&args.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Carleson { which } => match which {
            CarlesonCmd::Lower { n, grid, output } => {
                let seq = LacunarySequence::powers_of_two(32);
                let rep = lower_bound_experiment(n.0, n.1, grid, &seq, &golden()?)
                    .map_err(|e| e.to_string())?;
                emit(&rep, &output)
            }
            CarlesonCmd::Upper {
                trials,
                grid,
                seed,
                output,
            } => {
                let rep = upper_bound_experiment(trials, grid, seed, &golden()?)
                    .map_err(|e| e.to_string())?;
                emit(&rep, &output)
            }
        },
        Command::Zygmund(args) => {
            let kind = match args.set_kind {
                KindArg::Interval => SetKind::Interval,
                KindArg::Cantor => SetKind::Cantor,
            };
            let rep = zygmund_experiment(args.n.0, args.n.1, args.s.0, args.s.1, kind, &golden()?)
                .map_err(|e| e.to_string())?;
            emit(&rep, &args.output)
        }
        Command::Walsh(args) => {
            let rep = walsh_sharpness_experiment(args.n.0, args.n.1, args.grid, &golden()?)
                .map_err(|e| e.to_string())?;
            emit(&rep, &args.output)
        }
        Command::Check { which } => match which {
            CheckCmd::Packing {
                trials,
                seed,
                output,
            } => {
                let rep = packing_check(trials, seed, &golden()?).map_err(|e| e.to_string())?;
                emit(&rep, &output)
            }
            CheckCmd::Foliation {
                trials,
                seed,
                output,
            } => {
                let rep =
                    foliation_overlap_check(trials, seed, &golden()?).map_err(|e| e.to_string())?;
                emit(&rep, &output)
            }
            CheckCmd::MainLemma {
                trials,
                seed,
                output,
            } => {
                let rep = main_lemma_check(trials, seed, &golden()?).map_err(|e| e.to_string())?;
                emit(&rep, &output)
            }
            CheckCmd::TfrInvariants { sets, seed, output } => {
                let rep = tfr_invariant_check(sets, seed).map_err(|e| e.to_string())?;
                emit(&rep, &output)
            }
        },
        Command::Tiles { which } => match which {
            TilesCmd::Classify(args) => {
                let f = load_set(&args.set)?;
                let u = build_universe(&f, args.grid, args.scale_separated)?;
                let cls = classify_tiles(&u);
                let text = serde_json::to_string_pretty(&serde_json::json!({
                    "cluster": cls.cluster,
                    "sep": cls.sep,
                    "zero": cls.zero,
                }))
                .expect("tiles serialize");
                write_out(&args.out, &text)?;
                Ok(ExitCode::SUCCESS)
            }
            TilesCmd::Foliate(args) => {
                let f = load_set(&args.set)?;
                let u = build_universe(&f, args.grid, args.scale_separated)?;
                let trees = foliate_universe(&u).map_err(|e| e.to_string())?;
                let text = serde_json::to_string_pretty(&trees).expect("trees serialize");
                write_out(&args.out, &text)?;
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
