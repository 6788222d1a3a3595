//! The `phylotag` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use phylotag::{
    build_tag, check_compatibility, export_dot, majority_rule_tree, serialize_newick,
    strict_consensus_tree, threshold_consensus, Compatibility, TreeCollection,
};

use crate::io::read_collection;
use crate::json::tag_to_json;
use crate::oracles::{
    brute_compat, naive_consensus, random_collection, taxon_names, BruteCompat, ConsensusMode,
    RandomSpec, TopologyEnumerator,
};
use crate::report::{order_dependence_report, report_to_json, report_to_text};

pub const EXIT_OK: i32 = 0;
/// IO failures other than reading input, and internal check failures.
pub const EXIT_FAILURE: i32 = 1;
/// Bad arguments, unreadable or malformed input, unmet preconditions.
pub const EXIT_USAGE: i32 = 2;
/// Not compatible, with `--status-compat`.
pub const EXIT_NOT_COMPATIBLE: i32 = 3;

/// Largest tree count `smith --all-orders` accepts.
pub const MAX_ALL_ORDERS_TREES: usize = 10;

#[derive(Debug, Parser)]
#[command(
    name = "phylotag",
    version,
    about = "Tree alignment graphs, consensus and compatibility for rooted trees"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the TAG and write it as DOT or JSON
    Build(BuildArgs),
    /// Strict, majority-rule or threshold consensus as Newick
    Consensus(ConsensusArgs),
    /// Test compatibility and print a supertree or NOT COMPATIBLE
    Compat(CompatArgs),
    /// Compare procedural TAGs over input orders
    Smith(SmithArgs),
    #[command(hide = true, subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Newick files, one tree per line; `-` reads standard input
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Write here instead of standard output
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, value_enum, default_value = "dot")]
    pub format: GraphFormat,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
#[group(id = "mode", required = true, multiple = false, args = ["majority", "strict", "threshold"])]
pub struct ConsensusArgs {
    #[arg(long)]
    pub majority: bool,
    #[arg(long)]
    pub strict: bool,
    /// Keep clusters found in at least this many trees (more than half)
    #[arg(long, value_name = "T")]
    pub threshold: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CompatArgs {
    /// Exit with status 3 when the trees are not compatible
    #[arg(long)]
    pub status_compat: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SmithArgs {
    /// Try every order of the input trees
    #[arg(long, conflicts_with = "sample")]
    pub all_orders: bool,
    /// Number of orders to try; all of them when they fit
    #[arg(long, default_value_t = 24)]
    pub sample: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Apply the post-processing pass to every procedural TAG
    #[arg(long)]
    pub post_process: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: ReportFormat,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Count (or list) rooted trees on n taxa
    Topologies {
        #[arg(long)]
        taxa: usize,
        #[arg(long)]
        list: bool,
    },
    /// Consensus by direct cluster counting
    Consensus {
        #[arg(
            long,
            conflicts_with = "majority",
            required_unless_present = "majority"
        )]
        strict: bool,
        #[arg(long)]
        majority: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Compatibility by enumeration
    Compat {
        #[command(flatten)]
        common: Common,
    },
    /// Random collection as Newick
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        resolved: bool,
        #[arg(long)]
        partial: bool,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

fn failure(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_FAILURE,
        message: message.to_string(),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "phylotag: {}", f.message);
            f.code
        }
    }
}

fn load(common: &Common) -> Result<TreeCollection, Failure> {
    read_collection(&common.inputs).map_err(usage)
}

fn emit(common: &Common, out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    match &common.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| failure(format!("{}: {e}", path.display())))
        }
        None => out.write_all(text.as_bytes()).map_err(failure),
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Build(a) => {
            let tag = build_tag(&load(&a.common)?);
            let text = match a.format {
                GraphFormat::Dot => export_dot(&tag),
                GraphFormat::Json => tag_to_json(&tag),
            };
            emit(&a.common, out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Consensus(a) => {
            let collection = load(&a.common)?;
            let k = collection.len();
            let tag = build_tag(&collection);
            let result = match a.threshold {
                Some(t) => threshold_consensus(&tag, k, t),
                None if a.strict => strict_consensus_tree(&tag, k),
                None => majority_rule_tree(&tag, k),
            };
            let tree = result.map_err(usage)?.tree;
            emit(&a.common, out, &format!("{}\n", serialize_newick(&tree)))?;
            Ok(EXIT_OK)
        }
        Command::Compat(a) => {
            let collection = load(&a.common)?;
            match check_compatibility(&collection).map_err(failure)? {
                Compatibility::Compatible(tree) => {
                    emit(&a.common, out, &format!("{}\n", serialize_newick(&tree)))?;
                    Ok(EXIT_OK)
                }
                Compatibility::NotCompatible { stuck } => {
                    let mut text = String::from("NOT COMPATIBLE\n");
                    for cluster in stuck {
                        text.push_str(&format!("  {{{}}}\n", cluster.join(",")));
                    }
                    emit(&a.common, out, &text)?;
                    Ok(if a.status_compat {
                        EXIT_NOT_COMPATIBLE
                    } else {
                        EXIT_OK
                    })
                }
            }
        }
        Command::Smith(a) => {
            let collection = load(&a.common)?;
            let sample = if a.all_orders {
                if collection.len() > MAX_ALL_ORDERS_TREES {
                    return Err(usage(format!(
                        "--all-orders supports at most {MAX_ALL_ORDERS_TREES} trees, got {}",
                        collection.len()
                    )));
                }
                usize::MAX
            } else {
                a.sample
            };
            let report = order_dependence_report(&collection, sample, a.seed, a.post_process)
                .map_err(failure)?;
            let text = match a.format {
                ReportFormat::Text => report_to_text(&report),
                ReportFormat::Json => report_to_json(&report),
            };
            emit(&a.common, out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Oracle(o) => oracle(o, out),
    }
}

fn oracle(command: OracleCommand, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        OracleCommand::Topologies { taxa, list } => {
            let topologies = TopologyEnumerator::new(taxon_names(taxa)).map_err(usage)?;
            let text = if list {
                topologies.map(|t| serialize_newick(&t) + "\n").collect()
            } else {
                format!("{}\n", topologies.count())
            };
            out.write_all(text.as_bytes()).map_err(failure)?;
            Ok(EXIT_OK)
        }
        OracleCommand::Consensus { strict, common, .. } => {
            let mode = if strict {
                ConsensusMode::Strict
            } else {
                ConsensusMode::Majority
            };
            let tree = naive_consensus(&load(&common)?, mode).map_err(usage)?;
            emit(&common, out, &format!("{}\n", serialize_newick(&tree)))?;
            Ok(EXIT_OK)
        }
        OracleCommand::Compat { common } => {
            let text = match brute_compat(&load(&common)?).map_err(usage)? {
                BruteCompat::Compatible(tree) => format!("{}\n", serialize_newick(&tree)),
                BruteCompat::NotCompatible => "NOT COMPATIBLE\n".to_string(),
            };
            emit(&common, out, &text)?;
            Ok(EXIT_OK)
        }
        OracleCommand::Random {
            seed,
            n,
            k,
            resolved,
            partial,
        } => {
            if n < 2 || k < 1 {
                return Err(usage("need --n >= 2 and --k >= 1"));
            }
            let collection = random_collection(RandomSpec {
                seed,
                n,
                k,
                resolved,
                partial,
            });
            let text: String = collection
                .trees()
                .map(|t| serialize_newick(t) + "\n")
                .collect();
            out.write_all(text.as_bytes()).map_err(failure)?;
            Ok(EXIT_OK)
        }
    }
}
