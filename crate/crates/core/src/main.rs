use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use modsymp::dickson::{perm_irrep, to_canonical_json};
use modsymp::harness::{
    oracle, render_report, run_suite, write_output, Format, HarnessError, SuiteConfig, SuiteName,
};
use modsymp::lietype::{table_csv, table_markdown, table_row, LieGrid};
use modsymp::modrep::{irreducible_d, specht_module, Partition};

#[derive(Parser)]
#[command(name = "modsymp", version, about = "Finite-field computations on symmetric groups, symplectic forms and classical groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Largest degree n used by any sweep.
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    /// Cap on enumerated group elements.
    #[arg(long, default_value_t = modsymp::grp::DEFAULT_CAP)]
    enum_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Run a claim suite and emit a report.
    Verify {
        #[arg(value_enum)]
        suite: SuiteName,
        #[command(flatten)]
        common: Common,
        /// Record wall-clock time per claim (output is then not reproducible).
        #[arg(long)]
        timings: bool,
        /// Run with an empty grid.
        #[arg(long)]
        empty: bool,
    },
    /// Print a results table.
    Table {
        #[arg(value_enum)]
        name: TableName,
        #[command(flatten)]
        common: Common,
    },
    /// Run one of the brute-force oracles.
    Oracle {
        #[arg(value_enum)]
        kind: OracleKind,
        /// Degree for enum-parabolic.
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Use the alternating group in enum-parabolic.
        #[arg(long)]
        alt: bool,
        /// Partition for tableau-count, e.g. 5,2.
        #[arg(long, default_value = "5,2")]
        partition: String,
        /// Rank r of the group C_2^r for decompose-small-module.
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Decompose a random extension module instead of the regular module.
        #[arg(long)]
        random: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Write a computed object as an artifact.
    Dump {
        #[arg(value_enum)]
        object: DumpObject,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Partition for specht / irreducible.
        #[arg(long, default_value = "4,1")]
        partition: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableName {
    /// Intersection dimensions for classical groups.
    Lietype,
    /// Intersection ranks for S_n and A_n.
    Dickson,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    EnumParabolic,
    DecomposeSmallModule,
    TableauCount,
}

#[derive(Clone, Copy, ValueEnum)]
enum DumpObject {
    /// The mod p permutation irrep of S_n.
    PermIrrep,
    /// A Specht module.
    Specht,
    /// An irreducible D^λ.
    Irreducible,
    /// The classical-group table.
    LieTable,
}

fn config(common: &Common) -> SuiteConfig {
    SuiteConfig {
        max_n: common.max_n,
        enum_cap: common.enum_cap,
        format: common.format,
        jobs: common.jobs,
        seed: common.seed,
        ..SuiteConfig::default()
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn json_line(v: &impl serde::Serialize) -> String {
    let mut s = to_canonical_json(v);
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => fail(e.exit_code() as u8, e),
    }
}

fn run(command: Command) -> Result<u8, HarnessError> {
    match command {
        Command::Verify { suite, common, timings, empty } => {
            let mut cfg = config(&common);
            cfg.timings = timings;
            if empty {
                cfg.grid = modsymp::harness::Grid::empty();
            }
            let report = run_suite(suite, &cfg)?;
            write_output(common.out.as_deref(), &render_report(&report, common.format))?;
            Ok(report.exit_code() as u8)
        }
        Command::Table { name, common } => {
            let text = match name {
                TableName::Lietype => {
                    let rows = LieGrid::default()
                        .points()
                        .into_iter()
                        .map(|(f, m, q)| table_row(f, m, q))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| HarnessError::Config(e.to_string()))?;
                    match common.format {
                        Format::Csv => table_csv(&rows),
                        Format::Md => table_markdown(&rows),
                        Format::Json => json_line(&rows),
                        Format::Text => rows
                            .iter()
                            .map(|r| format!("({}, m={}, q={}): {}, {}\n", r.family, r.m, r.q, r.computed, if r.matches { "pass" } else { "fail" }))
                            .collect(),
                    }
                }
                TableName::Dickson => {
                    let mut cfg = config(&common);
                    let grid = modsymp::harness::Grid {
                        dickson_n: modsymp::harness::Grid::default().dickson_n,
                        ..modsymp::harness::Grid::empty()
                    };
                    cfg.grid = grid;
                    let mut report = run_suite(SuiteName::Dickson, &cfg)?;
                    report.claims.retain(|c| c.claim_id.starts_with("siegel-intersection/"));
                    report.summary = modsymp::harness::Summary::of(&report.claims);
                    render_report(&report, common.format)
                }
            };
            write_output(common.out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Oracle { kind, n, alt, partition, rank, random, common } => {
            let value = match kind {
                OracleKind::EnumParabolic => {
                    let r = oracle::enum_parabolic(n, alt, common.enum_cap).map_err(|e| HarnessError::Config(e.to_string()))?;
                    json!({ "kind": "enum_parabolic", "n": n, "alternating": alt, "order": r.order, "rank": r.rank })
                }
                OracleKind::TableauCount => {
                    let lambda: Partition = partition.parse().map_err(|e: modsymp::modrep::ModError| HarnessError::Config(e.to_string()))?;
                    let count = oracle::tableau_count(&lambda).map_err(|e| HarnessError::Config(e.to_string()))?;
                    json!({ "kind": "tableau_count", "partition": lambda.to_string(), "count": count })
                }
                OracleKind::DecomposeSmallModule => {
                    if !(1..=3).contains(&rank) {
                        return Err(HarnessError::Config("rank must be 1, 2 or 3".into()));
                    }
                    let module = if random {
                        use rand::SeedableRng;
                        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(common.seed);
                        oracle::random_extension_module(&mut rng, rank, 6).map_err(|e| HarnessError::Config(e.to_string()))?
                    } else {
                        oracle::regular_module(rank)
                    };
                    let d = oracle::decompose_small_module(&module).map_err(|e| HarnessError::Config(e.to_string()))?;
                    json!({ "kind": "decompose_small_module", "module": module.label, "dim": module.dim, "summand_dims": d.summand_dims, "free_count": d.free_count })
                }
            };
            write_output(common.out.as_deref(), &json_line(&value))?;
            Ok(0)
        }
        Command::Dump { object, n, p, partition, common } => {
            let text = match object {
                DumpObject::PermIrrep => {
                    let rep = perm_irrep(n, p).map_err(|e| HarnessError::Config(e.to_string()))?;
                    json_line(&rep.to_doc())
                }
                DumpObject::Specht | DumpObject::Irreducible => {
                    let lambda: Partition = partition.parse().map_err(|e: modsymp::modrep::ModError| HarnessError::Config(e.to_string()))?;
                    let f = modsymp::gf::make_field(p, 1).map_err(|e| HarnessError::Config(e.to_string()))?;
                    let m = if matches!(object, DumpObject::Specht) { specht_module(&lambda, &f) } else { irreducible_d(&lambda, &f) }
                        .map_err(|e| HarnessError::Config(e.to_string()))?;
                    json_line(&m.to_doc())
                }
                DumpObject::LieTable => {
                    let rows = LieGrid::default()
                        .points()
                        .into_iter()
                        .map(|(f, m, q)| table_row(f, m, q))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| HarnessError::Config(e.to_string()))?;
                    match common.format {
                        Format::Md => table_markdown(&rows),
                        Format::Json => json_line(&rows),
                        _ => table_csv(&rows),
                    }
                }
            };
            write_output(common.out.as_deref(), &text)?;
            Ok(0)
        }
    }
}
