//! Command-line driver: `run`, `sweep` and `validate-topology`.
//!
//! Exit codes: 0 success, 1 invalid scenario or arguments, 2 I/O failure.

use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::content_store::CachePolicy;
use crate::sim::{
    run_all, run_with_options, sweep_cells, write_csv, MetricsReport, RunOptions, Scenario,
    ScenarioError, ScenarioFile, StalenessValue, Topology, TraceMode, PAPER_FRACTIONS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ccn-qsim", version, about = "CCN simulator with query-based FIB updates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario and emit one CSV row.
    Run(RunArgs),
    /// Run a grid of cache fractions x policies x query modes x seeds.
    Sweep(SweepArgs),
    /// Parse and check a topology file.
    ValidateTopology {
        path: PathBuf,
    },
}

/// Scenario file plus per-field overrides; flags win over file values.
#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// Flat key-value scenario file.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// `abilene` or a topology file path.
    #[arg(long)]
    pub topology: Option<String>,
    /// smart-flooding | best-route
    #[arg(long)]
    pub strategy: Option<String>,
    /// lru | lfu | fifo
    #[arg(long)]
    pub policy: Option<String>,
    /// Normalized cache size in (0, 1].
    #[arg(long)]
    pub cache_fraction: Option<f64>,
    /// Cache size in chunks.
    #[arg(long, conflicts_with = "cache_fraction")]
    pub cache_capacity: Option<usize>,
    /// on | off
    #[arg(long)]
    pub query: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Seconds of traffic.
    #[arg(long)]
    pub duration: Option<f64>,
    /// Interests per second per consumer.
    #[arg(long)]
    pub rate: Option<f64>,
    /// Zipf popularity with this exponent.
    #[arg(long, conflicts_with = "uniform")]
    pub zipf: Option<f64>,
    /// Uniform popularity.
    #[arg(long)]
    pub uniform: bool,
    #[arg(long)]
    pub names_per_producer: Option<usize>,
    #[arg(long)]
    pub catalog_size: Option<usize>,
    /// Eviction-rank fraction under which a query is answered.
    #[arg(long)]
    pub gate_fraction: Option<f64>,
    /// Maximum green faces per FIB entry.
    #[arg(long)]
    pub max_green: Option<usize>,
    /// FIB staleness threshold: `auto` or milliseconds.
    #[arg(long)]
    pub staleness: Option<String>,
    /// Content rate used by the automatic staleness threshold.
    #[arg(long)]
    pub content_rate: Option<f64>,
    /// Initial PIT timer in milliseconds.
    #[arg(long)]
    pub pit_timeout: Option<f64>,
    /// Data payload size in bytes.
    #[arg(long)]
    pub payload_size: Option<u32>,
}

impl ScenarioArgs {
    pub fn overrides(&self) -> Result<ScenarioFile, ScenarioError> {
        let query_enabled = match self.query.as_deref() {
            None => None,
            Some("on") => Some(true),
            Some("off") => Some(false),
            Some(other) => {
                return Err(ScenarioError::Invalid {
                    field: "query_enabled",
                    message: format!("expected on or off, got {other:?}"),
                })
            }
        };
        let popularity = if self.uniform {
            Some("uniform".to_string())
        } else if self.zipf.is_some() {
            Some("zipf".to_string())
        } else {
            None
        };
        let fib_staleness_t = self.staleness.as_deref().map(|s| match s.parse::<f64>() {
            Ok(ms) => StalenessValue::Millis(ms),
            Err(_) => StalenessValue::Keyword(s.to_string()),
        });
        Ok(ScenarioFile {
            topology: self.topology.clone(),
            strategy: self.strategy.clone(),
            cache_policy: self.policy.clone(),
            cache_capacity: self.cache_capacity,
            cache_fraction: self.cache_fraction,
            query_enabled,
            interest_rate: self.rate,
            catalog_size: self.catalog_size,
            names_per_producer: self.names_per_producer,
            popularity,
            zipf_exponent: self.zipf,
            query_gate_fraction: self.gate_fraction,
            max_green: self.max_green,
            fib_staleness_t,
            content_rate_f: self.content_rate,
            pit_init_timeout: self.pit_timeout,
            duration: self.duration,
            seed: self.seed,
            payload_size: self.payload_size,
        })
    }

    /// Table I defaults, then the scenario file, then flag overrides.
    pub fn resolve(&self) -> Result<Scenario, ScenarioError> {
        let mut scenario = Scenario::table1();
        if let Some(path) = &self.scenario {
            let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let file = ScenarioFile::parse(&text)?;
            // a fraction in the file must not fight a capacity flag, and vice versa
            let mut file = file;
            if self.cache_capacity.is_some() || self.cache_fraction.is_some() {
                file.cache_capacity = None;
                file.cache_fraction = None;
            }
            file.apply(&mut scenario, path.parent())?;
        }
        self.overrides()?.apply(&mut scenario, None)?;
        scenario.validate()?;
        Ok(scenario)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Append the CSV row here (header written when the file is new).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write the per-event trace here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Comma-separated normalized cache sizes.
    #[arg(long, value_delimiter = ',', default_values_t = PAPER_FRACTIONS.to_vec())]
    pub fractions: Vec<f64>,
    /// Comma-separated replacement policies.
    #[arg(long, value_delimiter = ',', default_value = "lru,lfu,fifo")]
    pub policies: Vec<String>,
    /// Comma-separated query modes (on/off).
    #[arg(long, value_delimiter = ',', default_value = "off,on")]
    pub modes: Vec<String>,
    /// Comma-separated seeds; defaults to the scenario seed.
    #[arg(long)]
    pub seeds: Option<String>,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_seeds(text: &str) -> Result<Vec<u64>, ScenarioError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u64>().map_err(|_| ScenarioError::Invalid {
                field: "seed",
                message: format!("bad seed {s:?}"),
            })
        })
        .collect()
}

fn parse_modes(modes: &[String]) -> Result<Vec<bool>, ScenarioError> {
    modes
        .iter()
        .map(|m| match m.trim() {
            "on" => Ok(true),
            "off" => Ok(false),
            other => Err(ScenarioError::Invalid {
                field: "query_enabled",
                message: format!("expected on or off, got {other:?}"),
            }),
        })
        .collect()
}

fn parse_policies(policies: &[String]) -> Result<Vec<CachePolicy>, ScenarioError> {
    policies
        .iter()
        .map(|p| {
            p.trim().parse().map_err(|message| ScenarioError::Invalid {
                field: "cache_policy",
                message,
            })
        })
        .collect()
}

fn fail(err: &dyn std::fmt::Display, code: i32, stderr: &mut dyn Write) -> i32 {
    let _ = writeln!(stderr, "error: {err}");
    code
}

fn scenario_failure(err: ScenarioError, stderr: &mut dyn Write) -> i32 {
    let code = if err.is_io() { EXIT_IO } else { EXIT_INVALID };
    fail(&err, code, stderr)
}

fn append_csv(path: &Path, reports: &[MetricsReport]) -> io::Result<()> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    write_csv(file, reports, fresh).map_err(io::Error::other)
}

pub fn cmd_run(args: &RunArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let scenario = match args.scenario.resolve() {
        Ok(s) => s,
        Err(e) => return scenario_failure(e, stderr),
    };
    let options = RunOptions {
        trace: if args.trace.is_some() {
            TraceMode::Record
        } else {
            TraceMode::Off
        },
    };
    let output = match run_with_options(&scenario, &options) {
        Ok(o) => o,
        Err(e) => return scenario_failure(e, stderr),
    };
    if let Some(path) = &args.trace {
        let mut text = output.trace.join("\n");
        text.push('\n');
        if let Err(e) = std::fs::write(path, text) {
            return fail(&e, EXIT_IO, stderr);
        }
    }
    let reports = [output.report];
    if let Some(path) = &args.output {
        if let Err(e) = append_csv(path, &reports) {
            return fail(&e, EXIT_IO, stderr);
        }
    }
    if let Err(e) = write_csv(&mut *stdout, &reports, true) {
        return fail(&e, EXIT_IO, stderr);
    }
    EXIT_OK
}

pub fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let base = match args.scenario.resolve() {
        Ok(s) => s,
        Err(e) => return scenario_failure(e, stderr),
    };
    let lists = (|| {
        let seeds = match &args.seeds {
            Some(text) => parse_seeds(text)?,
            None => vec![base.seed],
        };
        Ok::<_, ScenarioError>((parse_policies(&args.policies)?, parse_modes(&args.modes)?, seeds))
    })();
    let (policies, modes, seeds) = match lists {
        Ok(l) => l,
        Err(e) => return scenario_failure(e, stderr),
    };
    let (cells, cell_error) = sweep_cells(&base, &args.fractions, &policies, &modes, &seeds);
    let reports = match run_all(&cells) {
        Ok(r) => r,
        Err(e) => return scenario_failure(e, stderr),
    };
    let written = match &args.output {
        Some(path) => append_csv(path, &reports),
        None => write_csv(&mut *stdout, &reports, true).map_err(io::Error::other),
    };
    if let Err(e) = written {
        return fail(&e, EXIT_IO, stderr);
    }
    match cell_error {
        Some(e) => scenario_failure(e, stderr),
        None => EXIT_OK,
    }
}

pub fn cmd_validate_topology(path: &Path, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match Topology::from_file(path) {
        Ok(topology) => {
            let _ = writeln!(
                stdout,
                "ok: {} nodes, {} links, connected",
                topology.node_count(),
                topology.links().len()
            );
            EXIT_OK
        }
        Err(e @ crate::sim::TopologyError::Io { .. }) => fail(&e, EXIT_IO, stderr),
        Err(e) => fail(&e, EXIT_INVALID, stderr),
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match &cli.command {
        Command::Run(args) => cmd_run(args, stdout, stderr),
        Command::Sweep(args) => cmd_sweep(args, stdout, stderr),
        Command::ValidateTopology { path } => cmd_validate_topology(path, stdout, stderr),
    }
}
