//! Network-level simulation: topology, workload, engine, metrics and sweeps.

mod engine;
mod metrics;
mod scenario;
mod sweep;
mod topology;
mod workload;

pub use engine::{run, run_with_options, run_with_query, RunOptions, RunOutput, Simulation, TraceMode};
pub use metrics::{to_csv_string, write_csv, CsvRow, MetricsReport, NodeReport, CSV_HEADER};
pub use scenario::{Popularity, Scenario, ScenarioError, ScenarioFile, Staleness, StalenessValue, DRAIN};
pub use sweep::{run_all, sweep, sweep_cells, PAPER_FRACTIONS};
pub use topology::{
    build_abilene, shortest_path_seed, Adjacency, Link, RouteSeed, TopoNode, Topology, TopologyError,
    DEFAULT_LINK_DELAY,
};
pub use workload::{popularity_ranking, Catalog, RequestStream};
