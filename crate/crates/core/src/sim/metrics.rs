//! Run reports and the CSV row schema.

use std::io::Write;

use serde::Serialize;

use crate::content_store::CachePolicy;
use crate::forwarding::{ForwardingStrategy, NodeCounters};

/// Fixed CSV header, one row per run.
pub const CSV_HEADER: [&str; 12] = [
    "scenario_id",
    "seed",
    "strategy",
    "policy",
    "query_enabled",
    "cache_fraction",
    "flood_events",
    "flood_packets",
    "interest_tx",
    "retransmissions",
    "unsatisfied",
    "avg_response_time_ms",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodeReport {
    pub node: usize,
    pub label: String,
    pub emitted: u64,
    pub satisfied: u64,
    pub unsatisfied: u64,
    pub avg_response_time_ms: f64,
    pub counters: NodeCounters,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsReport {
    pub scenario_id: String,
    pub scenario_hash: String,
    pub seed: u64,
    pub strategy: ForwardingStrategy,
    pub policy: CachePolicy,
    pub query_enabled: bool,
    pub cache_fraction: f64,
    pub cache_capacity: usize,
    /// Interests issued by consumers.
    pub emitted: u64,
    pub satisfied: u64,
    /// Consumer interests abandoned or still pending when the run froze.
    pub unsatisfied: u64,
    pub flood_events: u64,
    pub flood_packets: u64,
    pub interest_tx: u64,
    pub retransmissions: u64,
    /// Mean over satisfied consumer interests; 0 when none were satisfied.
    pub avg_response_time_ms: f64,
    pub totals: NodeCounters,
    pub per_node: Vec<NodeReport>,
    pub events: u64,
    pub trace_hash: Option<String>,
}

impl MetricsReport {
    pub fn csv_row(&self) -> CsvRow {
        CsvRow {
            scenario_id: self.scenario_id.clone(),
            seed: self.seed,
            strategy: self.strategy.as_str(),
            policy: self.policy.as_str(),
            query_enabled: self.query_enabled,
            cache_fraction: format!("{:.3}", self.cache_fraction),
            flood_events: self.flood_events,
            flood_packets: self.flood_packets,
            interest_tx: self.interest_tx,
            retransmissions: self.retransmissions,
            unsatisfied: self.unsatisfied,
            avg_response_time_ms: format!("{:.4}", self.avg_response_time_ms),
        }
    }
}

/// Field order matches [`CSV_HEADER`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CsvRow {
    pub scenario_id: String,
    pub seed: u64,
    pub strategy: &'static str,
    pub policy: &'static str,
    pub query_enabled: bool,
    pub cache_fraction: String,
    pub flood_events: u64,
    pub flood_packets: u64,
    pub interest_tx: u64,
    pub retransmissions: u64,
    pub unsatisfied: u64,
    pub avg_response_time_ms: String,
}

/// Writes report rows as CSV, with the header only when `header` is set.
pub fn write_csv<'a, W: Write>(
    out: W,
    reports: impl IntoIterator<Item = &'a MetricsReport>,
    header: bool,
) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(header).from_writer(out);
    for report in reports {
        writer.serialize(report.csv_row())?;
    }
    writer.flush()?;
    Ok(())
}

/// Renders reports to a CSV string with header.
pub fn to_csv_string<'a>(reports: impl IntoIterator<Item = &'a MetricsReport>) -> String {
    let mut buf = Vec::new();
    let mut reports = reports.into_iter().peekable();
    if reports.peek().is_none() {
        return CSV_HEADER.join(",") + "\n";
    }
    write_csv(&mut buf, reports, true).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}
