//! Experiment configuration and its flat key-value file format.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::topology::{build_abilene, Topology, TopologyError};
use crate::content_store::CachePolicy;
use crate::fib::{fib_threshold, FibConfig};
use crate::forwarding::ForwardingStrategy;
use crate::time::SimTime;

/// Quiet period after traffic stops, letting in-flight exchanges settle.
pub const DRAIN: SimTime = SimTime::from_secs(5);

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid scenario: {field}: {message}")]
    Invalid { field: &'static str, message: String },
    #[error("cannot parse scenario file: {0}")]
    Parse(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

impl ScenarioError {
    pub fn is_io(&self) -> bool {
        matches!(
            self,
            ScenarioError::Io { .. } | ScenarioError::Topology(TopologyError::Io { .. })
        )
    }
}

fn invalid(field: &'static str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid {
        field,
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Popularity {
    Uniform,
    Zipf(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Staleness {
    /// Derived from cache capacity and content rate.
    Auto,
    Fixed(SimTime),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    /// `abilene` or the path the topology was loaded from.
    pub topology_source: String,
    pub topology: Topology,
    pub strategy: ForwardingStrategy,
    pub cache_policy: CachePolicy,
    pub cache_capacity: usize,
    pub query_enabled: bool,
    /// Interests per second issued by each node's consumer.
    pub interest_rate: f64,
    pub names_per_producer: usize,
    pub popularity: Popularity,
    pub query_gate_fraction: f64,
    pub max_green: usize,
    pub fib_staleness: Staleness,
    /// Content rate for the staleness threshold; defaults to `interest_rate`.
    pub content_rate: Option<f64>,
    pub pit_init_timeout: SimTime,
    /// Seconds of traffic.
    pub duration: f64,
    pub seed: u64,
    pub payload_size: u32,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario::table1()
    }
}

impl Scenario {
    /// Abilene, 100 interests/s per node, 1200 names, 180 s, normalized
    /// cache 0.4, smart flooding with LRU.
    pub fn table1() -> Self {
        Scenario {
            topology_source: "abilene".into(),
            topology: build_abilene(),
            strategy: ForwardingStrategy::SmartFlooding,
            cache_policy: CachePolicy::Lru,
            cache_capacity: 480,
            query_enabled: true,
            interest_rate: 100.0,
            names_per_producer: 100,
            popularity: Popularity::Zipf(1.0),
            query_gate_fraction: 0.5,
            max_green: 2,
            fib_staleness: Staleness::Auto,
            content_rate: None,
            pit_init_timeout: SimTime::from_secs(2),
            duration: 180.0,
            seed: 1,
            payload_size: 1024,
        }
    }

    pub fn catalog_size(&self) -> usize {
        self.names_per_producer * self.topology.node_count()
    }

    pub fn cache_fraction(&self) -> f64 {
        self.cache_capacity as f64 / self.catalog_size() as f64
    }

    /// Capacity for a normalized cache size: `round(fraction * catalog)`.
    pub fn capacity_for_fraction(&self, fraction: f64) -> Result<usize, ScenarioError> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(invalid("cache_fraction", format!("must be in (0, 1], got {fraction}")));
        }
        Ok((fraction * self.catalog_size() as f64).round() as usize)
    }

    pub fn set_cache_fraction(&mut self, fraction: f64) -> Result<(), ScenarioError> {
        self.cache_capacity = self.capacity_for_fraction(fraction)?;
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.names_per_producer == 0 {
            return Err(invalid("names_per_producer", "must be at least 1"));
        }
        if self.cache_capacity == 0 {
            return Err(invalid("cache_capacity", "must be at least 1"));
        }
        if self.cache_capacity > self.catalog_size() {
            return Err(invalid(
                "cache_capacity",
                format!(
                    "{} exceeds catalog size {}",
                    self.cache_capacity,
                    self.catalog_size()
                ),
            ));
        }
        if !(self.interest_rate > 0.0 && self.interest_rate.is_finite()) {
            return Err(invalid("interest_rate", format!("must be positive, got {}", self.interest_rate)));
        }
        if let Popularity::Zipf(s) = self.popularity {
            if !(s > 0.0 && s.is_finite()) {
                return Err(invalid("zipf_exponent", format!("must be positive, got {s}")));
            }
        }
        if !(self.query_gate_fraction > 0.0 && self.query_gate_fraction <= 1.0) {
            return Err(invalid(
                "query_gate_fraction",
                format!("must be in (0, 1], got {}", self.query_gate_fraction),
            ));
        }
        if self.max_green == 0 {
            return Err(invalid("max_green", "must be at least 1"));
        }
        if let Staleness::Fixed(t) = self.fib_staleness {
            if t == SimTime::ZERO {
                return Err(invalid("fib_staleness_T", "must be positive"));
            }
        }
        if let Some(rate) = self.content_rate {
            if !(rate > 0.0 && rate.is_finite()) {
                return Err(invalid("content_rate_F", format!("must be positive, got {rate}")));
            }
        }
        if self.pit_init_timeout == SimTime::ZERO {
            return Err(invalid("pit_init_timeout", "must be positive"));
        }
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return Err(invalid("duration", format!("must be non-negative, got {}", self.duration)));
        }
        Ok(())
    }

    pub fn staleness_threshold(&self) -> SimTime {
        match self.fib_staleness {
            Staleness::Fixed(t) => t,
            Staleness::Auto => fib_threshold(
                self.cache_capacity as f64,
                self.content_rate.unwrap_or(self.interest_rate),
            )
            .expect("validated scenario has positive cache and rate"),
        }
    }

    pub fn fib_config(&self) -> FibConfig {
        FibConfig::new(self.max_green, self.staleness_threshold())
    }

    pub fn duration_time(&self) -> SimTime {
        SimTime::from_millis_f64(self.duration * 1_000.0)
    }

    /// Flat key-value text that parses back to this scenario.
    pub fn to_file_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "topology = {:?}", self.topology_source);
        let _ = writeln!(out, "strategy = {:?}", self.strategy.as_str());
        let _ = writeln!(out, "cache_policy = {:?}", self.cache_policy.as_str());
        let _ = writeln!(out, "cache_capacity = {}", self.cache_capacity);
        let _ = writeln!(out, "query_enabled = {}", self.query_enabled);
        let _ = writeln!(out, "interest_rate = {:?}", self.interest_rate);
        let _ = writeln!(out, "catalog_size = {}", self.catalog_size());
        let _ = writeln!(out, "names_per_producer = {}", self.names_per_producer);
        match self.popularity {
            Popularity::Uniform => {
                let _ = writeln!(out, "popularity = \"uniform\"");
            }
            Popularity::Zipf(s) => {
                let _ = writeln!(out, "popularity = \"zipf\"\nzipf_exponent = {s:?}");
            }
        }
        let _ = writeln!(out, "query_gate_fraction = {:?}", self.query_gate_fraction);
        let _ = writeln!(out, "max_green = {}", self.max_green);
        match self.fib_staleness {
            Staleness::Auto => {
                let _ = writeln!(out, "fib_staleness_T = \"auto\"");
            }
            Staleness::Fixed(t) => {
                let _ = writeln!(out, "fib_staleness_T = {:?}", t.as_millis_f64());
            }
        }
        if let Some(rate) = self.content_rate {
            let _ = writeln!(out, "content_rate_F = {rate:?}");
        }
        let _ = writeln!(out, "pit_init_timeout = {:?}", self.pit_init_timeout.as_millis_f64());
        let _ = writeln!(out, "duration = {:?}", self.duration);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "payload_size = {}", self.payload_size);
        out
    }

    /// SHA-256 over the scenario text and the resolved topology.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_file_text().as_bytes());
        hasher.update(self.topology.to_text().as_bytes());
        hex(&hasher.finalize())
    }

    /// Short identifier for reports: the first 12 hex digits of the hash of
    /// everything except the seed.
    pub fn id(&self) -> String {
        let mut unseeded = self.clone();
        unseeded.seed = 0;
        unseeded.hash()[..12].to_string()
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, ScenarioError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let file = ScenarioFile::parse(&text)?;
        let mut scenario = Scenario::table1();
        file.apply(&mut scenario, path.parent())?;
        scenario.validate()?;
        Ok(scenario)
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(bytes.len() * 2), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// `fib_staleness_T` accepts `"auto"` or a number of milliseconds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StalenessValue {
    Millis(f64),
    Keyword(String),
}

/// One optional value per scenario key. Used both for scenario files and
/// for command-line overrides, which are applied on top of a file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub topology: Option<String>,
    pub strategy: Option<String>,
    pub cache_policy: Option<String>,
    pub cache_capacity: Option<usize>,
    pub cache_fraction: Option<f64>,
    pub query_enabled: Option<bool>,
    pub interest_rate: Option<f64>,
    pub catalog_size: Option<usize>,
    pub names_per_producer: Option<usize>,
    pub popularity: Option<String>,
    pub zipf_exponent: Option<f64>,
    pub query_gate_fraction: Option<f64>,
    pub max_green: Option<usize>,
    #[serde(rename = "fib_staleness_T")]
    pub fib_staleness_t: Option<StalenessValue>,
    #[serde(rename = "content_rate_F")]
    pub content_rate_f: Option<f64>,
    pub pit_init_timeout: Option<f64>,
    pub duration: Option<f64>,
    pub seed: Option<u64>,
    pub payload_size: Option<u32>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        toml::from_str(text).map_err(|e| ScenarioError::Parse(e.message().to_string()))
    }

    /// Writes every present key onto `scenario`. Relative topology paths
    /// resolve against `base_dir`. Does not run whole-scenario validation.
    pub fn apply(&self, scenario: &mut Scenario, base_dir: Option<&Path>) -> Result<(), ScenarioError> {
        if let Some(topology) = &self.topology {
            if topology == "abilene" {
                scenario.topology = build_abilene();
                scenario.topology_source = "abilene".into();
            } else {
                let mut path = PathBuf::from(topology);
                if path.is_relative() {
                    if let Some(base) = base_dir {
                        path = base.join(path);
                    }
                }
                scenario.topology = Topology::from_file(&path)?;
                scenario.topology_source = path.display().to_string();
            }
        }
        if let Some(s) = &self.strategy {
            scenario.strategy = s.parse().map_err(|m| invalid("strategy", m))?;
        }
        if let Some(p) = &self.cache_policy {
            scenario.cache_policy = p.parse().map_err(|m| invalid("cache_policy", m))?;
        }
        if let Some(n) = self.names_per_producer {
            scenario.names_per_producer = n;
        }
        if let Some(total) = self.catalog_size {
            let producers = scenario.topology.node_count();
            if total % producers != 0 {
                return Err(invalid(
                    "catalog_size",
                    format!("{total} is not a multiple of the {producers} producers"),
                ));
            }
            if self.names_per_producer.is_some_and(|n| n * producers != total) {
                return Err(invalid(
                    "catalog_size",
                    format!("{total} != names_per_producer x {producers} producers"),
                ));
            }
            scenario.names_per_producer = total / producers;
        }
        match (self.cache_capacity, self.cache_fraction) {
            (Some(_), Some(_)) => {
                return Err(invalid(
                    "cache_capacity",
                    "give cache_capacity or cache_fraction, not both",
                ))
            }
            (Some(c), None) => scenario.cache_capacity = c,
            (None, Some(f)) => scenario.set_cache_fraction(f)?,
            (None, None) => {}
        }
        if let Some(q) = self.query_enabled {
            scenario.query_enabled = q;
        }
        if let Some(r) = self.interest_rate {
            scenario.interest_rate = r;
        }
        match self.popularity.as_deref() {
            Some("uniform") => {
                if self.zipf_exponent.is_some() {
                    return Err(invalid("zipf_exponent", "not allowed with uniform popularity"));
                }
                scenario.popularity = Popularity::Uniform;
            }
            Some("zipf") => {
                let s = self.zipf_exponent.unwrap_or(match scenario.popularity {
                    Popularity::Zipf(s) => s,
                    Popularity::Uniform => 1.0,
                });
                scenario.popularity = Popularity::Zipf(s);
            }
            Some(other) => {
                return Err(invalid(
                    "popularity",
                    format!("unknown popularity {other:?} (expected zipf or uniform)"),
                ))
            }
            None => {
                if let Some(s) = self.zipf_exponent {
                    scenario.popularity = Popularity::Zipf(s);
                }
            }
        }
        if let Some(g) = self.query_gate_fraction {
            scenario.query_gate_fraction = g;
        }
        if let Some(m) = self.max_green {
            scenario.max_green = m;
        }
        match &self.fib_staleness_t {
            Some(StalenessValue::Keyword(k)) if k == "auto" => scenario.fib_staleness = Staleness::Auto,
            Some(StalenessValue::Keyword(k)) => {
                return Err(invalid(
                    "fib_staleness_T",
                    format!("expected \"auto\" or milliseconds, got {k:?}"),
                ))
            }
            Some(StalenessValue::Millis(ms)) => {
                if !(*ms > 0.0 && ms.is_finite()) {
                    return Err(invalid("fib_staleness_T", format!("must be positive, got {ms}")));
                }
                scenario.fib_staleness = Staleness::Fixed(SimTime::from_millis_f64(*ms));
            }
            None => {}
        }
        if let Some(f) = self.content_rate_f {
            scenario.content_rate = Some(f);
        }
        if let Some(ms) = self.pit_init_timeout {
            if !(ms > 0.0 && ms.is_finite()) {
                return Err(invalid("pit_init_timeout", format!("must be positive, got {ms}")));
            }
            scenario.pit_init_timeout = SimTime::from_millis_f64(ms);
        }
        if let Some(d) = self.duration {
            scenario.duration = d;
        }
        if let Some(s) = self.seed {
            scenario.seed = s;
        }
        if let Some(p) = self.payload_size {
            scenario.payload_size = p;
        }
        Ok(())
    }
}
