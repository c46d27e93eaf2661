//! Deterministic discrete-event engine.
//!
//! One global queue ordered by `(time, sequence)`. Links delay packets by
//! their propagation delay only. Consumer request streams and nonces come
//! from separate seeded generators, so two runs that differ only in the
//! query setting issue identical request sequences.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::metrics::{MetricsReport, NodeReport};
use super::scenario::{hex, Scenario, ScenarioError, DRAIN};
use super::topology::{shortest_path_seed, Topology};
use super::workload::{popularity_ranking, Catalog, RequestStream};
use crate::content_store::ContentStore;
use crate::forwarding::{
    Effect, NodeConfig, NodeCounters, NodeState, QueryBehavior, QueryMechanism,
};
use crate::name::ContentName;
use crate::packet::{FaceId, InterestPacket, NodeId, Nonce, Packet};
use crate::time::SimTime;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TraceMode {
    #[default]
    Off,
    /// Hash every trace record; the digest lands in the report.
    Hash,
    /// Hash and keep every record.
    Record,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub trace: TraceMode,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: MetricsReport,
    /// `time_ms node event detail` records when tracing with
    /// [`TraceMode::Record`].
    pub trace: Vec<String>,
}

#[derive(Clone, Debug)]
enum EventKind {
    AppInterest { node: NodeId },
    Arrival { node: NodeId, face: FaceId, packet: Packet, sent_at: SimTime },
    PitTimer { node: NodeId },
}

#[derive(Clone, Debug)]
struct Event {
    time: SimTime,
    seq: u64,
    kind: EventKind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        (self.time, self.seq) == (other.time, other.seq)
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.time, self.seq).cmp(&(other.time, other.seq))
    }
}

#[derive(Debug)]
struct Consumer {
    stream: RequestStream,
    pending: HashMap<ContentName, Vec<SimTime>>,
    emitted: u64,
    satisfied: u64,
    unsatisfied: u64,
    response_sum_us: u128,
}

impl Consumer {
    fn satisfy(&mut self, name: &ContentName, now: SimTime) {
        for emitted in self.pending.remove(name).unwrap_or_default() {
            self.satisfied += 1;
            self.response_sum_us += u128::from(now.saturating_sub(emitted).as_micros());
        }
    }

    fn abandon(&mut self, name: &ContentName) {
        self.unsatisfied += self.pending.remove(name).map_or(0, |v| v.len() as u64);
    }

    fn abandon_last(&mut self, name: &ContentName) {
        if let Some(list) = self.pending.get_mut(name) {
            if list.pop().is_some() {
                self.unsatisfied += 1;
            }
            if list.is_empty() {
                self.pending.remove(name);
            }
        }
    }
}

struct Tracer {
    mode: TraceMode,
    hasher: Sha256,
    lines: Vec<String>,
}

impl Tracer {
    fn record(&mut self, line: String) {
        self.hasher.update(line.as_bytes());
        self.hasher.update(b"\n");
        if self.mode == TraceMode::Record {
            self.lines.push(line);
        }
    }
}

/// A fully wired network ready to run one scenario.
pub struct Simulation<Q: QueryBehavior = QueryMechanism> {
    scenario: Scenario,
    topology: Topology,
    nodes: Vec<NodeState<Q>>,
    consumers: Vec<Consumer>,
    catalog: Catalog,
    queue: BinaryHeap<Reverse<Event>>,
    seq: u64,
    now: SimTime,
    interval: SimTime,
    traffic_end: SimTime,
    end: SimTime,
    nonce_rng: ChaCha8Rng,
    tracer: Option<Tracer>,
    events: u64,
    effects: Vec<Effect>,
}

impl<Q: QueryBehavior> Simulation<Q> {
    pub fn new(scenario: &Scenario, query: Q, options: &RunOptions) -> Result<Self, ScenarioError> {
        scenario.validate()?;
        let topology = scenario.topology.clone();
        let catalog = Catalog::build(&topology, scenario.names_per_producer);
        let ranking = popularity_ranking(catalog.len(), scenario.seed);
        let config = NodeConfig {
            strategy: scenario.strategy,
            fib: scenario.fib_config(),
            pit_init_timeout: scenario.pit_init_timeout,
            payload_size: scenario.payload_size,
        };
        let seeds = shortest_path_seed(&topology);

        let mut nodes = Vec::with_capacity(topology.node_count());
        let mut consumers = Vec::with_capacity(topology.node_count());
        for topo_node in topology.nodes() {
            let id = topo_node.id;
            let faces = topology.adjacency(id).iter().map(|a| a.face).collect();
            let mut node = NodeState::new(
                id,
                ContentStore::new(scenario.cache_capacity, scenario.cache_policy),
                faces,
                config.clone(),
                query.clone(),
            );
            node.set_producer(topo_node.prefix.clone(), catalog.owned_by(id).cloned());
            for seed in &seeds[id.0] {
                node.fib.seed_route(seed.prefix.clone(), seed.face, seed.metric);
            }
            nodes.push(node);
            consumers.push(Consumer {
                stream: RequestStream::new(scenario.popularity, ranking.clone(), scenario.seed, id),
                pending: HashMap::new(),
                emitted: 0,
                satisfied: 0,
                unsatisfied: 0,
                response_sum_us: 0,
            });
        }

        let interval = SimTime::from_millis_f64(1_000.0 / scenario.interest_rate).max(SimTime::from_micros(1));
        let traffic_end = scenario.duration_time();
        let tracer = match options.trace {
            TraceMode::Off => None,
            mode => Some(Tracer {
                mode,
                hasher: Sha256::new(),
                lines: Vec::new(),
            }),
        };

        let mut sim = Simulation {
            scenario: scenario.clone(),
            topology,
            nodes,
            consumers,
            catalog,
            queue: BinaryHeap::new(),
            seq: 0,
            now: SimTime::ZERO,
            interval,
            traffic_end,
            end: traffic_end + DRAIN,
            nonce_rng: ChaCha8Rng::seed_from_u64(scenario.seed ^ 0x6e6f_6e63_6500_0000),
            tracer,
            events: 0,
            effects: Vec::new(),
        };
        for node in 0..sim.nodes.len() {
            let phase = sim.consumers[node].stream.phase();
            let first = SimTime::from_micros((phase * interval.as_micros() as f64) as u64);
            if first < traffic_end {
                sim.schedule(first, EventKind::AppInterest { node: NodeId(node) });
            }
        }
        Ok(sim)
    }

    fn schedule(&mut self, time: SimTime, kind: EventKind) {
        assert!(time >= self.now, "event scheduled into the past");
        self.seq += 1;
        self.queue.push(Reverse(Event {
            time,
            seq: self.seq,
            kind,
        }));
    }

    fn trace(&mut self, node: NodeId, event: &str, detail: impl FnOnce() -> String) {
        if let Some(tracer) = self.tracer.as_mut() {
            let line = format!("{} {} {} {}", self.now, node.0, event, detail());
            tracer.record(line);
        }
    }

    pub fn now(&self) -> SimTime {
        self.now
    }

    pub fn nodes(&self) -> &[NodeState<Q>] {
        &self.nodes
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    /// Processes the next event. Returns false once the queue is exhausted
    /// or the drain deadline has passed.
    pub fn step(&mut self) -> bool {
        let Some(Reverse(event)) = self.queue.peek() else {
            return false;
        };
        if event.time > self.end {
            return false;
        }
        let Reverse(event) = self.queue.pop().expect("peeked");
        self.now = event.time;
        self.events += 1;
        match event.kind {
            EventKind::AppInterest { node } => self.app_interest(node),
            EventKind::Arrival {
                node,
                face,
                packet,
                sent_at,
            } => {
                let mut effects = std::mem::take(&mut self.effects);
                match packet {
                    Packet::Interest(interest) => {
                        self.trace(node, "rx_interest", || {
                            format!("{} face={} nonce={} sent={}", interest.name, face.0, interest.nonce.0, sent_at)
                        });
                        self.nodes[node.0].on_interest(interest, face, self.now, &mut effects);
                    }
                    Packet::Data(data) => {
                        self.trace(node, "rx_data", || {
                            let query = data
                                .query_result
                                .as_ref()
                                .map_or(String::new(), |q| format!(" query={}@{}", q.name, q.holder.0));
                            format!("{} face={} sent={}{}", data.name, face.0, sent_at, query)
                        });
                        self.nodes[node.0].on_data(data, face, self.now, &mut effects);
                    }
                }
                self.apply(node, &mut effects);
                self.effects = effects;
            }
            EventKind::PitTimer { node } => {
                self.trace(node, "timer", String::new);
                let mut effects = std::mem::take(&mut self.effects);
                self.nodes[node.0].on_timer(self.now, &mut self.nonce_rng, &mut effects);
                self.apply(node, &mut effects);
                self.effects = effects;
            }
        }
        true
    }

    fn app_interest(&mut self, node: NodeId) {
        let index = self.consumers[node.0].stream.next_index();
        let name = self.catalog.names()[index].clone();
        let nonce = Nonce(self.nonce_rng.random());
        let interest = InterestPacket::new(name.clone(), nonce, self.now, node);
        let consumer = &mut self.consumers[node.0];
        consumer.emitted += 1;
        consumer
            .pending
            .entry(name.clone())
            .or_default()
            .push(interest.emit_time());
        self.trace(node, "app_interest", || format!("{} nonce={}", name, nonce.0));

        let mut effects = std::mem::take(&mut self.effects);
        self.nodes[node.0].on_interest(interest, FaceId::APP, self.now, &mut effects);
        self.apply(node, &mut effects);
        self.effects = effects;

        let next = self.now + self.interval;
        if next < self.traffic_end {
            self.schedule(next, EventKind::AppInterest { node });
        }
    }

    fn apply(&mut self, node: NodeId, effects: &mut Vec<Effect>) {
        for effect in effects.drain(..) {
            match effect {
                Effect::SendInterest { face, interest } => {
                    self.transmit(node, face, Packet::Interest(interest));
                }
                Effect::SendData { face, data } => {
                    self.transmit(node, face, Packet::Data(data));
                }
                Effect::Deliver { data } => {
                    self.trace(node, "deliver", || data.name.to_string());
                    self.consumers[node.0].satisfy(&data.name, self.now);
                }
                Effect::ArmTimer { deadline, .. } => {
                    self.schedule(deadline, EventKind::PitTimer { node });
                }
                Effect::GiveUp { name, app_waiting } => {
                    self.trace(node, "give_up", || format!("{name} app={app_waiting}"));
                    if app_waiting {
                        self.consumers[node.0].abandon(&name);
                    }
                }
                Effect::AppInterestDropped { name } => {
                    self.trace(node, "app_dropped", || name.to_string());
                    self.consumers[node.0].abandon_last(&name);
                }
            }
        }
    }

    fn transmit(&mut self, node: NodeId, face: FaceId, packet: Packet) {
        let Some(adj) = self.topology.face(node, face).copied() else {
            return;
        };
        let sent_at = self.now;
        self.schedule(
            sent_at + adj.delay,
            EventKind::Arrival {
                node: adj.peer,
                face: adj.peer_face,
                packet,
                sent_at,
            },
        );
    }

    /// Runs to the drain deadline and freezes the metrics.
    pub fn run_to_end(mut self) -> RunOutput {
        while self.step() {}
        self.finish()
    }

    fn finish(mut self) -> RunOutput {
        let mut totals = NodeCounters::default();
        let mut per_node = Vec::with_capacity(self.nodes.len());
        let (mut emitted, mut satisfied, mut unsatisfied, mut sum) = (0u64, 0u64, 0u64, 0u128);
        for (node, consumer) in self.nodes.iter().zip(self.consumers.iter_mut()) {
            let leftover: u64 = consumer.pending.values().map(|v| v.len() as u64).sum();
            consumer.pending.clear();
            consumer.unsatisfied += leftover;
            totals.accumulate(&node.counters);
            emitted += consumer.emitted;
            satisfied += consumer.satisfied;
            unsatisfied += consumer.unsatisfied;
            sum += consumer.response_sum_us;
            per_node.push(NodeReport {
                node: node.id.0,
                label: self.topology.node(node.id).label.clone(),
                emitted: consumer.emitted,
                satisfied: consumer.satisfied,
                unsatisfied: consumer.unsatisfied,
                avg_response_time_ms: mean_ms(consumer.response_sum_us, consumer.satisfied),
                counters: node.counters.clone(),
            });
        }
        let (trace_hash, trace) = match self.tracer.take() {
            Some(tracer) => (Some(hex(&tracer.hasher.finalize())), tracer.lines),
            None => (None, Vec::new()),
        };
        let scenario = &self.scenario;
        let report = MetricsReport {
            scenario_id: scenario.id(),
            scenario_hash: scenario.hash(),
            seed: scenario.seed,
            strategy: scenario.strategy,
            policy: scenario.cache_policy,
            query_enabled: self.nodes.first().is_some_and(|n| n.query.enabled()),
            cache_fraction: scenario.cache_fraction(),
            cache_capacity: scenario.cache_capacity,
            emitted,
            satisfied,
            unsatisfied,
            flood_events: totals.flood_events,
            flood_packets: totals.flood_packets,
            interest_tx: totals.interest_tx,
            retransmissions: totals.retransmissions,
            avg_response_time_ms: mean_ms(sum, satisfied),
            totals,
            per_node,
            events: self.events,
            trace_hash,
        };
        RunOutput { report, trace }
    }
}

fn mean_ms(sum_us: u128, count: u64) -> f64 {
    if count == 0 {
        0.0
    } else {
        sum_us as f64 / count as f64 / 1_000.0
    }
}

/// Runs `scenario` with the query extension as configured by
/// `scenario.query_enabled`.
pub fn run(scenario: &Scenario) -> Result<MetricsReport, ScenarioError> {
    Ok(run_with_options(scenario, &RunOptions::default())?.report)
}

pub fn run_with_options(scenario: &Scenario, options: &RunOptions) -> Result<RunOutput, ScenarioError> {
    let query = QueryMechanism::new(scenario.query_enabled, scenario.query_gate_fraction);
    run_with_query(scenario, query, options)
}

/// Runs `scenario` with an explicit query behavior, ignoring
/// `scenario.query_enabled`.
pub fn run_with_query<Q: QueryBehavior>(
    scenario: &Scenario,
    query: Q,
    options: &RunOptions,
) -> Result<RunOutput, ScenarioError> {
    Ok(Simulation::new(scenario, query, options)?.run_to_end())
}
