//! Per-router interest and data pipelines.
//!
//! A [`NodeState`] owns one router's CS, PIT and FIB and turns each arriving
//! packet or expired timer into a list of [`Effect`]s for the engine to
//! schedule. The query extension is injected through [`QueryBehavior`].

mod query;
mod strategy;

use std::collections::{BTreeSet, HashSet};

use rand::Rng;
use serde::Serialize;

pub use query::{NoQuery, QueryBehavior, QueryGate, QueryMechanism};
pub use strategy::{select_faces, ForwardingStrategy, Selection};

use crate::content_store::ContentStore;
use crate::fib::{Fib, FibConfig};
use crate::name::ContentName;
use crate::packet::{DataPacket, FaceId, InterestPacket, NodeId, Nonce};
use crate::pit::{Pit, PitDecision};
use crate::time::SimTime;

/// Shortest PIT timer armed from a green face metric.
pub const MIN_PIT_TIMER: SimTime = SimTime::from_millis(50);

#[derive(Clone, Debug, PartialEq)]
pub struct NodeConfig {
    pub strategy: ForwardingStrategy,
    pub fib: FibConfig,
    pub pit_init_timeout: SimTime,
    pub payload_size: u32,
}

/// Monotone per-node counters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NodeCounters {
    pub interest_tx: u64,
    pub data_tx: u64,
    pub flood_events: u64,
    pub flood_packets: u64,
    /// Floods sent on a retransmission attempt.
    pub retry_floods: u64,
    /// Floods over every link face because no FIB face was usable.
    pub blind_floods: u64,
    pub retransmissions: u64,
    pub timeouts: u64,
    pub pit_giveups: u64,
    pub cs_hits: u64,
    pub producer_hits: u64,
    pub aggregated: u64,
    pub duplicates_dropped: u64,
    pub unsolicited_data: u64,
    pub queries_attached: u64,
    pub queries_answered: u64,
    pub query_routes_learned: u64,
}

impl NodeCounters {
    pub fn accumulate(&mut self, other: &NodeCounters) {
        self.interest_tx += other.interest_tx;
        self.data_tx += other.data_tx;
        self.flood_events += other.flood_events;
        self.flood_packets += other.flood_packets;
        self.retry_floods += other.retry_floods;
        self.blind_floods += other.blind_floods;
        self.retransmissions += other.retransmissions;
        self.timeouts += other.timeouts;
        self.pit_giveups += other.pit_giveups;
        self.cs_hits += other.cs_hits;
        self.producer_hits += other.producer_hits;
        self.aggregated += other.aggregated;
        self.duplicates_dropped += other.duplicates_dropped;
        self.unsolicited_data += other.unsolicited_data;
        self.queries_attached += other.queries_attached;
        self.queries_answered += other.queries_answered;
        self.query_routes_learned += other.query_routes_learned;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Effect {
    SendInterest { face: FaceId, interest: InterestPacket },
    SendData { face: FaceId, data: DataPacket },
    /// Data handed to the local application face.
    Deliver { data: DataPacket },
    /// Arm a PIT timer event for this node.
    ArmTimer { name: ContentName, deadline: SimTime },
    /// A PIT entry was abandoned; `app_waiting` when the local application
    /// was among its consumers.
    GiveUp { name: ContentName, app_waiting: bool },
    /// An application interest was dropped as a nonce duplicate.
    AppInterestDropped { name: ContentName },
}

#[derive(Clone, Debug)]
pub struct NodeState<Q: QueryBehavior = QueryMechanism> {
    pub id: NodeId,
    pub cs: ContentStore,
    pub pit: Pit,
    pub fib: Fib,
    pub query: Q,
    pub producer_prefix: Option<ContentName>,
    pub owned_names: HashSet<ContentName>,
    pub link_faces: Vec<FaceId>,
    pub config: NodeConfig,
    pub counters: NodeCounters,
}

impl<Q: QueryBehavior> NodeState<Q> {
    pub fn new(id: NodeId, cs: ContentStore, link_faces: Vec<FaceId>, config: NodeConfig, query: Q) -> Self {
        NodeState {
            id,
            cs,
            pit: Pit::new(),
            fib: Fib::new(),
            query,
            producer_prefix: None,
            owned_names: HashSet::new(),
            link_faces,
            config,
            counters: NodeCounters::default(),
        }
    }

    /// Makes this node the producer for `names`, all under `prefix`.
    pub fn set_producer(&mut self, prefix: ContentName, names: impl IntoIterator<Item = ContentName>) {
        self.owned_names = names
            .into_iter()
            .filter(|n| prefix.is_prefix_of(n))
            .collect();
        self.producer_prefix = Some(prefix);
    }

    pub fn strategy(&self) -> ForwardingStrategy {
        self.config.strategy
    }

    pub fn on_interest(
        &mut self,
        mut interest: InterestPacket,
        in_face: FaceId,
        now: SimTime,
        out: &mut Vec<Effect>,
    ) {
        if let Some(data) = self.cs.lookup(&interest.name, now) {
            self.counters.cs_hits += 1;
            self.reply(data, &interest, in_face, out);
            return;
        }
        if self.owned_names.contains(&interest.name) {
            self.counters.producer_hits += 1;
            let data = DataPacket::new(interest.name.clone(), self.config.payload_size);
            self.reply(data, &interest, in_face, out);
            return;
        }

        match self.pit.on_interest(&interest, in_face, now) {
            PitDecision::DuplicateDropped => {
                self.counters.duplicates_dropped += 1;
                if in_face.is_app() {
                    out.push(Effect::AppInterestDropped {
                        name: interest.name.clone(),
                    });
                }
                return;
            }
            PitDecision::Aggregated => {
                self.counters.aggregated += 1;
                return;
            }
            PitDecision::ForwardNeeded => {}
        }

        if in_face.is_app() && self.query.enabled() {
            self.query.tag_interest(&self.pit, &mut interest);
            if interest.query_name().is_some() {
                self.counters.queries_attached += 1;
            }
        }

        let excluded = BTreeSet::from([in_face]);
        let selection = self.strategy_select(&interest.name, &excluded, 0);
        if selection.is_empty() {
            self.give_up(&interest.name, out);
            return;
        }
        self.emit(interest, selection, now, out);
    }

    /// Answers `interest` locally, attaching a query result when the gate
    /// allows it.
    fn reply(&mut self, mut data: DataPacket, interest: &InterestPacket, in_face: FaceId, out: &mut Vec<Effect>) {
        data.query_result = self.query.answer(&self.cs, interest, self.id);
        if data.query_result.is_some() {
            self.counters.queries_answered += 1;
        }
        self.send_data(data, in_face, out);
    }

    fn send_data(&mut self, data: DataPacket, face: FaceId, out: &mut Vec<Effect>) {
        if face.is_app() {
            out.push(Effect::Deliver { data });
        } else {
            self.counters.data_tx += 1;
            out.push(Effect::SendData { face, data });
        }
    }

    pub fn on_data(&mut self, data: DataPacket, in_face: FaceId, now: SimTime, out: &mut Vec<Effect>) {
        let Some(entry) = self.pit.take(&data.name) else {
            self.counters.unsolicited_data += 1;
            return;
        };
        let response_time = now.saturating_sub(entry.create_time);
        let fib_config = self.config.fib;
        self.fib
            .update_entry_face(&data.name, in_face, response_time, now, &fib_config);
        if let Some(result) = &data.query_result {
            if self.query.enabled() {
                self.query
                    .learn(&mut self.fib, result, in_face, response_time, now, &fib_config);
                self.counters.query_routes_learned += 1;
            }
        }
        self.cs.insert(&data, now);
        for face in entry.in_faces {
            self.send_data(data.clone(), face, out);
        }
    }

    /// Picks upstream faces and accounts for floods.
    pub fn strategy_select(&mut self, name: &ContentName, excluded: &BTreeSet<FaceId>, attempt: u32) -> Selection {
        let selection = select_faces(
            self.config.strategy,
            &self.fib,
            &self.link_faces,
            name,
            excluded,
            attempt,
        );
        if selection.is_flood() {
            self.counters.flood_events += 1;
            self.counters.flood_packets += selection.faces.len() as u64;
            if attempt > 0 {
                self.counters.retry_floods += 1;
            }
            if selection.blind {
                self.counters.blind_floods += 1;
            }
        }
        selection
    }

    fn timer_deadline(&self, selection: &Selection, now: SimTime) -> SimTime {
        match selection.green_metric {
            Some(metric) => now + metric.scaled(2).max(MIN_PIT_TIMER),
            None => now + self.config.pit_init_timeout,
        }
    }

    fn emit(&mut self, interest: InterestPacket, selection: Selection, now: SimTime, out: &mut Vec<Effect>) {
        let deadline = self.timer_deadline(&selection, now);
        let name = interest.name.clone();
        if let Some(entry) = self.pit.get_mut(&name) {
            entry.forwarded = Some(interest.clone());
        }
        self.pit
            .record_out(&name, selection.faces.iter().copied())
            .expect("entry created before forwarding");
        self.pit
            .set_timer(&name, deadline)
            .expect("entry created before forwarding");
        self.counters.interest_tx += selection.faces.len() as u64;
        for face in selection.faces {
            out.push(Effect::SendInterest {
                face,
                interest: interest.clone(),
            });
        }
        out.push(Effect::ArmTimer { name, deadline });
    }

    fn give_up(&mut self, name: &ContentName, out: &mut Vec<Effect>) {
        if let Some(entry) = self.pit.take(name) {
            self.counters.pit_giveups += 1;
            out.push(Effect::GiveUp {
                name: name.clone(),
                app_waiting: entry.in_faces.contains(&FaceId::APP),
            });
        }
    }

    /// Handles one expired PIT entry: retry through the strategy with a
    /// fresh nonce, or abandon the entry once the retry budget is spent.
    pub fn on_pit_timeout<R: Rng + ?Sized>(
        &mut self,
        name: &ContentName,
        now: SimTime,
        rng: &mut R,
        out: &mut Vec<Effect>,
    ) {
        let fib_faces = self.fib.lookup(name).len() as u32;
        let Some(entry) = self.pit.get_mut(name) else {
            return;
        };
        self.counters.timeouts += 1;
        let budget = *entry.max_retries.get_or_insert(fib_faces.max(1));
        entry.retry_cursor += 1;
        let attempt = entry.retry_cursor;
        let excluded = entry.in_faces.clone();
        let Some(template) = entry.forwarded.clone() else {
            self.give_up(name, out);
            return;
        };
        if attempt > budget {
            self.give_up(name, out);
            return;
        }
        let selection = self.strategy_select(name, &excluded, attempt);
        if selection.is_empty() {
            self.give_up(name, out);
            return;
        }
        let interest = template.renewed(Nonce(rng.random()));
        if let Some(entry) = self.pit.get_mut(name) {
            entry.nonces.insert(interest.nonce);
        }
        self.counters.retransmissions += 1;
        self.emit(interest, selection, now, out);
    }

    /// Runs the timeout handler for every entry whose timer has expired.
    pub fn on_timer<R: Rng + ?Sized>(&mut self, now: SimTime, rng: &mut R, out: &mut Vec<Effect>) {
        for name in self.pit.expired(now) {
            self.on_pit_timeout(&name, now, rng, out);
        }
    }
}

#[cfg(test)]
mod tests;
