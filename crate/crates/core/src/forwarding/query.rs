//! Piggybacked cache queries.
//!
//! A first-hop router tags each interest it forwards with the most popular
//! other name pending in its PIT. Whichever router answers the interest from
//! its cache also reports whether it holds the query name in the long-lived
//! half of its cache; routers on the return path record that report as a
//! route.

use crate::content_store::ContentStore;
use crate::fib::{Fib, FibConfig};
use crate::name::ContentName;
use crate::packet::{FaceId, InterestPacket, NodeId, QueryResult};
use crate::pit::Pit;
use crate::time::SimTime;

/// Hooks the pipelines call at the three points where the query extension
/// differs from plain forwarding. The default bodies are the plain pipeline.
pub trait QueryBehavior: Clone + Send + Sync {
    fn enabled(&self) -> bool {
        false
    }

    /// Called on a first-hop router just before forwarding.
    fn tag_interest(&self, _pit: &Pit, _interest: &mut InterestPacket) {}

    /// Called when `holder` satisfies `interest` from its cache or producer.
    fn answer(
        &self,
        _cs: &ContentStore,
        _interest: &InterestPacket,
        _holder: NodeId,
    ) -> Option<QueryResult> {
        None
    }

    /// Called for every data packet that carries a query result.
    fn learn(
        &self,
        _fib: &mut Fib,
        _result: &QueryResult,
        _in_face: FaceId,
        _response_time: SimTime,
        _now: SimTime,
        _config: &FibConfig,
    ) {
    }
}

/// Plain forwarding with the query branches absent.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoQuery;

impl QueryBehavior for NoQuery {}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QueryGate {
    /// Answer when the query name ranks below this eviction-distance fraction.
    Rank(f64),
    /// Never answer; queries are still attached.
    Never,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QueryMechanism {
    pub enabled: bool,
    pub gate: QueryGate,
}

impl QueryMechanism {
    pub fn new(enabled: bool, gate_fraction: f64) -> Self {
        QueryMechanism {
            enabled,
            gate: QueryGate::Rank(gate_fraction),
        }
    }

    pub fn with_gate(enabled: bool, gate: QueryGate) -> Self {
        QueryMechanism { enabled, gate }
    }
}

impl QueryBehavior for QueryMechanism {
    fn enabled(&self) -> bool {
        self.enabled
    }

    fn tag_interest(&self, pit: &Pit, interest: &mut InterestPacket) {
        if !self.enabled || interest.query_name().is_some() {
            return;
        }
        if let Some(popular) = pit.most_popular(&interest.name).cloned() {
            // most_popular excludes the requested name, so this cannot fail
            let _ = interest.set_query_name(popular);
        }
    }

    fn answer(
        &self,
        cs: &ContentStore,
        interest: &InterestPacket,
        holder: NodeId,
    ) -> Option<QueryResult> {
        if !self.enabled {
            return None;
        }
        let query: &ContentName = interest.query_name()?;
        let long_lived = match self.gate {
            QueryGate::Rank(fraction) => cs.is_long_lived(query, fraction),
            QueryGate::Never => false,
        };
        long_lived.then(|| QueryResult {
            name: query.clone(),
            holder,
        })
    }

    fn learn(
        &self,
        fib: &mut Fib,
        result: &QueryResult,
        in_face: FaceId,
        response_time: SimTime,
        now: SimTime,
        config: &FibConfig,
    ) {
        if self.enabled {
            fib.update_entry_face(&result.name, in_face, response_time, now, config);
        }
    }
}
