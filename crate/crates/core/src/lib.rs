//! Content-Centric Networking simulator with query-based routing table
//! updates.
//!
//! Routers keep the usual three tables: a [`ContentStore`] cache, a
//! [`Pit`] of pending interests and a [`Fib`] of ranked faces. Interests
//! leaving a first-hop router can carry a *query name*, the most popular
//! other name pending there. A router that answers the interest from its
//! cache reports whether it also holds the query name in the long-lived half
//! of its cache, and every router on the way back records that answer as a
//! route. FIB faces are split into a small green (preferred) list and a
//! yellow overflow, with slow or stale green faces demoted.
//!
//! The [`sim`] module wires routers into a topology, drives Zipf or uniform
//! consumer traffic through a deterministic event queue and reports flood,
//! interest, retransmission and response-time metrics.
//!
//! ```
//! use ccn_qsim::sim::{run, Scenario};
//!
//! let mut scenario = Scenario::table1();
//! scenario.duration = 2.0;
//! let report = run(&scenario).unwrap();
//! assert_eq!(report.satisfied + report.unsatisfied, report.emitted);
//! ```

pub mod cli;
pub mod content_store;
pub mod fib;
pub mod forwarding;
pub mod name;
pub mod packet;
pub mod pit;
pub mod sim;
pub mod time;

pub use content_store::{CachePolicy, ContentStore, CsRecord};
pub use fib::{fib_threshold, FaceRecord, FaceState, Fib, FibConfig, FibEntry};
pub use forwarding::{ForwardingStrategy, NodeState, NoQuery, QueryBehavior, QueryGate, QueryMechanism};
pub use name::{parse_name, ContentName, NameError};
pub use packet::{DataPacket, FaceId, InterestPacket, NodeId, Nonce, QueryResult};
pub use pit::{Pit, PitDecision, PitEntry};
pub use time::SimTime;
