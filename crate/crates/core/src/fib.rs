//! Forwarding Information Base with response-time metrics and green/yellow
//! face states.
//!
//! Green faces are preferred for forwarding and capped at `max_green` per
//! entry. New routing information displaces the slowest green face when it is
//! faster; otherwise green faces that have not delivered data within the
//! staleness threshold are demoted so fresh routes can take their place.

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::name::ContentName;
use crate::packet::FaceId;
use crate::time::SimTime;

/// Upper bound on faces kept per entry; the worst yellow face is dropped
/// beyond it.
pub const MAX_FACES_PER_ENTRY: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FibError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FaceState {
    Green,
    Yellow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceRecord {
    pub face: FaceId,
    /// Response time observed through this face.
    pub metric: SimTime,
    pub state: FaceState,
    pub last_data_time: SimTime,
}

impl FaceRecord {
    pub fn is_green(&self) -> bool {
        self.state == FaceState::Green
    }
}

/// Canonical order: green before yellow, then ascending metric, then face id.
fn canonical(a: &FaceRecord, b: &FaceRecord) -> Ordering {
    a.state
        .cmp(&b.state)
        .then(a.metric.cmp(&b.metric))
        .then(a.face.cmp(&b.face))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FibEntry {
    faces: Vec<FaceRecord>,
}

impl FibEntry {
    pub fn faces(&self) -> &[FaceRecord] {
        &self.faces
    }

    pub fn green_count(&self) -> usize {
        self.faces.iter().filter(|f| f.is_green()).count()
    }

    fn sort(&mut self) {
        self.faces.sort_by(canonical);
    }

    /// True when the canonical ordering and the face-id uniqueness hold.
    pub fn is_well_ordered(&self) -> bool {
        let sorted = self
            .faces
            .windows(2)
            .all(|w| canonical(&w[0], &w[1]) == Ordering::Less);
        let mut ids: Vec<_> = self.faces.iter().map(|f| f.face).collect();
        ids.sort();
        ids.dedup();
        sorted && ids.len() == self.faces.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FibConfig {
    pub max_green: usize,
    pub staleness: SimTime,
    pub max_faces: usize,
}

impl FibConfig {
    pub fn new(max_green: usize, staleness: SimTime) -> Self {
        FibConfig {
            max_green,
            staleness,
            max_faces: MAX_FACES_PER_ENTRY,
        }
    }

    /// Staleness threshold derived from cache size and content rate.
    pub fn from_cache(max_green: usize, cache_size: f64, content_rate: f64) -> Result<Self, FibError> {
        Ok(FibConfig::new(max_green, fib_threshold(cache_size, content_rate)?))
    }
}

/// Staleness threshold `T = C / F`: the time for `content_rate` new contents
/// per second to cycle through a cache of `cache_size` chunks.
pub fn fib_threshold(cache_size: f64, content_rate: f64) -> Result<SimTime, FibError> {
    if !(cache_size > 0.0) {
        return Err(FibError::InvalidParameter(format!(
            "cache size must be positive, got {cache_size}"
        )));
    }
    if !(content_rate > 0.0) {
        return Err(FibError::InvalidParameter(format!(
            "content rate must be positive, got {content_rate}"
        )));
    }
    Ok(SimTime::from_millis_f64(1_000.0 * cache_size / content_rate))
}

#[derive(Clone, Debug, Default)]
pub struct Fib {
    entries: HashMap<ContentName, FibEntry>,
}

impl Fib {
    pub fn new() -> Self {
        Fib::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, name: &ContentName) -> Option<&FibEntry> {
        self.entries.get(name)
    }

    /// Installs a static green route, e.g. a producer prefix.
    pub fn seed_route(&mut self, prefix: ContentName, face: FaceId, metric: SimTime) {
        let entry = self.entries.entry(prefix).or_default();
        entry.faces.retain(|f| f.face != face);
        entry.faces.push(FaceRecord {
            face,
            metric,
            state: FaceState::Green,
            last_data_time: SimTime::ZERO,
        });
        entry.sort();
    }

    /// Records that data for `name` arrived through `new_face` after
    /// `response_time`.
    pub fn update_entry_face(
        &mut self,
        name: &ContentName,
        new_face: FaceId,
        response_time: SimTime,
        now: SimTime,
        config: &FibConfig,
    ) {
        // metric must stay strictly positive
        let response_time = response_time.max(SimTime::from_micros(1));
        let entry = self.entries.entry(name.clone()).or_default();

        if let Some(pos) = entry.faces.iter().position(|f| f.face == new_face) {
            let green = entry.green_count();
            let record = &mut entry.faces[pos];
            record.metric = response_time;
            record.last_data_time = now;
            if record.state == FaceState::Yellow && green < config.max_green {
                record.state = FaceState::Green;
            }
            entry.sort();
            return;
        }

        let mut state = FaceState::Yellow;
        if entry.green_count() >= config.max_green {
            let slowest_green = entry
                .faces
                .iter_mut()
                .filter(|f| f.is_green())
                .max_by(|a, b| a.metric.cmp(&b.metric).then(a.face.cmp(&b.face)));
            match slowest_green {
                Some(slowest) if response_time < slowest.metric => {
                    slowest.state = FaceState::Yellow;
                    state = FaceState::Green;
                }
                _ => {
                    for face in entry.faces.iter_mut().filter(|f| f.is_green()) {
                        if now.saturating_sub(face.last_data_time) > config.staleness {
                            face.state = FaceState::Yellow;
                        }
                    }
                    if entry.green_count() < config.max_green {
                        state = FaceState::Green;
                    }
                }
            }
        } else {
            state = FaceState::Green;
        }

        entry.faces.push(FaceRecord {
            face: new_face,
            metric: response_time,
            state,
            last_data_time: now,
        });
        entry.sort();
        while entry.faces.len() > config.max_faces {
            // sorted, so the tail is the worst yellow whenever any yellow exists
            entry.faces.pop();
        }
    }

    /// Faces for `name` in forwarding order: the exact entry if present,
    /// otherwise the longest matching prefix, otherwise empty.
    pub fn lookup(&self, name: &ContentName) -> &[FaceRecord] {
        self.matching_entry(name).map(FibEntry::faces).unwrap_or(&[])
    }

    fn matching_entry(&self, name: &ContentName) -> Option<&FibEntry> {
        if let Some(exact) = self.entries.get(name) {
            return Some(exact);
        }
        (1..name.len())
            .rev()
            .filter_map(|len| name.prefix(len))
            .find_map(|prefix| self.entries.get(&prefix))
    }

    pub fn best_green(&self, name: &ContentName) -> Option<&FaceRecord> {
        self.lookup(name).first().filter(|f| f.is_green())
    }
}
