//! Pending Interest Table.
//!
//! Entries aggregate interests for one name, suppress replayed nonces and
//! carry the per-entry timer. The PIT never deletes expired entries on its
//! own; the forwarding strategy decides whether to retransmit or give up.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::name::ContentName;
use crate::packet::{FaceId, InterestPacket, Nonce};
use crate::time::SimTime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PitError {
    #[error("no PIT entry for {0}")]
    MissingEntry(ContentName),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PitDecision {
    ForwardNeeded,
    Aggregated,
    DuplicateDropped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PitEntry {
    pub name: ContentName,
    pub in_faces: BTreeSet<FaceId>,
    pub out_faces: BTreeSet<FaceId>,
    pub nonces: BTreeSet<Nonce>,
    pub request_count: u64,
    pub create_time: SimTime,
    pub timer_deadline: Option<SimTime>,
    /// Strategy attempt index; 0 is the first transmission.
    pub retry_cursor: u32,
    /// Retransmission budget, fixed at the first timeout.
    pub max_retries: Option<u32>,
    /// Interest as last sent upstream, reused for retransmission.
    pub forwarded: Option<InterestPacket>,
    timer_fired: bool,
}

impl PitEntry {
    fn new(interest: &InterestPacket, in_face: FaceId, now: SimTime) -> Self {
        PitEntry {
            name: interest.name.clone(),
            in_faces: BTreeSet::from([in_face]),
            out_faces: BTreeSet::new(),
            nonces: BTreeSet::from([interest.nonce]),
            request_count: 1,
            create_time: now,
            timer_deadline: None,
            retry_cursor: 0,
            max_retries: None,
            forwarded: None,
            timer_fired: false,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Pit {
    entries: BTreeMap<ContentName, PitEntry>,
}

impl Pit {
    pub fn new() -> Self {
        Pit::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &ContentName) -> Option<&PitEntry> {
        self.entries.get(name)
    }

    pub fn get_mut(&mut self, name: &ContentName) -> Option<&mut PitEntry> {
        self.entries.get_mut(name)
    }

    pub fn entries(&self) -> impl Iterator<Item = &PitEntry> {
        self.entries.values()
    }

    pub fn on_interest(&mut self, interest: &InterestPacket, in_face: FaceId, now: SimTime) -> PitDecision {
        match self.entries.get_mut(&interest.name) {
            Some(entry) if entry.nonces.contains(&interest.nonce) => PitDecision::DuplicateDropped,
            Some(entry) => {
                entry.nonces.insert(interest.nonce);
                entry.in_faces.insert(in_face);
                // a face that now asks us cannot also be waited on
                entry.out_faces.remove(&in_face);
                entry.request_count += 1;
                PitDecision::Aggregated
            }
            None => {
                self.entries
                    .insert(interest.name.clone(), PitEntry::new(interest, in_face, now));
                PitDecision::ForwardNeeded
            }
        }
    }

    /// Records upstream faces; faces already listed as incoming are skipped.
    pub fn record_out(
        &mut self,
        name: &ContentName,
        faces: impl IntoIterator<Item = FaceId>,
    ) -> Result<(), PitError> {
        let entry = self
            .entries
            .get_mut(name)
            .ok_or_else(|| PitError::MissingEntry(name.clone()))?;
        for face in faces {
            if !entry.in_faces.contains(&face) {
                entry.out_faces.insert(face);
            }
        }
        Ok(())
    }

    /// Consumes the entry for arriving data and returns its consumer faces.
    /// Unsolicited data yields an empty set.
    pub fn on_data(&mut self, name: &ContentName) -> BTreeSet<FaceId> {
        self.take(name).map(|e| e.in_faces).unwrap_or_default()
    }

    pub fn take(&mut self, name: &ContentName) -> Option<PitEntry> {
        self.entries.remove(name)
    }

    /// Live entry with the highest request count, ignoring `exclude`.
    /// Ties go to more in-faces, then the newer entry, then the smaller name.
    pub fn most_popular(&self, exclude: &ContentName) -> Option<&ContentName> {
        self.entries
            .values()
            .filter(|e| &e.name != exclude)
            .max_by(|a, b| {
                a.request_count
                    .cmp(&b.request_count)
                    .then(a.in_faces.len().cmp(&b.in_faces.len()))
                    .then(a.create_time.cmp(&b.create_time))
                    .then(b.name.cmp(&a.name))
            })
            .map(|e| &e.name)
    }

    pub fn set_timer(&mut self, name: &ContentName, deadline: SimTime) -> Result<(), PitError> {
        let entry = self
            .entries
            .get_mut(name)
            .ok_or_else(|| PitError::MissingEntry(name.clone()))?;
        entry.timer_deadline = Some(deadline);
        entry.timer_fired = false;
        Ok(())
    }

    /// Names whose deadline is at or before `now`, in name order. Each
    /// deadline fires once; entries stay in the table.
    pub fn expired(&mut self, now: SimTime) -> Vec<ContentName> {
        let mut fired = Vec::new();
        for entry in self.entries.values_mut() {
            if !entry.timer_fired && entry.timer_deadline.is_some_and(|d| d <= now) {
                entry.timer_fired = true;
                fired.push(entry.name.clone());
            }
        }
        fired
    }
}
