//! Capacity-bounded content store with LRU, LFU and FIFO replacement.
//!
//! Every policy reduces to one integer key per entry (last access, hit count
//! or insertion time). The victim is the entry with the smallest
//! `(key, name)`; the eviction-distance rank orders entries the opposite way,
//! so rank 0 is the entry that would be evicted last.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::name::ContentName;
use crate::packet::DataPacket;
use crate::time::SimTime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CachePolicy {
    Lru,
    Lfu,
    Fifo,
}

impl CachePolicy {
    pub const ALL: [CachePolicy; 3] = [CachePolicy::Lru, CachePolicy::Lfu, CachePolicy::Fifo];

    pub fn as_str(self) -> &'static str {
        match self {
            CachePolicy::Lru => "lru",
            CachePolicy::Lfu => "lfu",
            CachePolicy::Fifo => "fifo",
        }
    }
}

impl fmt::Display for CachePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CachePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lru" => Ok(CachePolicy::Lru),
            "lfu" => Ok(CachePolicy::Lfu),
            "fifo" => Ok(CachePolicy::Fifo),
            other => Err(format!("unknown cache policy {other:?} (expected lru, lfu or fifo)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsRecord {
    pub name: ContentName,
    pub payload_size: u32,
    pub signature: String,
    pub signature_info: String,
    pub last_access: SimTime,
    pub insert_time: SimTime,
    pub hit_count: u64,
}

impl CsRecord {
    fn policy_key(&self, policy: CachePolicy) -> u64 {
        match policy {
            CachePolicy::Lru => self.last_access.as_micros(),
            CachePolicy::Lfu => self.hit_count,
            CachePolicy::Fifo => self.insert_time.as_micros(),
        }
    }

    fn to_packet(&self) -> DataPacket {
        DataPacket {
            name: self.name.clone(),
            payload_size: self.payload_size,
            signature: self.signature.clone(),
            signature_info: self.signature_info.clone(),
            query_result: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ContentStore {
    capacity: usize,
    policy: CachePolicy,
    entries: HashMap<ContentName, CsRecord>,
    // (policy key, name), ascending = closest to eviction first
    order: BTreeSet<(u64, ContentName)>,
}

impl ContentStore {
    pub fn new(capacity: usize, policy: CachePolicy) -> Self {
        ContentStore {
            capacity,
            policy,
            entries: HashMap::with_capacity(capacity + 1),
            order: BTreeSet::new(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn policy(&self) -> CachePolicy {
        self.policy
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, name: &ContentName) -> bool {
        self.entries.contains_key(name)
    }

    pub fn record(&self, name: &ContentName) -> Option<&CsRecord> {
        self.entries.get(name)
    }

    /// Exact-name lookup. A hit updates recency and frequency bookkeeping.
    pub fn lookup(&mut self, name: &ContentName, now: SimTime) -> Option<DataPacket> {
        let policy = self.policy;
        let record = self.entries.get_mut(name)?;
        let old_key = record.policy_key(policy);
        record.last_access = now.max(record.insert_time);
        record.hit_count += 1;
        let new_key = record.policy_key(policy);
        let packet = record.to_packet();
        if old_key != new_key {
            self.order.remove(&(old_key, name.clone()));
            self.order.insert((new_key, name.clone()));
        }
        Some(packet)
    }

    /// Caches `data`, returning the evicted name if the store overflowed.
    /// Re-inserting a cached name only refreshes its recency.
    pub fn insert(&mut self, data: &DataPacket, now: SimTime) -> Option<ContentName> {
        if self.capacity == 0 {
            return None;
        }
        let policy = self.policy;
        if let Some(record) = self.entries.get_mut(&data.name) {
            let old_key = record.policy_key(policy);
            record.last_access = now.max(record.last_access);
            let new_key = record.policy_key(policy);
            if old_key != new_key {
                self.order.remove(&(old_key, data.name.clone()));
                self.order.insert((new_key, data.name.clone()));
            }
            return None;
        }
        let record = CsRecord {
            name: data.name.clone(),
            payload_size: data.payload_size,
            signature: data.signature.clone(),
            signature_info: data.signature_info.clone(),
            last_access: now,
            insert_time: now,
            hit_count: 0,
        };
        let victim = if self.entries.len() >= self.capacity {
            self.evict_one()
        } else {
            None
        };
        self.order.insert((record.policy_key(policy), record.name.clone()));
        self.entries.insert(record.name.clone(), record);
        debug_assert!(self.entries.len() <= self.capacity);
        victim
    }

    fn evict_one(&mut self) -> Option<ContentName> {
        let (_, victim) = self.order.pop_first()?;
        self.entries.remove(&victim);
        Some(victim)
    }

    /// The entry the policy would evict next, without evicting it.
    pub fn next_victim(&self) -> Option<&ContentName> {
        self.order.first().map(|(_, name)| name)
    }

    /// Normalized eviction distance of `name`: `0.0` for the entry evicted
    /// last, `(n-1)/n` for the next victim.
    pub fn survival_rank(&self, name: &ContentName) -> Option<f64> {
        let record = self.entries.get(name)?;
        let key = (record.policy_key(self.policy), name.clone());
        let farther = self
            .order
            .range((std::ops::Bound::Excluded(key), std::ops::Bound::Unbounded))
            .count();
        Some(farther as f64 / self.entries.len() as f64)
    }

    /// True iff `name` is cached within the top `threshold_fraction` of the
    /// eviction-distance ranking.
    pub fn is_long_lived(&self, name: &ContentName, threshold_fraction: f64) -> bool {
        self.survival_rank(name)
            .is_some_and(|rank| rank < threshold_fraction)
    }

    /// Cached names, closest to eviction first.
    pub fn eviction_order(&self) -> impl Iterator<Item = &ContentName> {
        self.order.iter().map(|(_, name)| name)
    }
}
