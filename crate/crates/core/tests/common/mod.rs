//! Reference models written independently of the production structures.
#![allow(dead_code)]

use ccn_qsim::{CachePolicy, ContentName, FaceId, SimTime};

pub fn name(text: &str) -> ContentName {
    text.parse().expect("valid test name")
}

/// Brute-force cache: a flat list, victim found by scanning every entry.
#[derive(Clone, Debug)]
pub struct RefCache {
    pub capacity: usize,
    pub policy: CachePolicy,
    pub items: Vec<RefItem>,
}

#[derive(Clone, Debug)]
pub struct RefItem {
    pub name: ContentName,
    pub inserted: u64,
    pub accessed: u64,
    pub hits: u64,
}

impl RefCache {
    pub fn new(capacity: usize, policy: CachePolicy) -> Self {
        RefCache {
            capacity,
            policy,
            items: Vec::new(),
        }
    }

    fn key(&self, item: &RefItem) -> u64 {
        match self.policy {
            CachePolicy::Lru => item.accessed,
            CachePolicy::Lfu => item.hits,
            CachePolicy::Fifo => item.inserted,
        }
    }

    pub fn lookup(&mut self, name: &ContentName, now: u64) -> bool {
        match self.items.iter_mut().find(|i| &i.name == name) {
            Some(item) => {
                item.accessed = now;
                item.hits += 1;
                true
            }
            None => false,
        }
    }

    pub fn victim(&self) -> Option<ContentName> {
        let mut best: Option<&RefItem> = None;
        for item in &self.items {
            best = match best {
                None => Some(item),
                Some(b) => {
                    let (ki, kb) = (self.key(item), self.key(b));
                    if ki < kb || (ki == kb && item.name < b.name) {
                        Some(item)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best.map(|i| i.name.clone())
    }

    pub fn insert(&mut self, name: &ContentName, now: u64) -> Option<ContentName> {
        if self.capacity == 0 {
            return None;
        }
        if let Some(item) = self.items.iter_mut().find(|i| &i.name == name) {
            item.accessed = item.accessed.max(now);
            return None;
        }
        let mut evicted = None;
        if self.items.len() == self.capacity {
            let victim = self.victim().expect("full cache has a victim");
            self.items.retain(|i| i.name != victim);
            evicted = Some(victim);
        }
        self.items.push(RefItem {
            name: name.clone(),
            inserted: now,
            accessed: now,
            hits: 0,
        });
        evicted
    }

    /// Position from the far end of the eviction order, over the count.
    pub fn rank(&self, name: &ContentName) -> Option<f64> {
        let target = self.items.iter().find(|i| &i.name == name)?;
        let farther = self
            .items
            .iter()
            .filter(|i| {
                let (ki, kt) = (self.key(i), self.key(target));
                ki > kt || (ki == kt && i.name > target.name)
            })
            .count();
        Some(farther as f64 / self.items.len() as f64)
    }
}

/// One face as the reference FIB sees it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefFace {
    pub face: FaceId,
    pub metric: SimTime,
    pub green: bool,
    pub last_data: SimTime,
}

/// The routing-table update routine kept as two explicit lists, stepped
/// line by line.
#[derive(Clone, Debug, Default)]
pub struct RefEntry {
    pub list_green: Vec<RefFace>,
    pub list_yellow: Vec<RefFace>,
}

fn by_metric(list: &mut [RefFace]) {
    list.sort_by_key(|f| (f.metric, f.face));
}

impl RefEntry {
    pub fn update(
        &mut self,
        new_face: FaceId,
        response_time: SimTime,
        now: SimTime,
        max_green: usize,
        threshold: SimTime,
        max_faces: usize,
    ) {
        let response_time = response_time.max(SimTime::from_micros(1));
        // a face already on record is refreshed in place
        if let Some(i) = self.list_green.iter().position(|f| f.face == new_face) {
            self.list_green[i].metric = response_time;
            self.list_green[i].last_data = now;
            by_metric(&mut self.list_green);
            return;
        }
        if let Some(i) = self.list_yellow.iter().position(|f| f.face == new_face) {
            let mut face = self.list_yellow.remove(i);
            face.metric = response_time;
            face.last_data = now;
            if self.list_green.len() < max_green {
                face.green = true;
                self.list_green.push(face);
                by_metric(&mut self.list_green);
            } else {
                self.list_yellow.push(face);
                by_metric(&mut self.list_yellow);
            }
            return;
        }

        let mut fresh = RefFace {
            face: new_face,
            metric: response_time,
            green: false,
            last_data: now,
        };
        // line 2
        if self.list_green.len() >= max_green {
            by_metric(&mut self.list_green);
            let last = self.list_green.last().expect("full list").metric;
            // line 3
            if response_time < last {
                // line 4: the last green face steps down, the new face takes its slot
                let mut old = self.list_green.pop().expect("full list");
                old.green = false;
                self.list_yellow.push(old);
                fresh.green = true;
            } else {
                // lines 6-10
                let mut kept = Vec::new();
                for mut face in std::mem::take(&mut self.list_green) {
                    if now.saturating_sub(face.last_data) > threshold {
                        face.green = false;
                        self.list_yellow.push(face);
                    } else {
                        kept.push(face);
                    }
                }
                self.list_green = kept;
                // lines 11-13
                if self.list_green.len() < max_green {
                    fresh.green = true;
                }
            }
        } else {
            fresh.green = true;
        }
        if fresh.green {
            self.list_green.push(fresh);
        } else {
            self.list_yellow.push(fresh);
        }
        by_metric(&mut self.list_green);
        by_metric(&mut self.list_yellow);
        while self.list_green.len() + self.list_yellow.len() > max_faces {
            if self.list_yellow.pop().is_none() {
                self.list_green.pop();
            }
        }
    }

    /// Greens then yellows, each by ascending metric.
    pub fn ordered(&self) -> Vec<RefFace> {
        self.list_green
            .iter()
            .chain(self.list_yellow.iter())
            .cloned()
            .collect()
    }
}
