//! Router graphs and the line-oriented topology file format:
//!
//! ```text
//! # comment
//! node <id> <label> <prefix>
//! link <idA> <idB> <delay_ms>
//! ```
//!
//! Each link gives both endpoints one face, numbered from 1 per node in
//! declaration order.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::name::{parse_name, ContentName};
use crate::packet::{FaceId, NodeId};
use crate::time::SimTime;

const ABILENE: &str = include_str!("../../data/abilene.topo");

/// Link delay applied when building from code without an explicit value.
pub const DEFAULT_LINK_DELAY: SimTime = SimTime::from_millis(10);

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid topology: {0}")]
    Invalid(String),
    #[error("cannot read topology file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopoNode {
    pub id: NodeId,
    pub label: String,
    pub prefix: ContentName,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub a: NodeId,
    pub b: NodeId,
    pub delay: SimTime,
}

/// One end of a link as seen from a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Adjacency {
    pub face: FaceId,
    pub peer: NodeId,
    pub peer_face: FaceId,
    pub delay: SimTime,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    nodes: Vec<TopoNode>,
    links: Vec<Link>,
    adjacency: Vec<Vec<Adjacency>>,
}

impl Topology {
    /// Builds and validates a topology. Node ids must be exactly `0..n`.
    pub fn new(mut nodes: Vec<TopoNode>, links: Vec<Link>) -> Result<Self, TopologyError> {
        nodes.sort_by_key(|n| n.id);
        if nodes.is_empty() {
            return Err(TopologyError::Invalid("no nodes".into()));
        }
        for (i, node) in nodes.iter().enumerate() {
            if node.id.0 != i {
                return Err(TopologyError::Invalid(format!(
                    "node ids must be 0..{} without gaps or repeats (found {} at position {i})",
                    nodes.len(),
                    node.id
                )));
            }
        }
        let mut prefixes = HashSet::new();
        for node in &nodes {
            if !prefixes.insert(node.prefix.clone()) {
                return Err(TopologyError::Invalid(format!("duplicate prefix {}", node.prefix)));
            }
        }
        for (a, b) in nodes.iter().flat_map(|a| nodes.iter().map(move |b| (a, b))) {
            if a.id != b.id && a.prefix.is_prefix_of(&b.prefix) {
                return Err(TopologyError::Invalid(format!(
                    "prefix {} of {} shadows prefix {} of {}",
                    a.prefix, a.label, b.prefix, b.label
                )));
            }
        }

        let mut adjacency = vec![Vec::new(); nodes.len()];
        let mut seen = HashSet::new();
        for link in &links {
            for end in [link.a, link.b] {
                if end.0 >= nodes.len() {
                    return Err(TopologyError::Invalid(format!("link references unknown node {end}")));
                }
            }
            if link.a == link.b {
                return Err(TopologyError::Invalid(format!("self-loop on {}", link.a)));
            }
            let key = (link.a.min(link.b), link.a.max(link.b));
            if !seen.insert(key) {
                return Err(TopologyError::Invalid(format!(
                    "duplicate link {} - {}",
                    link.a, link.b
                )));
            }
            let face_a = FaceId(adjacency[link.a.0].len() + 1);
            let face_b = FaceId(adjacency[link.b.0].len() + 1);
            adjacency[link.a.0].push(Adjacency {
                face: face_a,
                peer: link.b,
                peer_face: face_b,
                delay: link.delay,
            });
            adjacency[link.b.0].push(Adjacency {
                face: face_b,
                peer: link.a,
                peer_face: face_a,
                delay: link.delay,
            });
        }

        let topology = Topology {
            nodes,
            links,
            adjacency,
        };
        if !topology.is_connected() {
            return Err(TopologyError::Invalid("graph is not connected".into()));
        }
        Ok(topology)
    }

    pub fn parse(text: &str) -> Result<Self, TopologyError> {
        let mut nodes = Vec::new();
        let mut links = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| TopologyError::Parse { line, message };
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields.as_slice() {
                ["node", id, label, prefix] => {
                    let id = id
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad node id {id:?}")))?;
                    let prefix = parse_name(prefix).map_err(|e| err(e.to_string()))?;
                    nodes.push(TopoNode {
                        id: NodeId(id),
                        label: label.to_string(),
                        prefix,
                    });
                }
                ["link", a, b, delay] => {
                    let a = a.parse::<usize>().map_err(|_| err(format!("bad node id {a:?}")))?;
                    let b = b.parse::<usize>().map_err(|_| err(format!("bad node id {b:?}")))?;
                    let delay_ms = delay
                        .parse::<f64>()
                        .ok()
                        .filter(|d| d.is_finite() && *d >= 0.0)
                        .ok_or_else(|| err(format!("bad delay {delay:?}")))?;
                    links.push(Link {
                        a: NodeId(a),
                        b: NodeId(b),
                        delay: SimTime::from_millis_f64(delay_ms),
                    });
                }
                [kind, ..] if *kind == "node" || *kind == "link" => {
                    return Err(err(format!("`{kind}` takes exactly 3 arguments")));
                }
                [kind, ..] => return Err(err(format!("unknown record {kind:?}"))),
                [] => unreachable!(),
            }
        }
        Topology::new(nodes, links)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, TopologyError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| TopologyError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Topology::parse(&text)
    }

    /// Serializes to the file format; parsing the output yields an equal
    /// topology.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for node in &self.nodes {
            let _ = writeln!(out, "node {} {} {}", node.id.0, node.label, node.prefix);
        }
        for link in &self.links {
            let _ = writeln!(out, "link {} {} {}", link.a.0, link.b.0, link.delay.as_millis_f64());
        }
        out
    }

    pub fn nodes(&self) -> &[TopoNode] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, id: NodeId) -> &TopoNode {
        &self.nodes[id.0]
    }

    pub fn adjacency(&self, id: NodeId) -> &[Adjacency] {
        &self.adjacency[id.0]
    }

    /// The adjacency behind `face` on `node`, if it is a link face.
    pub fn face(&self, node: NodeId, face: FaceId) -> Option<&Adjacency> {
        face.0.checked_sub(1).and_then(|i| self.adjacency[node.0].get(i))
    }

    pub fn find_by_prefix(&self, prefix: &ContentName) -> Option<&TopoNode> {
        self.nodes.iter().find(|n| &n.prefix == prefix)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = BTreeSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for adj in &self.adjacency[u] {
                if seen.insert(adj.peer.0) {
                    queue.push_back(adj.peer.0);
                }
            }
        }
        seen.len() == self.nodes.len()
    }
}

/// The bundled 12-router Abilene topology with 10 ms links.
pub fn build_abilene() -> Topology {
    Topology::parse(ABILENE).expect("bundled Abilene topology is valid")
}

/// A route installed at startup so every producer prefix is reachable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteSeed {
    pub prefix: ContentName,
    pub face: FaceId,
    /// Round-trip delay along the shortest path.
    pub metric: SimTime,
}

/// Per-node routes toward every other node's prefix along minimum-delay
/// paths. Equal-cost next hops resolve to the lower neighbor id.
pub fn shortest_path_seed(topology: &Topology) -> Vec<Vec<RouteSeed>> {
    let n = topology.node_count();
    let mut seeds = vec![Vec::new(); n];
    for producer in topology.nodes() {
        let dist = dijkstra(topology, producer.id);
        for node in 0..n {
            if node == producer.id.0 {
                continue;
            }
            let best = topology
                .adjacency(NodeId(node))
                .iter()
                .filter_map(|adj| dist[adj.peer.0].map(|d| (adj.delay + d, adj.peer, adj.face)))
                .min_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
            if let Some((delay, _, face)) = best {
                seeds[node].push(RouteSeed {
                    prefix: producer.prefix.clone(),
                    face,
                    metric: delay.scaled(2),
                });
            }
        }
    }
    seeds
}

fn dijkstra(topology: &Topology, source: NodeId) -> Vec<Option<SimTime>> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let mut dist: Vec<Option<SimTime>> = vec![None; topology.node_count()];
    let mut heap = BinaryHeap::new();
    dist[source.0] = Some(SimTime::ZERO);
    heap.push(Reverse((SimTime::ZERO, source.0)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u].is_some_and(|best| d > best) {
            continue;
        }
        for adj in topology.adjacency(NodeId(u)) {
            let candidate = d + adj.delay;
            if dist[adj.peer.0].is_none_or(|cur| candidate < cur) {
                dist[adj.peer.0] = Some(candidate);
                heap.push(Reverse((candidate, adj.peer.0)));
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abilene_shape() {
        let topo = build_abilene();
        assert_eq!(topo.node_count(), 12);
        assert_eq!(topo.links().len(), 15);
        assert_eq!(topo.node(NodeId(0)).prefix.to_string(), "/Sea");
        assert_eq!(topo.node(NodeId(0)).label, "Seattle");
        assert!(topo.is_connected());
        assert!(topo.links().iter().all(|l| l.delay == DEFAULT_LINK_DELAY));
    }

    #[test]
    fn faces_pair_up() {
        let topo = build_abilene();
        for node in topo.nodes() {
            for adj in topo.adjacency(node.id) {
                let back = topo.face(adj.peer, adj.peer_face).unwrap();
                assert_eq!((back.peer, back.face), (node.id, adj.peer_face));
                assert_eq!(back.peer_face, adj.face);
            }
        }
        assert!(topo.face(NodeId(0), FaceId::APP).is_none());
    }

    #[test]
    fn text_round_trip() {
        let topo = build_abilene();
        assert_eq!(Topology::parse(&topo.to_text()).unwrap(), topo);
    }

    #[test]
    fn rejects_bad_files() {
        let cases = [
            ("node 0 A /a\nnode 1 B /b\n", "not connected"),
            ("node 0 A /a\nlink 0 0 5\n", "self-loop"),
            ("node 0 A /a\nnode 2 B /b\nlink 0 2 1\n", "without gaps"),
            ("node 0 A /a\nnode 1 B /a\nlink 0 1 1\n", "duplicate prefix"),
            ("node 0 A /a\nnode 1 B /b\nlink 0 1 1\nlink 1 0 1\n", "duplicate link"),
            ("node 0 A /a\nnode 1 B /a/b\nlink 0 1 1\n", "shadows"),
            ("node 0 A /a\nnode 1 B /b\nlink 0 1 -3\n", "bad delay"),
            ("node 0 A a\n", "malformed"),
            ("router 0 A /a\n", "unknown record"),
            ("node 0 A\n", "exactly 3"),
        ];
        for (text, needle) in cases {
            let err = Topology::parse(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?}: {err}");
        }
        let comment = "# only\nnode 0 A /a # trailing\n";
        assert_eq!(Topology::parse(comment).unwrap().node_count(), 1);
    }

    #[test]
    fn seeds_one_hop_and_skip_self() {
        let topo = Topology::parse("node 0 A /a\nnode 1 B /b\nlink 0 1 7\n").unwrap();
        let seeds = shortest_path_seed(&topo);
        assert_eq!(
            seeds[0],
            vec![RouteSeed {
                prefix: parse_name("/b").unwrap(),
                face: FaceId(1),
                metric: SimTime::from_millis(14),
            }]
        );
        assert!(seeds[0].iter().all(|s| s.prefix.to_string() != "/a"));
    }

    #[test]
    fn equal_cost_prefers_lower_neighbor() {
        // square 0-1-3 and 0-2-3, declared so that node 2 gets the lower face on 0
        let text = "node 0 A /a\nnode 1 B /b\nnode 2 C /c\nnode 3 D /d\n\
                    link 0 2 5\nlink 0 1 5\nlink 1 3 5\nlink 2 3 5\n";
        let topo = Topology::parse(text).unwrap();
        let seeds = shortest_path_seed(&topo);
        let to_d = seeds[0].iter().find(|s| s.prefix.to_string() == "/d").unwrap();
        let via = topo.face(NodeId(0), to_d.face).unwrap().peer;
        assert_eq!(via, NodeId(1));
        assert_eq!(to_d.metric, SimTime::from_millis(20));
    }
}
