//! Content catalog and consumer request streams.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

use super::scenario::Popularity;
use super::topology::Topology;
use crate::name::ContentName;
use crate::packet::NodeId;

/// Every name published in the network, grouped by producer.
#[derive(Clone, Debug)]
pub struct Catalog {
    names: Vec<ContentName>,
    producers: Vec<NodeId>,
}

impl Catalog {
    /// `names_per_producer` items under each node prefix: `/Sea/item000`, ...
    pub fn build(topology: &Topology, names_per_producer: usize) -> Self {
        let width = names_per_producer.saturating_sub(1).to_string().len().max(3);
        let mut names = Vec::with_capacity(topology.node_count() * names_per_producer);
        let mut producers = Vec::with_capacity(names.capacity());
        for node in topology.nodes() {
            for i in 0..names_per_producer {
                let name = node
                    .prefix
                    .child(&format!("item{i:0width$}"))
                    .expect("generated component is valid");
                names.push(name);
                producers.push(node.id);
            }
        }
        Catalog { names, producers }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[ContentName] {
        &self.names
    }

    pub fn owned_by(&self, node: NodeId) -> impl Iterator<Item = &ContentName> {
        self.names
            .iter()
            .zip(&self.producers)
            .filter(move |(_, p)| **p == node)
            .map(|(n, _)| n)
    }
}

#[derive(Clone, Debug)]
enum Sampler {
    Uniform,
    Zipf(Zipf<f64>),
}

/// Popularity ranking shared by all consumers: `ranking[r]` is the catalog
/// index of the rank-`r` name. Producers are interleaved by a seeded shuffle
/// so no single prefix owns the head of the distribution.
pub fn popularity_ranking(catalog_len: usize, seed: u64) -> Arc<Vec<usize>> {
    let mut ranking: Vec<usize> = (0..catalog_len).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_ca7a_1060_0000);
    ranking.shuffle(&mut rng);
    Arc::new(ranking)
}

/// One consumer's stream of catalog indices.
#[derive(Clone, Debug)]
pub struct RequestStream {
    rng: ChaCha8Rng,
    sampler: Sampler,
    ranking: Arc<Vec<usize>>,
}

impl RequestStream {
    pub fn new(popularity: Popularity, ranking: Arc<Vec<usize>>, seed: u64, node: NodeId) -> Self {
        let sampler = match popularity {
            Popularity::Uniform => Sampler::Uniform,
            Popularity::Zipf(s) => Sampler::Zipf(
                Zipf::new(ranking.len() as f64, s).expect("validated exponent and catalog"),
            ),
        };
        let stream_seed = seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(node.0 as u64 + 1);
        RequestStream {
            rng: ChaCha8Rng::seed_from_u64(stream_seed),
            sampler,
            ranking,
        }
    }

    /// Uniform phase offset in `[0, 1)` for the first request.
    pub fn phase(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn next_index(&mut self) -> usize {
        let rank = match &self.sampler {
            Sampler::Uniform => self.rng.random_range(0..self.ranking.len()),
            Sampler::Zipf(z) => (z.sample(&mut self.rng) as usize - 1).min(self.ranking.len() - 1),
        };
        self.ranking[rank]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::topology::build_abilene;

    #[test]
    fn catalog_names() {
        let topo = build_abilene();
        let catalog = Catalog::build(&topo, 100);
        assert_eq!(catalog.len(), 1200);
        assert_eq!(catalog.names()[42].to_string(), "/Sea/item042");
        assert_eq!(catalog.owned_by(NodeId(2)).count(), 100);
        assert!(catalog
            .owned_by(NodeId(2))
            .all(|n| n.components()[0] == "Den"));
    }

    #[test]
    fn ranking_is_a_permutation() {
        let mut r = (*popularity_ranking(1200, 7)).clone();
        r.sort();
        assert_eq!(r, (0..1200).collect::<Vec<_>>());
        assert_eq!(popularity_ranking(50, 3), popularity_ranking(50, 3));
    }

    #[test]
    fn zipf_head_dominates() {
        let ranking = Arc::new((0..1200).collect::<Vec<_>>());
        let mut stream = RequestStream::new(Popularity::Zipf(1.0), ranking.clone(), 1, NodeId(0));
        let draws: Vec<usize> = (0..20_000).map(|_| stream.next_index()).collect();
        assert!(draws.iter().all(|&i| i < 1200));
        let top = draws.iter().filter(|&&i| i == 0).count() as f64 / draws.len() as f64;
        // P(rank 1) = 1 / H(1200) ~ 0.130
        assert!((top - 0.130).abs() < 0.015, "{top}");

        let mut uniform = RequestStream::new(Popularity::Uniform, ranking, 1, NodeId(0));
        let hits = (0..12_000).filter(|_| uniform.next_index() == 0).count();
        assert!(hits < 40, "{hits}");
    }

    #[test]
    fn streams_are_seeded() {
        let ranking = popularity_ranking(1200, 1);
        let mut a = RequestStream::new(Popularity::Zipf(1.0), ranking.clone(), 5, NodeId(3));
        let mut b = RequestStream::new(Popularity::Zipf(1.0), ranking.clone(), 5, NodeId(3));
        let mut c = RequestStream::new(Popularity::Zipf(1.0), ranking, 5, NodeId(4));
        let xa: Vec<_> = (0..100).map(|_| a.next_index()).collect();
        let xb: Vec<_> = (0..100).map(|_| b.next_index()).collect();
        let xc: Vec<_> = (0..100).map(|_| c.next_index()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }
}
