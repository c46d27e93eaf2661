use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::content_store::CachePolicy;
use crate::fib::FaceState;
use crate::packet::QueryResult;

fn n(text: &str) -> ContentName {
    text.parse().unwrap()
}

fn node(strategy: ForwardingStrategy, policy: CachePolicy, capacity: usize) -> NodeState {
    let config = NodeConfig {
        strategy,
        fib: FibConfig::new(2, SimTime::from_millis(4_800)),
        pit_init_timeout: SimTime::from_millis(2_000),
        payload_size: 1024,
    };
    NodeState::new(
        NodeId(0),
        ContentStore::new(capacity, policy),
        vec![FaceId(1), FaceId(2), FaceId(3)],
        config,
        QueryMechanism::new(true, 0.5),
    )
}

fn interest(name: &str, nonce: u32) -> InterestPacket {
    InterestPacket::new(n(name), Nonce(nonce), SimTime::ZERO, NodeId(9))
}

fn sent_faces(effects: &[Effect]) -> Vec<FaceId> {
    effects
        .iter()
        .filter_map(|e| match e {
            Effect::SendInterest { face, .. } => Some(*face),
            _ => None,
        })
        .collect()
}

/// Holder cache with `/p/1` .. `/p/5` inserted at 1..5 ms under FIFO, so
/// `/p/k` has survival rank `(5 - k) / 5`.
fn holder() -> NodeState {
    let mut holder = node(ForwardingStrategy::SmartFlooding, CachePolicy::Fifo, 5);
    for k in 1..=5 {
        holder.cs.insert(
            &DataPacket::new(n(&format!("/p/{k}")), 1024),
            SimTime::from_millis(k),
        );
    }
    holder
}

#[test]
fn cs_hit_without_query_answers_plainly() {
    let mut holder = holder();
    let mut out = Vec::new();
    holder.on_interest(interest("/p/5", 1), FaceId(1), SimTime::from_millis(10), &mut out);
    assert_eq!(holder.counters.cs_hits, 1);
    match out.as_slice() {
        [Effect::SendData { face, data }] => {
            assert_eq!(*face, FaceId(1));
            assert_eq!(data.name, n("/p/5"));
            assert_eq!(data.query_result, None);
        }
        other => panic!("{other:?}"),
    }
    assert!(holder.pit.is_empty());
}

#[test]
fn query_answer_follows_the_rank_gate() {
    let mut holder = holder();
    let mut out = Vec::new();
    let asks_young = interest("/p/5", 1).with_query_name(n("/p/4")).unwrap();
    holder.on_interest(asks_young, FaceId(1), SimTime::from_millis(10), &mut out);
    let Effect::SendData { data, .. } = &out[0] else {
        panic!("{out:?}")
    };
    assert_eq!(
        data.query_result,
        Some(QueryResult {
            name: n("/p/4"),
            holder: NodeId(0)
        })
    );

    out.clear();
    let asks_old = interest("/p/5", 2).with_query_name(n("/p/1")).unwrap();
    holder.on_interest(asks_old, FaceId(1), SimTime::from_millis(11), &mut out);
    let Effect::SendData { data, .. } = &out[0] else {
        panic!("{out:?}")
    };
    assert_eq!(data.query_result, None);
    assert_eq!(holder.counters.queries_answered, 1);
}

#[test]
fn query_disabled_never_answers() {
    let mut holder = holder();
    holder.query = QueryMechanism::new(false, 0.5);
    let mut out = Vec::new();
    let tagged = interest("/p/5", 1).with_query_name(n("/p/4")).unwrap();
    holder.on_interest(tagged, FaceId(1), SimTime::from_millis(10), &mut out);
    let Effect::SendData { data, .. } = &out[0] else {
        panic!("{out:?}")
    };
    assert_eq!(data.query_result, None);
}

#[test]
fn first_hop_tags_with_most_popular_pending_name() {
    let mut r = node(ForwardingStrategy::BestRoute, CachePolicy::Lru, 10);
    r.fib.seed_route(n("/p"), FaceId(2), SimTime::from_millis(20));
    let mut out = Vec::new();
    r.on_interest(interest("/p/hot", 1), FaceId(1), SimTime::ZERO, &mut out);
    r.on_interest(interest("/p/hot", 2), FaceId(3), SimTime::ZERO, &mut out);
    out.clear();
    r.on_interest(interest("/p/new", 3), FaceId::APP, SimTime::from_millis(1), &mut out);
    let tagged: Vec<_> = out
        .iter()
        .filter_map(|e| match e {
            Effect::SendInterest { interest, .. } => Some(interest.query_name().cloned()),
            _ => None,
        })
        .collect();
    assert_eq!(tagged, vec![Some(n("/p/hot"))]);
    assert_eq!(r.counters.queries_attached, 1);

    // transit interests are not tagged
    out.clear();
    r.on_interest(interest("/p/other", 4), FaceId(1), SimTime::from_millis(2), &mut out);
    let Effect::SendInterest { interest, .. } = &out[0] else {
        panic!("{out:?}")
    };
    assert_eq!(interest.query_name(), None);
}

#[test]
fn data_with_query_result_updates_fib() {
    let mut r = node(ForwardingStrategy::SmartFlooding, CachePolicy::Lru, 10);
    r.fib.seed_route(n("/a"), FaceId(1), SimTime::from_millis(20));
    let mut out = Vec::new();
    r.on_interest(interest("/a/x", 1), FaceId::APP, SimTime::ZERO, &mut out);
    let mut data = DataPacket::new(n("/a/x"), 1024);
    data.query_result = Some(QueryResult {
        name: n("/b/y"),
        holder: NodeId(4),
    });
    out.clear();
    r.on_data(data, FaceId(2), SimTime::from_millis(30), &mut out);
    let learned = r.fib.lookup(&n("/b/y"));
    assert_eq!(learned.len(), 1);
    assert_eq!(learned[0].face, FaceId(2));
    assert_eq!(learned[0].metric, SimTime::from_millis(30));
    assert_eq!(learned[0].state, FaceState::Green);
    assert_eq!(r.counters.query_routes_learned, 1);
    assert!(matches!(out.as_slice(), [Effect::Deliver { .. }]));
    assert!(r.cs.contains(&n("/a/x")));
}

#[test]
fn unsolicited_data_changes_nothing() {
    let mut r = node(ForwardingStrategy::SmartFlooding, CachePolicy::Lru, 10);
    let mut data = DataPacket::new(n("/a/x"), 1024);
    data.query_result = Some(QueryResult {
        name: n("/b/y"),
        holder: NodeId(4),
    });
    let mut out = Vec::new();
    r.on_data(data, FaceId(2), SimTime::from_millis(30), &mut out);
    assert!(out.is_empty());
    assert!(r.fib.is_empty());
    assert!(r.cs.is_empty());
    assert_eq!(r.counters.unsolicited_data, 1);
}

#[test]
fn aggregation_and_duplicates() {
    let mut r = node(ForwardingStrategy::BestRoute, CachePolicy::Lru, 10);
    r.fib.seed_route(n("/a"), FaceId(2), SimTime::from_millis(20));
    let mut out = Vec::new();
    r.on_interest(interest("/a/x", 1), FaceId(1), SimTime::ZERO, &mut out);
    assert_eq!(sent_faces(&out), vec![FaceId(2)]);
    out.clear();
    r.on_interest(interest("/a/x", 2), FaceId(3), SimTime::ZERO, &mut out);
    assert!(out.is_empty());
    r.on_interest(interest("/a/x", 1), FaceId(3), SimTime::ZERO, &mut out);
    assert!(out.is_empty());
    assert_eq!((r.counters.aggregated, r.counters.duplicates_dropped), (1, 1));

    r.on_data(DataPacket::new(n("/a/x"), 1024), FaceId(2), SimTime::from_millis(20), &mut out);
    let faces: Vec<_> = out
        .iter()
        .filter_map(|e| match e {
            Effect::SendData { face, .. } => Some(*face),
            _ => None,
        })
        .collect();
    assert_eq!(faces, vec![FaceId(1), FaceId(3)]);
}

#[test]
fn green_face_timer_uses_metric() {
    let mut r = node(ForwardingStrategy::SmartFlooding, CachePolicy::Lru, 10);
    r.fib.seed_route(n("/a"), FaceId(2), SimTime::from_millis(40));
    r.fib.seed_route(n("/b"), FaceId(2), SimTime::from_millis(10));
    let mut out = Vec::new();
    r.on_interest(interest("/a/x", 1), FaceId::APP, SimTime::from_millis(100), &mut out);
    r.on_interest(interest("/b/x", 2), FaceId::APP, SimTime::from_millis(100), &mut out);
    let deadlines: Vec<_> = out
        .iter()
        .filter_map(|e| match e {
            Effect::ArmTimer { deadline, .. } => Some(*deadline),
            _ => None,
        })
        .collect();
    assert_eq!(
        deadlines,
        vec![SimTime::from_millis(180), SimTime::from_millis(150)]
    );
}

#[test]
fn best_route_timeout_walks_faces_then_gives_up() {
    let mut r = node(ForwardingStrategy::BestRoute, CachePolicy::Lru, 10);
    r.fib.seed_route(n("/a"), FaceId(2), SimTime::from_millis(20));
    r.fib.seed_route(n("/a"), FaceId(3), SimTime::from_millis(30));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut out = Vec::new();
    r.on_interest(interest("/a/x", 1), FaceId::APP, SimTime::ZERO, &mut out);
    assert_eq!(sent_faces(&out), vec![FaceId(2)]);

    out.clear();
    r.on_timer(SimTime::from_millis(50), &mut rng, &mut out);
    assert_eq!(sent_faces(&out), vec![FaceId(3)]);
    let Effect::SendInterest { interest: retry, .. } = &out[0] else {
        panic!("{out:?}")
    };
    assert_ne!(retry.nonce, Nonce(1));
    assert_eq!(r.counters.retransmissions, 1);

    out.clear();
    r.on_timer(SimTime::from_millis(200), &mut rng, &mut out);
    assert_eq!(
        out,
        vec![Effect::GiveUp {
            name: n("/a/x"),
            app_waiting: true
        }]
    );
    assert!(r.pit.is_empty());
    assert_eq!(r.counters.flood_events, 0);
    assert_eq!(r.counters.pit_giveups, 1);
}

#[test]
fn smart_flooding_timeout_floods() {
    let mut r = node(ForwardingStrategy::SmartFlooding, CachePolicy::Lru, 10);
    r.fib.seed_route(n("/a"), FaceId(2), SimTime::from_millis(20));
    r.fib.seed_route(n("/a"), FaceId(3), SimTime::from_millis(30));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut out = Vec::new();
    r.on_interest(interest("/a/x", 1), FaceId(1), SimTime::ZERO, &mut out);
    assert_eq!(sent_faces(&out), vec![FaceId(2)]);
    out.clear();
    r.on_timer(SimTime::from_millis(50), &mut rng, &mut out);
    assert_eq!(sent_faces(&out), vec![FaceId(2), FaceId(3)]);
    assert_eq!((r.counters.flood_events, r.counters.flood_packets), (1, 2));
    assert_eq!((r.counters.retry_floods, r.counters.blind_floods), (1, 0));
    let Some(Effect::ArmTimer { deadline, .. }) = out.last() else {
        panic!("{out:?}")
    };
    assert_eq!(*deadline, SimTime::from_millis(2_050));
}

#[test]
fn no_route_floods_all_links_except_arrival() {
    let mut r = node(ForwardingStrategy::SmartFlooding, CachePolicy::Lru, 10);
    let mut out = Vec::new();
    r.on_interest(interest("/z/x", 1), FaceId(2), SimTime::ZERO, &mut out);
    assert_eq!(sent_faces(&out), vec![FaceId(1), FaceId(3)]);
    assert_eq!((r.counters.flood_events, r.counters.blind_floods), (1, 1));

    let mut br = node(ForwardingStrategy::BestRoute, CachePolicy::Lru, 10);
    out.clear();
    br.on_interest(interest("/z/x", 1), FaceId(2), SimTime::ZERO, &mut out);
    assert!(matches!(out.as_slice(), [Effect::GiveUp { app_waiting: false, .. }]));
}

#[test]
fn producer_answers_owned_names() {
    let mut p = node(ForwardingStrategy::SmartFlooding, CachePolicy::Lru, 10);
    p.set_producer(n("/p"), [n("/p/item0"), n("/q/stray")]);
    let mut out = Vec::new();
    p.on_interest(interest("/p/item0", 1), FaceId(1), SimTime::ZERO, &mut out);
    assert!(matches!(out.as_slice(), [Effect::SendData { face: FaceId(1), .. }]));
    assert_eq!(p.counters.producer_hits, 1);
    assert!(!p.owned_names.contains(&n("/q/stray")));
}
