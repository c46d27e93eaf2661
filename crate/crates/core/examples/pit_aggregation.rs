//! PIT behaviour for repeated, replayed and aggregated interests, and the
//! query name a first-hop router would attach.
//!
//! `cargo run --example pit_aggregation`

use ccn_qsim::{parse_name, FaceId, InterestPacket, NodeId, Nonce, Pit, SimTime};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut pit = Pit::new();
    let hot = parse_name("/Sea/item001")?;
    let cold = parse_name("/NY/item090")?;
    let t = SimTime::from_millis(5);

    let arrivals = [
        (&hot, 1, FaceId(1)),
        (&hot, 2, FaceId(2)),
        (&hot, 2, FaceId(3)),
        (&hot, 3, FaceId(3)),
        (&cold, 4, FaceId(1)),
    ];
    for (name, nonce, face) in arrivals {
        let interest = InterestPacket::new(name.clone(), Nonce(nonce), t, NodeId(0));
        let decision = pit.on_interest(&interest, face, t);
        println!("{name} nonce {nonce} on {face}: {decision:?}");
    }

    let entry = pit.get(&hot).expect("entry exists");
    println!("{hot}: {} requests from faces {:?}", entry.request_count, entry.in_faces);
    println!(
        "query name for an interest on {cold}: {:?}",
        pit.most_popular(&cold).map(|n| n.to_string())
    );
    println!("data for {hot} goes back to {:?}", pit.on_data(&hot));
    Ok(())
}
