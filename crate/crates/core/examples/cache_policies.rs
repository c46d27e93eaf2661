//! Same access pattern through LRU, LFU and FIFO stores, showing eviction
//! order and which names count as long-lived.
//!
//! `cargo run --example cache_policies`

use ccn_qsim::{parse_name, CachePolicy, ContentStore, DataPacket, SimTime};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let names: Vec<_> = ["/a", "/b", "/c", "/d", "/e"]
        .iter()
        .map(|n| parse_name(n))
        .collect::<Result<_, _>>()?;
    // /a is read often, /c once, the rest never after insertion
    let reads = [0, 0, 2, 0, 0, 0];

    for policy in CachePolicy::ALL {
        let mut cs = ContentStore::new(4, policy);
        let mut now = 0;
        let mut tick = || {
            now += 1;
            SimTime::from_millis(now)
        };
        for name in &names[..4] {
            cs.insert(&DataPacket::new(name.clone(), 1024), tick());
        }
        for &i in &reads {
            cs.lookup(&names[i], tick());
        }
        let evicted = cs.insert(&DataPacket::new(names[4].clone(), 1024), tick());

        println!("{policy}: evicted {}", evicted.map_or("-".into(), |n| n.to_string()));
        for name in cs.eviction_order() {
            println!(
                "  {name:<3} rank {:.2} long-lived {}",
                cs.survival_rank(name).unwrap_or_default(),
                cs.is_long_lived(name, 0.5)
            );
        }
    }
    Ok(())
}
