//! Walks one FIB entry through green/yellow transitions as data arrives on
//! different faces over time.
//!
//! `cargo run --example fib_update`

use ccn_qsim::{fib_threshold, parse_name, FaceId, Fib, FibConfig, SimTime};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = parse_name("/Den/item007")?;
    // 240 cached chunks turned over at 100 new contents per second
    let staleness = fib_threshold(240.0, 100.0)?;
    let config = FibConfig::new(2, staleness);
    println!("staleness threshold {staleness}");

    let mut fib = Fib::new();
    fib.seed_route(parse_name("/Den")?, FaceId(1), SimTime::from_millis(30));

    // (time ms, face, response time ms)
    let arrivals = [
        (100, 2, 40),
        (200, 3, 20),
        (300, 4, 50),
        (3_000, 4, 45),
        (3_100, 3, 25),
        (5_000, 5, 10),
    ];
    for (at, face, rt) in arrivals {
        fib.update_entry_face(
            &name,
            FaceId(face),
            SimTime::from_millis(rt),
            SimTime::from_millis(at),
            &config,
        );
        let faces: Vec<String> = fib
            .lookup(&name)
            .iter()
            .map(|f| format!("{}:{}:{}", f.face, f.metric, if f.is_green() { "G" } else { "Y" }))
            .collect();
        println!("t={at:>5} ms face {face} rt {rt:>2} ms -> {}", faces.join(" "));
    }
    Ok(())
}
