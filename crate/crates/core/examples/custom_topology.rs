//! Runs a scenario on a topology parsed from text: a four-router ring with
//! one slow link.
//!
//! `cargo run --example custom_topology`

use ccn_qsim::sim::{run, Scenario, Topology};

const RING: &str = "
node 0 A /a
node 1 B /b
node 2 C /c
node 3 D /d
link 0 1 5
link 1 2 5
link 2 3 5
link 3 0 40
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let topology = Topology::parse(RING)?;
    println!("{} nodes, {} links, connected {}", topology.node_count(), topology.links().len(), topology.is_connected());

    let mut scenario = Scenario::table1();
    scenario.topology = topology;
    scenario.names_per_producer = 50;
    scenario.duration = 20.0;
    scenario.set_cache_fraction(0.4)?;
    for query in [false, true] {
        scenario.query_enabled = query;
        let report = run(&scenario)?;
        println!(
            "query {query:<5} emitted {} unsatisfied {} interest_tx {} avg {:.2} ms",
            report.emitted, report.unsatisfied, report.interest_tx, report.avg_response_time_ms
        );
    }
    Ok(())
}
