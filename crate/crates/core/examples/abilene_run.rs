//! One Table I run on Abilene, printing network totals and per-node counters.
//!
//! `cargo run --release --example abilene_run -- [on|off] [lru|lfu|fifo] [fraction] [best-route]`

use ccn_qsim::sim::{run, Scenario};
use ccn_qsim::ForwardingStrategy;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut scenario = Scenario::table1();
    scenario.query_enabled = args.first().is_none_or(|a| a != "off");
    if let Some(policy) = args.get(1) {
        scenario.cache_policy = policy.parse()?;
    }
    if let Some(fraction) = args.get(2) {
        scenario.set_cache_fraction(fraction.parse()?)?;
    }
    if args.get(3).is_some_and(|s| s == "best-route") {
        scenario.strategy = ForwardingStrategy::BestRoute;
    }

    let report = run(&scenario)?;
    println!(
        "{} {} query={} C={}: emitted {} satisfied {} unsatisfied {} avg {:.3} ms",
        report.strategy,
        report.policy,
        report.query_enabled,
        report.cache_capacity,
        report.emitted,
        report.satisfied,
        report.unsatisfied,
        report.avg_response_time_ms
    );
    println!("{:#?}", report.totals);
    for node in &report.per_node {
        println!(
            "{:>2} {:<15} emitted {:>6} unsat {:>4} avg {:>6.2} ms cs_hits {:>6} floods {:>4}",
            node.node,
            node.label,
            node.emitted,
            node.unsatisfied,
            node.avg_response_time_ms,
            node.counters.cs_hits,
            node.counters.flood_events
        );
    }
    Ok(())
}
