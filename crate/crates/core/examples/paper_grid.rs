//! Runs the cache-size grid for both strategies and prints per-cell means of
//! query-off vs query-on.
//!
//! `cargo run --release --example paper_grid -- [seeds] [duration_s]`

use ccn_qsim::sim::{sweep, MetricsReport, Scenario, PAPER_FRACTIONS};
use ccn_qsim::{CachePolicy, ForwardingStrategy};

fn mean(rows: &[&MetricsReport], f: impl Fn(&MetricsReport) -> f64) -> f64 {
    rows.iter().map(|r| f(r)).sum::<f64>() / rows.len() as f64
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seeds: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5);
    let duration: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(180.0);
    let seeds: Vec<u64> = (1..=seeds).collect();

    for strategy in [ForwardingStrategy::SmartFlooding, ForwardingStrategy::BestRoute] {
        let mut base = Scenario::table1();
        base.strategy = strategy;
        base.duration = duration;
        let reports = sweep(&base, &PAPER_FRACTIONS, &CachePolicy::ALL, &[false, true], &seeds)?;
        println!("\n{strategy}");
        println!(
            "{:<5} {:>5} | {:>17} | {:>19} | {:>17} | {:>15} | {:>13}",
            "pol", "frac", "floods off/on", "interest_tx off/on", "retx off/on", "rt ms off/on", "unsat off/on"
        );
        for policy in CachePolicy::ALL {
            for fraction in PAPER_FRACTIONS {
                let cell = |q: bool| -> Vec<&MetricsReport> {
                    reports
                        .iter()
                        .filter(|r| {
                            r.policy == policy && r.query_enabled == q && (r.cache_fraction - fraction).abs() < 1e-9
                        })
                        .collect()
                };
                let (off, on) = (cell(false), cell(true));
                let m = |f: fn(&MetricsReport) -> f64| (mean(&off, f), mean(&on, f));
                let fl = m(|r| r.flood_events as f64);
                let tx = m(|r| r.interest_tx as f64);
                let rt = m(|r| r.retransmissions as f64);
                let ms = m(|r| r.avg_response_time_ms);
                let un = m(|r| r.unsatisfied as f64);
                println!(
                    "{:<5} {:>5.2} | {:>8.0} {:>8.0} | {:>9.0} {:>9.0} | {:>8.0} {:>8.0} | {:>7.3} {:>7.3} | {:>6.0} {:>6.0}",
                    policy.as_str(), fraction, fl.0, fl.1, tx.0, tx.1, rt.0, rt.1, ms.0, ms.1, un.0, un.1
                );
            }
        }
    }
    Ok(())
}
