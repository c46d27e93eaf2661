//! Small cache-size sweep written as CSV to stdout.
//!
//! `cargo run --release --example sweep_csv -- [seeds]`

use ccn_qsim::sim::{sweep, write_csv, Scenario};
use ccn_qsim::CachePolicy;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seeds: u64 = std::env::args().nth(1).map_or(Ok(2), |s| s.parse())?;
    let seeds: Vec<u64> = (1..=seeds).collect();
    let mut base = Scenario::table1();
    base.duration = 30.0;
    let reports = sweep(&base, &[0.4, 0.7], &[CachePolicy::Lru, CachePolicy::Lfu], &[false, true], &seeds)?;
    write_csv(std::io::stdout().lock(), &reports, true)?;
    Ok(())
}
