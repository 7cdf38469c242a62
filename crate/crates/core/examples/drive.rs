//! Dev driver: build and verify one entry, print the report.
use oadp_core::catalog::{build_entry, run_checks, EntryId, RunSettings};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let id = EntryId::parse(args.get(1).map(|s| s.as_str()).unwrap_or("E1")).unwrap();
    let t = std::time::Instant::now();
    match build_entry(id) {
        Err(e) => println!("{}: BUILD FAILED: {e}", id.name()),
        Ok(built) => {
            println!("{}: built in {:?}, dim {}", id.name(), t.elapsed(), built.system.dim());
            let settings = RunSettings { primes: vec![10007, 10009, 10037], trials: 5, seed: 20260810, with_timings: true };
            let rep = run_checks(&built, &settings);
            for c in &rep.checks {
                println!("  [{}] {} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            println!("verdict: {} ({:?})", rep.verdict, t.elapsed());
        }
    }
}
