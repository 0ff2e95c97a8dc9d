//! Runs every acceptance criterion and prints one line per criterion.
//! Fails if any check outside the known-failure list fails.

use innerlab::acceptance::{run_all, KNOWN_FAILURES};
use innerlab::parallel::{build_pool, thread_count};

fn main() {
    let pool = build_pool(thread_count(None).expect("thread count")).expect("thread pool");
    let outcomes = run_all(&pool);
    let mut unexpected = Vec::new();
    for o in &outcomes {
        println!("{o}");
        for c in o.unexpected_failures() {
            unexpected.push(format!("criterion {} {}: {}", o.id, c.name, c.detail));
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    println!("\n{passed} of {} criteria passed; known failures: {KNOWN_FAILURES:?}", outcomes.len());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures:\n  {}", unexpected.join("\n  "));
        std::process::exit(1);
    }
}
