//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criterion 10 (determinism) runs the whole battery a second time with the
//! same configuration and compares the serialized reports byte for byte.

use chainrep::selftest::{run, SelftestConfig};

#[test]
fn acceptance() {
    let config = SelftestConfig::default();
    let first = run(&config).expect("selftest runs");
    let mut failed = Vec::new();
    for c in &first.criteria {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict}: {} {}", c.id, c.name, c.detail);
        if !c.passed {
            failed.push(c.id);
        }
    }
    let a = serde_json::to_string_pretty(&first).unwrap();
    let b = serde_json::to_string_pretty(&run(&config).expect("selftest runs")).unwrap();
    let deterministic = a == b;
    println!(
        "criterion 10 {}: identical reports for identical configuration ({} bytes)",
        if deterministic { "PASS" } else { "FAIL" },
        a.len()
    );
    if !deterministic {
        failed.push(10);
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
