//! Acceptance suite: runs every verification criterion at its stated bound
//! and prints one pass/fail line per criterion. `cobord verify-all` runs the
//! same checks from the command line.

use cobord::verify::{run_all, VerifyConfig};

#[test]
fn acceptance_suite() {
    let cfg = VerifyConfig::default();
    let results = run_all(&cfg);
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| r.line()).collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
    assert_eq!(results.len(), 8);
}
