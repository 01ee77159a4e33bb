//! Acceptance run: one line per criterion with its wall clock against the limit.

use std::io::Write;
use std::time::{Duration, Instant};

use torsionlab::corpus::RING_KEYS;
use torsionlab::suites::{run_suites, Lab, SuiteReport, SUITES};

const LIMITS: [(u8, u64); 9] = [(1, 5), (2, 60), (3, 600), (4, 120), (5, 5), (6, 300), (7, 600), (8, 1200), (9, 5)];

/// Written to the process stdout directly so the lines survive test output capture.
fn line(s: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}");
}

#[test]
fn acceptance() {
    let setup = Instant::now();
    let labs: Vec<Lab> = RING_KEYS.iter().map(|k| Lab::bundled(k).expect("bundled ring")).collect();
    let setup = setup.elapsed();
    let mut failed = Vec::new();
    for (criterion, limit) in LIMITS {
        let defs: Vec<_> = SUITES.iter().filter(|s| s.criterion == criterion).collect();
        let start = Instant::now();
        let reports: Vec<SuiteReport> = labs.iter().flat_map(|lab| run_suites(lab, &defs, false)).collect();
        // corpus setup (filters, modules, derivations) is charged to the first criterion
        let elapsed = start.elapsed() + if criterion == 1 { setup } else { Duration::ZERO };
        let instances: usize = reports.iter().map(|r| r.instances).sum();
        let fails: Vec<&SuiteReport> = reports.iter().filter(|r| !r.passed()).collect();
        let in_time = elapsed <= Duration::from_secs(limit);
        let ok = fails.is_empty() && in_time;
        line(format!(
            "criterion {criterion}: {} ({instances} instances, {} failing reports, {:.2} s of {limit} s)",
            if ok { "PASS" } else { "FAIL" },
            fails.len(),
            elapsed.as_secs_f64()
        ));
        for r in &fails {
            line(format!("  {} on {}: {} failures, first {:?}", r.suite, r.ring, r.fail, r.witnesses.first()));
        }
        let mut notes: Vec<&String> = Vec::new();
        for n in reports.iter().filter(|r| r.criterion == 9).flat_map(|r| &r.notes) {
            if !notes.contains(&n) {
                notes.push(n);
            }
        }
        for n in notes {
            line(format!("  note: {n}"));
        }
        if !ok {
            failed.push(criterion);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
