use torsionlab::corpus::bundled_ring;
use torsionlab::derivext::{extend_on, Strategy};
use torsionlab::gabriel::lambek_filter;
use torsionlab::quotient::module_of_quotients;
use torsionlab::suites::{audit_extension, run_all, suite, Lab};
use torsionlab::{enumerate_derivations, FiniteModule, Side};

#[test]
fn audit_rejects_a_corrupted_extension() {
    let r = bundled_ring("t2f2").unwrap();
    let delta = enumerate_derivations(&r).into_iter().find(|d| !d.is_zero(r.zero())).unwrap();
    let m = FiniteModule::regular_right(&r);
    let qm = module_of_quotients(&lambek_filter(&r, Side::Right).unwrap(), &m).unwrap();
    let ext = extend_on(&qm, &delta.table, &delta.table, Strategy::Auto).unwrap();
    assert!(audit_extension("t2f2", &qm, &delta.table, &delta.table, &ext.table).passed());
    for x in 1..qm.size() {
        let mut bad = ext.table.clone();
        bad[x] = (bad[x] + 1) % qm.size();
        let report = audit_extension("t2f2", &qm, &delta.table, &delta.table, &bad);
        assert!(!report.passed(), "corruption at {x} undetected");
        assert!(!report.witnesses.is_empty());
    }
}

#[test]
fn z6_reports_are_clean_and_stable() {
    let lab = Lab::bundled("z6").unwrap();
    let a = run_all(&lab, false);
    assert!(a.iter().all(|r| r.passed()), "{a:#?}");
    let b = run_all(&Lab::bundled("z6").unwrap(), false);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a.iter().all(|r| r.wall_clock_ms.is_none()));
}

#[test]
fn unknown_suite_is_none() {
    assert!(suite("no-such-suite").is_none());
    assert_eq!(suite("agreement").unwrap().criterion, 7);
}
