//! Workbench-level behavior: suite selection, budgets, mutation detection
//! and generator determinism.

use tedlab_cli::report::Verdict;
use tedlab_cli::suites::wted_suite_with;
use tedlab_cli::{gen_graph, verify_all, RunConfig};

fn quick_config() -> RunConfig {
    RunConfig { seed: 7, out_dir: None, budget_secs: 600, stress: false, suites: Vec::new() }
}

#[test]
fn suite_selection_emits_exactly_one_report() {
    let config = RunConfig { suites: vec!["folding".into()], ..quick_config() };
    let reports = verify_all(&config);
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0].suite, "folding");
    assert_eq!(reports[0].verdict, Verdict::Pass);
}

#[test]
fn corrupted_cost_entry_fails_the_weighted_suite() {
    let report = wted_suite_with(&quick_config(), true);
    assert_eq!(report.verdict, Verdict::Fail);
    let mutated = report
        .cases
        .iter()
        .find(|c| c.name == "mutation/corrupted_entry_detected")
        .expect("mutation case present");
    assert_eq!(mutated.status, Verdict::Fail);
    // Every honest case still passes.
    assert!(report
        .cases
        .iter()
        .filter(|c| c.name != "mutation/corrupted_entry_detected")
        .all(|c| c.status == Verdict::Pass));
}

#[test]
fn exhausted_budget_reports_skipped_not_pass() {
    let config = RunConfig { budget_secs: 0, suites: vec!["gadgets".into()], ..quick_config() };
    let reports = verify_all(&config);
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0].verdict, Verdict::Skipped);
    assert!(reports[0].cases.iter().all(|c| c.status == Verdict::Skipped));
}

#[test]
fn graph_generator_is_deterministic_and_respects_density() {
    let a = gen_graph(99, 7, 0.5, Some(5));
    let b = gen_graph(99, 7, 0.5, Some(5));
    assert_eq!(
        serde_json::to_string(&a.to_json()).unwrap(),
        serde_json::to_string(&b.to_json()).unwrap()
    );
    let complete = gen_graph(1, 6, 1.0, None);
    assert_eq!(complete.edges().len(), 15);
    let empty = gen_graph(1, 6, 0.0, None);
    assert!(empty.edges().is_empty());
}
