//! Workbench orchestration: seeded instance generation, verification suites
//! and deterministic reports.
//!
//! Every suite runs a fixed, seed-derived case list, collects one row per
//! case, and aggregates into a report whose serialized form is byte-stable
//! for a fixed configuration (timings go to stderr, never into report
//! files). A suite that exhausts its cooperative time budget marks the
//! remaining cases as skipped and reports `SKIPPED`, never `PASS`.

pub mod report;
pub mod suites;

use std::path::PathBuf;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use tedlab_core::graph::Graph;

pub use report::{CaseRow, Report, Verdict};

/// Configuration shared by every verb.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
    /// Cooperative per-suite budget, checked between cases.
    pub budget_secs: u64,
    /// Enables the expensive stress tiers.
    pub stress: bool,
    /// Restrict `verify_all` to these suites (all when empty).
    pub suites: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: 0xC0FFEE, out_dir: None, budget_secs: 900, stress: false, suites: Vec::new() }
    }
}

/// Seeded Erdős–Rényi graph; identical arguments yield identical graphs.
pub fn gen_graph(seed: u64, n: u32, density: f64, w_max: Option<u64>) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.random_bool(density) {
                edges.push((u, v, w_max.map_or(1, |m| rng.random_range(1..=m))));
            }
        }
    }
    match w_max {
        Some(_) => Graph::new_weighted(n, &edges).expect("generated graph is valid"),
        None => {
            let bare: Vec<(u32, u32)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
            Graph::new(n, &bare).expect("generated graph is valid")
        }
    }
}

/// Runs the selected suites and returns their reports in a fixed order.
pub fn verify_all(config: &RunConfig) -> Vec<Report> {
    let wanted = |name: &str| config.suites.is_empty() || config.suites.iter().any(|s| s == name);
    let mut reports = Vec::new();
    if wanted("gadgets") {
        reports.push(suites::gadget_suite(config));
    }
    if wanted("uted") {
        reports.push(suites::uted_suite(config));
    }
    if wanted("wted") {
        reports.push(suites::wted_suite(config));
    }
    if wanted("folding") {
        reports.push(suites::folding_suite(config));
    }
    if wanted("online") {
        reports.push(suites::online_suite(config));
    }
    if let Some(dir) = &config.out_dir {
        report::write_reports(dir, &reports).expect("report directory is writable");
    }
    reports
}
