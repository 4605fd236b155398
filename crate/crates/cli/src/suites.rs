//! The verification suites behind `verify-all`.

use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use tedlab_core::cliques::enumerate_k_cliques;
use tedlab_core::engine::RecomputeEngine;
use tedlab_core::ext_int::Fin;
use tedlab_core::folding::{
    brute_force_folding, dyck_ed, dyck_embed, embed_alphabet, expand_weighted, is_balanced,
    rna_score, rna_score_weighted, PairedAlphabet, Sym,
};
use tedlab_core::gadgets::{check_clique_gadget_lemma, check_node_gadget_claim};
use tedlab_core::graph::Graph;
use tedlab_core::parsing::{
    dyck_edit_grammar, online_dyck, online_parse, online_rna, partition_sizes,
    static_scored_parse, OnlineParser, ScoredGrammar,
};
use tedlab_core::ted::ted;
use tedlab_core::uted::{check_embedding, run_3kclique_driver, UnweightedInstance};
use tedlab_core::wted::{
    build_dynamic_instance, check_base_optimum, check_dynamic_optimum, min_four_clique_through,
    run_4clique_driver, run_incremental_driver,
};

use crate::report::{CaseRow, Report};
use crate::{gen_graph, RunConfig};

struct Budget {
    deadline: Instant,
}

impl Budget {
    fn new(config: &RunConfig) -> Budget {
        Budget { deadline: Instant::now() + Duration::from_secs(config.budget_secs) }
    }

    fn exhausted(&self) -> bool {
        Instant::now() > self.deadline
    }
}

/// Node-gadget claim and clique-gadget lemma sweeps.
pub fn gadget_suite(config: &RunConfig) -> Report {
    let started = Instant::now();
    let budget = Budget::new(config);
    let mut cases = Vec::new();

    // Node claim: seeded random graphs plus the complete and empty extremes.
    let mut graphs: Vec<(String, Graph)> = Vec::new();
    for i in 0..50u64 {
        let n = 2 + (i % 6) as u32; // 2..=7
        let density = 0.15 + 0.75 * ((i % 10) as f64 / 9.0);
        graphs.push((format!("er[{i}]"), gen_graph(config.seed ^ (0x9a0 + i), n, density, None)));
    }
    for n in 2..=7 {
        graphs.push((format!("complete[{n}]"), Graph::complete(n, false)));
        graphs.push((format!("empty[{n}]"), Graph::new(n, &[]).expect("empty graph")));
    }
    for (name, graph) in &graphs {
        if budget.exhausted() {
            cases.push(CaseRow::skipped(format!("node_claim/{name}"), "budget exhausted"));
            continue;
        }
        let report = check_node_gadget_claim(graph);
        cases.push(CaseRow::check(
            format!("node_claim/{name}"),
            report.violations.is_empty(),
            json!({
                "graph": graph.to_json(),
                "pairs": report.pairs_checked,
                "c_node": report.params.c_node,
                "violations": report.violations,
            }),
        ));
    }

    // Clique lemma: seeded graphs, k ∈ {1, 2}.
    for i in 0..20u64 {
        let n = 4 + (i % 3) as u32; // 4..=6
        let density = 0.3 + 0.6 * ((i % 8) as f64 / 7.0);
        let graph = gen_graph(config.seed ^ (0xc11 + i), n, density, None);
        for k in [1usize, 2] {
            if budget.exhausted() {
                cases.push(CaseRow::skipped(format!("clique_lemma/er[{i}]/k{k}"), "budget exhausted"));
                continue;
            }
            let report = check_clique_gadget_lemma(&graph, k);
            cases.push(CaseRow::check(
                format!("clique_lemma/er[{i}]/k{k}"),
                report.violations.is_empty(),
                json!({
                    "graph": graph.to_json(),
                    "pairs": report.pairs_checked,
                    "c_clique": report.params.c_clique,
                    "violations": report.violations,
                }),
            ));
        }
    }

    Report::from_cases(
        "gadgets",
        json!({ "seed": config.seed, "node_claim_graphs": graphs.len(), "clique_graphs": 20 }),
        cases,
        started.elapsed().as_millis(),
    )
}

fn uted_fixtures() -> Vec<(String, Graph)> {
    vec![
        ("k1".into(), Graph::new(1, &[]).expect("fixture")),
        ("k2".into(), Graph::new(2, &[(1, 2)]).expect("fixture")),
        ("p3".into(), Graph::new(3, &[(1, 2), (2, 3)]).expect("fixture")),
        ("k3".into(), Graph::new(3, &[(1, 2), (1, 3), (2, 3)]).expect("fixture")),
    ]
}

/// Unweighted instance checks: the distance identity (as stated and in its
/// accounting-level form) and the clique-detection driver against brute force.
pub fn uted_suite(config: &RunConfig) -> Report {
    let started = Instant::now();
    let budget = Budget::new(config);
    let mut cases = Vec::new();

    // Mandatory tier: n = 2. Stress tier: n = 3 (the triangle).
    let mut tiers = vec![("n2".to_string(), Graph::new(2, &[(1, 2)]).expect("fixture"))];
    if config.stress {
        tiers.push(("n3".into(), Graph::new(3, &[(1, 2), (1, 3), (2, 3)]).expect("fixture")));
    }
    for (tier, graph) in &tiers {
        let rounds = enumerate_k_cliques(graph, 1).len();
        for z in 0..rounds {
            if budget.exhausted() {
                cases.push(CaseRow::skipped(format!("embedding/{tier}/z{z}"), "budget exhausted"));
                continue;
            }
            let inst = UnweightedInstance::build(graph, 1, z).expect("fixture has cliques");
            let check = check_embedding(&inst);
            let details = json!({
                "graph": graph.to_json(),
                "check": check,
                "nodes": [inst.left.node_count(), inst.right.node_count()],
            });
            cases.push(CaseRow::check(
                format!("embedding/{tier}/z{z}/identity_as_stated"),
                check.holds_as_stated(),
                details.clone(),
            ));
            cases.push(CaseRow::check(
                format!("embedding/{tier}/z{z}/canonical_upper_bound"),
                check.lhs <= check.rhs_canonical,
                details,
            ));
        }
    }
    if !config.stress {
        cases.push(CaseRow::skipped("embedding/n3", "stress tier disabled"));
    }

    for (name, graph) in &uted_fixtures() {
        if budget.exhausted() {
            cases.push(CaseRow::skipped(format!("driver/{name}"), "budget exhausted"));
            continue;
        }
        let expected = !enumerate_k_cliques(graph, 3).is_empty();
        match run_3kclique_driver(graph, 1, RecomputeEngine::new) {
            Ok(outcome) => {
                let bound = {
                    let inst = UnweightedInstance::build(graph, 1, 0).expect("fixture has cliques");
                    inst.params.lambda1 + inst.params.lambda2
                };
                let within = outcome.per_round.iter().all(|r| r.updates <= bound);
                cases.push(CaseRow::check(
                    format!("driver/{name}/verdict"),
                    outcome.found == expected,
                    json!({ "graph": graph.to_json(), "expected": expected, "outcome": outcome }),
                ));
                cases.push(CaseRow::check(
                    format!("driver/{name}/update_bound"),
                    within,
                    json!({ "bound": bound }),
                ));
            }
            Err(err) => {
                // No 1-cliques means an empty vertex set; fixtures avoid it.
                cases.push(CaseRow::fail(
                    format!("driver/{name}/verdict"),
                    json!({ "error": err.to_string() }),
                ));
            }
        }
    }

    Report::from_cases(
        "uted",
        json!({ "seed": config.seed, "stress": config.stress }),
        cases,
        started.elapsed().as_millis(),
    )
}

/// Weighted instance checks; `corrupt` perturbs one cost entry to prove the
/// suite catches broken tables.
pub fn wted_suite_with(config: &RunConfig, corrupt: bool) -> Report {
    let started = Instant::now();
    let budget = Budget::new(config);
    let mut cases = Vec::new();

    // Base optimum: seeded graphs plus a triangle-free fixture.
    let mut graphs: Vec<(String, Graph)> = (0..12u64)
        .map(|i| {
            let n = 3 + (i % 4) as u32; // 3..=6
            let density = 0.5 + 0.45 * ((i % 5) as f64 / 4.0);
            (format!("er[{i}]"), gen_graph(config.seed ^ (0x3ad + i), n, density, Some(9)))
        })
        .collect();
    graphs.push((
        "c4".into(),
        Graph::new_weighted(4, &[(1, 2, 2), (2, 3, 3), (3, 4, 4), (1, 4, 5)]).expect("fixture"),
    ));
    for (name, graph) in &graphs {
        if budget.exhausted() {
            cases.push(CaseRow::skipped(format!("base/{name}"), "budget exhausted"));
            continue;
        }
        let check = check_base_optimum(graph).expect("weighted fixture");
        cases.push(CaseRow::check(
            format!("base/{name}"),
            check.matches,
            json!({ "graph": graph.to_json(), "check": check }),
        ));
    }

    // Dynamic optimum for every fixed vertex.
    for i in 0..6u64 {
        let n = 4 + (i % 4) as u32; // 4..=7
        let graph = gen_graph(config.seed ^ (0x77d + i), n, 0.8, Some(7));
        for x in 1..=graph.vertex_count() {
            if budget.exhausted() {
                cases.push(CaseRow::skipped(format!("dynamic/er[{i}]/x{x}"), "budget exhausted"));
                continue;
            }
            let check = check_dynamic_optimum(&graph, x).expect("weighted fixture");
            cases.push(CaseRow::check(
                format!("dynamic/er[{i}]/x{x}"),
                check.matches,
                json!({ "graph": graph.to_json(), "check": check }),
            ));
        }
    }

    if corrupt {
        // Mutation check: make one listed cost cheaper and require a
        // mismatch (the corrupted entry then wins, shifting the optimum).
        let graph = Graph::complete(4, true);
        let mut inst = build_dynamic_instance(&graph, 1).expect("weighted fixture");
        let base = tedlab_core::wted::build_base_instance(&graph).expect("weighted fixture");
        // Round x = 1 encodes a triple over {2, 3, 4}, so the k = 2 group
        // entry is live; undercutting it must shift the optimum.
        let (b2, d2) = base.prime_pair_labels(2);
        let honest = inst.delta.substitution(b2, d2);
        inst.delta.set(b2, d2, honest + Fin(-1));
        let value = ted(&inst.t1, &inst.t2, &inst.delta);
        let (oracle, _) = min_four_clique_through(&graph, 1);
        let expected = Fin(-3 * inst.m * inst.m - 3 * inst.m) + oracle;
        cases.push(CaseRow::check(
            "mutation/corrupted_entry_detected",
            value == expected,
            json!({ "ted": value, "expected": expected }),
        ));
    }

    // Drivers against the exhaustive 4-clique oracle.
    for i in 0..4u64 {
        let n = 5 + (i % 4) as u32; // 5..=8
        let graph = gen_graph(config.seed ^ (0x4c1 + i), n, 0.75, Some(9));
        if budget.exhausted() {
            cases.push(CaseRow::skipped(format!("driver/er[{i}]"), "budget exhausted"));
            continue;
        }
        let (oracle, _) = tedlab_core::cliques::min_weight_clique(&graph, 4);
        let relabel = run_4clique_driver(&graph, RecomputeEngine::new).expect("weighted fixture");
        let incremental =
            run_incremental_driver(&graph, RecomputeEngine::new).expect("weighted fixture");
        let relabel_counts = relabel.rounds.iter().skip(1).all(|r| r.updates == 3)
            && relabel.rounds.first().is_some_and(|r| r.updates == 0);
        let incr_counts = incremental.rounds.iter().skip(1).all(|r| r.updates == 3);
        cases.push(CaseRow::check(
            format!("driver/er[{i}]/relabel"),
            relabel.weight == oracle && relabel_counts,
            json!({ "graph": graph.to_json(), "oracle": oracle, "outcome": relabel }),
        ));
        cases.push(CaseRow::check(
            format!("driver/er[{i}]/incremental"),
            incremental.weight == oracle && incr_counts,
            json!({ "oracle": oracle, "outcome": incremental }),
        ));
    }

    Report::from_cases(
        "wted",
        json!({ "seed": config.seed, "corrupted": corrupt }),
        cases,
        started.elapsed().as_millis(),
    )
}

pub fn wted_suite(config: &RunConfig) -> Report {
    wted_suite_with(config, false)
}

/// Folding identities against exhaustive and cross-implementation oracles.
pub fn folding_suite(config: &RunConfig) -> Report {
    let started = Instant::now();
    let budget = Budget::new(config);
    let mut cases = Vec::new();
    let alpha = PairedAlphabet::new(&["a", "b"]);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xf01d);

    // Folding DP against the exhaustive oracle.
    let mut mismatches = Vec::new();
    let mut checked = 0usize;
    for _ in 0..1000 {
        if budget.exhausted() {
            break;
        }
        let len = rng.random_range(0..=14);
        let s: Vec<Sym> = (0..len).map(|_| rng.random_range(0..4) as Sym).collect();
        let dp = rna_score(&s, &alpha).expect("alphabet closed");
        let brute = brute_force_folding(&s, &alpha).expect("guarded length");
        if dp != brute {
            mismatches.push(json!({ "string": s, "dp": dp, "brute": brute }));
        }
        checked += 1;
    }
    if checked == 1000 {
        cases.push(CaseRow::check(
            "rna_score/vs_exhaustive",
            mismatches.is_empty(),
            json!({ "samples": checked, "mismatches": mismatches }),
        ));
    } else {
        cases.push(CaseRow::skipped("rna_score/vs_exhaustive", "budget exhausted"));
    }

    // Weighted expansion identity.
    let mut mismatches = Vec::new();
    for _ in 0..200 {
        let len = rng.random_range(0..=8);
        let s: Vec<Sym> = (0..len).map(|_| rng.random_range(0..4) as Sym).collect();
        let weights = {
            let wa = rng.random_range(1..=4);
            let wb = rng.random_range(1..=4);
            vec![wa, wb, wa, wb]
        };
        let weighted = rna_score_weighted(&s, &alpha, &weights).expect("valid weights");
        let expanded = expand_weighted(&s, &alpha, &weights).expect("valid weights");
        let unweighted = rna_score(&expanded, &alpha).expect("alphabet closed");
        if weighted != unweighted {
            mismatches.push(json!({ "string": s, "weights": weights }));
        }
    }
    cases.push(CaseRow::check(
        "expansion/identity",
        mismatches.is_empty(),
        json!({ "samples": 200, "mismatches": mismatches }),
    ));

    // Embedding identity over alphabets of one to three base symbols.
    let mut mismatches = Vec::new();
    let mut samples = 0usize;
    for base in 1..=3usize {
        let names: Vec<String> = (0..base).map(|i| format!("s{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let alpha = PairedAlphabet::new(&refs);
        let image_alpha = embed_alphabet(&alpha);
        for _ in 0..34 {
            let len = rng.random_range(0..=8);
            let s: Vec<Sym> = (0..len).map(|_| rng.random_range(0..2 * base) as Sym).collect();
            let score = rna_score(&s, &alpha).expect("alphabet closed").expect_finite("score");
            let image = dyck_embed(&s, &alpha).expect("alphabet closed");
            let d = dyck_ed(&image, &image_alpha).expect("image alphabet closed");
            if d != Fin(3 * len as i128 - 2 * score) {
                mismatches.push(json!({ "base": base, "string": s, "dyck": d, "score": score }));
            }
            samples += 1;
        }
    }
    cases.push(CaseRow::check(
        "embedding/identity",
        mismatches.is_empty(),
        json!({ "samples": samples, "mismatches": mismatches }),
    ));

    // Dyck DP against the scored-grammar route and the stack acceptor.
    let grammar = dyck_edit_grammar(&alpha);
    let mut mismatches = Vec::new();
    for _ in 0..150 {
        let len = rng.random_range(0..=10);
        let s: Vec<Sym> = (0..len).map(|_| rng.random_range(0..4) as Sym).collect();
        let dp = dyck_ed(&s, &alpha).expect("alphabet closed");
        let tokens: Vec<String> = s.iter().map(|&x| alpha.name(x)).collect();
        let parsed = if s.is_empty() { Fin(0) } else { static_scored_parse(&grammar, &tokens) };
        let balanced_ok = (dp == Fin(0)) == is_balanced(&s, &alpha);
        if dp != parsed || !balanced_ok {
            mismatches.push(json!({ "string": s, "dp": dp, "parsed": parsed }));
        }
    }
    cases.push(CaseRow::check(
        "dyck/vs_grammar_and_acceptor",
        mismatches.is_empty(),
        json!({ "samples": 150, "mismatches": mismatches }),
    ));

    Report::from_cases(
        "folding",
        json!({ "seed": config.seed }),
        cases,
        started.elapsed().as_millis(),
    )
}

fn random_grammar(rng: &mut ChaCha8Rng) -> Option<ScoredGrammar> {
    let nts = ["S", "N1", "N2", "N3", "N4", "N5"];
    let letters = ["a", "b", "c"];
    let n_nts = rng.random_range(2..=6);
    let mut binary = Vec::new();
    for _ in 0..rng.random_range(1..=10) {
        binary.push((
            nts[rng.random_range(0..n_nts)],
            nts[rng.random_range(0..n_nts)],
            nts[rng.random_range(0..n_nts)],
            rng.random_range(0..5),
        ));
    }
    let mut terminal = Vec::new();
    for _ in 0..rng.random_range(1..=8) {
        terminal.push((
            nts[rng.random_range(0..n_nts)],
            letters[rng.random_range(0..letters.len())],
            rng.random_range(0..5),
        ));
    }
    ScoredGrammar::build(&nts[..n_nts], "S", &binary, &terminal).ok()
}

/// Online parser against per-prefix static recomputation.
pub fn online_suite(config: &RunConfig) -> Report {
    let started = Instant::now();
    let budget = Budget::new(config);
    let mut cases = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x0411e);
    let letters = ["a", "b", "c"];

    let mut produced = 0usize;
    let mut attempts = 0usize;
    while produced < 50 && attempts < 500 {
        attempts += 1;
        let Some(grammar) = random_grammar(&mut rng) else { continue };
        let len = rng.random_range(1..=64);
        let stream: Vec<String> =
            (0..len).map(|_| letters[rng.random_range(0..letters.len())].to_string()).collect();
        if budget.exhausted() {
            cases.push(CaseRow::skipped(format!("parse/case{produced}"), "budget exhausted"));
            produced += 1;
            continue;
        }
        // Drive the parser step by step so the partition invariant is
        // checked after every character.
        let mut parser = OnlineParser::new(grammar.clone());
        let mut ok = true;
        let mut failure = json!(null);
        for t in 1..=len {
            let got = parser.feed(&stream[t - 1]);
            let want = static_scored_parse(&grammar, &stream[..t]);
            let sizes: Vec<usize> = parser.partition().iter().map(|&(_, s)| s).collect();
            if got != want || sizes != partition_sizes(t) {
                ok = false;
                failure = json!({
                    "prefix": t,
                    "got": got,
                    "want": want,
                    "partition": sizes,
                    "grammar": grammar.to_json(),
                    "stream": stream,
                });
                break;
            }
        }
        cases.push(CaseRow::check(format!("parse/case{produced}"), ok, failure));
        produced += 1;
    }

    // Folding adapters against the interval DPs.
    let alpha = PairedAlphabet::new(&["a", "b"]);
    for case in 0..6 {
        if budget.exhausted() {
            cases.push(CaseRow::skipped(format!("folding/case{case}"), "budget exhausted"));
            continue;
        }
        let len = rng.random_range(1..=48);
        let stream: Vec<Sym> = (0..len).map(|_| rng.random_range(0..4) as Sym).collect();
        let rna = online_rna(&alpha, &stream).expect("alphabet closed");
        let dyck = online_dyck(&alpha, &stream).expect("alphabet closed");
        let mut ok = true;
        let mut failure = json!(null);
        for t in 1..=len {
            let rna_want = rna_score(&stream[..t], &alpha).expect("alphabet closed");
            let dyck_want = dyck_ed(&stream[..t], &alpha).expect("alphabet closed");
            if rna[t - 1] != rna_want || dyck[t - 1] != dyck_want {
                ok = false;
                failure = json!({ "stream": stream, "prefix": t });
                break;
            }
        }
        cases.push(CaseRow::check(format!("folding/case{case}"), ok, failure));
    }

    // The toy regression from the parser examples.
    let toy = ScoredGrammar::build(
        &["S", "A", "B"],
        "S",
        &[("S", "A", "B", 0)],
        &[("A", "a", 0), ("B", "b", 1)],
    )
    .expect("toy grammar");
    let toy_out = online_parse(&toy, &["a".into(), "b".into()]);
    cases.push(CaseRow::check(
        "parse/toy",
        toy_out == vec![tedlab_core::Top, Fin(1)],
        json!({ "output": toy_out }),
    ));

    Report::from_cases(
        "online",
        json!({ "seed": config.seed, "parse_cases": produced }),
        cases,
        started.elapsed().as_millis(),
    )
}
