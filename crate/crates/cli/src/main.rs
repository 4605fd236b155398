//! `tedlab`: instance generation, distance drivers and verification suites.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use tedlab_cli::{gen_graph, report, verify_all, RunConfig};
use tedlab_core::engine::RecomputeEngine;
use tedlab_core::folding::{
    dyck_ed, dyck_embed, embed_alphabet, parse_symbols, rna_score, rna_score_weighted,
    PairedAlphabet,
};
use tedlab_core::graph::Graph;
use tedlab_core::parsing::{online_dyck, online_parse, online_rna, ScoredGrammar};
use tedlab_core::uted::run_3kclique_driver;
use tedlab_core::wted::{run_4clique_driver, run_incremental_driver};

#[derive(Parser)]
#[command(name = "tedlab", version, about = "Tree edit distance, folding and online parsing workbench")]
struct Cli {
    /// Seed for every randomized fixture.
    #[arg(long, global = true, default_value_t = 0xC0FFEE)]
    seed: u64,
    /// Output directory for reports and generated files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Cooperative per-suite time budget in seconds.
    #[arg(long, global = true, default_value_t = 900)]
    budget_sec: u64,
    /// Print the summary as JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random graph file.
    GenGraph(GenGraphArgs),
    /// Run one verification family.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Run a dynamic driver or the online parser.
    Run {
        #[command(subcommand)]
        what: RunCommand,
    },
    /// Folding utilities.
    Fold {
        #[command(subcommand)]
        what: FoldCommand,
    },
    /// Run every verification suite and write reports.
    VerifyAll {
        /// Restrict to specific suites (repeatable).
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Enable the expensive stress tiers.
        #[arg(long)]
        stress: bool,
    },
}

#[derive(Args)]
struct GenGraphArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Attach uniform random weights in `1..=w_max`.
    #[arg(long)]
    weights: bool,
    #[arg(long, default_value_t = 9)]
    w_max: u64,
    /// Output file; `-` writes to stdout.
    #[arg(long, default_value = "-")]
    file: String,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Sweep the node- and clique-gadget distance claims.
    Gadgets {
        #[arg(long, default_value_t = 6)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        trials: u64,
    },
}

#[derive(Subcommand)]
enum RunCommand {
    /// Clique-detection rounds on the unweighted instance.
    Uted {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        stress: bool,
    },
    /// Minimum-weight 4-clique rounds on the weighted instance.
    Wted {
        #[arg(long)]
        graph: PathBuf,
        /// Insert-only schedule instead of relabel rounds.
        #[arg(long)]
        incremental: bool,
    },
    /// Online scored parsing over a token stream.
    Online {
        /// Grammar JSON; required for `--mode parse`.
        #[arg(long)]
        grammar: Option<PathBuf>,
        #[arg(long, value_parser = ["parse", "rna", "dyck"])]
        mode: String,
        #[arg(long)]
        input: PathBuf,
        /// Paired-alphabet sidecar for the folding modes.
        #[arg(long)]
        symbols: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FoldCommand {
    /// Maximum folding size (or weight).
    Score {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        symbols: Option<PathBuf>,
        /// Weight sidecar JSON `{ "a": 2, … }` keyed by base symbol.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Edit distance to the Dyck language.
    Dyck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        symbols: Option<PathBuf>,
    },
    /// Embed a folding instance into a Dyck instance.
    Embed {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        symbols: Option<PathBuf>,
    },
}

fn load_graph(path: &PathBuf) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).context("graph file is JSON")?;
    Graph::from_json(&value).map_err(|e| anyhow::anyhow!("{e}"))
}

/// Alphabet from a sidecar file, or inferred from the input's lowercase
/// letters (uppercase marks the primed partner).
fn load_alphabet(symbols: &Option<PathBuf>, input: &str) -> Result<PairedAlphabet> {
    if let Some(path) = symbols {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let value: serde_json::Value = serde_json::from_str(&text).context("symbol table is JSON")?;
        let base: Vec<String> = value
            .get("base")
            .and_then(|b| serde_json::from_value(b.clone()).ok())
            .context("symbol table needs a \"base\" array")?;
        Ok(PairedAlphabet::from_names(base))
    } else {
        let mut base: Vec<String> = input
            .chars()
            .filter(|c| c.is_ascii_alphabetic())
            .map(|c| c.to_ascii_lowercase().to_string())
            .collect();
        base.sort();
        base.dedup();
        if base.is_empty() {
            bail!("cannot infer an alphabet from the input; pass --symbols");
        }
        let refs: Vec<&str> = base.iter().map(|s| s.as_str()).collect();
        Ok(PairedAlphabet::new(&refs))
    }
}

fn write_out(path: &PathBuf, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(path)?;
    let file = path.join(name);
    fs::write(&file, contents)?;
    Ok(file)
}

fn main() -> ExitCode {
    match run() {
        Ok(ok) => {
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    let (seed, out, json_flag) = (cli.seed, cli.out.clone(), cli.json);
    let config = RunConfig {
        seed,
        out_dir: Some(out.clone()),
        budget_secs: cli.budget_sec,
        stress: false,
        suites: Vec::new(),
    };

    match cli.command {
        Command::GenGraph(args) => {
            let graph = gen_graph(seed, args.n, args.density, args.weights.then_some(args.w_max));
            let mut text = serde_json::to_string_pretty(&graph.to_json())?;
            text.push('\n');
            if args.file == "-" {
                print!("{text}");
            } else {
                fs::create_dir_all(&out)?;
                let path = out.join(&args.file);
                fs::write(&path, text)?;
                eprintln!("wrote {}", path.display());
            }
            Ok(true)
        }
        Command::Verify { what: VerifyCommand::Gadgets { n, k, trials } } => {
            let mut violations = Vec::new();
            let mut pairs = 0usize;
            for trial in 0..trials {
                let density = 0.2 + 0.6 * (trial as f64 / trials.max(1) as f64);
                let graph = gen_graph(seed ^ trial, n, density, None);
                let node = tedlab_core::gadgets::check_node_gadget_claim(&graph);
                pairs += node.pairs_checked;
                violations.extend(node.violations);
                let clique = tedlab_core::gadgets::check_clique_gadget_lemma(&graph, k);
                pairs += clique.pairs_checked;
                violations.extend(clique.violations);
            }
            let params = tedlab_core::gadgets::GadgetParams::new(n, k);
            let clean = violations.is_empty();
            let body = json!({ "params": params, "pairs_checked": pairs, "violations": violations });
            let text = format!("{}\n", serde_json::to_string_pretty(&body)?);
            print!("{text}");
            write_out(&out, "gadget_report.json", &text)?;
            Ok(clean)
        }
        Command::Run { what } => run_driver(what, &out, &config),
        Command::Fold { what } => {
            fold(what)?;
            Ok(true)
        }
        Command::VerifyAll { suites, stress } => {
            let config = RunConfig { stress, suites, ..config };
            let reports = verify_all(&config);
            for report in &reports {
                eprintln!(
                    "suite {:<8} {:?} ({} cases, {} ms)",
                    report.suite,
                    report.verdict,
                    report.cases.len(),
                    report.wall_ms
                );
            }
            if json_flag {
                let summary: Vec<_> = reports
                    .iter()
                    .map(|r| json!({ "suite": r.suite, "verdict": r.verdict }))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&summary)?);
            }
            Ok(reports.iter().all(report::Report::passed))
        }
    }
}

fn run_driver(what: RunCommand, out: &PathBuf, config: &RunConfig) -> Result<bool> {
    match what {
        RunCommand::Uted { graph, k, stress } => {
            let graph = load_graph(&graph)?;
            let outcome = run_3kclique_driver(&graph, k, RecomputeEngine::new)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let mut csv = String::from("round_index,Z,updates_applied,d_Z,elapsed_ms\n");
            for row in &outcome.per_round {
                let z: Vec<String> = row.clique.iter().map(u32::to_string).collect();
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.round,
                    z.join("+"),
                    row.updates,
                    row.distance,
                    row.elapsed_ms
                ));
            }
            let path = write_out(out, "uted_rounds.csv", &csv)?;
            eprintln!("wrote {}", path.display());
            let mut verdict = json!({
                "found": outcome.found,
                "rounds": outcome.rounds,
                "total_updates": outcome.total_updates,
                "total_queries": outcome.total_queries,
                "threshold": outcome.threshold.to_string(),
                "min_distance": outcome.min_distance,
                "seed": config.seed,
            });
            if stress {
                // Expensive diagnostics: both sides of the distance identity
                // on the final round's instance, plus the optimal witness
                // profile when the instance is small enough to extract one.
                let inst = tedlab_core::uted::UnweightedInstance::build(
                    &graph,
                    k,
                    outcome.rounds.saturating_sub(1),
                )
                .map_err(|e| anyhow::anyhow!("{e}"))?;
                let check = tedlab_core::uted::check_embedding(&inst);
                verdict["embedding_check"] = serde_json::to_value(&check)?;
                if inst.left.node_count() <= 1200 {
                    let profile = tedlab_core::uted::profile_optimal_witness(&inst);
                    verdict["witness_profile"] = serde_json::to_value(&profile)?;
                }
            }
            println!("{}", serde_json::to_string_pretty(&verdict)?);
            Ok(true)
        }
        RunCommand::Wted { graph, incremental } => {
            let graph = load_graph(&graph)?;
            let outcome = if incremental {
                run_incremental_driver(&graph, RecomputeEngine::new)
            } else {
                run_4clique_driver(&graph, RecomputeEngine::new)
            }
            .map_err(|e| anyhow::anyhow!("{e}"))?;
            let mut csv = String::from("round,x,updates,raw_query,offset_value,running_min\n");
            for row in &outcome.rounds {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    row.round, row.x, row.updates, row.raw_query, row.offset_value, row.running_min
                ));
            }
            let name = if incremental { "wted_incremental_rounds.csv" } else { "wted_rounds.csv" };
            let path = write_out(out, name, &csv)?;
            eprintln!("wrote {}", path.display());
            let verdict = json!({ "weight": outcome.weight, "clique": outcome.witness });
            println!("{}", serde_json::to_string_pretty(&verdict)?);
            Ok(true)
        }
        RunCommand::Online { grammar, mode, input, symbols } => {
            let text = fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            match mode.as_str() {
                "parse" => {
                    let path = grammar.context("--mode parse requires --grammar")?;
                    let gtext = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let value: serde_json::Value = serde_json::from_str(&gtext)?;
                    let grammar =
                        ScoredGrammar::from_json(&value).map_err(|e| anyhow::anyhow!("{e}"))?;
                    let tokens: Vec<String> = text.split_whitespace().map(str::to_string).collect();
                    for (t, value) in online_parse(&grammar, &tokens).iter().enumerate() {
                        println!("{},{}", t + 1, value);
                    }
                }
                mode @ ("rna" | "dyck") => {
                    let alpha = load_alphabet(&symbols, &text)?;
                    let stream = parse_symbols(&alpha, &text).map_err(|e| anyhow::anyhow!("{e}"))?;
                    let values = if mode == "rna" {
                        online_rna(&alpha, &stream)
                    } else {
                        online_dyck(&alpha, &stream)
                    }
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                    for (t, value) in values.iter().enumerate() {
                        println!("{},{}", t + 1, value);
                    }
                }
                other => bail!("unknown mode {other:?}"),
            }
            Ok(true)
        }
    }
}

fn fold(what: FoldCommand) -> Result<()> {
    match what {
        FoldCommand::Score { input, symbols, weights } => {
            let text = fs::read_to_string(&input)?;
            let alpha = load_alphabet(&symbols, &text)?;
            let stream = parse_symbols(&alpha, &text).map_err(|e| anyhow::anyhow!("{e}"))?;
            let score = match weights {
                None => rna_score(&stream, &alpha),
                Some(path) => {
                    let wtext = fs::read_to_string(&path)?;
                    let map: std::collections::BTreeMap<String, u64> =
                        serde_json::from_str(&wtext).context("weights are a name → weight map")?;
                    let mut w = vec![1u64; alpha.len()];
                    for (name, weight) in map {
                        let sym = alpha
                            .lookup(&name)
                            .with_context(|| format!("unknown symbol {name:?}"))?;
                        w[sym as usize] = weight;
                        w[alpha.partner(sym) as usize] = weight;
                    }
                    rna_score_weighted(&stream, &alpha, &w)
                }
            }
            .map_err(|e| anyhow::anyhow!("{e}"))?;
            println!("{score}");
        }
        FoldCommand::Dyck { input, symbols } => {
            let text = fs::read_to_string(&input)?;
            let alpha = load_alphabet(&symbols, &text)?;
            let stream = parse_symbols(&alpha, &text).map_err(|e| anyhow::anyhow!("{e}"))?;
            let d = dyck_ed(&stream, &alpha).map_err(|e| anyhow::anyhow!("{e}"))?;
            println!("{d}");
        }
        FoldCommand::Embed { input, symbols } => {
            let text = fs::read_to_string(&input)?;
            let alpha = load_alphabet(&symbols, &text)?;
            let stream = parse_symbols(&alpha, &text).map_err(|e| anyhow::anyhow!("{e}"))?;
            let image = dyck_embed(&stream, &alpha).map_err(|e| anyhow::anyhow!("{e}"))?;
            let image_alpha = embed_alphabet(&alpha);
            let names: Vec<String> = image.iter().map(|&s| image_alpha.name(s)).collect();
            println!("{}", names.join(" "));
        }
    }
    Ok(())
}
