//! `hetsearch`: heterogeneous edge search on edge-labeled trees.
//!
//! Subcommands cover generation of the gadget families, exact and
//! polynomial solving, strategy simulation and verification, the 3-SAT
//! reduction, a recontamination scaling bench, and a self check of the
//! dual-route oracles. Tree and strategy files flow through stdin/stdout
//! when a path is `-`, and every command ends with a machine-parseable
//! summary line (commented with `#` when it shares stdout with an
//! artifact, so piped output stays a valid file).
//!
//! Exit codes: 0 success, 1 failed verification or self check, 2 usage or
//! input errors, 3 solver found nothing, 4 solver budget exceeded.

use std::fmt::Display;
use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hetsearch::graph::LabeledGraph;
use hetsearch::sim::Strategy;
use hetsearch::solver::{HsnOutcome, SolveOptions};
use hetsearch::{classic, cnf, constructions, fileio, polyclean, sim, solver, treegen};

#[derive(Parser)]
#[command(name = "hetsearch", version, about = "Heterogeneous edge search on trees")]
struct Cli {
    /// Seed for every randomized subcommand.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a gadget tree on stdout.
    Gen {
        #[command(subcommand)]
        family: GenCmd,
    },
    /// Exact search: minimum searcher count with a witness strategy.
    Solve {
        /// Tree file, `-` for stdin.
        tree: String,
        /// Largest searcher count to try.
        #[arg(long)]
        max_k: usize,
        /// Restrict to monotone strategies.
        #[arg(long)]
        monotone: bool,
        /// Restrict to connected strategies.
        #[arg(long)]
        connected: bool,
        /// Node budget per assignment.
        #[arg(long)]
        budget: Option<u64>,
        /// Worker threads over assignments.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the witness strategy here instead of stdout.
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Polynomial cleaning for color-connected trees.
    Clean {
        tree: String,
        /// Keep every intermediate clean set connected per area.
        #[arg(long)]
        connected: bool,
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Area-based lower bound.
    Lb { tree: String },
    /// Classic search number, ignoring colors.
    Classic {
        tree: String,
        /// Connected variant.
        #[arg(long)]
        connected: bool,
        /// Write the witness strategy here.
        #[arg(long)]
        strategy_out: Option<String>,
    },
    /// Replay a strategy and print its trace.
    Simulate {
        tree: String,
        strategy: String,
        /// Use the iterated single-edge engine instead of the
        /// reachability engine.
        #[arg(long)]
        fixpoint: bool,
    },
    /// Replay a strategy; exit 0 only if it cleans the tree.
    Verify {
        tree: String,
        strategy: String,
        /// Also require zero recontamination.
        #[arg(long)]
        monotone: bool,
        /// Also require connected clean sets.
        #[arg(long)]
        connected: bool,
    },
    /// 3-SAT reduction: DIMACS in, tree out, optional strategy.
    Reduce {
        /// CNF file, `-` for stdin.
        cnf: String,
        /// Extended construction with valve colors.
        #[arg(long)]
        tilde: bool,
        /// Satisfying assignment as a 0/1 string, one digit per variable.
        #[arg(long)]
        assignment: Option<String>,
        /// Strategy file target; required with --assignment.
        #[arg(long)]
        strategy_out: Option<String>,
    },
    /// Recontamination scaling grid for the witness strategies.
    Bench,
    /// Dual-route oracle agreement on random small instances.
    Selfcheck {
        /// Random rule-equivalence cases.
        #[arg(long, default_value_t = 300)]
        cases: usize,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Three-color spine tree with lower bound 3 and no monotone
    /// strategy meeting it.
    Tl {
        #[arg(long)]
        l: usize,
        /// Write the non-monotone witness strategy here.
        #[arg(long)]
        strategy_out: Option<String>,
    },
    /// Subdivided variant; recontamination scales with both parameters.
    Hl {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        strategy_out: Option<String>,
    },
    /// Reduction tree for a 3-CNF formula.
    Tsat { cnf: String },
    /// Extended reduction tree with valve colors.
    TsatTilde { cnf: String },
}

/// Machine-parseable one-line run footer.
struct RunSummary {
    command: &'static str,
    pairs: Vec<(&'static str, String)>,
    started: Instant,
}

impl RunSummary {
    fn new(command: &'static str) -> Self {
        RunSummary {
            command,
            pairs: Vec::new(),
            started: Instant::now(),
        }
    }

    fn push(&mut self, key: &'static str, value: impl Display) -> &mut Self {
        self.pairs.push((key, value.to_string()));
        self
    }

    fn digest(&mut self, text: &str) -> &mut Self {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x100_0000_01b3);
        }
        self.push("digest", format!("{h:016x}"))
    }

    fn line(&self) -> String {
        let mut s = self.command.to_string();
        for (k, v) in &self.pairs {
            write!(s, " {k}={v}").unwrap();
        }
        write!(s, " ms={}", self.started.elapsed().as_millis()).unwrap();
        s
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn load_tree(path: &str) -> Result<(LabeledGraph, String)> {
    let text = read_input(path)?;
    let g = fileio::parse_tree(&text).with_context(|| format!("tree file {path}"))?;
    Ok((g, text))
}

fn load_strategy(path: &str) -> Result<Strategy> {
    let text = read_input(path)?;
    fileio::parse_strategy(&text).with_context(|| format!("strategy file {path}"))
}

/// Write an artifact to `out`, or to stdout with the summary line as a
/// trailing comment so the stream still parses as the artifact.
fn emit_artifact(out: &Option<String>, text: &str, summary: &RunSummary) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {path}"))?;
            println!("{}", summary.line());
        }
        None => {
            print!("{text}");
            println!("# {}", summary.line());
        }
    }
    Ok(())
}

fn parse_assignment_bits(bits: &str, want: usize) -> Result<Vec<bool>> {
    let asg: Vec<bool> = bits
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(anyhow!("assignment digit {other:?}, expected 0 or 1")),
        })
        .collect::<Result<_>>()?;
    if asg.len() != want {
        bail!("assignment has {} digits, formula has {want} variables", asg.len());
    }
    Ok(asg)
}

fn trace_summary(g: &LabeledGraph, trace: &sim::Trace) -> String {
    fileio::render_trace(g, trace)
        .lines()
        .last()
        .unwrap_or_default()
        .to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen { family } => cmd_gen(family),
        Cmd::Solve {
            tree,
            max_k,
            monotone,
            connected,
            budget,
            jobs,
            out,
        } => cmd_solve(&tree, max_k, monotone, connected, budget, jobs, &out),
        Cmd::Clean {
            tree,
            connected,
            out,
        } => cmd_clean(&tree, connected, &out),
        Cmd::Lb { tree } => {
            let (g, _) = load_tree(&tree)?;
            if !g.is_tree() {
                bail!("lower bound needs a tree");
            }
            println!("lb={}", polyclean::lower_bound(&g).total);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Classic {
            tree,
            connected,
            strategy_out,
        } => cmd_classic(&tree, connected, &strategy_out),
        Cmd::Simulate {
            tree,
            strategy,
            fixpoint,
        } => {
            let (g, _) = load_tree(&tree)?;
            let strat = load_strategy(&strategy)?;
            let trace = if fixpoint {
                sim::simulate_fixpoint(&g, &strat)
            } else {
                sim::simulate(&g, &strat)
            }?;
            print!("{}", fileio::render_trace(&g, &trace));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            tree,
            strategy,
            monotone,
            connected,
        } => cmd_verify(&tree, &strategy, monotone, connected),
        Cmd::Reduce {
            cnf,
            tilde,
            assignment,
            strategy_out,
        } => cmd_reduce(&cnf, tilde, &assignment, &strategy_out),
        Cmd::Bench => cmd_bench(),
        Cmd::Selfcheck { cases } => cmd_selfcheck(cli.seed, cases),
    }
}

fn cmd_gen(family: GenCmd) -> Result<ExitCode> {
    let mut summary = RunSummary::new("gen");
    let (g, witness): (LabeledGraph, Option<(Strategy, String)>) = match family {
        GenCmd::Tl { l, strategy_out } => {
            summary.push("family", "tl").push("l", l);
            let g = constructions::gen_tl(l)?;
            let w = match strategy_out {
                Some(path) => Some((constructions::nonmonotone_tl_strategy(l)?, path)),
                None => None,
            };
            (g, w)
        }
        GenCmd::Hl { l, m, strategy_out } => {
            summary.push("family", "hl").push("l", l).push("m", m);
            let g = constructions::gen_hl(l, m)?;
            let w = match strategy_out {
                Some(path) => Some((constructions::nonmonotone_hl_strategy(l, m)?, path)),
                None => None,
            };
            (g, w)
        }
        GenCmd::Tsat { cnf } => {
            summary.push("family", "tsat");
            let text = read_input(&cnf)?;
            let f = cnf::parse_dimacs(&text).with_context(|| format!("cnf file {cnf}"))?;
            summary.push("n", f.var_count).push("m", f.clause_count());
            (constructions::gen_tsat(&f)?, None)
        }
        GenCmd::TsatTilde { cnf } => {
            summary.push("family", "tsat-tilde");
            let text = read_input(&cnf)?;
            let f = cnf::parse_dimacs(&text).with_context(|| format!("cnf file {cnf}"))?;
            summary.push("n", f.var_count).push("m", f.clause_count());
            (constructions::gen_tsat_tilde(&f)?, None)
        }
    };
    let tree_text = fileio::emit_tree(&g);
    summary
        .push("vertices", g.vertex_count())
        .push("edges", g.edge_count())
        .digest(&tree_text);
    if let Some((strategy, path)) = witness {
        fs::write(&path, fileio::emit_strategy(&strategy))
            .with_context(|| format!("writing {path}"))?;
        summary.push("strategy", path);
    }
    emit_artifact(&None, &tree_text, &summary)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(
    tree: &str,
    max_k: usize,
    monotone: bool,
    connected: bool,
    budget: Option<u64>,
    jobs: usize,
    out: &Option<String>,
) -> Result<ExitCode> {
    let mut summary = RunSummary::new("solve");
    let (g, text) = load_tree(tree)?;
    summary.digest(&text);
    let mut options = SolveOptions {
        monotone_only: monotone,
        connected_only: connected,
        ..SolveOptions::default()
    };
    if let Some(b) = budget {
        options.node_budget = b;
    }
    match solver::hsn(&g, max_k, &options, jobs) {
        HsnOutcome::Found { k, strategy, .. } => {
            summary
                .push("result", "found")
                .push("k", k)
                .push("moves", strategy.moves.len());
            emit_artifact(out, &fileio::emit_strategy(&strategy), &summary)?;
            Ok(ExitCode::SUCCESS)
        }
        HsnOutcome::NotFound => {
            summary.push("result", "notfound").push("max_k", max_k);
            println!("{}", summary.line());
            Ok(ExitCode::from(3))
        }
        HsnOutcome::BudgetExceeded => {
            summary.push("result", "budget").push("max_k", max_k);
            println!("{}", summary.line());
            Ok(ExitCode::from(4))
        }
    }
}

fn cmd_clean(tree: &str, connected: bool, out: &Option<String>) -> Result<ExitCode> {
    let mut summary = RunSummary::new("clean");
    let (g, text) = load_tree(tree)?;
    summary.digest(&text);
    if !g.is_tree() {
        bail!("clean needs a tree");
    }
    let strategy = polyclean::clean_strategy(&g, polyclean::CleanOptions { connected })?;
    let trace = sim::simulate(&g, &strategy).map_err(|e| anyhow!("replay failed: {e}"))?;
    summary
        .push("result", if trace.success { "success" } else { "failure" })
        .push("searchers", trace.searcher_count)
        .push("lb", polyclean::lower_bound(&g).total)
        .push("monotone", sim::is_monotone(&trace));
    emit_artifact(out, &fileio::emit_strategy(&strategy), &summary)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_classic(tree: &str, connected: bool, strategy_out: &Option<String>) -> Result<ExitCode> {
    let (colored, _) = load_tree(tree)?;
    if !colored.is_tree() {
        bail!("classic search needs a tree");
    }
    // Classic search ignores colors; the strategy emitters want one.
    let edges = colored.edges().iter().map(|e| (e.u, e.v, 0)).collect();
    let g = LabeledGraph::new_tree(colored.vertex_count(), edges).unwrap();
    let (key, s, strategy) = if connected {
        (
            "cs",
            classic::connected_tree_search_number(&g),
            classic::connected_tree_strategy(&g),
        )
    } else {
        (
            "s",
            classic::tree_search_number(&g),
            classic::monotone_tree_strategy(&g),
        )
    };
    if let Some(path) = strategy_out {
        fs::write(path, fileio::emit_strategy(&strategy))
            .with_context(|| format!("writing {path}"))?;
    }
    println!("{key}={s}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(tree: &str, strategy: &str, monotone: bool, connected: bool) -> Result<ExitCode> {
    let (g, _) = load_tree(tree)?;
    let strat = load_strategy(strategy)?;
    let violations = sim::validate_strategy(&g, &strat);
    if let Some(v) = violations.first() {
        println!("result=illegal move={} reason={}", v.move_index + 1, v.description);
        return Ok(ExitCode::from(1));
    }
    let trace = sim::simulate(&g, &strat).map_err(|e| anyhow!("replay failed: {e}"))?;
    println!("{}", trace_summary(&g, &trace));
    let ok = trace.success
        && (!monotone || sim::is_monotone(&trace))
        && (!connected || sim::is_connected_trace(&g, &trace));
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_reduce(
    cnf_path: &str,
    tilde: bool,
    assignment: &Option<String>,
    strategy_out: &Option<String>,
) -> Result<ExitCode> {
    let mut summary = RunSummary::new("reduce");
    let text = read_input(cnf_path)?;
    let f = cnf::parse_dimacs(&text).with_context(|| format!("cnf file {cnf_path}"))?;
    summary
        .push("tilde", tilde)
        .push("n", f.var_count)
        .push("m", f.clause_count());
    let g = if tilde {
        constructions::gen_tsat_tilde(&f)?
    } else {
        constructions::gen_tsat(&f)?
    };
    summary.push("k", polyclean::lower_bound(&g).total);
    if let Some(bits) = assignment {
        let asg = parse_assignment_bits(bits, f.var_count)?;
        let strategy = if tilde {
            constructions::sat_strategy_tilde(&f, &asg)?
        } else {
            constructions::sat_strategy(&f, &asg)?
        };
        let path = strategy_out
            .as_ref()
            .ok_or_else(|| anyhow!("--assignment needs --strategy-out"))?;
        fs::write(path, fileio::emit_strategy(&strategy))
            .with_context(|| format!("writing {path}"))?;
        summary.push("strategy", path);
    }
    let tree_text = fileio::emit_tree(&g);
    summary.digest(&tree_text);
    emit_artifact(&None, &tree_text, &summary)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench() -> Result<ExitCode> {
    let mut summary = RunSummary::new("bench");
    let mut points: Vec<(f64, f64)> = Vec::new();
    for l in (6..=30).step_by(3) {
        let g = constructions::gen_tl(l)?;
        let strategy = constructions::nonmonotone_tl_strategy(l)?;
        let trace = sim::simulate(&g, &strategy).map_err(|e| anyhow!("replay failed: {e}"))?;
        println!(
            "tl l={l} searchers={} units={} success={}",
            trace.searcher_count, trace.unit_recontaminations, trace.success
        );
        points.push((l as f64, trace.unit_recontaminations as f64));
    }
    let slope = least_squares_slope(&points);
    let mut last = 0;
    let mut increasing = true;
    for l in 3..=8 {
        let g = constructions::gen_hl(l, l)?;
        let strategy = constructions::nonmonotone_hl_strategy(l, l)?;
        let trace = sim::simulate(&g, &strategy).map_err(|e| anyhow!("replay failed: {e}"))?;
        println!(
            "hl l={l} m={l} units={} success={}",
            trace.unit_recontaminations, trace.success
        );
        increasing &= trace.unit_recontaminations > last;
        last = trace.unit_recontaminations;
    }
    summary
        .push("tl_slope", format!("{slope:.4}"))
        .push("hl_increasing", increasing);
    println!("{}", summary.line());
    Ok(ExitCode::SUCCESS)
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn cmd_selfcheck(seed: u64, cases: usize) -> Result<ExitCode> {
    let mut summary = RunSummary::new("selfcheck");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;

    let mut mismatches = 0usize;
    for _ in 0..cases {
        let n_edges = rng.gen_range(1..=12);
        let colors = rng.gen_range(1..=3);
        let shape = treegen::random_tree(&mut rng, n_edges);
        let tree = treegen::random_coloring(&mut rng, &shape, colors);
        let assignment = treegen::random_assignment(&mut rng, &tree, 4);
        let strategy = treegen::random_legal_strategy(&mut rng, &tree, assignment, 60);
        let a = sim::simulate(&tree, &strategy).map_err(|e| anyhow!("simulate: {e}"))?;
        let b = sim::simulate_fixpoint(&tree, &strategy).map_err(|e| anyhow!("simulate: {e}"))?;
        if a != b {
            mismatches += 1;
        }
    }
    println!("selfcheck suite=rules cases={cases} mismatches={mismatches}");
    failures += mismatches;

    let mut classic_diffs = 0usize;
    let mut classic_cases = 0usize;
    for n in 2..=8 {
        for tree in treegen::free_trees(n) {
            classic_cases += 1;
            let fast = classic::tree_search_number(&tree);
            let slow = classic::brute_force_search_number(&tree, false, false)
                .map_err(|e| anyhow!("brute force rejected {} searchers", e.0))?;
            if fast != slow {
                classic_diffs += 1;
            }
        }
    }
    println!("selfcheck suite=classic cases={classic_cases} mismatches={classic_diffs}");
    failures += classic_diffs;

    let ok = failures == 0;
    summary
        .push("result", if ok { "ok" } else { "failed" })
        .push("failures", failures);
    println!("{}", summary.line());
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
