//! `emopt`: solve, cross-check, generate and benchmark red-budgeted
//! matching instances in the `.emg` format.
//!
//! Exit codes are a stable contract: 0 solved (or check passed),
//! 2 infeasible (or no answer for a fixed k), 3 approximation guarantee
//! violated under `check`, 1 any error.

mod record;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use emopt_core::{
    exact_em_opt, generate, parse_emg, prune_irrelevant, solve_em_opt, solve_fixed_k, write_emg,
    EmInstance, EnumerationBudget, GenMode, GenSpec, Matching, SolveStatus, TraceStep,
    ValidationWarning,
};
use record::{to_csv, RunRecord};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const EXIT_SOLVED: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "emopt",
    version,
    about = "Red-budgeted perfect matching solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Default)]
enum ModeArg {
    #[default]
    RandomPlanted,
    PlantedExactK,
    LongCycleAdversarial,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file.
    Solve {
        file: PathBuf,
        /// Emit the run record as JSON instead of human-readable text.
        #[arg(long)]
        json: bool,
        /// Record and print the cycle-improvement trace.
        #[arg(long)]
        trace: bool,
        /// Run the single fixed-k pass on the file's k instead of the
        /// full scan.
        #[arg(long = "fixed-k")]
        fixed_k: bool,
    },
    /// Solve and verify against the exhaustive oracle (small instances).
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Oracle limit on vertices per side.
        #[arg(long, default_value_t = 12)]
        max_side: usize,
        /// Oracle cap on enumerated matchings.
        #[arg(long, default_value_t = 10_000_000)]
        cap: u64,
    },
    /// Generate an instance file.
    Gen {
        /// Vertices per side.
        #[arg(long)]
        n: usize,
        /// Probability of each non-planted pair becoming an edge.
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        /// Probability of an edge being red.
        #[arg(long = "red", default_value_t = 0.5)]
        red: f64,
        /// Planted red count; required by planted-exact-k, rejected
        /// elsewhere.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        #[arg(long)]
        seed: u64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded generated suite and emit one CSV row per solve.
    Bench {
        /// Comma-separated sizes, e.g. 10,50,100.
        #[arg(long)]
        grid: String,
        #[arg(long = "per-size", default_value_t = 10)]
        per_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long = "red", default_value_t = 0.5)]
        red: f64,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not errors.
            let code = if err.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve {
            file,
            json,
            trace,
            fixed_k,
        } => cmd_solve(&file, json, trace, fixed_k),
        Command::Check {
            file,
            json,
            max_side,
            cap,
        } => cmd_check(&file, json, max_side, cap),
        Command::Gen {
            n,
            density,
            red,
            k,
            mode,
            seed,
            out,
        } => cmd_gen(n, density, red, k, mode, seed, out.as_deref()),
        Command::Bench {
            grid,
            per_size,
            seed,
            density,
            red,
            mode,
            out,
        } => cmd_bench(&grid, per_size, seed, density, red, mode, out.as_deref()),
    }
}

fn load_instance(file: &Path) -> Result<EmInstance> {
    let text =
        std::fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    let instance = parse_emg(&text).with_context(|| format!("cannot parse {}", file.display()))?;
    for warning in instance.graph.warnings() {
        match warning {
            ValidationWarning::UnbalancedSides { n_left, n_right } => eprintln!(
                "warning: sides have {n_left} and {n_right} vertices, no perfect matching exists"
            ),
        }
    }
    Ok(instance)
}

fn matching_line(m: &Matching, instance: &EmInstance) -> String {
    let mut pairs: Vec<(usize, usize)> = m
        .edge_ids()
        .iter()
        .map(|&id| {
            let e = instance.graph.edge(id);
            (e.a + 1, e.b + 1)
        })
        .collect();
    pairs.sort_unstable();
    let pairs: Vec<String> = pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
    pairs.join(" ")
}

fn print_trace(steps: &[TraceStep]) {
    for (i, step) in steps.iter().enumerate() {
        println!(
            "iteration {}: red {} -> {} (cycle weight {}, positive edges {})",
            i + 1,
            step.red_before,
            step.red_before as i64 + step.cycle_weight,
            step.cycle_weight,
            step.cycle_positive_count
        );
    }
}

fn cmd_solve(file: &Path, json: bool, trace: bool, fixed_k: bool) -> Result<u8> {
    let instance = load_instance(file)?;
    let started = Instant::now();
    let (status, matching, branch, iterations, steps): (
        &str,
        Option<Matching>,
        Option<String>,
        u64,
        Option<Vec<TraceStep>>,
    ) = if fixed_k {
        let pruned = match prune_irrelevant(&instance.graph) {
            Ok(p) => p,
            Err(_) => {
                return finish_solve(
                    file,
                    &instance,
                    "infeasible",
                    None,
                    None,
                    0,
                    None,
                    json,
                    trace,
                    started,
                );
            }
        };
        match solve_fixed_k(&pruned.graph, instance.k, trace) {
            Ok(outcome) => {
                let matching = outcome
                    .matching
                    .as_ref()
                    .map(|m| pruned.restore(&instance.graph, m));
                let status = if matching.is_some() { "solved" } else { "bot" };
                (
                    status,
                    matching,
                    Some(outcome.branch.as_str().to_string()),
                    outcome.iterations as u64,
                    outcome.trace,
                )
            }
            Err(_) => ("infeasible", None, None, 0, None),
        }
    } else {
        let result = solve_em_opt(&instance.graph, instance.k, trace);
        let status = match result.status {
            SolveStatus::Solved => "solved",
            SolveStatus::Infeasible => "infeasible",
        };
        let branch = match (&result.branch, result.status) {
            (Some(b), _) => Some(b.as_str().to_string()),
            (None, SolveStatus::Solved) => Some("max_red_shortcut".to_string()),
            (None, SolveStatus::Infeasible) => None,
        };
        (
            status,
            result.matching,
            branch,
            result.iterations as u64,
            result.trace,
        )
    };
    finish_solve(
        file, &instance, status, matching, branch, iterations, steps, json, trace, started,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish_solve(
    file: &Path,
    instance: &EmInstance,
    status: &str,
    matching: Option<Matching>,
    branch: Option<String>,
    iterations: u64,
    steps: Option<Vec<TraceStep>>,
    json: bool,
    trace: bool,
    started: Instant,
) -> Result<u8> {
    let record = RunRecord {
        instance: file.display().to_string(),
        command: "solve".into(),
        status: status.into(),
        achieved_red: matching.as_ref().map(|m| m.red_count() as u64),
        k: instance.k as u64,
        k_star: None,
        branch,
        iterations: Some(iterations),
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        seed: None,
    };
    if json {
        println!("{}", record.to_json());
    } else {
        println!("instance:     {}", record.instance);
        println!("status:       {}", record.status);
        println!("k:            {}", record.k);
        if let Some(red) = record.achieved_red {
            println!("achieved red: {red}");
        }
        if let Some(branch) = &record.branch {
            println!("branch:       {branch}");
        }
        println!("iterations:   {iterations}");
        println!("elapsed:      {:.3} ms", record.elapsed_ms);
        if let Some(m) = &matching {
            println!("matching:     {}", matching_line(m, instance));
        }
        if trace {
            if let Some(steps) = &steps {
                print_trace(steps);
            }
        }
    }
    Ok(if status == "solved" {
        EXIT_SOLVED
    } else {
        EXIT_INFEASIBLE
    })
}

fn cmd_check(file: &Path, json: bool, max_side: usize, cap: u64) -> Result<u8> {
    let instance = load_instance(file)?;
    let budget = EnumerationBudget {
        max_vertices_per_side: max_side,
        max_matchings: cap,
    };
    let started = Instant::now();
    let result = solve_em_opt(&instance.graph, instance.k, false);
    let exact = exact_em_opt(&instance.graph, instance.k, budget)
        .map_err(|e| anyhow!("oracle cannot check this instance: {e}"))?;
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;

    let (passed, detail) = match (&exact, result.status) {
        (None, SolveStatus::Infeasible) => (true, "both infeasible".to_string()),
        (Some((k_star, _)), SolveStatus::Solved) => {
            let achieved = result.achieved_red;
            if achieved > *k_star {
                (
                    false,
                    format!("achieved {achieved} exceeds optimum {k_star}"),
                )
            } else if 3 * achieved < *k_star {
                (
                    false,
                    format!("achieved {achieved} below one third of optimum {k_star}"),
                )
            } else {
                (true, format!("achieved {achieved}, optimum {k_star}"))
            }
        }
        (oracle, got) => (
            false,
            format!(
                "status disagreement: oracle feasible = {}, solver = {got:?}",
                oracle.is_some()
            ),
        ),
    };

    let record = RunRecord {
        instance: file.display().to_string(),
        command: "check".into(),
        status: if passed { "pass" } else { "violation" }.into(),
        achieved_red: result.matching.as_ref().map(|m| m.red_count() as u64),
        k: instance.k as u64,
        k_star: exact.as_ref().map(|(k_star, _)| *k_star as u64),
        branch: result.branch.map(|b| b.as_str().to_string()),
        iterations: Some(result.iterations as u64),
        elapsed_ms,
        seed: None,
    };
    if json {
        println!("{}", record.to_json());
    } else {
        println!("instance: {}", record.instance);
        println!("verdict:  {} ({detail})", record.status);
    }
    Ok(if passed { EXIT_SOLVED } else { EXIT_VIOLATION })
}

fn build_spec(
    n: usize,
    density: f64,
    red: f64,
    k: Option<usize>,
    mode: ModeArg,
    seed: u64,
) -> Result<GenSpec> {
    let mode = match (mode, k) {
        (ModeArg::PlantedExactK, Some(k)) => GenMode::PlantedExactK(k),
        (ModeArg::PlantedExactK, None) => {
            bail!("--mode planted-exact-k requires --k")
        }
        (_, Some(_)) => bail!("--k is only meaningful with --mode planted-exact-k"),
        (ModeArg::RandomPlanted, None) => GenMode::RandomPlantedPm,
        (ModeArg::LongCycleAdversarial, None) => GenMode::LongCycleAdversarial,
    };
    Ok(GenSpec {
        n,
        density,
        red_prob: red,
        seed,
        mode,
    })
}

fn spec_label(spec: &GenSpec, k: usize) -> String {
    format!(
        "gen:mode={};n={};density={};red={};seed={};k={}",
        spec.mode.as_str(),
        spec.n,
        spec.density,
        spec.red_prob,
        spec.seed,
        k
    )
}

fn cmd_gen(
    n: usize,
    density: f64,
    red: f64,
    k: Option<usize>,
    mode: ModeArg,
    seed: u64,
    out: Option<&Path>,
) -> Result<u8> {
    let spec = build_spec(n, density, red, k, mode, seed)?;
    let (graph, k) = generate(&spec)?;
    let comment = spec_label(&spec, k);
    let text = write_emg(&graph, k, &[&comment]);
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(EXIT_SOLVED)
}

fn cmd_bench(
    grid: &str,
    per_size: usize,
    seed: u64,
    density: f64,
    red: f64,
    mode: ModeArg,
    out: Option<&Path>,
) -> Result<u8> {
    let sizes: Vec<usize> = grid
        .split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| anyhow!("invalid grid entry `{part}`"))
        })
        .collect::<Result<_>>()?;
    if sizes.is_empty() {
        bail!("the size grid is empty");
    }
    if per_size == 0 {
        bail!("--per-size must be positive");
    }

    let mut records = Vec::with_capacity(sizes.len() * per_size);
    for (grid_index, &n) in sizes.iter().enumerate() {
        for run in 0..per_size {
            let run_index = (grid_index * per_size + run) as u64;
            let run_seed = seed.wrapping_add(run_index);
            let spec = build_spec(n, density, red, None, mode, run_seed)?;
            let (graph, k) = generate(&spec)?;
            let started = Instant::now();
            let result = solve_em_opt(&graph, k, false);
            let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
            let status = match result.status {
                SolveStatus::Solved => "solved",
                SolveStatus::Infeasible => "infeasible",
            };
            let branch = match (&result.branch, result.status) {
                (Some(b), _) => Some(b.as_str().to_string()),
                (None, SolveStatus::Solved) => Some("max_red_shortcut".to_string()),
                (None, SolveStatus::Infeasible) => None,
            };
            records.push(RunRecord {
                instance: spec_label(&spec, k),
                command: "bench".into(),
                status: status.into(),
                achieved_red: result.matching.as_ref().map(|m| m.red_count() as u64),
                k: k as u64,
                k_star: None,
                branch,
                iterations: Some(result.iterations as u64),
                elapsed_ms,
                seed: Some(run_seed),
            });
        }
    }

    let csv = to_csv(&records);
    match out {
        Some(path) => std::fs::write(path, &csv)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{csv}"),
    }
    // Aggregate summary on stderr so the CSV stream stays clean.
    for &n in &sizes {
        let rows: Vec<&RunRecord> = records
            .iter()
            .filter(|r| r.instance.contains(&format!(";n={n};")))
            .collect();
        let solved = rows.iter().filter(|r| r.status == "solved").count();
        let mean_ms = rows.iter().map(|r| r.elapsed_ms).sum::<f64>() / rows.len() as f64;
        let max_ms = rows.iter().map(|r| r.elapsed_ms).fold(0.0f64, f64::max);
        eprintln!(
            "n={n}: {} runs, {solved} solved, mean {mean_ms:.2} ms, max {max_ms:.2} ms",
            rows.len()
        );
    }
    Ok(EXIT_SOLVED)
}
