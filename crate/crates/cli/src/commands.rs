use std::fmt::Write as _;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use sateq_core::learning::trial_seed;
use sateq_core::scenario::write_sweep_csv;
use sateq_core::{
    annotated_sweep, build_deviation_graph, enumerate_ese_bruteforce, existence_condition, run_batch,
    run_trial_with_metric, ActionProfile, TrialConfig,
};

use crate::input::{self, load_channel};
use crate::manifest::RunManifest;
use crate::{Command, EnumerateArgs, EseGraphArgs, LearnArgs, SweepArgs};

fn prepare(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    write_file(dir, name, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn finish(command: Command, inputs: Vec<PathBuf>, seed: Option<u64>, out: &Path) -> Result<()> {
    RunManifest::for_command(&command, inputs, seed, out)?.write(out)
}

fn subset(a: &[ActionProfile], b: &[ActionProfile]) -> bool {
    a.iter().all(|x| b.contains(x))
}

#[derive(Serialize)]
struct Inclusions {
    gne_in_se: bool,
    se_in_ne: bool,
    ese_in_se: bool,
}

#[derive(Serialize)]
struct EnumerateReport {
    action_counts: Vec<usize>,
    profiles: usize,
    se: Vec<ActionProfile>,
    ne_binary: Vec<ActionProfile>,
    /// SE of the game the GNE are taken in; differs from `se` only where a
    /// scenario falls back to zero power.
    constraint_se: Vec<ActionProfile>,
    gne: Vec<ActionProfile>,
    ese_sinks: Vec<ActionProfile>,
    ese_bruteforce: Vec<ActionProfile>,
    ese_routes_agree: bool,
    clipping_actions: Vec<Option<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    existence_condition: Option<bool>,
    inclusions: Inclusions,
}

pub fn enumerate(args: &EnumerateArgs) -> Result<()> {
    let loaded = input::load(&args.input)?;
    let g = &loaded.game;
    let se = g.enumerate_se()?;
    let ne_binary = g.enumerate_ne_binary()?;
    let constraint_se = loaded.constrained.base().enumerate_se()?;
    let gne = loaded.constrained.enumerate_gne()?;
    let ese_sinks = build_deviation_graph(g, &loaded.costs)?.satisfied_sinks(g);
    let ese_bruteforce = enumerate_ese_bruteforce(g, &loaded.costs)?;
    let clipping_actions = (0..g.num_players())
        .map(|k| g.find_clipping_action(k))
        .collect::<sateq_core::Result<Vec<_>>>()?;
    let existence = loaded.channel.as_ref().map(existence_condition).transpose()?;

    let report = EnumerateReport {
        action_counts: g.action_counts().to_vec(),
        profiles: g.profile_count()?,
        inclusions: Inclusions {
            gne_in_se: subset(&gne, &constraint_se),
            se_in_ne: subset(&se, &ne_binary),
            ese_in_se: subset(&ese_bruteforce, &se),
        },
        ese_routes_agree: ese_sinks == ese_bruteforce,
        se,
        ne_binary,
        constraint_se,
        gne,
        ese_sinks,
        ese_bruteforce,
        clipping_actions,
        existence_condition: existence,
    };

    prepare(&args.out)?;
    write_json(&args.out, "report.json", &report)?;
    finish(Command::Enumerate(args.clone()), loaded.inputs, None, &args.out)?;

    println!("profiles: {}", report.profiles);
    println!("SE: {}  NE(binary): {}  GNE: {}", report.se.len(), report.ne_binary.len(), report.gne.len());
    println!(
        "ESE (sinks): {}  ESE (brute force): {}  routes agree: {}",
        report.ese_sinks.len(),
        report.ese_bruteforce.len(),
        report.ese_routes_agree
    );
    let i = &report.inclusions;
    println!("GNE ⊆ SE: {}  SE ⊆ NE: {}  ESE ⊆ SE: {}", i.gne_in_se, i.se_in_ne, i.ese_in_se);
    Ok(())
}

#[derive(Serialize)]
struct LearnSummary {
    trials: usize,
    converged: usize,
    stalled: usize,
    budget_exhausted: usize,
    fraction: f64,
    stall_fraction: f64,
    histogram: Vec<usize>,
    seed: u64,
    policy: &'static str,
    stall_window: usize,
    max_intervals: usize,
    trace_trial: usize,
    trace_seed: u64,
}

pub fn learn(args: &LearnArgs) -> Result<()> {
    if args.trace_trial >= args.trials {
        bail!("--trace-trial {} is not below --trials {}", args.trace_trial, args.trials);
    }
    let loaded = input::load(&args.input)?;
    let g = &loaded.game;
    let config = TrialConfig {
        seed: args.seed,
        max_intervals: args.max_intervals,
        stall_window: args.stall_window,
        policy: args.policy,
        delta: args.delta,
        record_trace: false,
    };
    let stats = run_batch(g, &config, args.trials)?;

    let mut trials_csv = String::from("trial,seed,outcome,intervals_to_convergence,intervals_played");
    for k in 0..g.num_players() {
        write!(trials_csv, ",action_{}", k + 1)?;
    }
    trials_csv.push('\n');
    for r in &stats.results {
        let n = r.intervals_to_convergence.map(|n| n.to_string()).unwrap_or_default();
        write!(trials_csv, "{},{},{},{},{}", r.trial, r.seed, r.reason.name(), n, r.intervals_played)?;
        for a in r.final_profile.actions() {
            write!(trials_csv, ",{a}")?;
        }
        trials_csv.push('\n');
    }

    let mut histogram_csv = String::from("intervals,trials\n");
    for (n, c) in stats.histogram.iter().enumerate() {
        writeln!(histogram_csv, "{n},{c}")?;
    }

    // Full trace of one designated trial, with achieved rates for scenarios.
    let trace_seed = trial_seed(args.seed, args.trace_trial as u64);
    let channel = loaded.channel.clone();
    let rates = move |a: &ActionProfile| {
        channel
            .as_ref()
            .map(|ch| ch.rates(a).expect("profile from the game's own space").to_vec())
            .unwrap_or_default()
    };
    let traced = run_trial_with_metric(
        g,
        &TrialConfig {
            seed: trace_seed,
            record_trace: true,
            ..config.clone()
        },
        Some(&rates),
    )?;
    let mut trace_csv = String::from("interval,player,action,satisfied,metric\n");
    for rec in &traced.trace {
        for k in 0..g.num_players() {
            let metric = rec
                .metric
                .as_ref()
                .and_then(|m| m.get(k))
                .map(|x| x.to_string())
                .unwrap_or_default();
            writeln!(
                trace_csv,
                "{},{},{},{},{}",
                rec.interval,
                k,
                rec.profile.get(k),
                u8::from(rec.bits[k]),
                metric
            )?;
        }
    }

    let summary = LearnSummary {
        trials: stats.trials,
        converged: stats.converged,
        stalled: stats.stalled,
        budget_exhausted: stats.budget_exhausted,
        fraction: stats.fraction,
        stall_fraction: stats.stall_fraction(),
        histogram: stats.histogram.clone(),
        seed: args.seed,
        policy: args.policy.name(),
        stall_window: args.stall_window,
        max_intervals: args.max_intervals,
        trace_trial: args.trace_trial,
        trace_seed,
    };

    prepare(&args.out)?;
    write_file(&args.out, "trials.csv", &trials_csv)?;
    write_file(&args.out, "histogram.csv", &histogram_csv)?;
    write_file(&args.out, "trace.csv", &trace_csv)?;
    write_json(&args.out, "summary.json", &summary)?;
    finish(Command::Learn(args.clone()), loaded.inputs, Some(args.seed), &args.out)?;

    println!(
        "trials: {}  converged: {}  stalled: {}  budget: {}  fraction: {}",
        stats.trials, stats.converged, stats.stalled, stats.budget_exhausted, stats.fraction
    );
    Ok(())
}

pub fn sweep(args: &SweepArgs) -> Result<()> {
    let ch = load_channel(&args.scenario, args.grid)?;
    let rows = annotated_sweep(&ch)?;
    prepare(&args.out)?;
    let path = args.out.join("sweep.csv");
    let file = fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
    write_sweep_csv(&rows, BufWriter::new(file))?;
    finish(Command::Sweep(args.clone()), vec![args.scenario.clone()], None, &args.out)?;
    println!(
        "rows: {}  SE: {}  ESE: {}  GNE: {}",
        rows.len(),
        rows.iter().filter(|r| r.is_se).count(),
        rows.iter().filter(|r| r.is_ese).count(),
        rows.iter().filter(|r| r.is_gne).count()
    );
    Ok(())
}

#[derive(Serialize)]
struct EseGraphReport {
    vertices: usize,
    edges: usize,
    potential_ties: bool,
    sinks: Vec<usize>,
    satisfied_sinks: Vec<usize>,
    ese_bruteforce: Vec<usize>,
}

pub fn ese_graph(args: &EseGraphArgs) -> Result<()> {
    let loaded = input::load(&args.input)?;
    let g = &loaded.game;
    let graph = build_deviation_graph(g, &loaded.costs)?;
    let space = g.space();
    let index = |v: Vec<ActionProfile>| v.iter().map(|a| space.index_of(a.actions())).collect();
    let report = EseGraphReport {
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
        potential_ties: graph.has_potential_ties(),
        sinks: graph.sink_indices(),
        satisfied_sinks: index(graph.satisfied_sinks(g)),
        ese_bruteforce: index(enumerate_ese_bruteforce(g, &loaded.costs)?),
    };

    prepare(&args.out)?;
    let create = |name: &str| -> Result<BufWriter<fs::File>> {
        let path = args.out.join(name);
        Ok(BufWriter::new(
            fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?,
        ))
    };
    graph.write_edge_csv(create("edges.csv")?)?;
    if args.dense {
        graph.write_dense_csv(create("adjacency.csv")?)?;
    }
    write_json(&args.out, "ese.json", &report)?;
    finish(Command::EseGraph(args.clone()), loaded.inputs, None, &args.out)?;

    println!(
        "vertices: {}  edges: {}  sinks: {}  ESE: {}",
        report.vertices,
        report.edges,
        report.sinks.len(),
        report.satisfied_sinks.len()
    );
    if report.potential_ties {
        println!("note: some adjacent profiles have equal potential");
    }
    Ok(())
}
