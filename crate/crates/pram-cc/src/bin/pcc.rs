//! Thin CLI over the library: generate instances, run the connectivity
//! pipeline, verify against the union-find oracle, run the canned
//! experiments, and print per-component spectral gaps.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pram_cc::graph::MultiGraph;
use pram_cc::pram::{Ctx, Policy};
use pram_cc::profile::{clog2, Profile};
use pram_cc::{gen, io, oracle, orchestrator, spectral};

#[derive(Parser)]
#[command(name = "pcc", about = "simulated-PRAM connected components toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Path,
    Cycle,
    Regular,
    Gnp,
    Union,
    TwoCycle,
    DiameterBlowup,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Paper,
    Desk,
}

impl ProfileArg {
    fn get(self) -> Profile {
        match self {
            ProfileArg::Paper => Profile::paper(),
            ProfileArg::Desk => Profile::desk(),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Edge-list file; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "desk")]
    profile: ProfileArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Concurrent-write arbitration: first, last, or random.
    #[arg(long, default_value = "random")]
    policy: Policy,
    /// Write the completion report and ledger breakdown as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit an edge list for a named instance family.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Degree for the regular family.
        #[arg(long, default_value_t = 4)]
        d: usize,
        /// Edge probability for gnp.
        #[arg(long, default_value_t = 0.001)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the pipeline and print the completion report.
    Run(RunArgs),
    /// Run the pipeline, diff the forest against a union-find oracle.
    /// Exit code 0 on agreement, 1 on any mismatch.
    Verify(RunArgs),
    /// Canned experiments; each prints one JSON row per configuration.
    Experiment {
        #[command(subcommand)]
        which: Experiment,
    },
    /// Per-component normalized-Laplacian gap report for an edge list.
    Spectral {
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Experiment {
    /// Spectral gap concentration under edge sampling on regular graphs.
    SamplingGap {
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 20)]
        trials: u32,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// How much edge sampling stretches component diameters.
    DiameterBlowup {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        seeds: u64,
    },
    /// Total work across sizes for a family, for linearity checks.
    WorkSweep {
        #[arg(long, value_enum, default_value = "cycle")]
        family: Family,
        #[arg(long, default_value_t = 10)]
        min_pow: u32,
        #[arg(long, default_value_t = 15)]
        max_pow: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Total rounds across sizes for a family, for scaling checks.
    RoundSweep {
        #[arg(long, value_enum, default_value = "cycle")]
        family: Family,
        #[arg(long, default_value_t = 10)]
        min_pow: u32,
        #[arg(long, default_value_t = 15)]
        max_pow: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn make_graph(family: Family, n: usize, d: usize, p: f64, seed: u64) -> MultiGraph {
    match family {
        Family::Path => gen::path(n),
        Family::Cycle => gen::cycle(n),
        Family::Regular => gen::random_regular(n, d, seed),
        Family::Gnp => gen::gnp(n, p, seed),
        Family::Union => {
            let part = (n / 4).max(2);
            gen::component_union(&[part, part, n - 2 * part - n / 16], n / 16, seed)
        }
        Family::TwoCycle => gen::two_cycle(n, seed % 2 == 1),
        Family::DiameterBlowup => gen::diameter_blowup(n, Profile::desk()).g,
    }
}

fn load(input: &Option<PathBuf>) -> Result<MultiGraph> {
    match input {
        Some(p) => io::read_edge_list_path(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let stdin = std::io::stdin();
            Ok(io::read_edge_list(stdin.lock())?)
        }
    }
}

fn run_pipeline(args: &RunArgs) -> Result<(MultiGraph, Vec<u32>, Ctx, orchestrator::CompletionReport)> {
    let input = load(&args.input)?;
    let mut g = input.clone();
    let mut ctx = Ctx::new(args.profile.get(), args.policy, args.seed);
    let (forest, report) = orchestrator::connectivity(&mut ctx, &mut g);
    let labels = oracle::forest_labels(&forest);
    if let Some(path) = &args.stats {
        let stats = json!({
            "seed": args.seed,
            "policy": args.policy,
            "report": report,
            "ledger": ctx.ledger,
        });
        std::fs::write(path, serde_json::to_string_pretty(&stats)?)?;
    }
    Ok((input, labels, ctx, report))
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<ExitCode> {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    match cli.cmd {
        Cmd::Gen { family, n, d, p, seed, out: path } => {
            if n == 0 {
                bail!("need n >= 1");
            }
            let g = make_graph(family, n, d, p, seed);
            match path {
                Some(p) => io::write_edge_list_path(&p, &g)?,
                None => io::write_edge_list(&mut out, &g)?,
            }
        }
        Cmd::Run(args) => {
            let (_, _, ctx, report) = run_pipeline(&args)?;
            writeln!(
                out,
                "seed={} policy={:?} phases={} components={} rounds={} work={}",
                args.seed, args.policy, report.phases_run, report.components,
                ctx.ledger.rounds, ctx.ledger.work,
            )?;
        }
        Cmd::Verify(args) => {
            let (input, labels, _, report) = run_pipeline(&args)?;
            let truth = oracle::components_dual(&input);
            if oracle::same_partition(&labels, &truth) {
                writeln!(out, "ok: {} components match the oracle", report.components)?;
            } else {
                writeln!(out, "MISMATCH: pipeline partition differs from the oracle")?;
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Experiment { which } => match which {
            Experiment::SamplingGap { p, trials, delta, seed } => {
                for n in [512usize, 1024, 2048] {
                    let g = gen::random_regular(n, 64, seed ^ n as u64);
                    let row = spectral::sampling_concentration_experiment(
                        &g, Profile::desk(), p, trials, delta, seed,
                    );
                    writeln!(out, "{}", serde_json::to_string(&row)?)?;
                }
            }
            Experiment::DiameterBlowup { n, seeds } => {
                let built = gen::diameter_blowup(n, Profile::desk());
                let g = &built.g;
                let adj = oracle::adjacency(g.n, g.edges().map(|e| (e.u, e.v)));
                let base = oracle::double_sweep_diameter(&adj, built.hub);
                let p = 1.0 / clog2(g.n) as f64;
                for seed in 0..seeds {
                    let kept = gen::sample_edges(g, p, seed);
                    let after = oracle::max_component_diameter(g.n, &kept, 3);
                    writeln!(
                        out,
                        "{}",
                        json!({
                            "n": g.n, "p": p, "seed": seed,
                            "diameter_before": base, "diameter_after": after,
                            "blowup": after as f64 / base.max(1) as f64,
                        })
                    )?;
                }
            }
            Experiment::WorkSweep { family, min_pow, max_pow, seed }
            | Experiment::RoundSweep { family, min_pow, max_pow, seed } => {
                for k in min_pow..=max_pow {
                    let n = 1usize << k;
                    let mut g = make_graph(family, n, 4, 8.0 / n as f64, seed ^ k as u64);
                    let m = g.live_count();
                    let mut ctx = Ctx::new(Profile::desk(), Policy::Random, seed ^ k as u64);
                    let (_, report) = orchestrator::connectivity(&mut ctx, &mut g);
                    writeln!(
                        out,
                        "{}",
                        json!({
                            "n": n, "m": m, "k": k,
                            "rounds": ctx.ledger.rounds, "work": ctx.ledger.work,
                            "phases": report.phases_run,
                        })
                    )?;
                }
            }
        },
        Cmd::Spectral { input } => {
            let g = load(&input)?;
            let report = spectral::spectral_report(&g);
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
