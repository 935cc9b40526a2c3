use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use cascade_duel::game::{self, Basis};
use cascade_duel::graph::{self, Graph};
use cascade_duel::meanfield::{self, CompartmentState, IntegrateOptions, RateParams};
use cascade_duel::output::{self, num, opt_num};
use cascade_duel::runner::{self, ExperimentConfig, GenKind, RunResult, OUT_ENV};
use cascade_duel::Player;

const DEFAULT_OUT: &str = "results";

#[derive(Debug, Parser)]
#[command(
    name = "cascade-duel",
    version,
    about = "Competitive two-player information diffusion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Replicated cascade experiments on a graph.
    Simulate(Box<SimulateArgs>),
    /// Six-compartment mean-field model.
    #[command(subcommand)]
    Meanfield(MeanfieldCommand),
    /// Positions, best responses, equilibrium and margin verdicts.
    #[command(subcommand)]
    Game(GameCommand),
    /// Synthetic graphs as edge lists.
    Gen(GenArgs),
    /// Node, edge, clustering and diameter statistics of an edge list.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// key = value settings; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Treat each line as a directed arc (reciprocal pairs collapse silently).
    #[arg(long)]
    symmetrize: bool,
    /// Build a synthetic graph: er or regular (sized by --nodes/--degree or the
    /// --graph file), tree (BFS spanning tree of --graph).
    #[arg(long)]
    gen: Option<String>,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    degree: Option<f64>,
    #[arg(long)]
    method1: Option<String>,
    #[arg(long)]
    method2: Option<String>,
    /// const:<v> or uniform
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    enforce_budget: bool,
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    margin: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Fixed seed labels, e.g. 2,5
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    seeds_per_player: Option<usize>,
    /// Nodes below threshold do not forward influence.
    #[arg(long)]
    strict: bool,
    /// Print the run summary as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct InitArgs {
    #[arg(long, default_value_t = 0.0005)]
    a0: f64,
    #[arg(long, default_value_t = 0.0005)]
    b0: f64,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    #[arg(long, default_value_t = 200.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-6)]
    steady_tol: f64,
}

impl InitArgs {
    fn state(&self) -> Result<CompartmentState> {
        Ok(CompartmentState::seeded(self.a0, self.b0)?)
    }

    fn options(&self, stop_at_steady: bool) -> IntegrateOptions {
        IntegrateOptions {
            dt: self.dt,
            t_end: self.t_end,
            steady_tol: self.steady_tol,
            stop_at_steady,
        }
    }
}

#[derive(Debug, Args)]
struct GridArgs {
    #[command(flatten)]
    init: InitArgs,
    #[arg(long, default_value_t = 0.0)]
    beta_min: f64,
    #[arg(long, default_value_t = 20.0)]
    beta_max: f64,
    /// Points per axis.
    #[arg(long, default_value_t = 101)]
    resolution: usize,
}

impl GridArgs {
    fn sweep(&self) -> Result<meanfield::SweepGrid> {
        let range = (self.beta_min, self.beta_max);
        Ok(meanfield::sweep_grid(
            &self.init.state()?,
            range,
            range,
            self.resolution,
            &self.init.options(true),
        )?)
    }
}

#[derive(Debug, Subcommand)]
enum MeanfieldCommand {
    /// Time series of every compartment.
    Trajectory {
        #[arg(long)]
        beta1: f64,
        #[arg(long)]
        beta2: f64,
        #[command(flatten)]
        init: InitArgs,
        /// Keep integrating after the steady state until --t-end.
        #[arg(long)]
        full: bool,
        /// CSV file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// End states over a (beta1, beta2) grid: grid.csv, grid_peaks.csv, contour.csv.
    Sweep {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Points where a/(a+b) = 0.5.
    Contour {
        #[command(flatten)]
        grid: GridArgs,
        /// CSV file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum GameCommand {
    Positions {
        #[arg(long)]
        frac1: f64,
        #[arg(long)]
        frac2: f64,
        #[arg(long, default_value = "informed")]
        basis: String,
        #[arg(long)]
        json: bool,
    },
    BestResponse {
        /// 1 or 2
        #[arg(long)]
        firm: u8,
        #[arg(long)]
        opponent: f64,
        #[arg(long)]
        json: bool,
    },
    Nash {
        #[arg(long, default_value_t = game::NASH_STEP)]
        step: f64,
        #[arg(long)]
        json: bool,
    },
    Verdict {
        #[arg(long)]
        rho1: f64,
        #[arg(long)]
        rho2: f64,
        #[arg(long, default_value_t = game::DEFAULT_MARGIN)]
        margin: f64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct GenArgs {
    /// er, regular or tree
    kind: String,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    degree: Option<f64>,
    /// Base graph: required for tree, sizes er/regular when --nodes/--degree are absent.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge list file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    symmetrize: bool,
    #[arg(long)]
    json: bool,
}

fn default_out() -> PathBuf {
    std::env::var_os(OUT_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

fn build_config(args: &SimulateArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig {
        out_dir: Some(default_out()),
        ..Default::default()
    };
    if let Some(path) = &args.config {
        cfg.apply_file(path)
            .with_context(|| format!("reading config {}", path.display()))?;
    }
    let mut flags: Vec<(&str, String)> = Vec::new();
    let mut put = |key, value: Option<String>| {
        if let Some(v) = value {
            flags.push((key, v));
        }
    };
    let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
    put("graph", path(&args.graph));
    put("gen", args.gen.clone());
    put("nodes", args.nodes.map(|v| v.to_string()));
    put("degree", args.degree.map(|v| v.to_string()));
    put("method1", args.method1.clone());
    put("method2", args.method2.clone());
    put("theta", args.theta.clone());
    put("budget", args.budget.map(|v| v.to_string()));
    put("reps", args.reps.map(|v| v.to_string()));
    put("seed", args.seed.map(|v| v.to_string()));
    put("margin", args.margin.map(|v| v.to_string()));
    put("out", path(&args.out));
    put("workers", args.workers.map(|v| v.to_string()));
    put("seeds", args.seeds.clone());
    put(
        "seeds-per-player",
        args.seeds_per_player.map(|v| v.to_string()),
    );
    if args.symmetrize {
        put("symmetrize", Some("true".into()));
    }
    if args.enforce_budget {
        put("enforce-budget", Some("true".into()));
    }
    if args.strict {
        put("strict", Some("true".into()));
    }
    for (k, v) in flags {
        cfg.set(k, &v).with_context(|| format!("--{k}"))?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_run(result: &RunResult, cfg: &ExperimentConfig, json: bool) -> Result<()> {
    let mut out = io::stdout().lock();
    if json {
        serde_json::to_writer(&mut out, &result_summary(result))?;
        writeln!(out)?;
        return Ok(());
    }
    writeln!(out, "nodes={}", result.nodes)?;
    writeln!(out, "edges={}", result.edges)?;
    writeln!(out, "replications={}", result.replications.len())?;
    for info in Player::BOTH {
        let i = info.index();
        writeln!(out, "method{info}={}", cfg.methods[i])?;
        writeln!(
            out,
            "mu_influenced{info}={}",
            num(result.final_influenced[i].mean)
        )?;
        writeln!(
            out,
            "mu_supporter{info}={}",
            num(result.final_supporters[i].mean)
        )?;
        writeln!(
            out,
            "mu_supporter{info}_var={}",
            opt_num(result.final_supporters[i].var)
        )?;
    }
    writeln!(out, "verdict={}", result.margin.verdict)?;
    if let Some(dir) = &cfg.out_dir {
        writeln!(out, "out={}", dir.display())?;
    }
    Ok(())
}

fn result_summary(result: &RunResult) -> serde_json::Value {
    serde_json::json!({
        "nodes": result.nodes,
        "edges": result.edges,
        "methods": result.methods.map(|m| m.to_string()),
        "replications": result.replications.len(),
        "final_influenced": result.final_influenced,
        "final_supporters": result.final_supporters,
        "margin": result.margin,
        "runs": result.replications,
    })
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let cfg = build_config(args)?;
    let result = runner::run_experiment(&cfg)?;
    print_run(&result, &cfg, args.json)
}

fn emit_table(out: Option<&Path>, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    match out {
        Some(path) => output::save_table(path, header, rows)?,
        None => output::write_table(io::stdout().lock(), header, rows)?,
    }
    Ok(())
}

fn meanfield_cmd(cmd: &MeanfieldCommand) -> Result<()> {
    match cmd {
        MeanfieldCommand::Trajectory {
            beta1,
            beta2,
            init,
            full,
            out,
        } => {
            let tr = meanfield::integrate(
                &init.state()?,
                &RateParams::new(*beta1, *beta2)?,
                &init.options(!full),
            )?;
            if !tr.steady_state_reached {
                log::warn!("no steady state before t = {}", init.t_end);
            }
            emit_table(
                out.as_deref(),
                &output::TRAJECTORY_HEADER,
                output::trajectory_rows(&tr),
            )
        }
        MeanfieldCommand::Sweep { grid, out } => {
            let sweep = grid.sweep()?;
            let dir = out.clone().unwrap_or_else(default_out);
            output::ensure_dir(&dir)?;
            output::save_table(
                &dir.join("grid.csv"),
                &output::GRID_HEADER,
                output::grid_rows(&sweep),
            )?;
            output::save_table(
                &dir.join("grid_peaks.csv"),
                &output::GRID_PEAKS_HEADER,
                output::grid_peak_rows(&sweep),
            )?;
            let contour = meanfield::contour_equilibrium(&sweep);
            output::save_table(
                &dir.join("contour.csv"),
                &output::CONTOUR_HEADER,
                output::contour_rows(&contour),
            )?;
            let failed = sweep.cells.iter().filter(|c| c.error.is_some()).count();
            if failed > 0 {
                log::warn!("{failed} grid cells failed to integrate");
            }
            println!("cells={}", sweep.cells.len());
            println!("failed={failed}");
            println!("out={}", dir.display());
            Ok(())
        }
        MeanfieldCommand::Contour { grid, out } => {
            let contour = meanfield::contour_equilibrium(&grid.sweep()?);
            emit_table(
                out.as_deref(),
                &output::CONTOUR_HEADER,
                output::contour_rows(&contour),
            )
        }
    }
}

fn firm(n: u8) -> Result<Player> {
    match n {
        1 => Ok(Player::One),
        2 => Ok(Player::Two),
        _ => bail!("firm must be 1 or 2, got {n}"),
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn game_cmd(cmd: &GameCommand) -> Result<()> {
    match cmd {
        GameCommand::Positions {
            frac1,
            frac2,
            basis,
            json,
        } => {
            let basis: Basis = basis.parse()?;
            let p = game::positions(*frac1, *frac2, basis)?;
            if *json {
                return print_json(&p);
            }
            let overlap = p.overlap();
            let rows = vec![vec![
                basis.to_string(),
                num(p.frac1),
                num(p.frac2),
                num(p.position1),
                num(p.position2),
                opt_num(overlap.map(|o| o.lo)),
                opt_num(overlap.map(|o| o.hi)),
            ]];
            emit_table(
                None,
                &[
                    "basis",
                    "frac1",
                    "frac2",
                    "position1",
                    "position2",
                    "overlap_lo",
                    "overlap_hi",
                ],
                rows,
            )
        }
        GameCommand::BestResponse {
            firm: f,
            opponent,
            json,
        } => {
            let br = game::best_response(firm(*f)?, *opponent)?;
            if *json {
                return print_json(&br);
            }
            let (kind, lo, lo_closed, hi, hi_closed) = match br.response {
                game::ResponseSet::Interval(iv) => (
                    "interval",
                    num(iv.lo),
                    iv.lo_closed,
                    num(iv.hi),
                    iv.hi_closed,
                ),
                game::ResponseSet::Singleton(v) => ("singleton", num(v), true, num(v), true),
                game::ResponseSet::Undefined => {
                    ("undefined", String::new(), false, String::new(), false)
                }
            };
            emit_table(
                None,
                &[
                    "firm",
                    "opponent",
                    "kind",
                    "lo",
                    "lo_closed",
                    "hi",
                    "hi_closed",
                ],
                vec![vec![
                    f.to_string(),
                    num(*opponent),
                    kind.into(),
                    lo,
                    lo_closed.to_string(),
                    hi,
                    hi_closed.to_string(),
                ]],
            )
        }
        GameCommand::Nash { step, json } => {
            let (x1, x2) = game::nash(*step)?;
            if *json {
                return print_json(&serde_json::json!({ "position1": x1, "position2": x2 }));
            }
            println!("{},{}", num(x1), num(x2));
            Ok(())
        }
        GameCommand::Verdict {
            rho1,
            rho2,
            margin,
            json,
        } => {
            let v = game::margin_verdict(*rho1, *rho2, *margin)?;
            if *json {
                return print_json(&v);
            }
            emit_table(
                None,
                &runner::VERDICT_HEADER,
                vec![vec![
                    num(v.rho1),
                    num(v.rho2),
                    num(v.margin),
                    v.verdict.to_string(),
                ]],
            )
        }
    }
}

fn gen_cmd(args: &GenArgs) -> Result<()> {
    let kind: GenKind = args.kind.parse()?;
    let base = args
        .graph
        .as_ref()
        .map(|p| graph::load_edgelist(p, false))
        .transpose()?;
    let g: Graph = runner::derive_graph(base, Some(kind), args.nodes, args.degree, args.seed)?;
    match &args.out {
        Some(path) => graph::save_edgelist(&g, path)?,
        None => graph::write_edgelist(&g, io::BufWriter::new(io::stdout().lock()))?,
    }
    Ok(())
}

fn stats_cmd(args: &StatsArgs) -> Result<()> {
    let g = graph::load_edgelist(&args.graph, args.symmetrize)?;
    let s = graph::compute_stats(&g)?;
    if args.json {
        return print_json(&s);
    }
    println!("nodes={}", s.nodes);
    println!("edges={}", s.edges);
    println!("avg_degree={}", num(s.avg_degree));
    println!("clustering={}", num(s.avg_clustering));
    println!("triangles={}", s.triangles);
    println!("diameter={}", s.diameter);
    println!("largest_component={}", s.largest_component_nodes);
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Meanfield(cmd) => meanfield_cmd(cmd),
        Command::Game(cmd) => game_cmd(cmd),
        Command::Gen(args) => gen_cmd(args),
        Command::Stats(args) => stats_cmd(args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cascade-duel: {e:#}");
            ExitCode::FAILURE
        }
    }
}
