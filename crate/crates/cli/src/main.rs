use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abtune::harness::{self, ExperimentSpec, HarnessError};
use abtune::hexsim::Player;
use abtune::similarity::DEFAULT_SAMPLE_INTERVAL;
use abtune::strategies::{build_strategy, StrategyKind, REFERENCE_HORIZON};
use clap::{Args, Parser, Subcommand};

/// Tune behavior-tree parameters to reproduce a recorded gameplay.
#[derive(Parser)]
#[command(name = "abtune", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment file (TOML).
    #[arg(long)]
    spec: PathBuf,
    /// Overrides the output directory of the experiment.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for batch evaluations.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Play and store the context game.
    Record(Common),
    /// Run every player setup of the experiment.
    Optimize {
        #[command(flatten)]
        common: Common,
        /// Overrides the base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the number of runs.
        #[arg(long)]
        runs: Option<u32>,
        /// Only run the players with these labels.
        #[arg(long = "player")]
        players: Vec<String>,
    },
    /// Sweep the criterion over two slots of strategy A.
    Landscape {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Grid points per axis.
        #[arg(long, default_value_t = 9)]
        grid: usize,
    },
    /// Replay a record strictly and check it reproduces.
    Replay {
        #[command(flatten)]
        common: Common,
        /// Record to replay; the experiment's context record by default.
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Similarity of two recorded games.
    Similarity {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value = "red")]
        player: String,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_INTERVAL)]
        interval: u32,
    },
    /// Write the strategy templates and domain listings.
    ExportStrategies {
        #[arg(long, default_value = "strategies")]
        out: PathBuf,
        #[arg(long, default_value_t = REFERENCE_HORIZON)]
        horizon: u32,
    },
}

fn load(common: &Common) -> Result<ExperimentSpec, HarnessError> {
    let mut spec = ExperimentSpec::load(&common.spec)?;
    if let Some(out) = &common.out {
        spec.output = out.clone();
    }
    if let Some(jobs) = common.jobs.or(spec.parallelism) {
        harness::set_parallelism(jobs);
    }
    Ok(spec)
}

fn parse_player(s: &str) -> Result<Player, HarnessError> {
    match s {
        "red" => Ok(Player::Red),
        "green" => Ok(Player::Green),
        other => Err(HarnessError::Spec(format!("unknown player `{other}` (red or green)"))),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), HarnessError> {
    std::fs::write(path, text).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })
}

fn run(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Record(common) => {
            let spec = load(&common)?;
            let r = harness::cmd_record(&spec)?;
            println!("status={:?} length={} output={}", r.status, r.length, spec.output.display());
        }
        Command::Optimize { common, seed, runs, players } => {
            let mut spec = load(&common)?;
            if let Some(s) = seed {
                spec.base_seed = s;
            }
            if let Some(r) = runs {
                spec.runs = r.max(1);
            }
            if !players.is_empty() {
                if let Some(missing) = players.iter().find(|l| !spec.players.iter().any(|p| &p.label == *l)) {
                    return Err(HarnessError::Spec(format!("no player labelled `{missing}`")));
                }
                spec.players.retain(|p| players.contains(&p.label));
            }
            for o in harness::cmd_optimize(&spec)? {
                println!(
                    "player={} runs={} mean_final_similarity={:.6}",
                    o.label,
                    o.runs.len(),
                    o.mean_final_similarity()
                );
            }
        }
        Command::Landscape { common, x, y, grid } => {
            let spec = load(&common)?;
            let rows = harness::cmd_landscape(&spec, &x, &y, (grid, grid))?;
            let best = rows.iter().max_by(|a, b| a.f.total_cmp(&b.f)).expect("grid is not empty");
            println!("points={} best_x={} best_y={} best_f={:.6}", rows.len(), best.x, best.y, best.f);
        }
        Command::Replay { common, record } => {
            let spec = load(&common)?;
            let path = record.unwrap_or_else(|| harness::context_path(&spec));
            let r = harness::replay(&spec, &harness::load_record(&path)?)?;
            println!("replay=identical status={:?} length={}", r.status, r.length);
        }
        Command::Similarity { a, b, player, interval } => {
            if interval == 0 {
                return Err(HarnessError::Spec("interval must be positive".into()));
            }
            let s = harness::cmd_similarity(&a, &b, parse_player(&player)?, interval)?;
            println!("similarity={s}");
        }
        Command::ExportStrategies { out, horizon } => {
            std::fs::create_dir_all(&out).map_err(|source| HarnessError::Io { path: out.clone(), source })?;
            for kind in StrategyKind::ALL {
                let s = build_strategy(kind, horizon);
                write_file(&out.join(format!("{}.ron", kind.name())), &s.template_ron())?;
                write_file(&out.join(format!("{}.toml", kind.name())), &s.domain_toml())?;
            }
            println!("output={}", out.display());
        }
    }
    Ok(())
}

fn one_line(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            e.print().expect("print help");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            eprintln!("error kind=usage message={:?}", one_line(&first));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error kind={} message={:?}", e.kind(), one_line(&e.to_string()));
            ExitCode::FAILURE
        }
    }
}
