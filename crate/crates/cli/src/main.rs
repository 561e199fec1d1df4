use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use cantor_rips::harness::theorem::diagonal_threshold_edges;
use cantor_rips::harness::{
    assert_rigid_free, find_rigid_edges, run_lemma_suite, theorem_experiment, LemmaSuiteConfig,
};
use cantor_rips::homology::betti_report;
use cantor_rips::rational::{format_rational, parse_rational, parse_rational_list};
use cantor_rips::space::io::{read_cloud_csv, read_config_json, write_cloud_csv};
use cantor_rips::{build_cloud, build_complex, sweep, CloudConfig, Cloud, Error, Rational};
use clap::{Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "cantor-rips", version, about = "Exact Rips complexes of a Cantor-sheet set in R^4")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Randomized exact checks of the embedding and parabola lemmas.
    VerifyLemmas {
        #[arg(long, default_value_t = 12)]
        blocks: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a cloud from a JSON config and write it as CSV.
    Build {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Betti numbers of the Rips complex of a cloud at one scale.
    Betti {
        #[arg(long)]
        cloud: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        scale: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rigid-edge census and triangle-freeness check.
    Rigid {
        #[arg(long)]
        cloud: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        scale: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sheet-count experiment over a list of scales.
    Experiment {
        #[arg(long, value_delimiter = ',', required = true)]
        sheets: Vec<usize>,
        #[arg(long, value_parser = rational_list_arg)]
        scales: Scales,
        #[arg(long, default_value_t = cantor_rips::embedding::DEFAULT_BLOCKS)]
        blocks: usize,
        /// Points per cube edge minus one; 0 disables the cube grids.
        #[arg(long, default_value_t = 0)]
        grid: usize,
        #[arg(long)]
        cube0: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Complexes and Betti numbers of a cloud across ascending scales.
    Sweep {
        #[arg(long)]
        cloud: PathBuf,
        #[arg(long, value_parser = rational_list_arg)]
        scales: Scales,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Opaque to clap so a comma list parses as one value.
type Scales = Vec<Rational>;

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn rational_list_arg(s: &str) -> Result<Scales, String> {
    parse_rational_list(s).map_err(|e| e.to_string())
}

/// Either a verdict for the exit code or a usage/config failure.
enum Outcome {
    Pass,
    CheckFailed,
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(bytes).context("writing stdout"),
    }
}

fn write_json(path: Option<&Path>, value: &impl serde::Serialize) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_output(path, text.as_bytes())
}

fn load_cloud(path: &Path) -> anyhow::Result<Cloud> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(read_cloud_csv(BufReader::new(file))?)
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::CheckFailed
    }
}

fn run(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::VerifyLemmas {
            blocks,
            samples,
            seed,
            out,
        } => {
            let report = run_lemma_suite(&LemmaSuiteConfig::new(seed, samples, blocks))?;
            write_json(out.as_deref(), &report)?;
            Ok(verdict(report.passed))
        }
        Command::Build { config, out } => {
            let file = File::open(&config).with_context(|| format!("opening {}", config.display()))?;
            let cfg = read_config_json(BufReader::new(file))?;
            let cloud = build_cloud(&cfg)?;
            let mut buf = Vec::new();
            write_cloud_csv(&cloud, &mut buf)?;
            write_output(out.as_deref(), &buf)?;
            Ok(Outcome::Pass)
        }
        Command::Betti { cloud, scale, out } => {
            let cloud = load_cloud(&cloud)?;
            let report = betti_report(&build_complex(&cloud, &scale))?;
            write_json(out.as_deref(), &report)?;
            Ok(Outcome::Pass)
        }
        Command::Rigid { cloud, scale, out } => {
            let cloud = load_cloud(&cloud)?;
            let complex = build_complex(&cloud, &scale);
            let rigid = find_rigid_edges(&complex);
            let report = assert_rigid_free(&complex, &rigid)?;
            let free = report.is_free();
            write_json(
                out.as_deref(),
                &json!({
                    "scale": format_rational(&scale),
                    "rigid": rigid,
                    "diagonal_edges": diagonal_threshold_edges(&complex),
                    "free": free,
                    "report": report,
                }),
            )?;
            Ok(verdict(free))
        }
        Command::Experiment {
            sheets,
            scales,
            blocks,
            grid,
            cube0,
            out,
            json,
        } => {
            let scale = scales.first().cloned().unwrap_or_else(|| cantor_rips::scale_window().1);
            let template = CloudConfig {
                blocks,
                cube_grid: grid,
                include_cube0: cube0,
                ..CloudConfig::minimal(1, scale)
            };
            let report = theorem_experiment(&template, &sheets, &scales)?;
            write_output(out.as_deref(), report.to_csv().as_bytes())?;
            if let Some(path) = json {
                write_json(Some(&path), &report)?;
            }
            Ok(verdict(report.passed))
        }
        Command::Sweep { cloud, scales, out } => {
            let cloud = load_cloud(&cloud)?;
            let complexes = match sweep(&cloud, &scales) {
                Ok(c) => c,
                Err(e @ Error::Monotonicity { .. }) => {
                    eprintln!("error: {e}");
                    return Ok(Outcome::CheckFailed);
                }
                Err(e) => return Err(e.into()),
            };
            let betti = complexes.iter().map(betti_report).collect::<Result<Vec<_>, _>>()?;
            let exports: Vec<_> = complexes.iter().map(|c| c.export()).collect();
            write_json(out.as_deref(), &json!({ "complexes": exports, "betti": betti }))?;
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
