//! Command-line entry point: pipeline runs, the five-arm substitution
//! matrix, summary digests, standalone QUBO solves, and corpus export.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gridpipe::corpus::{export_ci_csv, export_meter_csv, generate_corpus, CorpusConfig};
use gridpipe::error::{Error, Result};
use gridpipe::pipeline::{run_ablation, run_pipeline, AblationArm, RunConfig, RunSummary};
use gridpipe::qubo::QuboInstance;
use gridpipe::solver::{
    brute_force, solve_asb, solve_bsb, solve_greedy, solve_sa, tune_sa, SaParams, SbParams,
    SbVariant,
};

#[derive(Parser)]
#[command(name = "gridpipe", about = "Deterministic smart-meter analytics pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Bsb,
    Asb,
    Sa,
    Greedy,
    Exact,
}

#[derive(Subcommand)]
enum Command {
    /// Run the five-phase pipeline for one arm.
    Run {
        /// JSON run configuration; defaults apply for missing fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the corpus master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Component-substitution arm (e.g. full, sa-instead-of-sb).
        #[arg(long)]
        ablation: Option<String>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run all five arms with a shared seed and emit the matrix CSV.
    Ablate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a digest of an emitted summary.json.
    Report {
        #[arg(long)]
        summary: PathBuf,
    },
    /// Solve a QUBO instance JSON with one method.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Tune SA hyper-parameters (100-trial search) before solving.
        #[arg(long)]
        tune_sa: bool,
    },
    /// Generate the corpus and export the meter and CI CSV feeds.
    Corpus {
        /// JSON document mirroring the corpus configuration fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_run_config(path: Option<&PathBuf>) -> Result<RunConfig> {
    match path {
        Some(path) => Ok(serde_json::from_str(&fs::read_to_string(path)?)?),
        None => Ok(RunConfig::default()),
    }
}

fn print_digest(summary: &RunSummary) {
    println!("arm: {}", summary.arm);
    println!("seed: {}", summary.provenance.seed);
    println!("config hash: {}", summary.provenance.config_hash);
    println!("forecast (aggregate test):");
    for eval in &summary.forecast {
        println!(
            "  {:<12} mape {:6.3} %  rmse {:8.3} kWh  pinball {:7.4}  coverage {:.3}",
            eval.kind.label(),
            eval.metrics.mape_pct,
            eval.metrics.rmse_kwh,
            eval.metrics.pinball,
            eval.coverage,
        );
    }
    println!("optimisers (canonical demand-response instance):");
    for row in &summary.solver {
        println!(
            "  {:<10} energy {:12.4}  convergence iterations {}",
            row.method, row.energy, row.iterations_to_converge
        );
    }
    println!(
        "co2 attribution: annual-average error {:.2} % mean |daily|, {:.2} kg mean monthly gap",
        summary.co2.mean_abs_daily_pct, summary.co2.mean_monthly_gap_kg
    );
    println!(
        "demand response: {} accepted shifts, peak -{:.2} %, {:.2} kg expected ({:.2} kg delivered), {:.2} currency",
        summary.accepted_shifts,
        summary.dr_kpis.peak_reduction_pct,
        summary.dr_kpis.kg_saved,
        summary.realized_co2_kg,
        summary.dr_kpis.currency_saved,
    );
    println!("hallucination rate: {:.3}", summary.hallucination_rate);
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, seed, ablation, out } => {
            let mut run_config = load_run_config(config.as_ref())?;
            if let Some(seed) = seed {
                run_config.corpus.master_seed = seed;
            }
            if let Some(arm) = ablation {
                run_config.ablation = arm.parse::<AblationArm>()?;
            }
            if let Some(out) = out {
                run_config.output_dir = out;
            }
            let summary = run_pipeline(&run_config)?;
            print_digest(&summary);
            println!("artifacts: {}", run_config.output_dir.display());
        }
        Command::Ablate { config, out } => {
            let mut run_config = load_run_config(config.as_ref())?;
            run_config.output_dir = out.clone();
            let summaries = run_ablation(&run_config)?;
            println!("arm,forecast_mape_pct,optimiser_iterations,co2_reduction_pct,hallucination_rate");
            for summary in &summaries {
                println!(
                    "{},{:.3},{},{:.4},{:.3}",
                    summary.arm,
                    summary.forecast_mape_pct,
                    summary.optimiser_iterations,
                    summary.realized_co2_reduction_pct,
                    summary.hallucination_rate,
                );
            }
            println!("artifacts: {}", out.display());
        }
        Command::Report { summary } => {
            let summary: RunSummary = serde_json::from_str(&fs::read_to_string(summary)?)?;
            print_digest(&summary);
        }
        Command::Solve { instance, method, seed, tune_sa: tune } => {
            let instance: QuboInstance = serde_json::from_str(&fs::read_to_string(instance)?)?;
            instance.validate()?;
            let result = match method {
                MethodArg::Bsb => {
                    solve_bsb(&instance, &SbParams { seed, ..gridpipe::pipeline::dr_sb_params() })?
                }
                MethodArg::Asb => solve_asb(
                    &instance,
                    &SbParams {
                        seed,
                        variant: SbVariant::Adiabatic,
                        ..gridpipe::pipeline::dr_sb_params()
                    },
                )?,
                MethodArg::Sa => {
                    let params = if tune {
                        tune_sa(&instance, 100, seed)?
                    } else {
                        SaParams { seed, ..SaParams::default() }
                    };
                    solve_sa(&instance, &params)?
                }
                MethodArg::Greedy => solve_greedy(&instance)?,
                MethodArg::Exact => brute_force(&instance)?,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "energy": result.energy,
                    "iterations_to_converge": result.iterations_to_converge,
                    "assignment": result.assignment,
                }))?
            );
        }
        Command::Corpus { config, seed, out } => {
            let mut corpus_config: CorpusConfig = match config {
                Some(path) => serde_json::from_str(&fs::read_to_string(&path)?)?,
                None => CorpusConfig::default(),
            };
            if let Some(seed) = seed {
                corpus_config.master_seed = seed;
            }
            let corpus = generate_corpus(&corpus_config)?;
            fs::create_dir_all(&out)?;
            let meter = fs::File::create(out.join("meter_readings.csv"))?;
            export_meter_csv(&corpus, meter)?;
            let ci = fs::File::create(out.join("carbon_intensity.csv"))?;
            export_ci_csv(&corpus, ci)?;
            println!("corpus exported to {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if matches!(err, Error::Phase { .. }) {
                eprintln!("partial outputs have been removed");
            }
            ExitCode::FAILURE
        }
    }
}
