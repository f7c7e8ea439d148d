use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use biphoton::cli_io::{fmt12, run_sweep, to_rounded_json, OutputFormat, Preset, Settings};
use biphoton::hom::hom_resolved_density_noisy;
use biphoton::noon::noon_resolved_density_noisy;
use biphoton::simulation::{probabilities, run_campaign, EstimationReport};
use biphoton::strategy::{crossover_noise, peak_fisher, rank_strategies, tau_grid, Crossover, Ranking};
use biphoton::validation;
use biphoton::{Detection, Interferometer};

/// Delay sensing with HOM and two-photon N00N interferometers under phase noise.
///
/// Delays are given as omega_p*tau and the frequency-dependent noise as
/// eta_eps*omega_p. HOM data only determine |tau|, so estimation windows
/// start at zero delay.
#[derive(Parser)]
#[command(name = "biphoton", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Outcome probabilities at one delay (and resolved densities at one frequency).
    Probs(ProbsArgs),
    /// Fisher information over a delay grid for several noise levels.
    Sweep(CommonArgs),
    /// Monte Carlo maximum-likelihood campaign.
    Simulate(SimulateArgs),
    /// Rank the four interferometer/detection strategies by peak Fisher information.
    Recommend(RecommendArgs),
    /// Run the oracle-equivalence checks.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum InterferometerArg {
    Hom,
    Noon,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetectionArg {
    Resolved,
    Nonresolved,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig2,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Key = value file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    visibility: Option<f64>,
    #[arg(long)]
    sigma_minus: Option<f64>,
    #[arg(long)]
    sigma_plus: Option<f64>,
    #[arg(long)]
    omega_p: Option<f64>,
    /// Comma-separated list for sweeps.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    eta_eps_wp: Option<Vec<f64>>,
    /// Comma-separated list for sweeps.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    eta_theta: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    interferometer: Option<InterferometerArg>,
    #[arg(long, value_enum)]
    detection: Option<DetectionArg>,
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    #[arg(long, allow_negative_numbers = true)]
    tau_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    tau_stop: Option<f64>,
    #[arg(long)]
    tau_points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct ProbsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Delay as omega_p*tau.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    tau: f64,
    /// Detected frequency (omega_- for HOM, omega_+ for N00N) in units of omega_p.
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// True delay as omega_p*tau; defaults to the Fisher maximum on the delay grid.
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 10_000)]
    pairs: u64,
}

#[derive(Args)]
struct RecommendArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Also locate the switch point over eta_eps*omega_p in [0, MAX].
    #[arg(long)]
    crossover_max: Option<f64>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Also run the figure, simulation and strategy checks.
    #[arg(long)]
    all: bool,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

impl CommonArgs {
    fn settings(&self) -> Result<Settings> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Settings::from_config_text(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => Settings::default(),
        };
        let flags = Settings {
            gamma: self.gamma,
            visibility: self.visibility,
            sigma_minus: self.sigma_minus,
            sigma_plus: self.sigma_plus,
            omega_p: self.omega_p,
            eta_eps_wp: self.eta_eps_wp.clone(),
            eta_theta: self.eta_theta.clone(),
            interferometer: self.interferometer.map(|i| match i {
                InterferometerArg::Hom => Interferometer::Hom,
                InterferometerArg::Noon => Interferometer::Noon,
            }),
            detection: self.detection.map(|d| match d {
                DetectionArg::Resolved => Detection::Resolved,
                DetectionArg::Nonresolved => Detection::NonResolved,
            }),
            preset: self.preset.map(|p| match p {
                PresetArg::Fig1a => Preset::Fig1a,
                PresetArg::Fig1b => Preset::Fig1b,
                PresetArg::Fig1c => Preset::Fig1c,
                PresetArg::Fig2 => Preset::Fig2,
            }),
            tau_start: self.tau_start,
            tau_stop: self.tau_stop,
            tau_points: self.tau_points,
            seed: self.seed,
            out: self.out.clone(),
            format: self.format.map(format_of),
        };
        Ok(Settings::layered(file, flags))
    }
}

fn format_of(f: FormatArg) -> OutputFormat {
    match f {
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ProbsOutput {
    omega_p_tau: f64,
    p2: f64,
    p1: f64,
    p0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    density: Option<DensityOutput>,
}

#[derive(Serialize)]
struct DensityOutput {
    omega: f64,
    d2: f64,
    d1: f64,
    d0: f64,
}

fn cmd_probs(args: &ProbsArgs) -> Result<()> {
    let s = args.common.settings()?;
    let config = s.config()?;
    let wp = config.spectral.omega_p;
    let tau = args.tau / wp;
    let p = probabilities(&config, tau);
    let density = args.omega.map(|w| {
        let omega = w * wp;
        let (ch, sp, no) = (&config.channel, &config.spectral, &config.noise);
        let d = match config.interferometer {
            Interferometer::Hom => hom_resolved_density_noisy(tau, omega, ch, sp, no),
            Interferometer::Noon => noon_resolved_density_noisy(tau, omega, ch, sp, no),
        };
        DensityOutput {
            omega,
            d2: d.d2,
            d1: d.d1,
            d0: d.d0,
        }
    });
    let text = match s.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Json => to_rounded_json(&ProbsOutput {
            omega_p_tau: args.tau,
            p2: p.p2,
            p1: p.p1,
            p0: p.p0,
            density,
        }),
        OutputFormat::Csv => {
            let mut line = format!("p2={} p1={} p0={}\n", fmt12(p.p2), fmt12(p.p1), fmt12(p.p0));
            if let Some(d) = density {
                line.push_str(&format!(
                    "omega={} d2={} d1={} d0={}\n",
                    fmt12(d.omega),
                    fmt12(d.d2),
                    fmt12(d.d1),
                    fmt12(d.d0)
                ));
            }
            line
        }
    };
    emit(&text, s.out.as_deref())
}

fn cmd_sweep(args: &CommonArgs) -> Result<()> {
    let s = args.settings()?;
    let spec = s.sweep_spec()?;
    let table = run_sweep(&spec)?;
    emit(&table.render(spec.format), spec.output_path.as_deref())
}

fn delay_grid(s: &Settings) -> Result<Vec<f64>> {
    Ok(tau_grid(
        s.omega_p(),
        s.tau_start.unwrap_or(0.0),
        s.tau_stop.unwrap_or(400.0),
        s.tau_points.unwrap_or(2001),
    )?)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let s = args.common.settings()?;
    let config = s.config()?;
    let tau = match args.tau {
        Some(x) => x / config.spectral.omega_p,
        None => peak_fisher(&config, &delay_grid(&s)?)?.1,
    };
    let report: EstimationReport = run_campaign(&config, tau, args.trials, args.pairs, s.seed.unwrap_or(1))?;
    let text = match s.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => to_rounded_json(&report),
        OutputFormat::Csv => report_csv(&report),
    };
    emit(&text, s.out.as_deref())
}

fn report_csv(r: &EstimationReport) -> String {
    let columns = [
        ("tau_true", fmt12(r.tau_true)),
        ("tau_hat_mean", fmt12(r.tau_hat_mean)),
        ("tau_hat_std", fmt12(r.tau_hat_std)),
        ("crb_std", fmt12(r.crb_std)),
        ("saturation_ratio", fmt12(r.saturation_ratio)),
        ("fisher", fmt12(r.fisher)),
        ("infinite_crb", r.infinite_crb.to_string()),
        ("n_trials", r.n_trials.to_string()),
        ("n_pairs_per_trial", r.n_pairs_per_trial.to_string()),
        ("n_unidentifiable", r.n_unidentifiable.to_string()),
        ("seed", r.seed.to_string()),
        ("window_lo", fmt12(r.window.0)),
        ("window_hi", fmt12(r.window.1)),
    ];
    let header: Vec<&str> = columns.iter().map(|c| c.0).collect();
    let values: Vec<&str> = columns.iter().map(|c| c.1.as_str()).collect();
    format!("{}\n{}\n", header.join(","), values.join(","))
}

#[derive(Serialize)]
struct RecommendOutput {
    ranking: Ranking,
    #[serde(skip_serializing_if = "Option::is_none")]
    crossover: Option<Crossover>,
}

fn cmd_recommend(args: &RecommendArgs) -> Result<()> {
    let s = args.common.settings()?;
    let config = s.config()?;
    let (ch, sp, no) = (config.channel, config.spectral, config.noise);
    let grid = delay_grid(&s)?;
    let ranking = rank_strategies(&ch, &sp, &no, &grid)?;
    let crossover = match args.crossover_max {
        Some(max) => Some(crossover_noise(&ch, &sp, no.eta_theta, &grid, (0.0, max / sp.omega_p))?),
        None => None,
    };
    let wp2 = sp.omega_p * sp.omega_p;
    let text = match s.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Json => to_rounded_json(&RecommendOutput { ranking, crossover }),
        OutputFormat::Csv => {
            let mut t = String::from("rank,strategy,peak_fi_over_wp2,argmax_omega_p_tau\n");
            for (i, e) in ranking.entries.iter().enumerate() {
                t.push_str(&format!(
                    "{},{},{},{}\n",
                    i + 1,
                    e.strategy.as_str(),
                    fmt12(e.peak_fi / wp2),
                    fmt12(e.argmax_tau * sp.omega_p)
                ));
            }
            if ranking.no_information {
                t.push_str("# no information: every strategy has zero Fisher information; fixed order shown\n");
            }
            if let Some(c) = crossover {
                match c.eta_star {
                    Some(eta) => t.push_str(&format!(
                        "# crossover eta_eps*omega_p = {} ({} switch(es) on the scan)\n",
                        fmt12(eta * sp.omega_p),
                        c.switches
                    )),
                    None => t.push_str("# no crossover in range\n"),
                }
            }
            t
        }
    };
    emit(&text, s.out.as_deref())
}

fn cmd_validate(args: &ValidateArgs) -> Result<bool> {
    let checks = if args.all {
        validation::full_suite()?
    } else {
        validation::oracle_suite()?
    };
    let passed = checks.iter().all(|c| c.passed);
    match args.format.map(format_of).unwrap_or(OutputFormat::Csv) {
        OutputFormat::Json => print!("{}", to_rounded_json(&checks)),
        OutputFormat::Csv => {
            for c in &checks {
                println!("[{}] {}. {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name, c.detail);
            }
        }
    }
    Ok(passed)
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Probs(a) => cmd_probs(a)?,
        Command::Sweep(a) => cmd_sweep(a)?,
        Command::Simulate(a) => cmd_simulate(a)?,
        Command::Recommend(a) => cmd_recommend(a)?,
        Command::Validate(a) => return cmd_validate(a),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
