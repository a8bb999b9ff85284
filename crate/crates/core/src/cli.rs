//! The `qta` command line.
//!
//! Exit codes: 0 success, 1 simulation or output failure, 2 malformed input,
//! 3 reflection-path explosion. Output files are written atomically, so a
//! failed run never leaves a partial file behind.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::audit::{pa_budget_csv, pa_budget_sweep, run_audit, AttackScenario};
use crate::error::{Error, Result};
use crate::info::{
    info_gain_csv, info_gain_sweep, linear_grid, log_grid, randomization_gain_ratio, reduced_info, trojan_info,
};
use crate::output::{sig9, write_atomic};
use crate::reflectometry::{
    detect_peaks, synthesize_ofdr, synthesize_otdr, OfdrConfig, OpticalCircuit, OtdrConfig, PathOptions, Peak,
    SamplingGrid, SweepSpec, Trace, TraceNoise, DEFAULT_CANDIDATE_CAP, DEFAULT_GROUP_INDEX,
};
use crate::stats::{
    attenuate, monte_carlo_thin, multi_photon_prob_exact, multi_photon_prob_leading, poisson_cutoff,
    poisson_distribution, tv_distance, MeanPhotonNumber, PhotonNumberDistribution, TransmissionFactor,
};

/// Environment variable holding the Monte Carlo and noise seed.
pub const SEED_ENV: &str = "QTA_SEED";

#[derive(Debug, Parser)]
#[command(name = "qta", version, about = "Trojan-horse attack analysis for QKD hardware")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a pulsed reflectometer trace of a circuit.
    Otdr(OtdrArgs),
    /// Simulate a swept-laser reflectometer trace of a circuit.
    Ofdr(OfdrArgs),
    /// Information Eve gains from a probe returning MU photons.
    InfoGain(InfoGainArgs),
    /// Photon-number statistics of an attenuated state.
    Stats(StatsArgs),
    /// Audit a scenario's countermeasures.
    Audit(AuditArgs),
    /// Information gain over a grid of probe strengths.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct PathArgs {
    /// Highest reflection order (odd) to enumerate.
    #[arg(long, default_value_t = 3)]
    pub max_order: u32,
    /// Neglect echoes weaker than this, dB.
    #[arg(long, default_value_t = -150.0, allow_negative_numbers = true)]
    pub floor_db: f64,
    /// Peaks must stand this far above their surroundings, dB.
    #[arg(long, default_value_t = 3.0)]
    pub min_prominence_db: f64,
    /// Gaussian noise, in units of the trace floor, seeded from QTA_SEED.
    #[arg(long)]
    pub noise: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OtdrArgs {
    pub circuit: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub pulse_width_m: f64,
    #[command(flatten)]
    pub paths: PathArgs,
    /// Trace CSV; printed to standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OfdrArgs {
    pub circuit: PathBuf,
    #[arg(long, default_value_t = 1e12)]
    pub sweep_rate_hz_per_s: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub duration_s: f64,
    #[arg(long, default_value_t = 4e6)]
    pub sample_rate_hz: f64,
    /// Laser coherence length, meters.
    #[arg(long, default_value_t = 100.0)]
    pub coherence_m: f64,
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    pub lo_reflectance_db: f64,
    #[arg(long, default_value_t = DEFAULT_GROUP_INDEX)]
    pub group_index: f64,
    #[command(flatten)]
    pub paths: PathArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InfoGainArgs {
    /// Mean photon number returned to Eve.
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
    /// Report the bound for a phase-randomized source.
    #[arg(long)]
    pub randomized: bool,
    /// JSON report; printed to standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Coherent input of this mean photon number.
    #[arg(
        long,
        allow_negative_numbers = true,
        conflicts_with = "fock",
        required_unless_present = "fock"
    )]
    pub mu: Option<f64>,
    /// Fock input with exactly this many photons.
    #[arg(long)]
    pub fock: Option<usize>,
    /// Power transmission of the channel.
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    /// Monte Carlo shots to check a Fock input against; seeded from QTA_SEED.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Distribution CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    pub scenario: PathBuf,
    /// Force phase randomization on.
    #[arg(long)]
    pub randomized: bool,
    /// Report JSON; printed to standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep injected probe strength against this scenario instead of the
    /// returned mean photon number.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-4)]
    pub mu_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub mu_max: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Linear instead of logarithmic spacing.
    #[arg(long)]
    pub linear: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Error {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::PathExplosion { .. } => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

/// Parses the process arguments and runs the command.
pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    match execute(&cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qta: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Otdr(a) => cmd_otdr(a, out),
        Command::Ofdr(a) => cmd_ofdr(a, out),
        Command::InfoGain(a) => cmd_info_gain(a, out),
        Command::Stats(a) => cmd_stats(a, out),
        Command::Audit(a) => cmd_audit(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
    }
}

fn seed() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Err(_) => Ok(0),
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("{SEED_ENV} must be an unsigned integer, got {s:?}"))),
    }
}

fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_circuit(path: &Path) -> Result<OpticalCircuit> {
    OpticalCircuit::from_json(&read_input(path)?)
}

fn load_scenario(path: &Path) -> Result<AttackScenario> {
    let text = read_input(path)?;
    AttackScenario::from_json(&text, path.parent().unwrap_or(Path::new(".")))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, contents.as_bytes()),
        None => Ok(out.write_all(contents.as_bytes())?),
    }
}

impl PathArgs {
    fn options(&self) -> PathOptions {
        PathOptions {
            max_order: self.max_order,
            floor_db: self.floor_db,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
        }
    }

    fn trace_noise(&self) -> Result<Option<TraceNoise>> {
        match self.noise {
            None => Ok(None),
            Some(s) if s >= 0.0 && s.is_finite() => Ok(Some(TraceNoise {
                sigma_rel_floor: s,
                seed: seed()?,
            })),
            Some(s) => Err(Error::invalid(format!("noise must be >= 0, got {s}"))),
        }
    }
}

/// Peak table: distance, level and prominence of each detected echo.
pub fn peak_table(peaks: &[Peak]) -> String {
    let mut s = format!("{:>12}  {:>12}  {:>14}\n", "distance_m", "power_db", "prominence_db");
    for p in peaks {
        s.push_str(&format!(
            "{:>12.3}  {:>12.3}  {:>14.3}\n",
            p.distance_m, p.power_db, p.prominence_db
        ));
    }
    s
}

fn finish_trace(trace: &Trace, paths: &PathArgs, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let table = peak_table(&detect_peaks(trace, paths.min_prominence_db));
    emit(out, path, &trace.to_csv())?;
    if path.is_some() {
        out.write_all(table.as_bytes())?;
    } else {
        eprint!("{table}");
    }
    Ok(())
}

fn cmd_otdr(a: &OtdrArgs, out: &mut dyn Write) -> Result<()> {
    let circuit = load_circuit(&a.circuit)?;
    if !(a.pulse_width_m > 0.0 && a.pulse_width_m.is_finite()) {
        return Err(Error::invalid(format!(
            "pulse width must be > 0, got {}",
            a.pulse_width_m
        )));
    }
    let events = circuit.reflection_events(&a.paths.options())?;
    let spans = circuit.rayleigh_spans();
    let mut cfg = OtdrConfig::new(
        a.pulse_width_m,
        SamplingGrid::covering(&events, &spans, a.pulse_width_m),
    );
    cfg.noise = a.paths.trace_noise()?;
    let trace = synthesize_otdr(&events, &spans, &cfg)?;
    finish_trace(&trace, &a.paths, a.out.as_deref(), out)
}

fn cmd_ofdr(a: &OfdrArgs, out: &mut dyn Write) -> Result<()> {
    let circuit = load_circuit(&a.circuit)?;
    let events = circuit.reflection_events(&a.paths.options())?;
    let sweep = SweepSpec {
        sweep_rate_hz_per_s: a.sweep_rate_hz_per_s,
        duration_s: a.duration_s,
        sample_rate_hz: a.sample_rate_hz,
    };
    let mut cfg = OfdrConfig::new(sweep, a.coherence_m, a.lo_reflectance_db);
    cfg.group_index = a.group_index;
    cfg.noise = a.paths.trace_noise()?;
    let trace = synthesize_ofdr(&events, &cfg)?;
    finish_trace(&trace, &a.paths, a.out.as_deref(), out)
}

#[derive(Serialize)]
struct InfoGainReport {
    mu: f64,
    trojan: f64,
    reduced: f64,
    ratio: Option<f64>,
    randomized: bool,
    info_bits: f64,
}

fn cmd_info_gain(a: &InfoGainArgs, out: &mut dyn Write) -> Result<()> {
    let mu = MeanPhotonNumber::new(a.mu)?;
    let (trojan, reduced) = (trojan_info(mu).bits(), reduced_info(mu).bits());
    let report = InfoGainReport {
        mu: mu.get(),
        trojan,
        reduced,
        ratio: randomization_gain_ratio(mu).ok(),
        randomized: a.randomized,
        info_bits: if a.randomized { reduced } else { trojan },
    };
    emit(out, a.out.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))
}

#[derive(Serialize)]
struct StatsSummary {
    input_mean: f64,
    output_mean: f64,
    multi_photon_exact: f64,
    multi_photon_leading: f64,
    tv_to_poisson: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    monte_carlo_tv: Option<f64>,
}

fn cmd_stats(a: &StatsArgs, out: &mut dyn Write) -> Result<()> {
    let t = TransmissionFactor::new(a.t)?;
    let input = match (a.mu, a.fock) {
        (Some(mu), None) => {
            let mu = MeanPhotonNumber::new(mu)?;
            poisson_distribution(mu, poisson_cutoff(mu))?
        }
        (None, Some(n)) => PhotonNumberDistribution::fock(n),
        _ => return Err(Error::invalid("give exactly one of --mu and --fock")),
    };
    let output = attenuate(&input, t);
    let reference = {
        let m = MeanPhotonNumber::new(output.mean())?;
        poisson_distribution(m, poisson_cutoff(m).max(output.n_max()))?
    };
    let mc = match (a.shots, a.fock) {
        (None, _) => None,
        (Some(shots), Some(n)) => Some(monte_carlo_thin(n, t, shots, seed()?)?),
        (Some(_), None) => return Err(Error::invalid("--shots needs a Fock input")),
    };

    let mut csv = String::from(if mc.is_some() {
        "n,input,output,monte_carlo\n"
    } else {
        "n,input,output\n"
    });
    for n in 0..=input.n_max().max(output.n_max()) {
        csv.push_str(&format!("{n},{},{}", sig9(input.prob(n)), sig9(output.prob(n))));
        if let Some(m) = &mc {
            csv.push_str(&format!(",{}", sig9(m.prob(n))));
        }
        csv.push('\n');
    }
    let summary = StatsSummary {
        input_mean: input.mean(),
        output_mean: output.mean(),
        multi_photon_exact: multi_photon_prob_exact(&input, t),
        multi_photon_leading: multi_photon_prob_leading(&input, t),
        tv_to_poisson: tv_distance(&output, &reference),
        monte_carlo_tv: mc.as_ref().map(|m| tv_distance(&output, m)),
    };
    let summary = serde_json::to_string_pretty(&summary)? + "\n";
    match &a.out {
        Some(p) => {
            write_atomic(p, csv.as_bytes())?;
            out.write_all(summary.as_bytes())?;
        }
        None => {
            out.write_all(csv.as_bytes())?;
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn cmd_audit(a: &AuditArgs, out: &mut dyn Write) -> Result<()> {
    let mut scenario = load_scenario(&a.scenario)?;
    if a.randomized {
        scenario.countermeasures.phase_randomization = true;
    }
    let report = run_audit(&scenario)?;
    let json = report.to_json_pretty() + "\n";
    match &a.out {
        Some(p) => {
            write_atomic(p, json.as_bytes())?;
            write!(out, "{report}")?;
        }
        None => out.write_all(json.as_bytes())?,
    }
    Ok(())
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    if !(a.mu_min >= 0.0 && a.mu_max >= a.mu_min && a.mu_max.is_finite()) {
        return Err(Error::invalid(format!(
            "need 0 <= mu_min <= mu_max, got {} and {}",
            a.mu_min, a.mu_max
        )));
    }
    if !a.linear && a.mu_min <= 0.0 {
        return Err(Error::invalid("logarithmic sweep needs mu_min > 0"));
    }
    let grid = if a.linear {
        linear_grid(a.mu_min, a.mu_max, a.points)
    } else {
        log_grid(a.mu_min, a.mu_max, a.points)
    };
    let csv = match &a.scenario {
        Some(p) => pa_budget_csv(&pa_budget_sweep(&load_scenario(p)?, &grid)?),
        None => info_gain_csv(&info_gain_sweep(&grid)?),
    };
    emit(out, a.out.as_deref(), &csv)
}
