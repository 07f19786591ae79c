use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

mod commands;
mod config;

/// Thermal two-spin NMR states: coherence, mixedness, singlet witness,
/// spectra and population reconstruction.
///
/// Frequencies and temperatures are in units of the coupling J
/// (--omega-sigma is ω_Σ/J, --tau is k_B·T/J). Set TWOSPIN_THREADS to
/// override the worker count.
#[derive(Debug, Parser)]
#[command(name = "twospin", version, about, long_about)]
struct Cli {
    /// TOML file with one table per subcommand ([point], [sweep], ...);
    /// keys match the long flags and flags win on conflict.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Emit JSON instead of text (point, validate).
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one parameter point: Z, populations, ρ, R, M, witness.
    Point(PointArgs),
    /// Sweep one parameter and write CSV.
    ///
    /// Columns: tau, omega_sigma, omega_delta, then
    ///   coherence: coherence;
    ///   mixedness: mixedness, mixedness_closed_form, purity;
    ///   witness:   witness, fidelity, cxx, cyy, czz, energy_form, verdict, ppt_verdict.
    Sweep(SweepArgs),
    /// Witness phase diagram over (τ, ω_δ/J) for a field ratio r = ω₁/ω₂.
    ///
    /// Writes PREFIX_grid.csv (tau, omega_delta, omega_sigma, witness,
    /// verdict, ppt_verdict), PREFIX_boundary.csv (omega_delta, tau, witness)
    /// and PREFIX.json.
    PhaseDiagram(PhaseArgs),
    /// Low, crossing and high-field spectra at τ for each mixing angle.
    ///
    /// Writes DIR/theta_<deg>_<scenario>.csv (frequency, intensity) and a
    /// .json sidecar with the four lines (levels, frequency, amplitude).
    Spectra(SpectraArgs),
    /// Reconstruct populations from a CSV of p1z, p2z, p1z2z, theta_deg.
    ///
    /// Output columns: line, p1z, p2z, p1z2z, theta_deg, p1..p4,
    /// mixedness_observables, mixedness_populations, mixedness_difference,
    /// condition_number, status (ok | homonuclear_degeneracy |
    /// inconsistent_observables).
    Reconstruct(ReconstructArgs),
    /// Run the built-in consistency checks; exits 1 if any fails.
    Validate,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct PointArgs {
    /// k_B·T/J (> 0).
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// ω_Σ/J [default: 1].
    #[arg(long, allow_negative_numbers = true)]
    pub omega_sigma: Option<f64>,
    /// ω_δ/J [default: 0].
    #[arg(long, allow_negative_numbers = true)]
    pub omega_delta: Option<f64>,
    /// Coupling in the frequency unit (> 0) [default: 1].
    #[arg(long, allow_negative_numbers = true)]
    pub j: Option<f64>,
    /// Level splitting, in units of J, below which E₃ and E₄ count as
    /// crossed for the τ → 0 ground state [default: 1e-9].
    #[arg(long)]
    pub degeneracy_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantityArg {
    Coherence,
    Mixedness,
    Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisArg {
    Tau,
    OmegaSigma,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub quantity: Option<QuantityArg>,
    #[arg(long, value_enum)]
    pub axis: Option<AxisArg>,
    /// First grid value [default: 0.05 for tau, 0 for omega-sigma].
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,
    /// Last grid value [default: 5 for tau, 6 for omega-sigma].
    #[arg(long, allow_negative_numbers = true)]
    pub stop: Option<f64>,
    /// Grid points, ≥ 2 [default: 201].
    #[arg(long)]
    pub points: Option<usize>,
    /// Fixed τ when sweeping omega-sigma [default: 0.5].
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// Fixed ω_Σ/J when sweeping tau [default: 1].
    #[arg(long, allow_negative_numbers = true)]
    pub omega_sigma: Option<f64>,
    /// ω_δ/J [default: 0].
    #[arg(long, allow_negative_numbers = true)]
    pub omega_delta: Option<f64>,
    /// CSV destination (a .json sidecar is written next to it) [default: stdout].
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct PhaseArgs {
    /// Field ratio ω₁/ω₂ [default: -1].
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// [default: 0.02]
    #[arg(long)]
    pub tau_min: Option<f64>,
    /// [default: 3]
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// [default: 150]
    #[arg(long)]
    pub tau_points: Option<usize>,
    /// [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub omega_delta_min: Option<f64>,
    /// [default: 5]
    #[arg(long, allow_negative_numbers = true)]
    pub omega_delta_max: Option<f64>,
    /// [default: 101]
    #[arg(long)]
    pub omega_delta_points: Option<usize>,
    /// Output path prefix [default: phase].
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SpectraArgs {
    /// Mixing angles in degrees, comma separated, each in (0, 45] [default: 45,30,10].
    #[arg(long, value_delimiter = ',')]
    pub theta: Option<Vec<f64>>,
    /// Flip angle in degrees, [0, 90] [default: 5].
    #[arg(long, allow_negative_numbers = true)]
    pub flip_angle: Option<f64>,
    /// Lorentzian half width at half maximum, units of J [default: 0.02].
    #[arg(long)]
    pub linewidth: Option<f64>,
    /// Samples per trace [default: 2000].
    #[arg(long)]
    pub points: Option<usize>,
    /// [default: 0.01]
    #[arg(long)]
    pub tau: Option<f64>,
    /// [default: spectra]
    #[arg(long, short)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ReconstructArgs {
    /// CSV with header p1z,p2z,p1z2z,theta_deg.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// [default: stdout]
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Slack on observable ranges and reconstructed populations [default: 1e-9].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Minimum |cos 2θ| [default: 1e-6].
    #[arg(long)]
    pub epsilon_theta: Option<f64>,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad parameters or input; exit 2.
    Invalid(String),
    /// Runtime failure; exit 1.
    Failed(String),
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    pub fn failed(msg: impl Into<String>) -> Self {
        CliError::Failed(msg.into())
    }
}

impl From<twospin::Error> for CliError {
    fn from(e: twospin::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("TWOSPIN_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::invalid(format!("TWOSPIN_THREADS must be a positive integer (got {raw:?})")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::failed(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    configure_threads()?;
    let cfg = cli.config.as_deref().map(config::load).transpose()?;
    let cfg = cfg.as_ref();
    match cli.command {
        Command::Point(a) => commands::point(&config::overlay(&a, cfg, "point")?, cli.json),
        Command::Sweep(a) => commands::sweep(&config::overlay(&a, cfg, "sweep")?),
        Command::PhaseDiagram(a) => commands::phase_diagram(&config::overlay(&a, cfg, "phase-diagram")?),
        Command::Spectra(a) => commands::spectra(&config::overlay(&a, cfg, "spectra")?),
        Command::Reconstruct(a) => commands::reconstruct(&config::overlay(&a, cfg, "reconstruct")?),
        Command::Validate => commands::validate(cli.json),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
