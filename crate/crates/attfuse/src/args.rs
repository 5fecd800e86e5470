//! Command-line surface.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use attitude_fusion::filters::FilterKind;

#[derive(Parser)]
#[command(
    name = "attfuse",
    version,
    about = "Attitude-estimation benchmark harness: synthesize IMU datasets, run and compare filters, sweep gains, tabulate frequency responses and time the estimators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Run filters over a dataset; write estimate tracks and RMSE reports
    Run(RunArgs),
    /// Average-RMSE table over a (kp, ki, alpha) grid for NCF/CCF
    Sweep(SweepArgs),
    /// Frequency-response table of one filter's high/low-pass pair
    Bode(BodeArgs),
    /// Generate a synthetic dataset with reference attitude columns
    Synth(SynthArgs),
    /// Wall-clock timing of filters over one dataset
    Bench(BenchArgs),
}

/// Comma-separated filter list; `all` is every fusion filter.
#[derive(Debug, Clone)]
pub struct FilterList(pub Vec<FilterKind>);

impl FromStr for FilterList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(FilterList(FilterKind::FUSION.to_vec()));
        }
        let kinds = s
            .split(',')
            .map(|name| name.trim().parse::<FilterKind>().map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        if kinds.is_empty() {
            return Err("no filters given".into());
        }
        Ok(FilterList(kinds))
    }
}

/// Comma-separated float list (clap treats a bare `Vec<f64>` field as a
/// multi-occurrence argument, so lists get a newtype).
#[derive(Debug, Clone)]
pub struct F64List(pub Vec<f64>);

impl FromStr for F64List {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| format!("'{v}': {e}")))
            .collect::<Result<Vec<f64>, String>>()
            .map(F64List)
    }
}

#[derive(Args)]
pub struct RunArgs {
    /// Input dataset CSV
    #[arg(long)]
    pub dataset: PathBuf,
    /// Filters to run (comma-separated, or `all`)
    #[arg(long, default_value = "ccf")]
    pub filter: FilterList,
    /// Blend weight; one value or three per-axis values
    #[arg(long, default_value = "0.7")]
    pub alpha: F64List,
    /// Proportional gain; one value or three per-axis values
    #[arg(long, default_value = "25")]
    pub kp: F64List,
    /// Integral gain; one value or three per-axis values
    #[arg(long, default_value = "0.1")]
    pub ki: F64List,
    /// Windowed-RMSE window length in seconds
    #[arg(long, default_value_t = 100.0)]
    pub window: f64,
    /// Output directory
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Also write an SVG plot of the windowed RMSE per filter
    #[arg(long)]
    pub svg: bool,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Input dataset CSV (reference columns required)
    #[arg(long)]
    pub dataset: PathBuf,
    /// Filters to sweep (ncf, ccf or both)
    #[arg(long, default_value = "ncf,ccf")]
    pub filter: FilterList,
    /// Proportional-gain grid values
    #[arg(long, default_value = "75,25,1,0.1")]
    pub kp: F64List,
    /// Integral-gain grid values
    #[arg(long, default_value = "0.01,0.1,1")]
    pub ki: F64List,
    /// Blend-weight grid values (a single 0.7 reproduces the gain table;
    /// 0.1..0.9 at fixed gains reproduces the alpha sweep)
    #[arg(long, default_value = "0.7")]
    pub alpha: F64List,
    /// Output CSV file
    #[arg(long, default_value = "sweep.csv")]
    pub out: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BodeFilter {
    Lcf,
    Ncf,
    Ccf,
}

impl BodeFilter {
    pub fn name(self) -> &'static str {
        match self {
            BodeFilter::Lcf => "lcf",
            BodeFilter::Ncf => "ncf",
            BodeFilter::Ccf => "ccf",
        }
    }
}

#[derive(Args)]
pub struct BodeArgs {
    /// Which filter's transfer-function pair to evaluate
    #[arg(long, value_enum)]
    pub filter: BodeFilter,
    /// LCF time constant in seconds
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// CCF blend weight
    #[arg(long, default_value_t = 0.7)]
    pub alpha: f64,
    /// Proportional gain
    #[arg(long, default_value_t = 25.0)]
    pub kp: f64,
    /// Integral gain
    #[arg(long, default_value_t = 0.1)]
    pub ki: f64,
    /// Lowest frequency (rad/s)
    #[arg(long, default_value_t = 1e-3)]
    pub wmin: f64,
    /// Highest frequency (rad/s)
    #[arg(long, default_value_t = 1e3)]
    pub wmax: f64,
    /// Number of log-spaced grid points
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Output CSV file
    #[arg(long, default_value = "bode.csv")]
    pub out: PathBuf,
    /// Also write an SVG magnitude/phase plot
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MotionKind {
    /// Constant level attitude
    Static,
    /// Independent sinusoids per axis
    Sine,
    /// Smooth random waypoints
    Random,
}

#[derive(Args)]
pub struct SynthArgs {
    /// Output dataset CSV
    #[arg(long)]
    pub out: PathBuf,
    /// Seed for motion and sensor noise
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Sample rate in Hz
    #[arg(long, default_value_t = 100.0)]
    pub rate: f64,
    /// Duration in seconds
    #[arg(long, default_value_t = 600.0)]
    pub duration: f64,
    /// True motion profile
    #[arg(long, value_enum, default_value_t = MotionKind::Sine)]
    pub motion: MotionKind,
    /// Initial gyro bias in rad/s; one value or three per-axis values
    #[arg(long, default_value = "0")]
    pub gyro_bias: F64List,
    /// Gyro bias random-walk intensity in rad/s/sqrt(s)
    #[arg(long, default_value_t = 0.0)]
    pub bias_walk: f64,
    /// White gyro noise in rad/s
    #[arg(long, default_value_t = 0.005)]
    pub gyro_noise: f64,
    /// White accelerometer noise
    #[arg(long, default_value_t = 0.05)]
    pub accel_noise: f64,
    /// White magnetometer noise
    #[arg(long, default_value_t = 0.005)]
    pub mag_noise: f64,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Input dataset CSV
    #[arg(long)]
    pub dataset: PathBuf,
    /// Filters to time (comma-separated, or `all`)
    #[arg(long, default_value = "all")]
    pub filter: FilterList,
    /// Repetitions per filter
    #[arg(long, default_value_t = 20)]
    pub reps: usize,
    /// Output CSV file
    #[arg(long, default_value = "bench.csv")]
    pub out: PathBuf,
}
