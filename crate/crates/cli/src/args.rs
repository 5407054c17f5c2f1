use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "jndbem", version, about = "JND-based edge map evaluation toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score a candidate edge map against ground truth.
    Evaluate(EvaluateArgs),
    /// Run detectors on an image and score every map with every measure.
    Bench(BenchArgs),
    /// Write a forced-choice trial schedule.
    Stimuli(StimuliArgs),
    /// Estimate the JND from a schedule and a response log.
    JndAnalyze(JndAnalyzeArgs),
    /// Render a synthetic scene and its ground truth.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum MeasureName {
    Jndbem,
    Fom,
}

impl MeasureName {
    pub fn as_str(self) -> &'static str {
        match self {
            MeasureName::Jndbem => "jndbem",
            MeasureName::Fom => "fom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum DetectorName {
    Sobel,
    Prewitt,
    Log,
    Canny,
}

impl From<DetectorName> for jndbem::detectors::DetectorKind {
    fn from(d: DetectorName) -> Self {
        use jndbem::detectors::DetectorKind as K;
        match d {
            DetectorName::Sobel => K::Sobel,
            DetectorName::Prewitt => K::Prewitt,
            DetectorName::Log => K::Log,
            DetectorName::Canny => K::Canny,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct MeasureOpts {
    /// Distance penalty.
    #[arg(long, default_value_t = jndbem::measures::DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Displacements below this many pixels are not penalised.
    #[arg(long, default_value_t = jndbem::matching::DEFAULT_JND)]
    pub jnd: f64,
    /// Matching search radius in pixels.
    #[arg(long, default_value_t = jndbem::matching::DEFAULT_MAX_DEPTH)]
    pub max_depth: f64,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub gt: PathBuf,
    #[arg(long)]
    pub candidate: PathBuf,
    #[arg(long, value_enum, default_value = "jndbem")]
    pub measure: MeasureName,
    #[command(flatten)]
    pub params: MeasureOpts,
    /// Human-readable output instead of JSON.
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Grayscale input image. With --gt omitted as well, the built-in scene is used.
    #[arg(long, requires = "gt")]
    pub image: Option<PathBuf>,
    #[arg(long, requires = "image")]
    pub gt: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "sobel,prewitt,log,canny")]
    pub detectors: Vec<DetectorName>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "jndbem,fom")]
    pub measures: Vec<MeasureName>,
    /// CSV with header `id,rating`; ids name detectors.
    #[arg(long)]
    pub mos: Option<PathBuf>,
    /// JSON block with per-detector overrides and measure parameters.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub params: MeasureOpts,
    /// Also write the score table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Clone, Args)]
pub struct StimuliArgs {
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials_per_condition: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct JndAnalyzeArgs {
    #[arg(long)]
    pub schedule: PathBuf,
    /// JSONL response log (a leading `{"meta":...}` line is skipped).
    #[arg(long)]
    pub responses: PathBuf,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Scene JSON; the built-in scene when omitted.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Seed for seeded degradations given with --degrade.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Degradation JSON (e.g. `{"kind":"jitter","max_r":1,"seed":0}`), applied
    /// in order to the ground truth to produce `candidate.pgm`.
    #[arg(long)]
    pub degrade: Vec<String>,
    #[arg(long)]
    pub out_dir: PathBuf,
}
