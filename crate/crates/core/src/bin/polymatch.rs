use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polymatch::decoder::{RngKind, Scheme};
use polymatch::graph::{parse_syndromes, scale_for_precision, write_syndromes, DistanceTable};
use polymatch::heuristic::{variable_precision_decode_paths, HeuristicConfig, TrialCount, TrialSet};
use polymatch::parallel;
use polymatch::sim::{
    build_surface_detector_graph, derive_seed, oracle_check, precision_sweep, required_wth_survey, sample_shot,
    threshold_sweep_on, NoiseModel, PrecisionSweepConfig, RequiredWthRow, ThresholdSweepConfig, PATH_GRAPH_CAP,
};
use polymatch::{DecodeOutcome, DetectorGraph, Error, PathGraph, Result, WeightFunction};

/// Determinant-based minimum-weight perfect matching over truncated GF(2)
/// polynomial rings. POLYMATCH_THREADS caps the number of worker threads.
#[derive(Parser)]
#[command(name = "polymatch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode every shot of a syndrome file.
    Decode(DecodeArgs),
    /// Write the detector graph of a rotated surface-code memory experiment.
    GenGraph(GenGraphArgs),
    /// Mismatch rate of integer-weight matching against real weights.
    SweepPrecision(PrecisionArgs),
    /// Failure rate of multi-trial decoding over widths and trial counts.
    SweepThreshold(ThresholdArgs),
    /// Cross-check the decoder against exhaustive and integer oracles.
    OracleCheck(OracleArgs),
    /// Largest required bit length per path-graph order.
    RequiredWth(RequiredArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Plain,
    Amplified,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Plain => Scheme::Plain,
            SchemeArg::Amplified => Scheme::Amplified,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RngArg {
    Xoshiro,
    Mt,
}

impl From<RngArg> for RngKind {
    fn from(r: RngArg) -> Self {
        match r {
            RngArg::Xoshiro => RngKind::Xoshiro,
            RngArg::Mt => RngKind::MersenneTwister,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Random seed; drawn at random and reported on stderr when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ModelArgs {
    /// Code distance (odd, at least 3).
    #[arg(long, default_value_t = 5)]
    d: usize,
    /// Syndrome rounds; defaults to the distance.
    #[arg(long)]
    rounds: Option<usize>,
    /// Physical error rate.
    #[arg(long, default_value_t = 1e-3)]
    p: f64,
}

impl ModelArgs {
    fn model(&self) -> Result<NoiseModel> {
        NoiseModel::with_rounds(self.d, self.rounds.unwrap_or(self.d), self.p)
    }

    /// The generated graph, or the one in `file`.
    fn graph(&self, file: Option<&Path>) -> Result<DetectorGraph> {
        match file {
            Some(path) => DetectorGraph::parse(&read(path)?),
            None => build_surface_detector_graph(&self.model()?),
        }
    }
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    syndromes: PathBuf,
    #[arg(long = "w-th", default_value_t = 512)]
    w_th: usize,
    #[arg(long, value_enum, default_value = "plain")]
    scheme: SchemeArg,
    /// Perturbation trials; defaults to 8·W_max (plain) or 1 (amplified).
    #[arg(long)]
    trials: Option<usize>,
    /// Perturbation range; defaults to ⌈0.8 n^0.8⌉ per path graph.
    #[arg(long = "w-max")]
    w_max: Option<u64>,
    #[arg(long = "b-low", default_value_t = 4)]
    b_low: u32,
    #[arg(long = "b-high", default_value_t = 8)]
    b_high: u32,
    #[arg(long, value_enum, default_value = "xoshiro")]
    rng: RngArg,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct GenGraphArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Also sample this many shots into `--syndromes-out`.
    #[arg(long, default_value_t = 0)]
    shots: u64,
    #[arg(long = "syndromes-out")]
    syndromes_out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct PrecisionArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Use this detector graph instead of generating one.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long = "b-min", default_value_t = 2)]
    b_min: u32,
    #[arg(long = "b-max", default_value_t = 12)]
    b_max: u32,
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long = "w-th-list", value_delimiter = ',', default_value = "128,256,384,512")]
    w_th_list: Vec<usize>,
    #[arg(long = "k-multipliers", value_delimiter = ',', default_value = "1,2,4,8")]
    k_multipliers: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[arg(long = "b-low", default_value_t = 4)]
    b_low: u32,
    #[arg(long = "b-high", default_value_t = 8)]
    b_high: u32,
    #[arg(long = "w-max")]
    w_max: Option<u64>,
    #[arg(long, value_enum, default_value = "xoshiro")]
    rng: RngArg,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long = "n-max", default_value_t = 12)]
    n_max: usize,
    #[arg(long, default_value_t = 2000)]
    cases: u64,
    #[arg(long = "max-weight", default_value_t = 256)]
    max_weight: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct RequiredArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[arg(long = "b-low", default_value_t = 4)]
    b_low: u32,
    #[arg(long = "b-high", default_value_t = 8)]
    b_high: u32,
    /// Largest path-graph order surveyed.
    #[arg(long, default_value_t = PATH_GRAPH_CAP)]
    cap: usize,
    #[command(flatten)]
    common: Common,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

impl Common {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or_else(|| {
            let s = rand::random::<u32>() as u64;
            eprintln!("seed {s}");
            s
        })
    }
}

fn record(id: usize, pg: &PathGraph, out: &DecodeOutcome) -> String {
    let int = |x: Option<u64>| x.map_or("-1".to_string(), |v| v.to_string());
    let mut s = format!(
        "shot {id} status {} wstar {} weight {} edges",
        out.status.label(),
        int(out.w_star),
        int(out.weight)
    );
    for &(u, v) in &out.matching {
        write!(s, " {}:{}", pg.vertices()[u], pg.vertices()[v]).unwrap();
    }
    s
}

fn table(g: &DetectorGraph, bits: u32) -> Result<DistanceTable<u64>> {
    let wf = WeightFunction::discretize(g, scale_for_precision(g, bits)?)?;
    Ok(DistanceTable::from_weights(g, &wf))
}

fn run_decode(a: &DecodeArgs) -> Result<()> {
    let g = DetectorGraph::parse(&read(&a.graph)?)?;
    let shots = parse_syndromes(&read(&a.syndromes)?)?;
    let seed = a.common.seed();
    let scheme = Scheme::from(a.scheme);
    let cfg = HeuristicConfig {
        w_th: a.w_th,
        trials: a.trials.map_or(TrialCount::PerWMax(8), TrialCount::Fixed),
        w_max: a.w_max,
        b_low: a.b_low,
        b_high: a.b_high,
        base_seed: 0,
        rng: a.rng.into(),
        early_exit: false,
    };
    cfg.validate()?;
    let high = table(&g, a.b_high)?;
    let low = match scheme {
        Scheme::Plain => Some(table(&g, a.b_low)?),
        Scheme::Amplified => None,
    };
    let lines = parallel::map_range(shots.len(), |i| -> Result<String> {
        let pg_high = high.path_graph(&shots[i])?;
        let trial_seed = derive_seed(seed, 1, i as u64);
        let out = match &low {
            Some(low) => {
                let pg_low = low.path_graph(&shots[i])?;
                let cfg = HeuristicConfig {
                    base_seed: trial_seed,
                    ..cfg.clone()
                };
                variable_precision_decode_paths(&pg_low, &pg_high, &cfg)?
            }
            None => {
                let w_max = cfg.w_max_for(pg_high.order());
                let k = a.trials.unwrap_or(1);
                TrialSet::run(&pg_high, scheme, w_max, k, a.w_th, trial_seed, cfg.rng)?
                    .select(&pg_high, &pg_high, a.w_th, k)?
            }
        };
        Ok(record(i, &pg_high, &out))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut text = lines.join("\n");
    if !text.is_empty() {
        text.push('\n');
    }
    write(a.common.out.as_deref(), &text)
}

fn run_gen_graph(a: &GenGraphArgs) -> Result<()> {
    let g = a.model.graph(None)?;
    write(a.common.out.as_deref(), &g.to_text())?;
    if a.shots > 0 || a.syndromes_out.is_some() {
        let path = a
            .syndromes_out
            .as_deref()
            .ok_or_else(|| Error::Config("--shots needs --syndromes-out".into()))?;
        let seed = a.common.seed();
        let shots: Vec<Vec<usize>> = (0..a.shots)
            .map(|i| sample_shot(&g, derive_seed(seed, 0, i)).active)
            .collect();
        write(Some(path), &write_syndromes(&shots))?;
    }
    Ok(())
}

fn run_precision(a: &PrecisionArgs) -> Result<()> {
    if a.b_min == 0 || a.b_min > a.b_max {
        return Err(Error::Config("need 1 ≤ b-min ≤ b-max".into()));
    }
    let g = a.model.graph(a.graph.as_deref())?;
    let cfg = PrecisionSweepConfig {
        b_values: (a.b_min..=a.b_max).collect(),
        shots: a.shots,
        seed: a.common.seed(),
    };
    write(a.common.out.as_deref(), &precision_sweep(&g, &cfg)?.to_csv())
}

fn run_threshold(a: &ThresholdArgs) -> Result<()> {
    let g = a.model.graph(a.graph.as_deref())?;
    let cfg = ThresholdSweepConfig {
        w_th_list: a.w_th_list.clone(),
        k_multipliers: a.k_multipliers.clone(),
        shots: a.shots,
        seed: a.common.seed(),
        b_low: a.b_low,
        b_high: a.b_high,
        w_max: a.w_max,
        rng: a.rng.into(),
    };
    write(a.common.out.as_deref(), &threshold_sweep_on(&g, &cfg)?.to_csv())
}

fn run_oracle(a: &OracleArgs) -> Result<bool> {
    let report = oracle_check(a.n_max, a.cases, a.max_weight, a.common.seed())?;
    write(a.common.out.as_deref(), &report.to_csv())?;
    let failures = report.failures();
    if failures > 0 {
        eprintln!("{failures} disagreeing cases");
    }
    Ok(failures == 0)
}

fn run_required(a: &RequiredArgs) -> Result<()> {
    let rows = required_wth_survey(&a.model.model()?, a.shots, a.common.seed(), a.b_low, a.b_high, a.cap)?;
    write(a.common.out.as_deref(), &RequiredWthRow::to_csv(&rows))
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Decode(a) => run_decode(a).map(|_| true),
        Command::GenGraph(a) => run_gen_graph(a).map(|_| true),
        Command::SweepPrecision(a) => run_precision(a).map(|_| true),
        Command::SweepThreshold(a) => run_threshold(a).map(|_| true),
        Command::OracleCheck(a) => run_oracle(a),
        Command::RequiredWth(a) => run_required(a).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match parallel::with_threads(parallel::threads_from_env(), || run(&cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
