use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use distrank::io::LoadOptions;
use distrank::synth::GeneratorSpec;
use distrank::Method;
use distrank_cli::{
    cmd_bench, cmd_curve, cmd_evaluate, cmd_generate, cmd_score, CliError, DataSource,
    FeatureCount, RunConfig,
};

/// Unsupervised filter feature selection for imbalanced multi-class data.
#[derive(Parser)]
#[command(name = "distrank", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score every feature; writes scores.csv and preprocess.csv.
    Score(RunArgs),
    /// Normalized score curve and its elbow; writes curve.csv.
    Curve(RunArgs),
    /// Select features, cluster, and evaluate; writes evaluation.csv.
    Evaluate(RunArgs),
    /// Select on subsamples, evaluate on all data; writes bench.csv.
    Bench(RunArgs),
    /// Write a synthetic dataset to data.csv.
    Generate(GenerateArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "classes"])))]
struct SourceArgs {
    /// Delimited text file with one observation per row.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Column holding integer class labels; excluded from the features.
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    /// The first row is data, not column names.
    #[arg(long)]
    no_header: bool,

    #[command(flatten)]
    generator: GeneratorArgs,
}

#[derive(Args)]
struct GeneratorArgs {
    /// Generate data instead of reading it: comma-separated class sizes,
    /// the major class first.
    #[arg(long, value_delimiter = ',')]
    classes: Option<Vec<usize>>,
    /// Number of informative features.
    #[arg(long, default_value_t = 5)]
    informative: usize,
    /// Class separation on informative features, in standard deviations.
    #[arg(long, default_value_t = 10.0)]
    separation: f64,
    #[arg(long, default_value_t = 0.02)]
    informative_sigma: f64,
    /// Number of class-independent noise features.
    #[arg(long, default_value_t = 45)]
    noise: usize,
    #[arg(long, default_value_t = 0.3)]
    noise_sigma: f64,
    /// Require equal class sizes.
    #[arg(long)]
    balanced: bool,
    /// Generator seed; defaults to --seed.
    #[arg(long)]
    data_seed: Option<u64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = Method::DistanceRank)]
    method: Method,
    /// Features to keep: a count or `elbow`.
    #[arg(long, default_value_t = FeatureCount::Elbow)]
    q: FeatureCount,
    /// Number of clusters; defaults to the number of true classes.
    #[arg(long)]
    k: Option<usize>,
    /// Clustering repeats, with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long, default_value_t = 0.95)]
    corr_threshold: f64,
    /// Neighbors in the kNN graph of the Laplacian and Compactness scores.
    #[arg(long, default_value_t = 5)]
    knn_k: usize,
    /// Subsample fractions for bench, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "1.0,0.5,0.3")]
    fraction: Vec<f64>,
    /// Subsample draws per fraction for bench.
    #[arg(long, default_value_t = 5)]
    draws: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    generator: GeneratorArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    threads: Option<usize>,
}

fn generator_source(g: &GeneratorArgs, sizes: Vec<usize>, seed: u64) -> DataSource {
    let spec = GeneratorSpec::planted(
        sizes,
        g.informative,
        g.separation,
        g.informative_sigma,
        g.noise,
        g.noise_sigma,
        g.data_seed.unwrap_or(seed),
    );
    DataSource::Generated {
        spec,
        balanced: g.balanced,
    }
}

fn data_source(s: &SourceArgs, seed: u64) -> Result<DataSource, CliError> {
    if let Some(sizes) = &s.generator.classes {
        return Ok(generator_source(&s.generator, sizes.clone(), seed));
    }
    let path = s.input.clone().expect("clap enforces one source");
    if !s.delimiter.is_ascii() {
        return Err(CliError::Usage(format!("--delimiter `{}` is not a single byte", s.delimiter)));
    }
    Ok(DataSource::File {
        path,
        options: LoadOptions {
            delimiter: s.delimiter as u8,
            has_header: !s.no_header,
            label_column: s.label_column.clone(),
        },
    })
}

fn run_config(a: &RunArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::new(data_source(&a.source, a.common.seed)?, &a.common.out);
    cfg.method = a.method;
    cfg.q = a.q;
    cfg.k = a.k;
    cfg.repeats = a.repeats;
    cfg.corr_threshold = a.corr_threshold;
    cfg.knn_k = a.knn_k;
    cfg.fractions = a.fraction.clone();
    cfg.draws = a.draws;
    cfg.seed = a.common.seed;
    Ok(cfg)
}

fn init_threads(common: &CommonArgs) -> Result<(), CliError> {
    match common.threads {
        None => Ok(()),
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string())),
    }
}

fn report(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(a) => {
            init_threads(&a.common)?;
            let Some(sizes) = a.generator.classes.clone() else {
                return Err(CliError::Usage("generate needs --classes".into()));
            };
            let source = generator_source(&a.generator, sizes, a.common.seed);
            let mut cfg = RunConfig::new(source, &a.common.out);
            cfg.seed = a.common.seed;
            report(&cmd_generate(&cfg)?.files);
        }
        Command::Score(a) => {
            init_threads(&a.common)?;
            let out = cmd_score(&run_config(&a)?)?;
            report(&out.files);
        }
        Command::Curve(a) => {
            init_threads(&a.common)?;
            let out = cmd_curve(&run_config(&a)?)?;
            match out.elbow {
                Some(e) => println!("elbow at {} features", e.count),
                None => println!("no elbow"),
            }
            report(&out.files);
        }
        Command::Evaluate(a) => {
            init_threads(&a.common)?;
            let out = cmd_evaluate(&run_config(&a)?)?;
            println!("selected {} features", out.selected.len());
            report(&out.files);
        }
        Command::Bench(a) => {
            init_threads(&a.common)?;
            report(&cmd_bench(&run_config(&a)?)?.files);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
