use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use distrank::eval::{evaluate_pipeline, EvaluationReport, KMeansOptions, MeanStd, Metric, PipelineOptions};
use distrank::io::{load_matrix, write_matrix};
use distrank::preprocess::{minmax_scale, prepare, PreprocessReport};
use distrank::scores::score;
use distrank::select::{elbow_point, score_curve, select_top, Elbow, ScoreCurve};
use distrank::stats::mean;
use distrank::synth::{generate_balanced, generate_imbalanced};
use distrank::{DataMatrix, Error, FeatureScoreReport, LabelVector, Method};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{CliError, DataSource, FeatureCount, RunConfig};

type Result<T> = std::result::Result<T, CliError>;

pub struct Loaded {
    pub matrix: DataMatrix,
    pub labels: Option<LabelVector>,
}

pub fn load(source: &DataSource) -> Result<Loaded> {
    let (matrix, labels) = match source {
        DataSource::File { path, options } => load_matrix(path, options)?,
        DataSource::Generated { spec, balanced } => {
            let (m, l) = if *balanced {
                generate_balanced(spec)?
            } else {
                generate_imbalanced(spec)?
            };
            (m, Some(l))
        }
    };
    Ok(Loaded { matrix, labels })
}

fn warn(message: impl std::fmt::Display) {
    eprintln!("warning: {message}");
}

fn create(cfg: &RunConfig, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    let write_err = |path: &Path| {
        let path = path.to_owned();
        move |source| CliError::Write { path, source }
    };
    fs::create_dir_all(&cfg.out_dir).map_err(write_err(&cfg.out_dir))?;
    let path = cfg.out_dir.join(name);
    let file = File::create(&path).map_err(write_err(&path))?;
    Ok((path, BufWriter::new(file)))
}

fn finish(path: &Path, mut w: BufWriter<File>) -> Result<PathBuf> {
    w.flush().map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })?;
    Ok(path.to_owned())
}

fn scored(cfg: &RunConfig, raw: &DataMatrix) -> Result<(DataMatrix, PreprocessReport, FeatureScoreReport)> {
    let (m, prep) = prepare(raw, cfg.corr_threshold)?;
    let report = score(cfg.method, &m, cfg.knn_k)?;
    for w in &report.warnings {
        warn(format_args!("{}: {}", w.feature, w.message));
    }
    Ok((m, prep, report))
}

fn select(cfg: &RunConfig, report: &FeatureScoreReport) -> Result<Vec<String>> {
    let q = match cfg.q {
        FeatureCount::Top(q) => q,
        FeatureCount::Elbow => {
            let elbow = elbow_point(&score_curve(report)?)?;
            if elbow.low_confidence {
                warn("score curve is nearly linear; elbow is low confidence");
            }
            elbow.count
        }
    };
    Ok(select_top(report, q)?)
}

fn labels_of(loaded: &Loaded) -> Result<&LabelVector> {
    loaded.labels.as_ref().ok_or_else(|| {
        CliError::Usage("evaluation needs true labels: pass --label-column or use the generator".into())
    })
}

fn pipeline_options(cfg: &RunConfig, labels: &LabelVector) -> PipelineOptions {
    PipelineOptions {
        k: cfg.k.unwrap_or(labels.k()),
        repeats: cfg.repeats,
        base_seed: cfg.seed,
        kmeans: KMeansOptions::default(),
    }
}

#[derive(Debug)]
pub struct ScoreOutput {
    pub preprocess: PreprocessReport,
    pub scores: FeatureScoreReport,
    pub files: Vec<PathBuf>,
}

/// Writes `scores.csv` (features in relevance order) and
/// `preprocess.csv`.
pub fn cmd_score(cfg: &RunConfig) -> Result<ScoreOutput> {
    cfg.validate()?;
    let loaded = load(&cfg.source)?;
    let (_, preprocess, scores) = scored(cfg, &loaded.matrix)?;
    let (p1, mut w) = create(cfg, "scores.csv")?;
    scores.write_delimited(&mut w)?;
    let p1 = finish(&p1, w)?;
    let (p2, mut w) = create(cfg, "preprocess.csv")?;
    preprocess.write_delimited(&mut w)?;
    let p2 = finish(&p2, w)?;
    Ok(ScoreOutput {
        preprocess,
        scores,
        files: vec![p1, p2],
    })
}

#[derive(Debug)]
pub struct CurveOutput {
    pub curve: ScoreCurve,
    pub elbow: Option<Elbow>,
    pub files: Vec<PathBuf>,
}

/// Writes `curve.csv`: the normalized score curve followed by an
/// `elbow,<count>` row, or `elbow,none` when the curve has no elbow.
pub fn cmd_curve(cfg: &RunConfig) -> Result<CurveOutput> {
    cfg.validate()?;
    let loaded = load(&cfg.source)?;
    let (_, _, report) = scored(cfg, &loaded.matrix)?;
    let curve = score_curve(&report)?;
    let elbow = match elbow_point(&curve) {
        Ok(e) => {
            if e.low_confidence {
                warn("score curve is nearly linear; elbow is low confidence");
            }
            Some(e)
        }
        Err(Error::NoElbow) => {
            warn("all scores are equal; no elbow");
            None
        }
        Err(Error::OutOfRange { .. }) => {
            warn("too few features for an elbow");
            None
        }
        Err(e) => return Err(e.into()),
    };
    let (path, mut w) = create(cfg, "curve.csv")?;
    curve.write_delimited(&mut w)?;
    let line = match elbow {
        Some(e) => format!("elbow,{}", e.count),
        None => "elbow,none".to_string(),
    };
    writeln!(w, "{line}").map_err(|source| CliError::Write {
        path: path.clone(),
        source,
    })?;
    let path = finish(&path, w)?;
    Ok(CurveOutput {
        curve,
        elbow,
        files: vec![path],
    })
}

#[derive(Debug)]
pub struct EvaluateOutput {
    pub selected: Vec<String>,
    pub report: EvaluationReport,
    pub files: Vec<PathBuf>,
}

/// Writes `selected.csv` and `evaluation.csv` with the mean and standard
/// deviation of every metric over `repeats` clusterings.
pub fn cmd_evaluate(cfg: &RunConfig) -> Result<EvaluateOutput> {
    cfg.validate()?;
    let loaded = load(&cfg.source)?;
    let labels = labels_of(&loaded)?;
    let (m, _, scores) = scored(cfg, &loaded.matrix)?;
    let selected = select(cfg, &scores)?;
    let report = evaluate_pipeline(&m, labels, &selected, &pipeline_options(cfg, labels))?;

    let (p1, mut w) = create(cfg, "selected.csv")?;
    write_selected(&mut w, &selected)?;
    let p1 = finish(&p1, w)?;
    let (p2, mut w) = create(cfg, "evaluation.csv")?;
    report.write_delimited(&mut w, cfg.method.as_str())?;
    let p2 = finish(&p2, w)?;
    Ok(EvaluateOutput {
        selected,
        report,
        files: vec![p1, p2],
    })
}

fn write_selected<W: Write>(w: W, selected: &[String]) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["rank", "feature"]).map_err(Error::from)?;
    for (i, name) in selected.iter().enumerate() {
        w.write_record([(i + 1).to_string(), name.clone()])
            .map_err(Error::from)?;
    }
    w.flush().map_err(|e| Error::from(csv::Error::from(e)))?;
    Ok(())
}

/// Quality and selection time for one subsample fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub method: Method,
    pub fraction: f64,
    pub subsample_n: usize,
    /// Per metric: the mean over draws of each draw's mean and standard
    /// deviation over clustering repeats.
    pub quality: Vec<(Metric, MeanStd)>,
    /// Seconds spent in the scoring call, averaged over draws.
    pub selection_seconds: f64,
}

impl BenchRow {
    pub fn metric(&self, metric: Metric) -> MeanStd {
        self.quality
            .iter()
            .find(|(m, _)| *m == metric)
            .map(|(_, s)| *s)
            .expect("every metric is recorded")
    }
}

#[derive(Debug)]
pub struct BenchOutput {
    pub rows: Vec<BenchRow>,
    pub files: Vec<PathBuf>,
}

/// Selects features on uniform random subsamples and evaluates the
/// selection by clustering the whole dataset. Writes `bench.csv`
/// (quality, deterministic) and `bench_timing.csv` (wall-clock).
pub fn cmd_bench(cfg: &RunConfig) -> Result<BenchOutput> {
    cfg.validate()?;
    let loaded = load(&cfg.source)?;
    let labels = labels_of(&loaded)?;
    let raw = &loaded.matrix;
    let n = raw.n();
    let opts = pipeline_options(cfg, labels);

    let mut rows = Vec::with_capacity(cfg.fractions.len());
    for &fraction in &cfg.fractions {
        let size = (fraction * n as f64).floor() as usize;
        if size < 3 {
            return Err(Error::TooFewObservations {
                required: 3,
                found: size,
            }
            .into());
        }
        let mut reports = Vec::with_capacity(cfg.draws);
        let mut seconds = Vec::with_capacity(cfg.draws);
        for draw in 0..cfg.draws {
            let sub = if size == n {
                raw.clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(draw as u64));
                let mut idx = rand::seq::index::sample(&mut rng, n, size).into_vec();
                idx.sort_unstable();
                raw.select_rows(&idx)?
            };
            let (prepared, _) = prepare(&sub, cfg.corr_threshold)?;
            let start = Instant::now();
            let report = score(cfg.method, &prepared, cfg.knn_k)?;
            seconds.push(start.elapsed().as_secs_f64());
            let selected = select(cfg, &report)?;
            let (whole, _) = minmax_scale(&raw.select_features(&selected)?)?;
            reports.push(evaluate_pipeline(&whole, labels, &selected, &opts)?);
        }
        let quality = Metric::ALL
            .into_iter()
            .map(|metric| {
                let stats: Vec<MeanStd> = reports.iter().map(|r| r.metric(metric)).collect();
                let means: Vec<f64> = stats.iter().map(|s| s.mean).collect();
                let stds: Vec<f64> = stats.iter().map(|s| s.std).collect();
                (metric, MeanStd { mean: mean(&means), std: mean(&stds) })
            })
            .collect();
        rows.push(BenchRow {
            method: cfg.method,
            fraction,
            subsample_n: size,
            quality,
            selection_seconds: mean(&seconds),
        });
    }

    let (p1, mut w) = create(cfg, "bench.csv")?;
    write_bench(&mut w, &rows)?;
    let p1 = finish(&p1, w)?;
    let (p2, mut w) = create(cfg, "bench_timing.csv")?;
    write_timing(&mut w, &rows, cfg.draws)?;
    let p2 = finish(&p2, w)?;
    Ok(BenchOutput {
        rows,
        files: vec![p1, p2],
    })
}

fn write_bench<W: Write>(w: W, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["method", "fraction", "subsample_n", "metric", "mean", "std"])
        .map_err(Error::from)?;
    for row in rows {
        for (metric, s) in &row.quality {
            w.write_record([
                row.method.as_str(),
                &row.fraction.to_string(),
                &row.subsample_n.to_string(),
                metric.as_str(),
                &s.mean.to_string(),
                &s.std.to_string(),
            ])
            .map_err(Error::from)?;
        }
    }
    w.flush().map_err(|e| Error::from(csv::Error::from(e)))?;
    Ok(())
}

fn write_timing<W: Write>(w: W, rows: &[BenchRow], draws: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["method", "fraction", "subsample_n", "draws", "selection_seconds"])
        .map_err(Error::from)?;
    for row in rows {
        w.write_record([
            row.method.as_str(),
            &row.fraction.to_string(),
            &row.subsample_n.to_string(),
            &draws.to_string(),
            &row.selection_seconds.to_string(),
        ])
        .map_err(Error::from)?;
    }
    w.flush().map_err(|e| Error::from(csv::Error::from(e)))?;
    Ok(())
}

#[derive(Debug)]
pub struct GenerateOutput {
    pub matrix: DataMatrix,
    pub labels: LabelVector,
    pub files: Vec<PathBuf>,
}

/// Writes the generated dataset to `data.csv` with a trailing `label`
/// column.
pub fn cmd_generate(cfg: &RunConfig) -> Result<GenerateOutput> {
    if !matches!(cfg.source, DataSource::Generated { .. }) {
        return Err(CliError::Usage("generate needs generator settings, not an input file".into()));
    }
    let loaded = load(&cfg.source)?;
    let labels = loaded.labels.expect("generator yields labels");
    let (path, mut w) = create(cfg, "data.csv")?;
    write_matrix(&mut w, &loaded.matrix, Some(&labels))?;
    let path = finish(&path, w)?;
    Ok(GenerateOutput {
        matrix: loaded.matrix,
        labels,
        files: vec![path],
    })
}
