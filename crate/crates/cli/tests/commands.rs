use std::fs;
use std::path::Path;

use distrank::eval::Metric;
use distrank::io::LoadOptions;
use distrank::synth::GeneratorSpec;
use distrank::{Error, Method};
use distrank_cli::{
    cmd_bench, cmd_curve, cmd_evaluate, cmd_score, CliError, DataSource, FeatureCount, RunConfig,
};

fn generated(spec: GeneratorSpec, out: &Path) -> RunConfig {
    let seed = spec.seed;
    let mut cfg = RunConfig::new(DataSource::Generated { spec, balanced: false }, out);
    cfg.seed = seed;
    cfg
}

fn file_source(dir: &Path, name: &str, body: &str, label: Option<&str>) -> DataSource {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    DataSource::File {
        path,
        options: LoadOptions {
            label_column: label.map(str::to_owned),
            ..LoadOptions::default()
        },
    }
}

#[test]
fn score_ranks_planted_features_first() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = generated(GeneratorSpec::imbalanced_fixture(3), dir.path());
    let out = cmd_score(&cfg).unwrap();
    let top: Vec<&str> = out.scores.ranked_names().take(5).collect();
    assert!(top.iter().all(|n| n.starts_with("inf_")), "{top:?}");
    let text = fs::read_to_string(dir.path().join("scores.csv")).unwrap();
    assert!(text.starts_with("feature,score,rank\ninf_"));
    assert_eq!(text.lines().count(), 51);
    assert!(dir.path().join("preprocess.csv").exists());
}

#[test]
fn constant_input_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let source = file_source(dir.path(), "c.csv", "a,b\n1,2\n1,2\n1,2\n", None);
    let err = cmd_score(&RunConfig::new(source, dir.path())).unwrap_err();
    assert!(matches!(err, CliError::Data(Error::AllConstant)));
    assert_eq!(err.exit_code(), 2);
    assert_eq!(err.to_string(), "all features constant");
}

#[test]
fn curve_has_unit_endpoints_and_early_elbow() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = generated(GeneratorSpec::imbalanced_fixture(1), dir.path());
    let out = cmd_curve(&cfg).unwrap();
    let pts = &out.curve.points;
    assert_eq!((pts[0], pts[pts.len() - 1]), (0.0, 1.0));
    let elbow = out.elbow.unwrap();
    assert!(elbow.count <= pts.len() / 2);
    let text = fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    assert!(text.starts_with("rank,normalized_score\n1,0\n"));
    assert!(text.ends_with(&format!("elbow,{}\n", elbow.count)));
}

#[test]
fn flat_curve_reports_no_elbow() {
    let dir = tempfile::tempdir().unwrap();
    // equal value multisets and zero correlation: identical variances
    let body = "x,y,z\n0,0,0\n1,0,1\n0,1,1\n1,1,0\n";
    let mut cfg = RunConfig::new(file_source(dir.path(), "flat.csv", body, None), dir.path());
    cfg.method = Method::MaxVariance;
    let out = cmd_curve(&cfg).unwrap();
    assert!(out.curve.flat);
    assert!(out.elbow.is_none());
    let text = fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    assert!(text.ends_with("elbow,none\n"));
}

#[test]
fn perfect_separation_scores_one_for_every_method() {
    let dir = tempfile::tempdir().unwrap();
    let spec = GeneratorSpec::planted(vec![40, 20, 20], 2, 10.0, 0.02, 0, 0.3, 5);
    for method in Method::ALL {
        let mut cfg = generated(spec.clone(), dir.path());
        cfg.method = method;
        cfg.q = FeatureCount::Top(2);
        let out = cmd_evaluate(&cfg).unwrap();
        assert_eq!(out.report.repeats(), 5);
        let f1 = out.report.metric(Metric::TotalF1);
        assert_eq!((f1.mean, f1.std), (1.0, 0.0), "{method}");
    }
    let text = fs::read_to_string(dir.path().join("evaluation.csv")).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("max-variance,total_f1w,1,0\n"));
}

#[test]
fn evaluate_needs_labels() {
    let dir = tempfile::tempdir().unwrap();
    let body = "a,b\n0,1\n1,3\n2,2\n3,0\n";
    let cfg = RunConfig::new(file_source(dir.path(), "d.csv", body, None), dir.path());
    assert_eq!(cmd_evaluate(&cfg).unwrap_err().exit_code(), 1);
}

#[test]
fn evaluate_reads_labels_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = String::from("a,noise,class\n");
    for i in 0..30 {
        let class = usize::from(i >= 20);
        let a = class as f64 * 10.0 + (i % 5) as f64 * 0.1;
        body += &format!("{a},{},{class}\n", (i * 7 % 11) as f64);
    }
    let mut cfg = RunConfig::new(file_source(dir.path(), "l.csv", &body, Some("class")), dir.path());
    cfg.q = FeatureCount::Top(1);
    let out = cmd_evaluate(&cfg).unwrap();
    assert_eq!(out.selected, vec!["a"]);
    assert_eq!(out.report.metric(Metric::TotalAcc).mean, 1.0);
}

#[test]
fn full_fraction_bench_matches_evaluate_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let spec = GeneratorSpec::planted(vec![150, 10, 10], 3, 10.0, 0.02, 12, 0.3, 4);
    let mut cfg = generated(spec, dir.path());
    cfg.q = FeatureCount::Top(3);
    cfg.fractions = vec![1.0];
    let eval = cmd_evaluate(&cfg).unwrap().report;
    let bench = cmd_bench(&cfg).unwrap().rows;
    for metric in Metric::ALL {
        let (e, b) = (eval.metric(metric), bench[0].metric(metric));
        assert_eq!(e.mean.to_bits(), b.mean.to_bits(), "{}", metric.as_str());
        assert_eq!(e.std.to_bits(), b.std.to_bits(), "{}", metric.as_str());
    }
}

#[test]
fn tiny_fraction_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = generated(GeneratorSpec::imbalanced_fixture(0), dir.path());
    cfg.q = FeatureCount::Top(5);
    cfg.fractions = vec![0.005];
    let err = cmd_bench(&cfg).unwrap_err();
    assert!(matches!(
        err,
        CliError::Data(Error::TooFewObservations { required: 3, found: 2 })
    ));
}
