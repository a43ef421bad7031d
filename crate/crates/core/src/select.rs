//! Choosing how many features to keep: top-q selection, normalized
//! score curves and the elbow of a curve.

use std::io::Write;

use crate::error::{Error, Result};
use crate::scores::{Direction, FeatureScoreReport, Method};

/// Names of the `q` most relevant features.
pub fn select_top(report: &FeatureScoreReport, q: usize) -> Result<Vec<String>> {
    if q < 1 || q > report.p() {
        return Err(Error::out_of_range("q", q, format!("1..={}", report.p())));
    }
    Ok(report.ranked_names().take(q).map(str::to_owned).collect())
}

/// Scores oriented so that low means relevant, sorted ascending and
/// rescaled to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreCurve {
    pub method: Method,
    pub points: Vec<f64>,
    /// All scores were equal; `points` is all zeros.
    pub flat: bool,
}

pub fn score_curve(report: &FeatureScoreReport) -> Result<ScoreCurve> {
    if report.p() < 2 {
        return Err(Error::out_of_range("p", report.p(), "at least 2 features"));
    }
    let mut oriented: Vec<f64> = match report.direction {
        Direction::LowIsRelevant => report.raw_scores.clone(),
        Direction::HighIsRelevant => {
            let max = report
                .raw_scores
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            report.raw_scores.iter().map(|s| max - s).collect()
        }
    };
    oriented.sort_by(f64::total_cmp);
    let (lo, hi) = (oriented[0], oriented[oriented.len() - 1]);
    if lo == hi {
        return Ok(ScoreCurve {
            method: report.method,
            points: vec![0.0; oriented.len()],
            flat: true,
        });
    }
    let span = hi - lo;
    let points = oriented.iter().map(|v| (v - lo) / span).collect();
    Ok(ScoreCurve {
        method: report.method,
        points,
        flat: false,
    })
}

impl ScoreCurve {
    /// `rank,normalized_score` rows with 1-based ranks.
    pub fn write_delimited<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["rank", "normalized_score"])?;
        for (i, v) in self.points.iter().enumerate() {
            w.write_record([(i + 1).to_string(), v.to_string()])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Below this chord distance the elbow is reported as low confidence.
pub const ELBOW_CONFIDENCE_DISTANCE: f64 = 1e-6;
const ELBOW_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Elbow {
    /// 1-based rank of the elbow point, i.e. the number of features kept.
    pub count: usize,
    /// Distance of the elbow point from the chord, in normalized units.
    pub distance: f64,
    pub low_confidence: bool,
}

/// The point of the curve farthest from the chord joining its first and
/// last points, with both axes scaled to `[0, 1]`. Distances within
/// `1e-12` of the maximum count as ties and the smallest rank wins.
pub fn elbow_point(curve: &ScoreCurve) -> Result<Elbow> {
    let p = curve.points.len();
    if p < 3 {
        return Err(Error::out_of_range("p", p, "at least 3 points"));
    }
    if curve.flat {
        return Err(Error::NoElbow);
    }
    let (y0, y1) = (curve.points[0], curve.points[p - 1]);
    let dy = y1 - y0;
    let norm = (1.0 + dy * dy).sqrt();
    let dist: Vec<f64> = curve
        .points
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let x = i as f64 / (p - 1) as f64;
            // line through (0, y0) and (1, y1)
            (dy * x - (y - y0)).abs() / norm
        })
        .collect();
    let best = dist.iter().copied().fold(0.0, f64::max);
    let idx = dist
        .iter()
        .position(|&d| d >= best - ELBOW_TIE)
        .expect("non-empty");
    Ok(Elbow {
        count: idx + 1,
        distance: dist[idx],
        low_confidence: best < ELBOW_CONFIDENCE_DISTANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn report(method: Method, scores: Vec<f64>) -> FeatureScoreReport {
        let names = (0..scores.len()).map(|r| format!("f{r}")).collect();
        FeatureScoreReport::new(method, names, scores, vec![])
    }

    fn curve(points: Vec<f64>) -> ScoreCurve {
        ScoreCurve {
            method: Method::Laplacian,
            points,
            flat: false,
        }
    }

    #[test]
    fn top_selection() {
        let r = report(Method::DistanceRank, vec![0.1, 0.9, 0.5]);
        assert_eq!(select_top(&r, 3).unwrap(), vec!["f1", "f2", "f0"]);
        assert_eq!(select_top(&r, 1).unwrap(), vec!["f1"]);
        assert!(select_top(&r, 0).is_err());
        assert!(select_top(&r, 4).is_err());
    }

    #[test]
    fn distance_rank_curve_is_one_minus_score() {
        let c = score_curve(&report(Method::DistanceRank, vec![1.0, 0.5, 0.0])).unwrap();
        assert_eq!(c.points, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn low_is_relevant_keeps_order() {
        let c = score_curve(&report(Method::Compactness, vec![2.0, 4.0, 10.0])).unwrap();
        assert_eq!(c.points, vec![0.0, 0.25, 1.0]);
    }

    #[test]
    fn flat_curve() {
        let c = score_curve(&report(Method::MaxVariance, vec![3.0; 4])).unwrap();
        assert!(c.flat);
        assert_eq!(c.points, vec![0.0; 4]);
        assert!(matches!(elbow_point(&c), Err(Error::NoElbow)));
    }

    #[test]
    fn elbow_at_breakpoint() {
        // flat for 100 points, then linear up to 1 over 50 more
        let mut pts = vec![0.0; 100];
        pts.extend((1..=50).map(|i| i as f64 / 50.0));
        let e = elbow_point(&curve(pts)).unwrap();
        assert!((e.count as i64 - 100).abs() <= 1);
        assert!(!e.low_confidence);
    }

    #[test]
    fn linear_curve_is_low_confidence() {
        let pts: Vec<f64> = (0..20).map(|i| i as f64 / 19.0).collect();
        let e = elbow_point(&curve(pts)).unwrap();
        assert_eq!(e.count, 1);
        assert!(e.low_confidence);
    }

    #[test]
    fn concave_curve() {
        // y = 1 - (1 - x)^2; chord distance is proportional to x - x^2,
        // maximal at x = 1/2, i.e. between samples 50 and 51 (1-based)
        let pts: Vec<f64> = (0..100)
            .map(|i| {
                let x = i as f64 / 99.0;
                1.0 - (1.0 - x).powi(2)
            })
            .collect();
        let e = elbow_point(&curve(pts)).unwrap();
        assert!((e.count as f64 - 50.5).abs() <= 2.0);
    }

    #[test]
    fn curve_serialization() {
        let mut buf = Vec::new();
        curve(vec![0.0, 0.5, 1.0]).write_delimited(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "rank,normalized_score\n1,0\n2,0.5\n3,1\n"
        );
    }

    proptest! {
        #[test]
        fn top_q_is_prefix(scores in prop::collection::vec(-5.0f64..5.0, 2..30), q1 in 1usize..30, q2 in 1usize..30) {
            let r = report(Method::Laplacian, scores);
            let (a, b) = (q1.min(q2).min(r.p()), q1.max(q2).min(r.p()));
            let small = select_top(&r, a).unwrap();
            let big = select_top(&r, b).unwrap();
            prop_assert_eq!(&big[..a], &small[..]);
        }

        #[test]
        fn curve_affine_invariant(
            scores in prop::collection::vec(-5.0f64..5.0, 3..30),
            a in 0.1f64..10.0,
            b in -10.0f64..10.0,
        ) {
            for method in [Method::DistanceRank, Method::Laplacian] {
                let base = score_curve(&report(method, scores.clone())).unwrap();
                let moved = score_curve(&report(method, scores.iter().map(|s| a * s + b).collect())).unwrap();
                prop_assume!(!base.flat);
                prop_assert_eq!(base.points[0], 0.0);
                prop_assert_eq!(*base.points.last().unwrap(), 1.0);
                for w in base.points.windows(2) {
                    prop_assert!(w[0] <= w[1]);
                }
                for (x, y) in base.points.iter().zip(&moved.points) {
                    prop_assert!((x - y).abs() < 1e-9);
                }
                let e1 = elbow_point(&base).unwrap();
                let e2 = elbow_point(&moved).unwrap();
                prop_assert!((e1.distance - e2.distance).abs() < 1e-8);
            }
        }
    }
}
