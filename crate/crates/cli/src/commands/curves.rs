//! `curves`: pooled-CV accuracy against the number of kept features, one
//! chart per skip-gram family plus the compound set, one series per model.

use skipscreen_core::classify::ModelSpec;
use skipscreen_core::eval::{accuracy_curve, Curve, CvConfig, EvalError};
use skipscreen_core::skipgram::{FeatureSetSpec, SkipGramSpec};

use super::{fmt_float, load_corpus, write_files};
use crate::config::RunConfig;
use crate::svg;
use crate::CliError;

/// The four single families charted in the reference protocol, then the
/// configured (usually compound) set.
fn chart_sets(cfg: &RunConfig) -> Vec<FeatureSetSpec> {
    let singles = [(2, 1), (3, 1), (2, 2), (3, 2)]
        .map(|(n, k)| FeatureSetSpec::single(SkipGramSpec::new(n, k).expect("static spec")));
    let mut sets: Vec<FeatureSetSpec> = singles.into_iter().collect();
    if !sets.iter().any(|s| s.name() == cfg.feature_set.name()) {
        sets.push(cfg.feature_set.clone());
    }
    sets
}

pub fn run(cfg: &RunConfig, models: &[ModelSpec]) -> Result<(), CliError> {
    let corpus = load_corpus(cfg, &cfg.train_manifest)?;
    let cv_cfg = CvConfig {
        folds: cfg.folds,
        k_top: cfg.k_top,
        ranking: cfg.ranking,
        leakage: cfg.leakage,
        weighting: cfg.weighting,
        seed: cfg.seed,
    };

    let mut files = Vec::new();
    let mut attempted = 0usize;
    let mut failed = 0usize;
    for set in chart_sets(cfg) {
        let counted = skipscreen_core::features::CountedCorpus::from_corpus(&corpus, &set);
        let mut curves: Vec<(String, Curve)> = Vec::new();
        for spec in models {
            attempted += 1;
            match accuracy_curve(&counted, spec, &cv_cfg, &cfg.curve_ks) {
                Ok(curve) => {
                    if let Some(note) = &curve.note {
                        eprintln!("note: {} {}: {note}", set.name(), spec.family_name());
                    }
                    curves.push((spec.family_name().to_string(), curve));
                }
                Err(EvalError::Train(e)) => {
                    failed += 1;
                    eprintln!(
                        "error: {} {}: training failed: {e}",
                        set.name(),
                        spec.family_name()
                    );
                }
                Err(other) => return Err(other.into()),
            }
        }
        if curves.is_empty() {
            continue;
        }

        let mut csv = vec!["model,k,accuracy".to_string()];
        for (model, curve) in &curves {
            for &(k, acc) in &curve.points {
                csv.push(format!("{model},{k},{}", fmt_float(acc)));
            }
        }
        // Ticks: every configured K that survived in at least one curve.
        let ticks: Vec<usize> = cfg
            .curve_ks
            .iter()
            .copied()
            .filter(|&k| {
                curves
                    .iter()
                    .any(|(_, c)| c.points.iter().any(|&(pk, _)| pk == k))
            })
            .collect();
        let series: Vec<svg::Series> = curves
            .iter()
            .map(|(model, curve)| svg::Series {
                name: model,
                points: &curve.points,
            })
            .collect();
        let chart = svg::line_chart(
            &format!("{} accuracy", set.name()),
            "top K features",
            "pooled-CV accuracy",
            &ticks,
            &series,
        );
        let stem = set.name().replace('.', "_");
        files.push((format!("curves_{stem}.csv"), csv.join("\n") + "\n"));
        files.push((format!("curves_{stem}.svg"), chart));
    }
    if failed == attempted {
        return Err(CliError::Training(format!(
            "all {attempted} curve runs failed"
        )));
    }
    write_files(&cfg.out_dir, &files)
}
