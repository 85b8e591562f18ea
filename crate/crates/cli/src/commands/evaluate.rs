//! `evaluate`: stratified cross-validation of every configured model on the
//! training corpus, written as one metrics row per model. A model whose
//! training fails is reported and skipped; the run only fails when every
//! row does.

use skipscreen_core::classify::ModelSpec;
use skipscreen_core::eval::{
    cross_validate, cross_validate_baseline, leave_pair_out_auc, CvConfig, CvOutcome, EvalError,
};

use super::{count_features, fmt_float, load_corpus, write_files};
use crate::config::RunConfig;
use crate::CliError;

pub const METRICS_HEADER: &str =
    "model,feature_set,k_top,weighted_precision,weighted_recall,weighted_f1,auc";

fn metrics_row(model: &str, feature_set: &str, k_top: usize, outcome: &CvOutcome) -> String {
    let r = &outcome.report;
    format!(
        "{model},{feature_set},{k_top},{},{},{},{}",
        fmt_float(r.weighted_precision),
        fmt_float(r.weighted_recall),
        fmt_float(r.weighted_f1),
        fmt_float(r.auc)
    )
}

fn print_table(rows: &[(String, String, usize, f64, f64, f64, f64)]) {
    println!(
        "{:<12} {:<10} {:>6} {:>10} {:>7} {:>7} {:>7}",
        "model", "features", "k", "precision", "recall", "f1", "auc"
    );
    for (model, fs, k, p, r, f1, auc) in rows {
        println!("{model:<12} {fs:<10} {k:>6} {p:>10.3} {r:>7.3} {f1:>7.3} {auc:>7.3}");
    }
}

pub fn run(cfg: &RunConfig, models: &[ModelSpec]) -> Result<(), CliError> {
    let corpus = load_corpus(cfg, &cfg.train_manifest)?;
    let counted = count_features(cfg, &corpus);
    let cv_cfg = CvConfig {
        folds: cfg.folds,
        k_top: cfg.k_top,
        ranking: cfg.ranking,
        leakage: cfg.leakage,
        weighting: cfg.weighting,
        seed: cfg.seed,
    };

    let mut csv_rows = vec![METRICS_HEADER.to_string()];
    let mut table = Vec::new();
    let mut attempted = 0usize;
    let mut failed = 0usize;

    let record = |outcome: &CvOutcome,
                  model: &str,
                  feature_set: &str,
                  k_top: usize,
                  csv_rows: &mut Vec<String>,
                  table: &mut Vec<(String, String, usize, f64, f64, f64, f64)>| {
        for w in &outcome.warnings {
            eprintln!("warning: {model}: {w}");
        }
        csv_rows.push(metrics_row(model, feature_set, k_top, outcome));
        let r = &outcome.report;
        table.push((
            model.to_string(),
            feature_set.to_string(),
            k_top,
            r.weighted_precision,
            r.weighted_recall,
            r.weighted_f1,
            r.auc,
        ));
    };

    for spec in models {
        attempted += 1;
        match cross_validate(&counted, spec, &cv_cfg) {
            Ok(outcome) => record(
                &outcome,
                spec.family_name(),
                cfg.feature_set.name(),
                cfg.k_top,
                &mut csv_rows,
                &mut table,
            ),
            Err(EvalError::Train(e)) => {
                failed += 1;
                eprintln!("error: {}: training failed: {e}", spec.family_name());
            }
            Err(other) => return Err(other.into()),
        }
    }
    if cfg.baseline {
        attempted += 1;
        match cross_validate_baseline(&corpus, &ModelSpec::svm_default(), &cv_cfg) {
            Ok(outcome) => record(&outcome, "svm", "baseline", 7, &mut csv_rows, &mut table),
            Err(EvalError::Train(e)) => {
                failed += 1;
                eprintln!("error: baseline: training failed: {e}");
            }
            Err(other) => return Err(other.into()),
        }
    }
    if failed == attempted {
        return Err(CliError::Training(format!(
            "all {attempted} model runs failed"
        )));
    }

    let mut files = vec![("metrics.csv".to_string(), csv_rows.join("\n") + "\n")];
    if cfg.lpo {
        let mut lpo_rows = vec!["model,feature_set,k_top,lpo_auc".to_string()];
        for spec in models {
            match leave_pair_out_auc(&counted, spec, &cv_cfg) {
                Ok(auc) => lpo_rows.push(format!(
                    "{},{},{},{}",
                    spec.family_name(),
                    cfg.feature_set.name(),
                    cfg.k_top,
                    fmt_float(auc)
                )),
                Err(EvalError::Train(e)) => {
                    eprintln!("error: lpo {}: training failed: {e}", spec.family_name())
                }
                Err(other) => return Err(other.into()),
            }
        }
        files.push(("lpo.csv".to_string(), lpo_rows.join("\n") + "\n"));
    }
    write_files(&cfg.out_dir, &files)?;
    print_table(&table);
    Ok(())
}
