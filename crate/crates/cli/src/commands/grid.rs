//! `grid`: hyperparameter search per family on the training corpus, scored
//! on a participant-disjoint validation corpus. Emits every candidate's
//! objective value and a `[models]` file of per-family winners that
//! `evaluate --models` accepts directly.

use skipscreen_core::classify::{Kernel, ModelSpec, ModelVariant};
use skipscreen_core::eval::{grid_search, GridConfig, GridObjective};

use super::{count_features, fmt_float, load_corpus, write_files};
use crate::config::RunConfig;
use crate::CliError;

/// Candidate specs in family order; within a family the grid is the cross
/// product of the configured value lists, first axis outermost.
fn candidate_specs(cfg: &RunConfig) -> Result<Vec<ModelSpec>, CliError> {
    let g = &cfg.grid;
    let mut specs = Vec::new();
    for family in &cfg.families {
        match family.as_str() {
            "svm" => {
                for &c in &g.svm_c {
                    for &gamma in &g.svm_gamma {
                        let mut spec = ModelSpec::svm_default();
                        let ModelVariant::Svm(ref mut p) = spec.variant else {
                            unreachable!()
                        };
                        p.c = c;
                        p.kernel = Kernel::Rbf { gamma };
                        spec.seed = cfg.seed;
                        specs.push(spec);
                    }
                }
            }
            "naive_bayes" => {
                for &kd in &g.nb_kernel_density {
                    let mut spec = ModelSpec::naive_bayes_default();
                    let ModelVariant::NaiveBayes(ref mut p) = spec.variant else {
                        unreachable!()
                    };
                    p.kernel_density = kd;
                    spec.seed = cfg.seed;
                    specs.push(spec);
                }
            }
            "logistic" => {
                for &ridge in &g.logistic_ridge {
                    let mut spec = ModelSpec::logistic_default();
                    let ModelVariant::Logistic(ref mut p) = spec.variant else {
                        unreachable!()
                    };
                    p.ridge = ridge;
                    spec.seed = cfg.seed;
                    specs.push(spec);
                }
            }
            "tree" => {
                for &confidence in &g.tree_confidence {
                    for &min_leaf in &g.tree_min_leaf {
                        let mut spec = ModelSpec::tree_default();
                        let ModelVariant::Tree(ref mut p) = spec.variant else {
                            unreachable!()
                        };
                        p.confidence = confidence;
                        p.min_leaf = min_leaf;
                        spec.seed = cfg.seed;
                        specs.push(spec);
                    }
                }
            }
            other => {
                return Err(CliError::Config(format!(
                    "grid cannot search unknown family `{other}`"
                )))
            }
        }
    }
    Ok(specs)
}

fn params_string(spec: &ModelSpec) -> String {
    match spec.variant {
        ModelVariant::Svm(p) => match p.kernel {
            Kernel::Rbf { gamma } => format!("c={} gamma={}", fmt_float(p.c), fmt_float(gamma)),
            Kernel::Linear => format!("c={} kernel=linear", fmt_float(p.c)),
        },
        ModelVariant::NaiveBayes(p) => format!("kernel_density={}", p.kernel_density),
        ModelVariant::Logistic(p) => format!("ridge={}", fmt_float(p.ridge)),
        ModelVariant::Tree(p) => {
            format!(
                "confidence={} min_leaf={}",
                fmt_float(p.confidence),
                p.min_leaf
            )
        }
    }
}

/// Shortest-roundtrip float that still parses as a TOML float.
fn toml_float(v: f64) -> String {
    let s = fmt_float(v);
    if s.contains('.') || s.contains('e') || s.contains('E') {
        s
    } else {
        format!("{s}.0")
    }
}

fn models_toml(families: &[String], best: &[ModelSpec]) -> String {
    let mut out = String::from("[models]\nfamilies = [");
    let quoted: Vec<String> = families.iter().map(|f| format!("\"{f}\"")).collect();
    out.push_str(&quoted.join(", "));
    out.push_str("]\n");
    for spec in best {
        match spec.variant {
            ModelVariant::Svm(p) => {
                out.push_str("\n[models.svm]\n");
                out.push_str(&format!("c = {}\n", toml_float(p.c)));
                match p.kernel {
                    Kernel::Rbf { gamma } => {
                        out.push_str("kernel = \"rbf\"\n");
                        out.push_str(&format!("gamma = {}\n", toml_float(gamma)));
                    }
                    Kernel::Linear => out.push_str("kernel = \"linear\"\n"),
                }
                out.push_str(&format!("standardize = {}\n", p.standardize));
                out.push_str(&format!("platt = {}\n", p.platt_calibrate));
            }
            ModelVariant::NaiveBayes(p) => {
                out.push_str("\n[models.naive_bayes]\n");
                out.push_str(&format!("kernel_density = {}\n", p.kernel_density));
            }
            ModelVariant::Logistic(p) => {
                out.push_str("\n[models.logistic]\n");
                out.push_str(&format!("ridge = {}\n", toml_float(p.ridge)));
            }
            ModelVariant::Tree(p) => {
                out.push_str("\n[models.tree]\n");
                out.push_str(&format!("confidence = {}\n", toml_float(p.confidence)));
                out.push_str(&format!("min_leaf = {}\n", p.min_leaf));
            }
        }
    }
    out
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let validation_path = cfg.validation_manifest.as_ref().ok_or_else(|| {
        CliError::Config("grid requires validation_manifest in the config".to_string())
    })?;
    let train = load_corpus(cfg, &cfg.train_manifest)?;
    let validation = load_corpus(cfg, validation_path)?;
    let train_counted = count_features(cfg, &train);
    let valid_counted = count_features(cfg, &validation);

    let specs = candidate_specs(cfg)?;
    let grid_cfg = GridConfig {
        k_top: cfg.grid.k_top,
        ranking: cfg.ranking,
        weighting: cfg.weighting,
    };
    let outcome = grid_search(
        &train_counted,
        &valid_counted,
        &specs,
        cfg.grid.objective,
        &grid_cfg,
    )?;

    let objective_name = match cfg.grid.objective {
        GridObjective::Auc => "AUC",
        GridObjective::F1 => "F1",
    };
    let mut csv = vec!["family,params,objective,value".to_string()];
    for (spec, value) in &outcome.evaluated {
        csv.push(format!(
            "{},{},{objective_name},{}",
            spec.family_name(),
            params_string(spec),
            fmt_float(*value)
        ));
    }

    // Per-family winner: best value, earliest grid entry on exact ties.
    let mut winners = Vec::with_capacity(cfg.families.len());
    for family in &cfg.families {
        let best = outcome
            .evaluated
            .iter()
            .filter(|(s, _)| s.family_name() == family)
            .fold(None::<&(ModelSpec, f64)>, |acc, entry| match acc {
                Some(b) if entry.1 <= b.1 => acc,
                _ => Some(entry),
            })
            .expect("every configured family has grid entries");
        println!(
            "{family}: best {objective_name} {} at {}",
            best.1,
            params_string(&best.0)
        );
        winners.push(best.0);
    }
    println!(
        "overall: {} with {}",
        outcome.best.family_name(),
        params_string(&outcome.best)
    );

    let files = vec![
        ("grid.csv".to_string(), csv.join("\n") + "\n"),
        (
            "best_specs.toml".to_string(),
            models_toml(&cfg.families, &winners),
        ),
    ];
    write_files(&cfg.out_dir, &files)
}
