//! Run configuration: a TOML file describing the corpus, the feature
//! regime, and the models. Manifest paths are resolved relative to the
//! config file's directory, so a config can travel with its corpus.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use skipscreen_core::classify::{
    Kernel, LogisticParams, ModelSpec, ModelVariant, NbParams, SvmParams, TreeParams,
};
use skipscreen_core::eval::GridObjective;
use skipscreen_core::features::{LeakageMode, RankingMethod, Weighting};
use skipscreen_core::ingest::VisitPolicy;
use skipscreen_core::skipgram::FeatureSetSpec;

use crate::CliError;

pub const ALL_FAMILIES: [&str; 4] = ["svm", "naive_bayes", "logistic", "tree"];

fn default_curve_ks() -> Vec<usize> {
    vec![10, 25, 50, 100, 150, 200, 300, 400, 500, 700, 1000]
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawSvm {
    pub c: Option<f64>,
    pub kernel: Option<String>,
    pub gamma: Option<f64>,
    pub standardize: Option<bool>,
    pub platt: Option<bool>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawNaiveBayes {
    pub kernel_density: Option<bool>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawLogistic {
    pub ridge: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawTree {
    pub confidence: Option<f64>,
    pub min_leaf: Option<usize>,
}

/// The `[models]` table: which families run, with optional per-family
/// hyperparameter overrides. Also the whole schema of a `--models` file.
#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawModels {
    pub families: Option<Vec<String>>,
    pub svm: Option<RawSvm>,
    pub naive_bayes: Option<RawNaiveBayes>,
    pub logistic: Option<RawLogistic>,
    pub tree: Option<RawTree>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    pub objective: Option<String>,
    pub k_top: Option<usize>,
    pub svm_c: Option<Vec<f64>>,
    pub svm_gamma: Option<Vec<f64>>,
    pub nb_kernel_density: Option<Vec<bool>>,
    pub logistic_ridge: Option<Vec<f64>>,
    pub tree_confidence: Option<Vec<f64>>,
    pub tree_min_leaf: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    train_manifest: PathBuf,
    validation_manifest: Option<PathBuf>,
    seed: Option<u64>,
    out_dir: Option<PathBuf>,
    visit_policy: Option<String>,
    include_investigator: Option<bool>,
    feature_set: Option<String>,
    k_top: Option<usize>,
    ranking: Option<String>,
    leakage: Option<String>,
    weighting: Option<String>,
    folds: Option<usize>,
    curve_ks: Option<Vec<usize>>,
    baseline: Option<bool>,
    lpo: Option<bool>,
    models: Option<RawModels>,
    grid: Option<RawGrid>,
}

#[derive(Debug, Clone)]
pub struct GridSettings {
    pub objective: GridObjective,
    pub k_top: usize,
    pub svm_c: Vec<f64>,
    pub svm_gamma: Vec<f64>,
    pub nb_kernel_density: Vec<bool>,
    pub logistic_ridge: Vec<f64>,
    pub tree_confidence: Vec<f64>,
    pub tree_min_leaf: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub train_manifest: PathBuf,
    pub validation_manifest: Option<PathBuf>,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub visit_policy: VisitPolicy,
    pub include_investigator: bool,
    pub feature_set: FeatureSetSpec,
    pub k_top: usize,
    pub ranking: RankingMethod,
    pub leakage: LeakageMode,
    pub weighting: Weighting,
    pub folds: usize,
    pub curve_ks: Vec<usize>,
    pub baseline: bool,
    pub lpo: bool,
    /// Family names actually configured, in configured order.
    pub families: Vec<String>,
    pub models: Vec<ModelSpec>,
    pub grid: GridSettings,
}

fn bad(field: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("config field `{field}`: {err}"))
}

fn parse_leakage(s: &str) -> Result<LeakageMode, CliError> {
    match s.trim().to_ascii_uppercase().as_str() {
        "GLOBAL" => Ok(LeakageMode::Global),
        "PER_FOLD" => Ok(LeakageMode::PerFold),
        other => Err(bad(
            "leakage",
            format!("unknown mode `{other}`, expected GLOBAL or PER_FOLD"),
        )),
    }
}

fn svm_spec(raw: &RawSvm, seed: u64) -> Result<ModelSpec, CliError> {
    let defaults = SvmParams::default();
    let gamma = raw.gamma.unwrap_or(match defaults.kernel {
        Kernel::Rbf { gamma } => gamma,
        Kernel::Linear => 0.0,
    });
    let kernel = match raw.kernel.as_deref() {
        None => Kernel::Rbf { gamma },
        Some(k) => match k.trim().to_ascii_lowercase().as_str() {
            "rbf" => Kernel::Rbf { gamma },
            "linear" => Kernel::Linear,
            other => {
                return Err(bad(
                    "models.svm.kernel",
                    format!("unknown kernel `{other}`, expected rbf or linear"),
                ))
            }
        },
    };
    Ok(ModelSpec {
        variant: ModelVariant::Svm(SvmParams {
            c: raw.c.unwrap_or(defaults.c),
            kernel,
            standardize: raw.standardize.unwrap_or(defaults.standardize),
            platt_calibrate: raw.platt.unwrap_or(defaults.platt_calibrate),
        }),
        seed,
    })
}

/// Expands `[models]` into concrete specs, one per configured family.
pub fn build_model_specs(
    raw: &RawModels,
    seed: u64,
) -> Result<(Vec<String>, Vec<ModelSpec>), CliError> {
    let families: Vec<String> = raw
        .families
        .clone()
        .unwrap_or_else(|| ALL_FAMILIES.iter().map(|s| s.to_string()).collect());
    if families.is_empty() {
        return Err(bad("models.families", "at least one family is required"));
    }
    let mut specs = Vec::with_capacity(families.len());
    for family in &families {
        let spec = match family.as_str() {
            "svm" => svm_spec(&raw.svm.clone().unwrap_or_default(), seed)?,
            "naive_bayes" => ModelSpec {
                variant: ModelVariant::NaiveBayes(NbParams {
                    kernel_density: raw
                        .naive_bayes
                        .as_ref()
                        .and_then(|n| n.kernel_density)
                        .unwrap_or(NbParams::default().kernel_density),
                }),
                seed,
            },
            "logistic" => ModelSpec {
                variant: ModelVariant::Logistic(LogisticParams {
                    ridge: raw
                        .logistic
                        .as_ref()
                        .and_then(|l| l.ridge)
                        .unwrap_or(LogisticParams::default().ridge),
                }),
                seed,
            },
            "tree" => {
                let defaults = TreeParams::default();
                let t = raw.tree.clone().unwrap_or_default();
                ModelSpec {
                    variant: ModelVariant::Tree(TreeParams {
                        confidence: t.confidence.unwrap_or(defaults.confidence),
                        min_leaf: t.min_leaf.unwrap_or(defaults.min_leaf),
                    }),
                    seed,
                }
            }
            other => {
                return Err(bad(
                    "models.families",
                    format!(
                        "unknown family `{other}`, expected one of {}",
                        ALL_FAMILIES.join(", ")
                    ),
                ))
            }
        };
        specs.push(spec);
    }
    Ok((families, specs))
}

/// Parses a standalone `[models]` TOML file, as written by `grid`.
pub fn read_models_file(path: &Path, seed: u64) -> Result<(Vec<String>, Vec<ModelSpec>), CliError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct ModelsFile {
        models: RawModels,
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let parsed: ModelsFile =
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    build_model_specs(&parsed.models, seed)
}

fn grid_settings(raw: &RawGrid) -> Result<GridSettings, CliError> {
    let objective = match &raw.objective {
        None => GridObjective::Auc,
        Some(s) => GridObjective::from_str(s).map_err(|e| bad("grid.objective", e))?,
    };
    let settings = GridSettings {
        objective,
        k_top: raw.k_top.unwrap_or(1000),
        svm_c: raw.svm_c.clone().unwrap_or_else(|| vec![0.25, 0.9375, 4.0]),
        svm_gamma: raw
            .svm_gamma
            .clone()
            .unwrap_or_else(|| vec![1e-5, 1.0124e-4, 1e-3]),
        nb_kernel_density: raw
            .nb_kernel_density
            .clone()
            .unwrap_or_else(|| vec![true, false]),
        logistic_ridge: raw
            .logistic_ridge
            .clone()
            .unwrap_or_else(|| vec![1e-12, 1e-8, 1e-4, 1.0]),
        tree_confidence: raw
            .tree_confidence
            .clone()
            .unwrap_or_else(|| vec![0.1, 0.25, 0.5]),
        tree_min_leaf: raw.tree_min_leaf.clone().unwrap_or_else(|| vec![2, 5]),
    };
    for (field, empty) in [
        ("grid.svm_c", settings.svm_c.is_empty()),
        ("grid.svm_gamma", settings.svm_gamma.is_empty()),
        (
            "grid.nb_kernel_density",
            settings.nb_kernel_density.is_empty(),
        ),
        ("grid.logistic_ridge", settings.logistic_ridge.is_empty()),
        ("grid.tree_confidence", settings.tree_confidence.is_empty()),
        ("grid.tree_min_leaf", settings.tree_min_leaf.is_empty()),
    ] {
        if empty {
            return Err(bad(field, "value list must not be empty"));
        }
    }
    Ok(settings)
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let raw: RawConfig = toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));

        let seed = raw.seed.unwrap_or(0);
        let visit_policy = match &raw.visit_policy {
            None => VisitPolicy::Last,
            Some(s) => VisitPolicy::from_str(s).map_err(|e| bad("visit_policy", e))?,
        };
        let feature_set = FeatureSetSpec::parse(raw.feature_set.as_deref().unwrap_or("compound"))
            .map_err(|e| bad("feature_set", e))?;
        let ranking = match &raw.ranking {
            None => RankingMethod::InfoGain,
            Some(s) => RankingMethod::from_str(s).map_err(|e| bad("ranking", e))?,
        };
        let leakage = match &raw.leakage {
            None => LeakageMode::Global,
            Some(s) => parse_leakage(s)?,
        };
        let weighting = match &raw.weighting {
            None => Weighting::Count,
            Some(s) => Weighting::from_str(s).map_err(|e| bad("weighting", e))?,
        };
        let curve_ks = raw.curve_ks.unwrap_or_else(default_curve_ks);
        if curve_ks.is_empty() {
            return Err(bad("curve_ks", "at least one K is required"));
        }
        if curve_ks.contains(&0) {
            return Err(bad("curve_ks", "K values must be >= 1"));
        }
        if curve_ks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("curve_ks", "K values must be strictly ascending"));
        }
        let k_top = raw.k_top.unwrap_or(200);
        if k_top == 0 {
            return Err(bad("k_top", "must be >= 1"));
        }
        let (families, models) = build_model_specs(&raw.models.unwrap_or_default(), seed)?;
        let grid = grid_settings(&raw.grid.unwrap_or_default())?;

        Ok(Self {
            train_manifest: base.join(&raw.train_manifest),
            validation_manifest: raw.validation_manifest.map(|p| base.join(p)),
            seed,
            out_dir: raw.out_dir.unwrap_or_else(|| PathBuf::from("out")),
            visit_policy,
            include_investigator: raw.include_investigator.unwrap_or(false),
            feature_set,
            k_top,
            ranking,
            leakage,
            weighting,
            folds: raw.folds.unwrap_or(10),
            curve_ks,
            baseline: raw.baseline.unwrap_or(true),
            lpo: raw.lpo.unwrap_or(false),
            families,
            models,
            grid,
        })
    }
}
