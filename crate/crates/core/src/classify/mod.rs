//! The four classifiers, trained from scratch on sparse datasets. Model
//! hyperparameter defaults follow the reference configuration: SVM with
//! C = 0.9375, RBF gamma = 1.0124e-4, feature standardization and Platt
//! calibration; naive Bayes with kernel-density likelihoods; logistic
//! regression with ridge 8.114737295158544e-12; C4.5-style tree with
//! confidence 0.25 and min_leaf 2.

pub mod logistic;
pub mod naive_bayes;
pub mod svm;
pub mod tree;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{Dataset, SparseVector};
use crate::ingest::Label;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("training set must contain both classes")]
    SingleClass,
    #[error("training set is empty")]
    Empty,
    #[error("non-finite feature value in sample {0}")]
    NonFinite(usize),
    #[error("invalid hyperparameter: {0}")]
    BadSpec(String),
    #[error("input dimension {got} does not match training dimension {want}")]
    DimMismatch { got: usize, want: usize },
    #[error("model deserialization: {0}")]
    Serde(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Kernel {
    Rbf { gamma: f64 },
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    pub kernel: Kernel,
    pub standardize: bool,
    pub platt_calibrate: bool,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            c: 0.9375,
            kernel: Kernel::Rbf { gamma: 1.0124e-4 },
            standardize: true,
            platt_calibrate: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NbParams {
    pub kernel_density: bool,
}

impl Default for NbParams {
    fn default() -> Self {
        Self {
            kernel_density: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub ridge: f64,
}

impl Default for LogisticParams {
    fn default() -> Self {
        Self {
            ridge: 8.114737295158544e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub confidence: f64,
    pub min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            confidence: 0.25,
            min_leaf: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModelVariant {
    Svm(SvmParams),
    NaiveBayes(NbParams),
    Logistic(LogisticParams),
    Tree(TreeParams),
}

/// A classifier choice plus its hyperparameters. The seed is carried for
/// reproducibility bookkeeping; all four trainers are deterministic given
/// the dataset order, so it never changes a result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub variant: ModelVariant,
    pub seed: u64,
}

impl ModelSpec {
    pub fn svm_default() -> Self {
        Self {
            variant: ModelVariant::Svm(SvmParams::default()),
            seed: 0,
        }
    }

    pub fn naive_bayes_default() -> Self {
        Self {
            variant: ModelVariant::NaiveBayes(NbParams::default()),
            seed: 0,
        }
    }

    pub fn logistic_default() -> Self {
        Self {
            variant: ModelVariant::Logistic(LogisticParams::default()),
            seed: 0,
        }
    }

    pub fn tree_default() -> Self {
        Self {
            variant: ModelVariant::Tree(TreeParams::default()),
            seed: 0,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self.variant {
            ModelVariant::Svm(_) => "svm",
            ModelVariant::NaiveBayes(_) => "naive_bayes",
            ModelVariant::Logistic(_) => "logistic",
            ModelVariant::Tree(_) => "tree",
        }
    }

    pub fn validate(&self) -> Result<(), TrainError> {
        match self.variant {
            ModelVariant::Svm(p) => {
                if p.c <= 0.0 || p.c.is_nan() {
                    return Err(TrainError::BadSpec(format!("C must be > 0, got {}", p.c)));
                }
                if let Kernel::Rbf { gamma } = p.kernel {
                    if gamma <= 0.0 || gamma.is_nan() {
                        return Err(TrainError::BadSpec(format!(
                            "gamma must be > 0, got {gamma}"
                        )));
                    }
                }
            }
            ModelVariant::Logistic(p) => {
                if p.ridge < 0.0 || p.ridge.is_nan() {
                    return Err(TrainError::BadSpec(format!(
                        "ridge must be >= 0, got {}",
                        p.ridge
                    )));
                }
            }
            ModelVariant::Tree(p) => {
                if !p.confidence.is_finite() || p.confidence <= 0.0 || p.confidence >= 1.0 {
                    return Err(TrainError::BadSpec(format!(
                        "confidence must be in (0,1), got {}",
                        p.confidence
                    )));
                }
                if p.min_leaf < 1 {
                    return Err(TrainError::BadSpec("min_leaf must be >= 1".to_string()));
                }
            }
            ModelVariant::NaiveBayes(_) => {}
        }
        Ok(())
    }
}

/// What a score means; decision values threshold at 0, probabilities at the
/// caller's threshold (default 0.5). Positive always points at MCI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScoreKind {
    Probability,
    DecisionValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub value: f64,
    pub kind: ScoreKind,
}

impl Score {
    pub fn probability(value: f64) -> Self {
        Self {
            value,
            kind: ScoreKind::Probability,
        }
    }

    pub fn decision(value: f64) -> Self {
        Self {
            value,
            kind: ScoreKind::DecisionValue,
        }
    }

    /// Label at a probability threshold; exact ties go to MCI.
    pub fn to_label(self, threshold: f64) -> Label {
        let mci = match self.kind {
            ScoreKind::Probability => self.value >= threshold,
            ScoreKind::DecisionValue => self.value >= 0.0,
        };
        if mci {
            Label::Mci
        } else {
            Label::Control
        }
    }
}

/// A trained classifier of any family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TrainedModel {
    Svm(svm::SvmModel),
    NaiveBayes(naive_bayes::NbModel),
    Logistic(logistic::LogisticModel),
    Tree(tree::TreeModel),
}

pub(crate) fn densify(data: &Dataset) -> Vec<Vec<f64>> {
    data.vectors.iter().map(SparseVector::to_dense).collect()
}

/// +1 for MCI, -1 for CONTROL.
pub(crate) fn y_pm(label: Label) -> f64 {
    if label.is_positive() {
        1.0
    } else {
        -1.0
    }
}

pub fn train(spec: &ModelSpec, data: &Dataset) -> Result<TrainedModel, TrainError> {
    spec.validate()?;
    if data.is_empty() {
        return Err(TrainError::Empty);
    }
    let pos = data.labels.iter().filter(|l| l.is_positive()).count();
    if pos == 0 || pos == data.len() {
        return Err(TrainError::SingleClass);
    }
    for (i, v) in data.vectors.iter().enumerate() {
        if v.entries().iter().any(|&(_, x)| !x.is_finite()) {
            return Err(TrainError::NonFinite(i));
        }
    }
    Ok(match spec.variant {
        ModelVariant::Svm(p) => TrainedModel::Svm(svm::train(&p, data)),
        ModelVariant::NaiveBayes(p) => TrainedModel::NaiveBayes(naive_bayes::train(&p, data)),
        ModelVariant::Logistic(p) => TrainedModel::Logistic(logistic::train(&p, data)),
        ModelVariant::Tree(p) => TrainedModel::Tree(tree::train(&p, data)),
    })
}

pub fn predict_score(model: &TrainedModel, x: &SparseVector) -> Result<Score, TrainError> {
    let want = match model {
        TrainedModel::Svm(m) => m.dim,
        TrainedModel::NaiveBayes(m) => m.dim,
        TrainedModel::Logistic(m) => m.dim,
        TrainedModel::Tree(m) => m.dim,
    };
    if x.dim() != want {
        return Err(TrainError::DimMismatch { got: x.dim(), want });
    }
    let dense = x.to_dense();
    Ok(match model {
        TrainedModel::Svm(m) => m.score(&dense),
        TrainedModel::NaiveBayes(m) => Score::probability(m.posteriors(&dense).0),
        TrainedModel::Logistic(m) => Score::probability(m.probability(&dense)),
        TrainedModel::Tree(m) => Score::probability(m.probability(&dense)),
    })
}

pub fn predict_label(
    model: &TrainedModel,
    x: &SparseVector,
    threshold: f64,
) -> Result<Label, TrainError> {
    Ok(predict_score(model, x)?.to_label(threshold))
}

/// Serializes a model as structured text. Loading reproduces bit-identical
/// predictions: floats survive the round trip exactly.
pub fn save_model(model: &TrainedModel) -> String {
    serde_json::to_string_pretty(model).expect("model serializes")
}

pub fn load_model(text: &str) -> Result<TrainedModel, TrainError> {
    serde_json::from_str(text).map_err(|e| TrainError::Serde(e.to_string()))
}
