//! Evaluation: stratified k-fold assignment, confusion-matrix metrics with
//! support-weighted averaging, ROC/AUC, cross-validated pipelines, and grid
//! search against a holdout validation corpus.

pub mod cv;
pub mod grid;
pub mod roc;

pub use cv::{
    accuracy_curve, cross_validate, cross_validate_baseline, leave_pair_out_auc, select_vocabulary,
    Curve, CvConfig, CvOutcome,
};
pub use grid::{grid_search, GridConfig, GridObjective, GridOutcome};
pub use roc::{auc, roc_curve};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::classify::TrainError;
use crate::features::FeatureError;
use crate::ingest::Label;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("k-fold cross-validation needs k >= 2, got {0}")]
    KTooSmall(usize),
    #[error("need samples from both classes")]
    SingleClass,
    #[error("empty corpus")]
    Empty,
    #[error("model grid is empty")]
    EmptyGrid,
    #[error("participants appear in both train and validation: {}", .0.join(", "))]
    ParticipantOverlap(Vec<String>),
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

/// Fold index per sample. Folds partition the samples; within each class
/// the fold sizes differ by at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    pub fold: Vec<usize>,
    pub k: usize,
    pub seed: u64,
}

impl FoldAssignment {
    pub fn test_indices(&self, f: usize) -> Vec<usize> {
        (0..self.fold.len())
            .filter(|&i| self.fold[i] == f)
            .collect()
    }

    pub fn train_indices(&self, f: usize) -> Vec<usize> {
        (0..self.fold.len())
            .filter(|&i| self.fold[i] != f)
            .collect()
    }
}

/// Seeded per-class shuffle, then round-robin assignment. If a class has
/// fewer than `k` samples, k is reduced to that count and the reduction is
/// reported in the returned warning.
pub fn stratified_kfold(
    labels: &[Label],
    k: usize,
    seed: u64,
) -> Result<(FoldAssignment, Option<String>), EvalError> {
    if k < 2 {
        return Err(EvalError::KTooSmall(k));
    }
    let minority = [Label::Mci, Label::Control]
        .iter()
        .map(|&c| labels.iter().filter(|&&l| l == c).count())
        .min()
        .unwrap_or(0);
    if minority == 0 {
        return Err(EvalError::SingleClass);
    }
    let (k_eff, warning) = if minority < k {
        if minority < 2 {
            return Err(EvalError::KTooSmall(minority));
        }
        (
            minority,
            Some(format!(
                "reduced folds from {k} to {minority} (minority class size)"
            )),
        )
    } else {
        (k, None)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold = vec![0usize; labels.len()];
    for class in [Label::Mci, Label::Control] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        members.shuffle(&mut rng);
        for (pos, &i) in members.iter().enumerate() {
            fold[i] = pos % k_eff;
        }
    }
    Ok((
        FoldAssignment {
            fold,
            k: k_eff,
            seed,
        },
        warning,
    ))
}

/// Two-class confusion with MCI as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn from_predictions(predicted: &[Label], actual: &[Label]) -> Self {
        let mut cm = Self::default();
        for (&p, &a) in predicted.iter().zip(actual) {
            match (a, p) {
                (Label::Mci, Label::Mci) => cm.tp += 1,
                (Label::Mci, Label::Control) => cm.fn_ += 1,
                (Label::Control, Label::Mci) => cm.fp += 1,
                (Label::Control, Label::Control) => cm.tn += 1,
            }
        }
        cm
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn accuracy(&self) -> f64 {
        (self.tp + self.tn) as f64 / self.total() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn class_metrics(tp: u64, fp: u64, fn_: u64) -> ClassMetrics {
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    ClassMetrics {
        precision,
        recall,
        f1,
        support: tp + fn_,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f1: f64,
    pub auc: f64,
    pub accuracy: f64,
    pub mci: ClassMetrics,
    pub control: ClassMetrics,
    pub fold_pooled: bool,
}

/// Per-class precision/recall/F1 (0/0 defined as 0) averaged with weights
/// proportional to class support. Requires a nonempty confusion.
pub fn weighted_prf(cm: &ConfusionMatrix, auc: f64, fold_pooled: bool) -> MetricsReport {
    let mci = class_metrics(cm.tp, cm.fp, cm.fn_);
    let control = class_metrics(cm.tn, cm.fn_, cm.fp);
    let total = cm.total() as f64;
    let (wm, wc) = (mci.support as f64 / total, control.support as f64 / total);
    MetricsReport {
        weighted_precision: wm * mci.precision + wc * control.precision,
        weighted_recall: wm * mci.recall + wc * control.recall,
        weighted_f1: wm * mci.f1 + wc * control.f1,
        auc,
        accuracy: cm.accuracy(),
        mci,
        control,
        fold_pooled,
    }
}
