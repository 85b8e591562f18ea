//! Hyperparameter grid search: train each candidate on the train corpus
//! (top-K selection on the train corpus only) and rank candidates by an
//! objective measured on a participant-disjoint validation corpus. Exact
//! ties keep the earliest grid entry.

use std::collections::BTreeSet;
use std::str::FromStr;

use super::cv::select_vocabulary;
use super::{roc, ConfusionMatrix, EvalError};
use crate::classify::{predict_score, train, ModelSpec};
use crate::features::{make_dataset, CountedCorpus, RankingMethod, Weighting};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridObjective {
    Auc,
    F1,
}

impl FromStr for GridObjective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "AUC" => Ok(Self::Auc),
            "F1" => Ok(Self::F1),
            other => Err(format!("unknown objective {other:?} (expected AUC or F1)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub k_top: usize,
    pub ranking: RankingMethod,
    pub weighting: Weighting,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            k_top: 1000,
            ranking: RankingMethod::InfoGain,
            weighting: Weighting::Count,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOutcome {
    pub best: ModelSpec,
    /// Objective value per grid entry, in grid order.
    pub evaluated: Vec<(ModelSpec, f64)>,
}

pub fn grid_search(
    train_corpus: &CountedCorpus,
    validation: &CountedCorpus,
    grid: &[ModelSpec],
    objective: GridObjective,
    cfg: &GridConfig,
) -> Result<GridOutcome, EvalError> {
    if grid.is_empty() {
        return Err(EvalError::EmptyGrid);
    }
    let train_pids: BTreeSet<&String> = train_corpus.participant_ids.iter().collect();
    let shared: Vec<String> = validation
        .participant_ids
        .iter()
        .filter(|p| train_pids.contains(p))
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if !shared.is_empty() {
        return Err(EvalError::ParticipantOverlap(shared));
    }

    let vocab = select_vocabulary(train_corpus, cfg.ranking, cfg.k_top)?;
    let train_ds = make_dataset(train_corpus, &vocab, cfg.weighting);
    let valid_ds = make_dataset(validation, &vocab, cfg.weighting);

    let mut evaluated = Vec::with_capacity(grid.len());
    let mut best: Option<(usize, f64)> = None;
    for (g, spec) in grid.iter().enumerate() {
        let model = train(spec, &train_ds)?;
        let mut scores = Vec::with_capacity(valid_ds.len());
        let mut predicted = Vec::with_capacity(valid_ds.len());
        for v in &valid_ds.vectors {
            let s = predict_score(&model, v)?;
            scores.push(s.value);
            predicted.push(s.to_label(0.5));
        }
        let value = match objective {
            GridObjective::Auc => roc::auc(&scores, &valid_ds.labels)?,
            GridObjective::F1 => {
                let cm = ConfusionMatrix::from_predictions(&predicted, &valid_ds.labels);
                super::weighted_prf(&cm, 0.0, false).weighted_f1
            }
        };
        if best.is_none_or(|(_, b)| value > b) {
            best = Some((g, value));
        }
        evaluated.push((*spec, value));
    }
    let (g, _) = best.expect("non-empty grid");
    Ok(GridOutcome {
        best: grid[g],
        evaluated,
    })
}
