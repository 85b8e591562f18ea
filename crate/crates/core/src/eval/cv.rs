//! Cross-validated pipelines. Skip-gram runs either select features once on
//! the whole corpus (GLOBAL, the published protocol) or per training fold
//! (PER_FOLD, leakage-safe); the baseline run always fits its reference
//! bigram model and imputation means on the training fold only. Test-fold
//! scores are pooled into one ROC and one confusion at threshold 0.5.

use super::roc;
use super::{stratified_kfold, ConfusionMatrix, EvalError, FoldAssignment, MetricsReport};
use crate::baseline::{
    baseline_vector, impute, impute_means, pos_tag, PosBigramModel, PosTag, BASELINE_FEATURE_NAMES,
};
use crate::classify::{predict_score, train, ModelSpec, ScoreKind};
use crate::features::{
    build_vocabulary_from_counts, make_dataset, rank_features, select_top, vectorize,
    CountedCorpus, Dataset, LeakageMode, RankingMethod, SparseVector, Vocabulary, Weighting,
};
use crate::ingest::{Corpus, Label};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvConfig {
    pub folds: usize,
    pub k_top: usize,
    pub ranking: RankingMethod,
    pub leakage: LeakageMode,
    pub weighting: Weighting,
    pub seed: u64,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            folds: 10,
            k_top: 200,
            ranking: RankingMethod::InfoGain,
            leakage: LeakageMode::Global,
            weighting: Weighting::Count,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome {
    /// Pooled score values in sample order.
    pub scores: Vec<f64>,
    pub kind: ScoreKind,
    pub predicted: Vec<Label>,
    pub report: MetricsReport,
    /// AUC within each test fold; None when a fold holds one class only.
    pub per_fold_auc: Vec<Option<f64>>,
    pub mean_fold_auc: Option<f64>,
    pub folds: FoldAssignment,
    pub warnings: Vec<String>,
}

/// Builds a ranked vocabulary over `counted` and keeps the top `k_top` keys.
pub fn select_vocabulary(
    counted: &CountedCorpus,
    ranking: RankingMethod,
    k_top: usize,
) -> Result<Vocabulary, EvalError> {
    let mut vocab = build_vocabulary_from_counts(counted)?;
    let ranked = rank_features(&mut vocab, &counted.counts, Some(&counted.labels), ranking)?;
    Ok(select_top(&vocab, &ranked, k_top))
}

/// (pooled scores, predicted labels, score kind, per-fold AUCs).
type Pooled = (Vec<f64>, Vec<Label>, ScoreKind, Vec<Option<f64>>);

/// Runs the fold loop: builds per-fold datasets, trains, scores the test
/// partition, and pools everything in original sample order.
fn pooled_cv<F>(
    labels: &[Label],
    folds: &FoldAssignment,
    spec: &ModelSpec,
    mut fold_datasets: F,
) -> Result<Pooled, EvalError>
where
    F: FnMut(&[usize], &[usize]) -> Result<(Dataset, Dataset), EvalError>,
{
    let n = labels.len();
    let mut scores = vec![f64::NAN; n];
    let mut predicted = vec![Label::Control; n];
    let mut kind = None;
    let mut per_fold_auc = Vec::with_capacity(folds.k);
    for f in 0..folds.k {
        let train_idx = folds.train_indices(f);
        let test_idx = folds.test_indices(f);
        let (train_ds, test_ds) = fold_datasets(&train_idx, &test_idx)?;
        let model = train(spec, &train_ds)?;
        let mut fold_scores = Vec::with_capacity(test_idx.len());
        let mut fold_labels = Vec::with_capacity(test_idx.len());
        for (row, &orig) in test_idx.iter().enumerate() {
            let score = predict_score(&model, &test_ds.vectors[row])?;
            scores[orig] = score.value;
            predicted[orig] = score.to_label(0.5);
            kind.get_or_insert(score.kind);
            fold_scores.push(score.value);
            fold_labels.push(labels[orig]);
        }
        per_fold_auc.push(roc::auc(&fold_scores, &fold_labels).ok());
    }
    Ok((
        scores,
        predicted,
        kind.expect("k >= 2 folds scored"),
        per_fold_auc,
    ))
}

fn outcome_from_pooled(
    labels: &[Label],
    folds: FoldAssignment,
    warnings: Vec<String>,
    pooled: Pooled,
) -> Result<CvOutcome, EvalError> {
    let (scores, predicted, kind, per_fold_auc) = pooled;
    let pooled_auc = roc::auc(&scores, labels)?;
    let cm = ConfusionMatrix::from_predictions(&predicted, labels);
    let report = super::weighted_prf(&cm, pooled_auc, true);
    let fold_aucs: Vec<f64> = per_fold_auc.iter().flatten().copied().collect();
    let mean_fold_auc = if fold_aucs.is_empty() {
        None
    } else {
        Some(fold_aucs.iter().sum::<f64>() / fold_aucs.len() as f64)
    };
    Ok(CvOutcome {
        scores,
        kind,
        predicted,
        report,
        per_fold_auc,
        mean_fold_auc,
        folds,
        warnings,
    })
}

pub fn cross_validate(
    counted: &CountedCorpus,
    spec: &ModelSpec,
    cfg: &CvConfig,
) -> Result<CvOutcome, EvalError> {
    if counted.is_empty() {
        return Err(EvalError::Empty);
    }
    let (folds, fold_warning) = stratified_kfold(&counted.labels, cfg.folds, cfg.seed)?;
    let mut warnings: Vec<String> = fold_warning.into_iter().collect();

    let global_vocab = match cfg.leakage {
        LeakageMode::Global => {
            let vocab = select_vocabulary(counted, cfg.ranking, cfg.k_top)?;
            if vocab.len() < cfg.k_top {
                warnings.push(format!(
                    "vocabulary holds {} features, fewer than the requested top {}",
                    vocab.len(),
                    cfg.k_top
                ));
            }
            Some(vocab)
        }
        LeakageMode::PerFold => None,
    };

    let mut truncated = false;
    let pooled = pooled_cv(&counted.labels, &folds, spec, |train_idx, test_idx| {
        let train_counts = counted.subset(train_idx);
        let test_counts = counted.subset(test_idx);
        let vocab = match &global_vocab {
            Some(v) => v.clone(),
            None => {
                let v = select_vocabulary(&train_counts, cfg.ranking, cfg.k_top)?;
                if v.len() < cfg.k_top {
                    truncated = true;
                }
                v
            }
        };
        Ok((
            make_dataset(&train_counts, &vocab, cfg.weighting),
            make_dataset(&test_counts, &vocab, cfg.weighting),
        ))
    })?;
    if truncated {
        warnings.push(format!(
            "some training folds hold fewer than the requested top {} features",
            cfg.k_top
        ));
    }
    outcome_from_pooled(&counted.labels, folds, warnings, pooled)
}

/// Accuracy-versus-K series from repeated cross-validation.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub points: Vec<(usize, f64)>,
    pub note: Option<String>,
}

/// Pooled-CV accuracy at each requested K. K values beyond the full-corpus
/// vocabulary size are dropped; the note says so.
pub fn accuracy_curve(
    counted: &CountedCorpus,
    spec: &ModelSpec,
    cfg: &CvConfig,
    ks: &[usize],
) -> Result<Curve, EvalError> {
    let vocab_size = build_vocabulary_from_counts(counted)?.len();
    let (usable, dropped): (Vec<usize>, Vec<usize>) = ks.iter().partition(|&&k| k <= vocab_size);
    let note = (!dropped.is_empty()).then(|| {
        format!("curve truncated at vocabulary size {vocab_size}; dropped K values {dropped:?}")
    });
    let mut points = Vec::with_capacity(usable.len());
    for k in usable {
        let run_cfg = CvConfig { k_top: k, ..*cfg };
        let outcome = cross_validate(counted, spec, &run_cfg)?;
        points.push((k, outcome.report.accuracy));
    }
    Ok(Curve { points, note })
}

fn dense_row(values: &[f64]) -> SparseVector {
    let entries = values
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v != 0.0)
        .map(|(i, &v)| (i, v))
        .collect();
    SparseVector::new(values.len(), entries).expect("baseline features are finite")
}

/// Cross-validates the seven-feature linguistic baseline. The reference POS
/// bigram model is fit on the control samples of each training fold, and
/// missing features are imputed with training-fold means. `cfg.k_top`,
/// `cfg.ranking`, and `cfg.leakage` do not apply here.
pub fn cross_validate_baseline(
    corpus: &Corpus,
    spec: &ModelSpec,
    cfg: &CvConfig,
) -> Result<CvOutcome, EvalError> {
    if corpus.samples.is_empty() {
        return Err(EvalError::Empty);
    }
    let labels = corpus.labels();
    let (folds, fold_warning) = stratified_kfold(&labels, cfg.folds, cfg.seed)?;
    let warnings: Vec<String> = fold_warning.into_iter().collect();

    let names: Vec<String> = BASELINE_FEATURE_NAMES
        .iter()
        .map(|s| s.to_string())
        .collect();
    let pooled = pooled_cv(&labels, &folds, spec, |train_idx, test_idx| {
        let control_seqs: Vec<Vec<PosTag>> = train_idx
            .iter()
            .filter(|&&i| corpus.samples[i].label == Label::Control)
            .flat_map(|&i| pos_tag(&corpus.samples[i]))
            .collect();
        let bigram = PosBigramModel::fit("control-train-fold", &control_seqs);
        let vector_at = |i: usize| baseline_vector(&corpus.samples[i], &bigram);
        let train_vectors: Vec<_> = train_idx.iter().map(|&i| vector_at(i)).collect();
        let means = impute_means(&train_vectors);
        let to_dataset = |idx: &[usize], vectors: &[crate::baseline::BaselineVector]| Dataset {
            vectors: vectors
                .iter()
                .map(|v| dense_row(&impute(v, &means)))
                .collect(),
            labels: idx.iter().map(|&i| labels[i]).collect(),
            participant_ids: idx
                .iter()
                .map(|&i| corpus.samples[i].participant_id.clone())
                .collect(),
            dim: names.len(),
            feature_names: names.clone(),
        };
        let test_vectors: Vec<_> = test_idx.iter().map(|&i| vector_at(i)).collect();
        Ok((
            to_dataset(train_idx, &train_vectors),
            to_dataset(test_idx, &test_vectors),
        ))
    })?;
    outcome_from_pooled(&labels, folds, warnings, pooled)
}

/// For every (MCI, CONTROL) pair: hold both out, run feature selection and
/// training on the rest, score the pair. Returns the fraction of pairs
/// ordered correctly, ties counting one half. Uses `cfg.k_top`,
/// `cfg.ranking`, and `cfg.weighting`; selection is per-run by construction.
pub fn leave_pair_out_auc(
    counted: &CountedCorpus,
    spec: &ModelSpec,
    cfg: &CvConfig,
) -> Result<f64, EvalError> {
    let pos: Vec<usize> = (0..counted.len())
        .filter(|&i| counted.labels[i] == Label::Mci)
        .collect();
    let neg: Vec<usize> = (0..counted.len())
        .filter(|&i| counted.labels[i] == Label::Control)
        .collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(EvalError::SingleClass);
    }
    let mut num = 0u64;
    for &i in &pos {
        for &j in &neg {
            let rest: Vec<usize> = (0..counted.len()).filter(|&t| t != i && t != j).collect();
            let train_counts = counted.subset(&rest);
            let vocab = select_vocabulary(&train_counts, cfg.ranking, cfg.k_top)?;
            let train_ds = make_dataset(&train_counts, &vocab, cfg.weighting);
            let model = train(spec, &train_ds)?;
            let si = predict_score(
                &model,
                &vectorize(&counted.counts[i], &vocab, cfg.weighting),
            )?;
            let sj = predict_score(
                &model,
                &vectorize(&counted.counts[j], &vocab, cfg.weighting),
            )?;
            num += match si.value.total_cmp(&sj.value) {
                std::cmp::Ordering::Greater => 2,
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Less => 0,
            };
        }
    }
    Ok(num as f64 / (2 * pos.len() * neg.len()) as f64)
}
