//! ROC curve and AUC. The AUC sweep accumulates integer pair counts
//! (2 * concordant + ties), so it equals the Mann-Whitney statistic exactly
//! rather than up to float rounding.

use super::EvalError;
use crate::ingest::Label;

fn class_counts(labels: &[Label]) -> (u128, u128) {
    let pos = labels.iter().filter(|l| l.is_positive()).count() as u128;
    (pos, labels.len() as u128 - pos)
}

/// Indices sorted by score descending, grouped by exactly equal score.
/// Returns (delta_tp, delta_fp) per group.
fn tie_groups(scores: &[f64], labels: &[Label]) -> Vec<(u128, u128)> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut groups = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut dtp = 0u128;
        let mut dfp = 0u128;
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            if labels[order[j]].is_positive() {
                dtp += 1;
            } else {
                dfp += 1;
            }
            j += 1;
        }
        groups.push((dtp, dfp));
        i = j;
    }
    groups
}

/// Area under the ROC curve; equivalently the probability that a random
/// MCI sample outscores a random control, counting ties as one half.
pub fn auc(scores: &[f64], labels: &[Label]) -> Result<f64, EvalError> {
    let (p, n) = class_counts(labels);
    if p == 0 || n == 0 {
        return Err(EvalError::SingleClass);
    }
    let mut acc = 0u128;
    let mut tp = 0u128;
    for (dtp, dfp) in tie_groups(scores, labels) {
        acc += dfp * (2 * tp + dtp);
        tp += dtp;
    }
    Ok(acc as f64 / (2 * p * n) as f64)
}

/// Threshold-sweep ROC points from (0,0) to (1,1), one point per distinct
/// score; both coordinates are nondecreasing.
pub fn roc_curve(scores: &[f64], labels: &[Label]) -> Result<Vec<(f64, f64)>, EvalError> {
    let (p, n) = class_counts(labels);
    if p == 0 || n == 0 {
        return Err(EvalError::SingleClass);
    }
    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0u128, 0u128);
    for (dtp, dfp) in tie_groups(scores, labels) {
        tp += dtp;
        fp += dfp;
        points.push((fp as f64 / n as f64, tp as f64 / p as f64));
    }
    Ok(points)
}
