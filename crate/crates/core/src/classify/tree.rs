//! Binary decision tree with gain-ratio splits on numeric features and
//! pessimistic error pruning.
//!
//! Candidate thresholds are midpoints between consecutive distinct values;
//! a split is legal only if both sides hold at least `min_leaf` rows.
//! Zero-gain splits are allowed (each child is strictly smaller, so growth
//! terminates), which lets parity-style concepts such as XOR be learned.
//! Ties break toward the lower feature index, then the lower threshold,
//! making the grown structure invariant under strictly increasing
//! per-feature transforms. Pruning replaces a subtree with a leaf when the
//! leaf's pessimistic error estimate is within 0.1 of the subtree's.

use serde::{Deserialize, Serialize};

use super::{densify, TreeParams};
use crate::features::Dataset;
use crate::ingest::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf {
        n_pos: u32,
        n_neg: u32,
    },
    Split {
        feature: usize,
        threshold: f64,
        n_pos: u32,
        n_neg: u32,
        below: Box<Node>,
        above: Box<Node>,
    },
}

impl Node {
    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { below, above, .. } => 1 + below.depth().max(above.depth()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub params: TreeParams,
    pub dim: usize,
    pub root: Node,
}

impl TreeModel {
    /// Laplace-smoothed MCI probability at the reached leaf.
    pub fn probability(&self, x: &[f64]) -> f64 {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { n_pos, n_neg } => {
                    let n = (n_pos + n_neg) as f64;
                    return (*n_pos as f64 + 1.0) / (n + 2.0);
                }
                Node::Split {
                    feature,
                    threshold,
                    below,
                    above,
                    ..
                } => {
                    node = if x[*feature] <= *threshold {
                        below
                    } else {
                        above
                    };
                }
            }
        }
    }
}

/// Binary entropy of a (pos, neg) count pair, in bits.
fn entropy(pos: f64, neg: f64) -> f64 {
    let n = pos + neg;
    if n == 0.0 {
        return 0.0;
    }
    let mut h = 0.0;
    for c in [pos, neg] {
        if c > 0.0 {
            let p = c / n;
            h -= p * p.log2();
        }
    }
    h
}

struct Candidate {
    ratio: f64,
    feature: usize,
    threshold: f64,
}

#[allow(clippy::needless_range_loop)]
fn grow(rows: &[Vec<f64>], positive: &[bool], idx: &[usize], min_leaf: usize) -> Node {
    let n_pos = idx.iter().filter(|&&i| positive[i]).count();
    let n_neg = idx.len() - n_pos;
    let leaf = Node::Leaf {
        n_pos: n_pos as u32,
        n_neg: n_neg as u32,
    };
    if n_pos == 0 || n_neg == 0 || idx.len() < 2 * min_leaf {
        return leaf;
    }

    let dim = rows[idx[0]].len();
    let n = idx.len();
    let parent_h = entropy(n_pos as f64, n_neg as f64);
    let mut best: Option<Candidate> = None;
    for j in 0..dim {
        let mut order = idx.to_vec();
        order.sort_by(|&a, &b| rows[a][j].total_cmp(&rows[b][j]));
        let vals: Vec<f64> = order.iter().map(|&i| rows[i][j]).collect();
        let mut left_pos = 0usize;
        for t in 1..n {
            if positive[order[t - 1]] {
                left_pos += 1;
            }
            if vals[t - 1] >= vals[t] || t < min_leaf || n - t < min_leaf {
                continue;
            }
            let mut thr = (vals[t - 1] + vals[t]) / 2.0;
            // Midpoint of adjacent floats can round up to the higher value;
            // fall back to the lower one so the <= partition stays exact.
            if thr >= vals[t] {
                thr = vals[t - 1];
            }
            let (lp, ln) = (left_pos as f64, (t - left_pos) as f64);
            let (rp, rn) = (n_pos as f64 - lp, n_neg as f64 - ln);
            let (wl, wr) = (t as f64 / n as f64, (n - t) as f64 / n as f64);
            let gain = parent_h - wl * entropy(lp, ln) - wr * entropy(rp, rn);
            let split_info = -wl * wl.log2() - wr * wr.log2();
            let ratio = gain / split_info;
            if best
                .as_ref()
                .is_none_or(|b| ratio.total_cmp(&b.ratio).is_gt())
            {
                best = Some(Candidate {
                    ratio,
                    feature: j,
                    threshold: thr,
                });
            }
        }
    }
    let Some(c) = best else { return leaf };

    let (below_idx, above_idx): (Vec<usize>, Vec<usize>) = idx
        .iter()
        .partition(|&&i| rows[i][c.feature] <= c.threshold);
    Node::Split {
        feature: c.feature,
        threshold: c.threshold,
        n_pos: n_pos as u32,
        n_neg: n_neg as u32,
        below: Box::new(grow(rows, positive, &below_idx, min_leaf)),
        above: Box::new(grow(rows, positive, &above_idx, min_leaf)),
    }
}

/// Expected extra errors on top of the observed count `e` out of `n`,
/// at confidence `cf` (upper tail of the binomial, normal approximation
/// for e >= 1, exact tail for e = 0, interpolated between).
fn add_errs(n: f64, e: f64, cf: f64) -> f64 {
    if e < 1.0 {
        let base = n * (1.0 - cf.powf(1.0 / n));
        if e == 0.0 {
            return base;
        }
        return base + e * (add_errs(n, 1.0, cf) - base);
    }
    if e + 0.5 >= n {
        return (n - e).max(0.0);
    }
    let z = inverse_normal_cdf(1.0 - cf);
    let f = (e + 0.5) / n;
    let r = (f + z * z / (2.0 * n) + z * (f / n - f * f / n + z * z / (4.0 * n * n)).sqrt())
        / (1.0 + z * z / n);
    r * n - e
}

/// Acklam's rational approximation to the standard normal quantile,
/// |relative error| < 1.15e-9 over (0, 1).
fn inverse_normal_cdf(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;
    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    }
}

/// Returns the pruned node and its pessimistic error estimate.
fn prune(node: Node, cf: f64) -> (Node, f64) {
    match node {
        Node::Leaf { n_pos, n_neg } => {
            let n = (n_pos + n_neg) as f64;
            let e = n_pos.min(n_neg) as f64;
            let err = e + add_errs(n, e, cf);
            (Node::Leaf { n_pos, n_neg }, err)
        }
        Node::Split {
            feature,
            threshold,
            n_pos,
            n_neg,
            below,
            above,
        } => {
            let (b, eb) = prune(*below, cf);
            let (a, ea) = prune(*above, cf);
            let subtree_err = eb + ea;
            let n = (n_pos + n_neg) as f64;
            let e = n_pos.min(n_neg) as f64;
            let leaf_err = e + add_errs(n, e, cf);
            if leaf_err <= subtree_err + 0.1 {
                (Node::Leaf { n_pos, n_neg }, leaf_err)
            } else {
                (
                    Node::Split {
                        feature,
                        threshold,
                        n_pos,
                        n_neg,
                        below: Box::new(b),
                        above: Box::new(a),
                    },
                    subtree_err,
                )
            }
        }
    }
}

pub fn train(params: &TreeParams, data: &Dataset) -> TreeModel {
    let rows = densify(data);
    let positive: Vec<bool> = data.labels.iter().map(|&l| l == Label::Mci).collect();
    let idx: Vec<usize> = (0..rows.len()).collect();
    let full = grow(&rows, &positive, &idx, params.min_leaf);
    let (root, _) = prune(full, params.confidence);
    TreeModel {
        params: *params,
        dim: data.dim,
        root,
    }
}
