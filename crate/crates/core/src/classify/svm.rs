//! Soft-margin SVM trained by sequential minimal optimization.
//!
//! Working pairs are the maximal KKT violators (the b_up/b_low pair), which
//! also maximizes |E_i - E_j| among eligible pairs; iteration stops when
//! b_low <= b_up + 2*tol with tol = 1e-3. When rounding strands the maximal
//! pair (a sliver alpha pinned near a box corner), other violating partners
//! are tried before declaring convergence. The pairwise update preserves
//! sum(alpha_i * y_i) = 0 up to rounding. Optional per-feature
//! standardization is fit on training data only; optional Platt calibration
//! fits a sigmoid on training decision values with smoothed targets.

use serde::{Deserialize, Serialize};

use super::{densify, y_pm, Kernel, Score, SvmParams};
use crate::features::Dataset;

const KKT_TOL: f64 = 1e-3;
const MAX_ITER: usize = 200_000;

/// Per-feature affine map to zero mean, unit variance (training statistics).
/// Constant features keep scale 1 so they map to zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit(rows: &[Vec<f64>]) -> Self {
        let n = rows.len().max(1);
        let dim = rows.first().map_or(0, Vec::len);
        let mut mean = vec![0.0; dim];
        for r in rows {
            for (m, &v) in mean.iter_mut().zip(r) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= n as f64;
        }
        let mut scale = vec![0.0; dim];
        for r in rows {
            for j in 0..dim {
                let d = r[j] - mean[j];
                scale[j] += d * d;
            }
        }
        for s in &mut scale {
            *s = (*s / n as f64).sqrt();
            if *s == 0.0 {
                *s = 1.0;
            }
        }
        Self { mean, scale }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.mean)
            .zip(&self.scale)
            .map(|((&v, &m), &s)| (v - m) / s)
            .collect()
    }
}

pub(crate) fn kernel_eval(kernel: Kernel, a: &[f64], b: &[f64]) -> f64 {
    match kernel {
        Kernel::Linear => a.iter().zip(b).map(|(x, y)| x * y).sum(),
        Kernel::Rbf { gamma } => {
            let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            (-gamma * sq).exp()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub params: SvmParams,
    pub dim: usize,
    pub standardizer: Option<Standardizer>,
    /// Training indices with nonzero dual coefficient.
    pub support_idx: Vec<usize>,
    /// Standardized support vectors, parallel to `support_idx`.
    pub support_x: Vec<Vec<f64>>,
    /// alpha_i * y_i per support vector.
    pub support_alpha_y: Vec<f64>,
    /// Full dual vector over the training set, for diagnostics.
    pub alpha: Vec<f64>,
    pub bias: f64,
    /// Platt sigmoid (A, B): P(MCI | d) = 1 / (1 + exp(A*d + B)).
    pub platt: Option<(f64, f64)>,
}

impl SvmModel {
    fn standardized(&self, x: &[f64]) -> Vec<f64> {
        match &self.standardizer {
            Some(s) => s.apply(x),
            None => x.to_vec(),
        }
    }

    pub fn decision_value(&self, x: &[f64]) -> f64 {
        let z = self.standardized(x);
        let mut f = self.bias;
        for (sx, ay) in self.support_x.iter().zip(&self.support_alpha_y) {
            f += ay * kernel_eval(self.params.kernel, sx, &z);
        }
        f
    }

    pub fn score(&self, x: &[f64]) -> Score {
        let d = self.decision_value(x);
        match self.platt {
            Some((a, b)) => Score::probability(stable_sigmoid_neg(a * d + b)),
            None => Score::decision(d),
        }
    }

    /// sum(alpha_i * y_i); zero within rounding at convergence.
    pub fn alpha_dot_y(&self) -> f64 {
        self.support_alpha_y.iter().sum()
    }
}

/// 1 / (1 + exp(t)) without overflow.
fn stable_sigmoid_neg(t: f64) -> f64 {
    if t >= 0.0 {
        let e = (-t).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + t.exp())
    }
}

/// One pairwise update on (i1, i2) drawn from (I_up, I_low). Returns false
/// without touching state when the feasible segment or the resulting step is
/// too small to commit; otherwise updates alpha and the cached F values.
fn pair_step(
    i1: usize,
    i2: usize,
    c: f64,
    k: &[Vec<f64>],
    y: &[f64],
    alpha: &mut [f64],
    f: &mut [f64],
) -> bool {
    let (y1, y2) = (y[i1], y[i2]);
    let (a1_old, a2_old) = (alpha[i1], alpha[i2]);
    let s = y1 * y2;
    let (lo, hi) = if s < 0.0 {
        ((a2_old - a1_old).max(0.0), (c + a2_old - a1_old).min(c))
    } else {
        ((a1_old + a2_old - c).max(0.0), (a1_old + a2_old).min(c))
    };
    if hi - lo < 1e-12 {
        return false;
    }
    let eta = k[i1][i1] + k[i2][i2] - 2.0 * k[i1][i2];
    let a2_new = if eta > 1e-12 {
        (a2_old + y2 * (f[i1] - f[i2]) / eta).clamp(lo, hi)
    } else {
        // Degenerate curvature (duplicate inputs): take the better
        // endpoint of the restricted dual objective.
        let obj = |a2: f64| {
            let a1 = a1_old + s * (a2_old - a2);
            let (f1, f2) = (f[i1] + y1, f[i2] + y2);
            let v1 = f1 - a1_old * y1 * k[i1][i1] - a2_old * y2 * k[i1][i2];
            let v2 = f2 - a1_old * y1 * k[i1][i2] - a2_old * y2 * k[i2][i2];
            a1 + a2
                - 0.5 * k[i1][i1] * a1 * a1
                - 0.5 * k[i2][i2] * a2 * a2
                - s * k[i1][i2] * a1 * a2
                - y1 * a1 * v1
                - y2 * a2 * v2
        };
        if obj(lo) >= obj(hi) {
            lo
        } else {
            hi
        }
    };
    if (a2_new - a2_old).abs() < 1e-14 {
        return false;
    }
    // Snap results within rounding of a box bound onto the bound so the
    // working-set membership tests stay exact.
    let snap = 1e-12 * c;
    let clip = |a: f64| {
        if a < snap {
            0.0
        } else if a > c - snap {
            c
        } else {
            a
        }
    };
    let a1_new = clip(a1_old + s * (a2_old - a2_new));
    let a2_new = clip(a2_new);
    if a1_new == a1_old && a2_new == a2_old {
        return false;
    }
    alpha[i1] = a1_new;
    alpha[i2] = a2_new;
    let (d1, d2) = ((a1_new - a1_old) * y1, (a2_new - a2_old) * y2);
    for i in 0..f.len() {
        f[i] += d1 * k[i1][i] + d2 * k[i2][i];
    }
    true
}

pub fn train(params: &SvmParams, data: &Dataset) -> SvmModel {
    let raw = densify(data);
    let standardizer = if params.standardize {
        Some(Standardizer::fit(&raw))
    } else {
        None
    };
    let x: Vec<Vec<f64>> = match &standardizer {
        Some(s) => raw.iter().map(|r| s.apply(r)).collect(),
        None => raw,
    };
    let y: Vec<f64> = data.labels.iter().map(|&l| y_pm(l)).collect();
    let n = x.len();
    let c = params.c;

    let k: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| kernel_eval(params.kernel, &x[i], &x[j]))
                .collect()
        })
        .collect();

    let mut alpha = vec![0.0f64; n];
    // F_i = f_i - y_i where f_i = sum_j alpha_j y_j K_ij (no bias term).
    let mut f: Vec<f64> = y.iter().map(|&yi| -yi).collect();

    let in_up = |a: f64, yi: f64| (yi > 0.0 && a < c) || (yi < 0.0 && a > 0.0);
    let in_low = |a: f64, yi: f64| (yi < 0.0 && a < c) || (yi > 0.0 && a > 0.0);

    let (mut b_up, mut b_low) = (0.0, 0.0);
    for _ in 0..MAX_ITER {
        let mut i_up = usize::MAX;
        let mut i_low = usize::MAX;
        for i in 0..n {
            if in_up(alpha[i], y[i]) && (i_up == usize::MAX || f[i] < f[i_up]) {
                i_up = i;
            }
            if in_low(alpha[i], y[i]) && (i_low == usize::MAX || f[i] > f[i_low]) {
                i_low = i;
            }
        }
        b_up = f[i_up];
        b_low = f[i_low];
        if b_low <= b_up + 2.0 * KKT_TOL {
            break;
        }

        if pair_step(i_up, i_low, c, &k, &y, &mut alpha, &mut f) {
            continue;
        }
        // The maximal pair is numerically stuck. Try the remaining violating
        // pairs, most violating first; stop only when none can move.
        let mut ups: Vec<usize> = (0..n).filter(|&j| in_up(alpha[j], y[j])).collect();
        let mut lows: Vec<usize> = (0..n).filter(|&j| in_low(alpha[j], y[j])).collect();
        ups.sort_by(|&a, &b| f[a].total_cmp(&f[b]));
        lows.sort_by(|&a, &b| f[b].total_cmp(&f[a]));
        let mut moved = false;
        'scan: for &l in &lows {
            for &u in &ups {
                if f[l] - f[u] <= 2.0 * KKT_TOL {
                    break;
                }
                if u == i_up && l == i_low {
                    continue;
                }
                if pair_step(u, l, c, &k, &y, &mut alpha, &mut f) {
                    moved = true;
                    break 'scan;
                }
            }
        }
        if !moved {
            break;
        }
    }
    let bias = -(b_up + b_low) / 2.0;

    let support_idx: Vec<usize> = (0..n).filter(|&i| alpha[i] != 0.0).collect();
    let support_x: Vec<Vec<f64>> = support_idx.iter().map(|&i| x[i].clone()).collect();
    let support_alpha_y: Vec<f64> = support_idx.iter().map(|&i| alpha[i] * y[i]).collect();

    let mut model = SvmModel {
        params: *params,
        dim: data.dim,
        standardizer,
        support_idx,
        support_x,
        support_alpha_y,
        alpha,
        bias,
        platt: None,
    };
    if params.platt_calibrate {
        let decisions: Vec<f64> = x
            .iter()
            .map(|z| {
                let mut d = model.bias;
                for (sx, ay) in model.support_x.iter().zip(&model.support_alpha_y) {
                    d += ay * kernel_eval(model.params.kernel, sx, z);
                }
                d
            })
            .collect();
        let positives: Vec<bool> = y.iter().map(|&v| v > 0.0).collect();
        model.platt = Some(fit_platt(&decisions, &positives));
    }
    model
}

/// Fits the Platt sigmoid by damped Newton on the smoothed-target
/// cross-entropy: t+ = (N+ + 1)/(N+ + 2), t- = 1/(N- + 2).
fn fit_platt(decisions: &[f64], positive: &[bool]) -> (f64, f64) {
    let n_pos = positive.iter().filter(|&&p| p).count() as f64;
    let n_neg = positive.len() as f64 - n_pos;
    let hi = (n_pos + 1.0) / (n_pos + 2.0);
    let lo = 1.0 / (n_neg + 2.0);
    let t: Vec<f64> = positive.iter().map(|&p| if p { hi } else { lo }).collect();

    let fval = |a: f64, b: f64| -> f64 {
        decisions
            .iter()
            .zip(&t)
            .map(|(&d, &ti)| {
                let z = a * d + b;
                if z >= 0.0 {
                    ti * z + (1.0 + (-z).exp()).ln()
                } else {
                    (ti - 1.0) * z + (1.0 + z.exp()).ln()
                }
            })
            .sum()
    };

    let mut a = 0.0f64;
    let mut b = ((n_neg + 1.0) / (n_pos + 1.0)).ln();
    let mut best = fval(a, b);
    let sigma = 1e-12;
    for _ in 0..100 {
        let (mut h11, mut h22, mut h21) = (sigma, sigma, 0.0);
        let (mut g1, mut g2) = (0.0, 0.0);
        for (&d, &ti) in decisions.iter().zip(&t) {
            let p = stable_sigmoid_neg(a * d + b);
            let q = 1.0 - p;
            let w = p * q;
            h11 += d * d * w;
            h22 += w;
            h21 += d * w;
            let r = ti - p;
            g1 += d * r;
            g2 += r;
        }
        if g1.abs() < 1e-5 && g2.abs() < 1e-5 {
            break;
        }
        let det = h11 * h22 - h21 * h21;
        let da = -(h22 * g1 - h21 * g2) / det;
        let db = -(-h21 * g1 + h11 * g2) / det;
        let gd = g1 * da + g2 * db;
        let mut step = 1.0;
        let mut advanced = false;
        while step >= 1e-10 {
            let (na, nb) = (a + step * da, b + step * db);
            let nf = fval(na, nb);
            if nf < best + 1e-4 * step * gd {
                a = na;
                b = nb;
                best = nf;
                advanced = true;
                break;
            }
            step /= 2.0;
        }
        if !advanced {
            break;
        }
    }
    (a, b)
}
