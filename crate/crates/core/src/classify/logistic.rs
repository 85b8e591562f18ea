//! Logistic regression maximizing log-likelihood minus ridge * ||w||^2,
//! intercept unpenalized. Low dimensions use damped Newton with a
//! hand-rolled Cholesky (Levenberg jitter on failure); higher dimensions
//! fall back to backtracking gradient ascent, which avoids materializing
//! the (dim+1)^2 Hessian.

use serde::{Deserialize, Serialize};

use super::{densify, LogisticParams};
use crate::features::Dataset;
use crate::ingest::Label;

const GRAD_TOL: f64 = 1e-8;
const NEWTON_DIM_LIMIT: usize = 300;
const NEWTON_MAX_ITER: usize = 200;
const ASCENT_MAX_ITER: usize = 5000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub params: LogisticParams,
    pub dim: usize,
    pub w: Vec<f64>,
    pub b: f64,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// ln(1 + e^z) without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

impl LogisticModel {
    pub fn probability(&self, x: &[f64]) -> f64 {
        let z: f64 = self.w.iter().zip(x).map(|(wj, xj)| wj * xj).sum::<f64>() + self.b;
        sigmoid(z)
    }
}

/// Penalized log-likelihood and its gradient in (w, b), for maximization.
/// Targets are 1 for MCI, 0 for CONTROL.
pub fn objective_and_gradient(
    w: &[f64],
    b: f64,
    rows: &[Vec<f64>],
    targets: &[f64],
    ridge: f64,
) -> (f64, Vec<f64>, f64) {
    let mut obj = 0.0;
    let mut grad_w = vec![0.0; w.len()];
    let mut grad_b = 0.0;
    for (x, &t) in rows.iter().zip(targets) {
        let z: f64 = w.iter().zip(x).map(|(wj, xj)| wj * xj).sum::<f64>() + b;
        obj += t * z - softplus(z);
        let r = t - sigmoid(z);
        for (g, &xj) in grad_w.iter_mut().zip(x) {
            *g += r * xj;
        }
        grad_b += r;
    }
    for (g, &wj) in grad_w.iter_mut().zip(w) {
        obj -= ridge * wj * wj;
        *g -= 2.0 * ridge * wj;
    }
    (obj, grad_w, grad_b)
}

#[allow(clippy::needless_range_loop)]
fn cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let m = a.len();
    let mut l = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if !s.is_finite() || s <= 0.0 {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

fn cholesky_solve(l: &[Vec<f64>], rhs: &[f64]) -> Vec<f64> {
    let m = l.len();
    let mut y = vec![0.0; m];
    for i in 0..m {
        let mut s = rhs[i];
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i];
    }
    let mut x = vec![0.0; m];
    for i in (0..m).rev() {
        let mut s = y[i];
        for k in i + 1..m {
            s -= l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    x
}

fn grad_inf_norm(grad_w: &[f64], grad_b: f64) -> f64 {
    grad_w.iter().map(|g| g.abs()).fold(grad_b.abs(), f64::max)
}

#[allow(clippy::needless_range_loop)]
pub fn train(params: &LogisticParams, data: &Dataset) -> LogisticModel {
    let rows = densify(data);
    let targets: Vec<f64> = data
        .labels
        .iter()
        .map(|&l| if l == Label::Mci { 1.0 } else { 0.0 })
        .collect();
    let dim = data.dim;
    let ridge = params.ridge;

    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let (mut obj, mut grad_w, mut grad_b) = objective_and_gradient(&w, b, &rows, &targets, ridge);

    if dim <= NEWTON_DIM_LIMIT {
        for _ in 0..NEWTON_MAX_ITER {
            if grad_inf_norm(&grad_w, grad_b) < GRAD_TOL {
                break;
            }
            // Negated Hessian: sum p(1-p) x~ x~^T + 2*ridge on weight diagonal.
            let m = dim + 1;
            let mut h = vec![vec![0.0; m]; m];
            for (x, _) in rows.iter().zip(&targets) {
                let z: f64 = w.iter().zip(x).map(|(wj, xj)| wj * xj).sum::<f64>() + b;
                let p = sigmoid(z);
                let pq = p * (1.0 - p);
                for i in 0..dim {
                    for j in 0..=i {
                        h[i][j] += pq * x[i] * x[j];
                    }
                    h[m - 1][i] += pq * x[i];
                }
                h[m - 1][m - 1] += pq;
            }
            for i in 0..dim {
                h[i][i] += 2.0 * ridge;
            }
            for i in 0..m {
                for j in i + 1..m {
                    h[i][j] = h[j][i];
                }
            }
            let mut g = grad_w.clone();
            g.push(grad_b);

            let mut jitter = 0.0;
            let delta = loop {
                let mut a = h.clone();
                if jitter > 0.0 {
                    for (i, row) in a.iter_mut().enumerate() {
                        row[i] += jitter;
                    }
                }
                match cholesky(&a) {
                    Some(l) => break Some(cholesky_solve(&l, &g)),
                    None => {
                        jitter = if jitter == 0.0 { 1e-10 } else { jitter * 10.0 };
                        if jitter > 1e6 {
                            break None;
                        }
                    }
                }
            };
            let Some(delta) = delta else { break };
            let slope: f64 = g.iter().zip(&delta).map(|(gi, di)| gi * di).sum();
            let mut step = 1.0;
            let mut advanced = false;
            while step >= 1e-14 {
                let wc: Vec<f64> = w
                    .iter()
                    .zip(&delta[..dim])
                    .map(|(wi, di)| wi + step * di)
                    .collect();
                let bc = b + step * delta[dim];
                let (oc, gw, gb) = objective_and_gradient(&wc, bc, &rows, &targets, ridge);
                if oc >= obj + 1e-4 * step * slope {
                    w = wc;
                    b = bc;
                    obj = oc;
                    grad_w = gw;
                    grad_b = gb;
                    advanced = true;
                    break;
                }
                step /= 2.0;
            }
            if !advanced {
                break;
            }
        }
    } else {
        for _ in 0..ASCENT_MAX_ITER {
            if grad_inf_norm(&grad_w, grad_b) < GRAD_TOL {
                break;
            }
            let g_sq: f64 = grad_w.iter().map(|g| g * g).sum::<f64>() + grad_b * grad_b;
            let mut step = 1.0;
            let mut advanced = false;
            while step >= 1e-14 {
                let wc: Vec<f64> = w
                    .iter()
                    .zip(&grad_w)
                    .map(|(wi, gi)| wi + step * gi)
                    .collect();
                let bc = b + step * grad_b;
                let (oc, gw, gb) = objective_and_gradient(&wc, bc, &rows, &targets, ridge);
                if oc >= obj + 1e-4 * step * g_sq {
                    w = wc;
                    b = bc;
                    obj = oc;
                    grad_w = gw;
                    grad_b = gb;
                    advanced = true;
                    break;
                }
                step /= 2.0;
            }
            if !advanced {
                break;
            }
        }
    }

    LogisticModel {
        params: *params,
        dim,
        w,
        b,
    }
}
