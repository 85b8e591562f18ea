//! Naive Bayes over continuous features, with either a single Gaussian per
//! class and feature or a Gaussian kernel density estimate per class and
//! feature. Class priors are Laplace-smoothed: (N_c + 1) / (N + 2).

use serde::{Deserialize, Serialize};

use super::{densify, NbParams};
use crate::features::Dataset;
use crate::ingest::Label;

const VAR_FLOOR: f64 = 1e-9;
const BANDWIDTH_FLOOR: f64 = 1e-6;

/// Class-conditional density of one feature. Tuple order is (MCI, CONTROL).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FeatureDensity {
    Gaussian {
        pos: (f64, f64),
        neg: (f64, f64),
    },
    Kde {
        pos: Vec<f64>,
        h_pos: f64,
        neg: Vec<f64>,
        h_neg: f64,
    },
}

fn gaussian_log_density(x: f64, mean: f64, var: f64) -> f64 {
    let d = x - mean;
    -0.5 * (2.0 * std::f64::consts::PI * var).ln() - d * d / (2.0 * var)
}

/// log of the KDE mixture density via logsumexp.
fn kde_log_density(x: f64, samples: &[f64], h: f64) -> f64 {
    let logs: Vec<f64> = samples
        .iter()
        .map(|&s| gaussian_log_density(x, s, h * h))
        .collect();
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|&l| (l - m).exp()).sum();
    m + sum.ln() - (samples.len() as f64).ln()
}

impl FeatureDensity {
    /// (log p(x | MCI), log p(x | CONTROL)).
    pub fn class_log_density(&self, x: f64) -> (f64, f64) {
        match self {
            FeatureDensity::Gaussian { pos, neg } => (
                gaussian_log_density(x, pos.0, pos.1),
                gaussian_log_density(x, neg.0, neg.1),
            ),
            FeatureDensity::Kde {
                pos,
                h_pos,
                neg,
                h_neg,
            } => (
                kde_log_density(x, pos, *h_pos),
                kde_log_density(x, neg, *h_neg),
            ),
        }
    }
}

/// Type-7 quantile (linear interpolation) of an ascending-sorted slice.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = (n - 1) as f64 * p;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    if lo + 1 >= n {
        sorted[n - 1]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

/// Silverman's rule of thumb: 0.9 * min(sd, IQR / 1.34) * n^(-1/5),
/// floored to keep the kernel proper for constant samples.
pub(crate) fn silverman_bandwidth(samples: &[f64]) -> f64 {
    let n = samples.len();
    if n < 2 {
        return BANDWIDTH_FLOOR;
    }
    let mean: f64 = samples.iter().sum::<f64>() / n as f64;
    let ss: f64 = samples.iter().map(|&v| (v - mean) * (v - mean)).sum();
    let sd = (ss / (n - 1) as f64).sqrt();
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let spread = sd.min(iqr / 1.34);
    (0.9 * spread * (n as f64).powf(-0.2)).max(BANDWIDTH_FLOOR)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub params: NbParams,
    pub dim: usize,
    pub log_prior_pos: f64,
    pub log_prior_neg: f64,
    pub features: Vec<FeatureDensity>,
}

impl NbModel {
    /// (P(MCI | x), P(CONTROL | x)); the pair sums to 1.
    pub fn posteriors(&self, x: &[f64]) -> (f64, f64) {
        let mut log_odds = self.log_prior_pos - self.log_prior_neg;
        for (fd, &v) in self.features.iter().zip(x) {
            let (lp, ln) = fd.class_log_density(v);
            log_odds += lp - ln;
        }
        let p_pos = if log_odds >= 0.0 {
            1.0 / (1.0 + (-log_odds).exp())
        } else {
            let e = log_odds.exp();
            e / (1.0 + e)
        };
        let p_neg = if log_odds >= 0.0 {
            let e = (-log_odds).exp();
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + log_odds.exp())
        };
        (p_pos, p_neg)
    }
}

pub fn train(params: &NbParams, data: &Dataset) -> NbModel {
    let rows = densify(data);
    let n = rows.len();
    let pos_rows: Vec<&Vec<f64>> = rows
        .iter()
        .zip(&data.labels)
        .filter(|(_, &l)| l == Label::Mci)
        .map(|(r, _)| r)
        .collect();
    let neg_rows: Vec<&Vec<f64>> = rows
        .iter()
        .zip(&data.labels)
        .filter(|(_, &l)| l == Label::Control)
        .map(|(r, _)| r)
        .collect();
    let log_prior_pos = ((pos_rows.len() as f64 + 1.0) / (n as f64 + 2.0)).ln();
    let log_prior_neg = ((neg_rows.len() as f64 + 1.0) / (n as f64 + 2.0)).ln();

    let moments = |col: &[f64]| -> (f64, f64) {
        let m = col.iter().sum::<f64>() / col.len() as f64;
        let var = col.iter().map(|&v| (v - m) * (v - m)).sum::<f64>() / col.len() as f64;
        (m, var.max(VAR_FLOOR))
    };

    let features = (0..data.dim)
        .map(|j| {
            let pos_col: Vec<f64> = pos_rows.iter().map(|r| r[j]).collect();
            let neg_col: Vec<f64> = neg_rows.iter().map(|r| r[j]).collect();
            if params.kernel_density {
                let h_pos = silverman_bandwidth(&pos_col);
                let h_neg = silverman_bandwidth(&neg_col);
                FeatureDensity::Kde {
                    pos: pos_col,
                    h_pos,
                    neg: neg_col,
                    h_neg,
                }
            } else {
                FeatureDensity::Gaussian {
                    pos: moments(&pos_col),
                    neg: moments(&neg_col),
                }
            }
        })
        .collect();

    NbModel {
        params: *params,
        dim: data.dim,
        log_prior_pos,
        log_prior_neg,
        features,
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_util::dense_dataset;
    use super::*;
    use rand::{Rng, SeedableRng};

    fn gaussian_params() -> NbParams {
        NbParams {
            kernel_density: false,
        }
    }

    #[test]
    fn symmetric_data_gives_even_posterior() {
        let data = dense_dataset(&[(&[1.0], Label::Mci), (&[-1.0], Label::Control)]);
        let model = train(&gaussian_params(), &data);
        let (p, q) = model.posteriors(&[0.0]);
        assert_eq!(p, 0.5);
        assert_eq!(q, 0.5);
    }

    #[test]
    fn gaussian_posterior_matches_hand_computation() {
        let data = dense_dataset(&[
            (&[1.0], Label::Mci),
            (&[2.0], Label::Mci),
            (&[3.0], Label::Mci),
            (&[-1.0], Label::Control),
            (&[0.0], Label::Control),
        ]);
        let model = train(&gaussian_params(), &data);
        let x = 1.5;
        let var_pos = 2.0 / 3.0;
        let var_neg = 0.25;
        let lp = (4.0f64 / 7.0).ln()
            - 0.5 * (2.0 * std::f64::consts::PI * var_pos).ln()
            - (x - 2.0) * (x - 2.0) / (2.0 * var_pos);
        let ln = (3.0f64 / 7.0).ln()
            - 0.5 * (2.0 * std::f64::consts::PI * var_neg).ln()
            - (x + 0.5) * (x + 0.5) / (2.0 * var_neg);
        let expected = 1.0 / (1.0 + (ln - lp).exp());
        let (p, _) = model.posteriors(&[x]);
        assert!((p - expected).abs() < 1e-9);
    }

    #[test]
    fn posteriors_sum_to_one() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let rows: Vec<(Vec<f64>, Label)> = (0..16)
            .map(|i| {
                let label = if i % 2 == 0 {
                    Label::Mci
                } else {
                    Label::Control
                };
                let row: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
                (row, label)
            })
            .collect();
        let refs: Vec<(&[f64], Label)> = rows.iter().map(|(r, l)| (r.as_slice(), *l)).collect();
        let data = dense_dataset(&refs);
        for params in [gaussian_params(), NbParams::default()] {
            let model = train(&params, &data);
            for _ in 0..20 {
                let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect();
                let (p, q) = model.posteriors(&x);
                assert!((p + q - 1.0).abs() < 1e-12);
                assert!((0.0..=1.0).contains(&p));
            }
        }
    }

    #[test]
    fn priors_are_laplace_smoothed() {
        let data = dense_dataset(&[
            (&[0.0], Label::Mci),
            (&[0.1], Label::Mci),
            (&[0.2], Label::Mci),
            (&[5.0], Label::Control),
        ]);
        let model = train(&gaussian_params(), &data);
        assert!((model.log_prior_pos - (4.0f64 / 6.0).ln()).abs() < 1e-15);
        assert!((model.log_prior_neg - (2.0f64 / 6.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn constant_feature_hits_variance_floor() {
        let data = dense_dataset(&[
            (&[3.0, 1.0], Label::Mci),
            (&[3.0, 2.0], Label::Mci),
            (&[3.0, -1.0], Label::Control),
            (&[3.0, -2.0], Label::Control),
        ]);
        let model = train(&gaussian_params(), &data);
        match &model.features[0] {
            FeatureDensity::Gaussian { pos, neg } => {
                assert_eq!(pos.1, VAR_FLOOR);
                assert_eq!(neg.1, VAR_FLOOR);
            }
            other => panic!("expected Gaussian, got {other:?}"),
        }
        let (p, q) = model.posteriors(&[3.0, 1.5]);
        assert!(p.is_finite() && q.is_finite());
        assert!(p > 0.5);
    }

    #[test]
    fn kde_log_density_matches_direct_sum() {
        let samples = [0.2f64, 1.1, -0.7, 0.5];
        let h = 0.4f64;
        for &x in &[-1.0, 0.0, 0.3, 2.0] {
            let direct: f64 = samples
                .iter()
                .map(|&s| {
                    (-(x - s) * (x - s) / (2.0 * h * h)).exp()
                        / (h * (2.0 * std::f64::consts::PI).sqrt())
                })
                .sum::<f64>()
                / samples.len() as f64;
            let got = kde_log_density(x, &samples, h);
            assert!((got - direct.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn silverman_bandwidth_hand_value() {
        let samples = [1.0, 2.0, 3.0, 4.0, 5.0];
        let sd = 2.5f64.sqrt();
        let iqr_term: f64 = 2.0 / 1.34;
        let expected = 0.9 * sd.min(iqr_term) * 5.0f64.powf(-0.2);
        assert!((silverman_bandwidth(&samples) - expected).abs() < 1e-15);
        assert_eq!(silverman_bandwidth(&[7.0]), BANDWIDTH_FLOOR);
        assert_eq!(silverman_bandwidth(&[2.0, 2.0, 2.0]), BANDWIDTH_FLOOR);
    }

    #[test]
    fn default_params_use_kde() {
        let data = dense_dataset(&[
            (&[1.0], Label::Mci),
            (&[2.0], Label::Mci),
            (&[-1.0], Label::Control),
            (&[-2.0], Label::Control),
        ]);
        let model = train(&NbParams::default(), &data);
        assert!(matches!(model.features[0], FeatureDensity::Kde { .. }));
        let (p, _) = model.posteriors(&[1.5]);
        assert!(p > 0.5);
    }
}
