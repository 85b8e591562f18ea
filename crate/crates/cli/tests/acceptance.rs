//! The acceptance gate: every release-blocking property in one target.
//! Each check pins an algorithm to an independent oracle (hand-worked
//! lists, brute-force enumeration, finite differences, KKT conditions) or
//! exercises the binary end to end on the shipped synthetic corpora.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skipscreen_core::classify::{self, svm, ModelSpec, NbParams, SvmParams};
use skipscreen_core::eval::{
    auc, cross_validate, leave_pair_out_auc, select_vocabulary, weighted_prf, ConfusionMatrix,
    CvConfig,
};
use skipscreen_core::features::{
    make_dataset, vectorize, CountedCorpus, Dataset, LeakageMode, RankingMethod, SparseVector,
    Weighting,
};
use skipscreen_core::ingest::{Corpus, CorpusManifest, Label, LoadOptions, VisitPolicy};
use skipscreen_core::skipgram::{expected_gram_count, extract_skipgrams, SkipGramSpec};

fn fixture_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/synthetic")
}

fn load_fixture_corpus(manifest_name: &str) -> Corpus {
    let manifest = CorpusManifest::read(&fixture_root().join(manifest_name)).unwrap();
    let (corpus, skipped, _) =
        Corpus::load_selected(&manifest, &LoadOptions::default(), VisitPolicy::Last).unwrap();
    assert!(skipped.is_empty());
    corpus
}

fn compound_counts(corpus: &Corpus) -> CountedCorpus {
    CountedCorpus::from_corpus(
        corpus,
        &skipscreen_core::skipgram::FeatureSetSpec::compound(),
    )
}

fn surfaces(tokens: &[&str], n: usize, k: usize) -> Vec<String> {
    extract_skipgrams(tokens, SkipGramSpec::new(n, k).unwrap())
        .iter()
        .map(|g| g.surface().to_string())
        .collect()
}

// --- 1: the two hand-worked skip-gram lists, zero tolerance -------------

#[test]
fn worked_example_bigrams_and_trigrams_are_exact() {
    let start = Instant::now();
    let sentence = ["take", "the", "cookie", "jar", "from", "the", "cabinet"];

    let bigrams = surfaces(&sentence, 2, 1);
    assert_eq!(
        bigrams,
        [
            "take cookie",
            "the jar",
            "cookie from",
            "jar the",
            "from cabinet"
        ]
        .map(String::from)
        .to_vec()
    );
    assert_eq!(
        bigrams.len() as u64,
        expected_gram_count(7, SkipGramSpec::new(2, 1).unwrap())
    );

    let mut trigrams = surfaces(&sentence, 3, 1);
    let mut want = [
        "take cookie jar",
        "take the jar",
        "the jar from",
        "the cookie from",
        "cookie jar the",
        "cookie from the",
        "jar the cabinet",
        "jar from cabinet",
    ]
    .map(String::from)
    .to_vec();
    assert_eq!(
        trigrams.len() as u64,
        expected_gram_count(7, SkipGramSpec::new(3, 1).unwrap())
    );
    trigrams.sort();
    want.sort();
    assert_eq!(trigrams, want);

    assert!(start.elapsed() < Duration::from_secs(1));
}

// --- 2: brute-force subsequence oracle over a small alphabet ------------

/// All r-element index combinations, lexicographic.
fn combos(items: &[usize], r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    if items.len() < r {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for rest in combos(&items[i + 1..], r - 1) {
            let mut v = Vec::with_capacity(r);
            v.push(x);
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

/// Every ordered n-word subsequence whose indices span exactly n+k
/// positions, first and last anchored; enumerated directly from indices.
fn oracle_grams(tokens: &[&str], n: usize, k: usize) -> Vec<String> {
    let m = tokens.len();
    let mut out = Vec::new();
    if m < n + k {
        return out;
    }
    for a in 0..=(m - (n + k)) {
        let end = a + n + k - 1;
        let interior: Vec<usize> = (a + 1..end).collect();
        for combo in combos(&interior, n - 2) {
            let mut idx = vec![a];
            idx.extend(combo);
            idx.push(end);
            out.push(idx.iter().map(|&i| tokens[i]).collect::<Vec<_>>().join(" "));
        }
    }
    out
}

#[test]
fn skipgram_enumeration_matches_the_subsequence_oracle() {
    let start = Instant::now();
    let alphabet = ["a", "b", "c"];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let len = rng.gen_range(0..=12);
        let tokens: Vec<&str> = (0..len).map(|_| alphabet[rng.gen_range(0..3)]).collect();
        for n in [2usize, 3] {
            for k in [0usize, 1, 2] {
                let mut got = surfaces(&tokens, n, k);
                let spec = SkipGramSpec::new(n, k).unwrap();
                assert_eq!(
                    got.len() as u64,
                    expected_gram_count(len, spec),
                    "m={len} n={n} k={k}"
                );
                let mut want = oracle_grams(&tokens, n, k);
                got.sort();
                want.sort();
                assert_eq!(got, want, "m={len} n={n} k={k} tokens={tokens:?}");
            }
        }
    }
    assert!(start.elapsed() < Duration::from_secs(30));
}

// --- 3: AUC against direct pair counting --------------------------------

/// Mann-Whitney in half-units: 2 per correctly ordered pair, 1 per tie.
fn pair_counting_auc(scores: &[f64], labels: &[Label]) -> f64 {
    let mut num = 0u128;
    let mut pairs = 0u128;
    for (i, &li) in labels.iter().enumerate() {
        if li != Label::Mci {
            continue;
        }
        for (j, &lj) in labels.iter().enumerate() {
            if lj != Label::Control {
                continue;
            }
            pairs += 1;
            num += match scores[i].partial_cmp(&scores[j]).unwrap() {
                std::cmp::Ordering::Greater => 2,
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Less => 0,
            };
        }
    }
    num as f64 / (2 * pairs) as f64
}

#[test]
fn auc_matches_pair_counting_exactly() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    // Exhaustive label patterns over tie-heavy fixed scores.
    for len in 2usize..=12 {
        let scores: Vec<f64> = (0..len)
            .map(|_| rng.gen_range(0..10) as f64 / 10.0)
            .collect();
        for mask in 1..(1u32 << len) - 1 {
            let labels: Vec<Label> = (0..len)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        Label::Mci
                    } else {
                        Label::Control
                    }
                })
                .collect();
            let got = auc(&scores, &labels).unwrap();
            let want = pair_counting_auc(&scores, &labels);
            assert_eq!(got, want, "len={len} mask={mask:b}");
        }
    }

    // Random instances, mixed continuous and quantized scores.
    for case in 0..10_000 {
        let len = rng.gen_range(2..=30);
        let quantized = rng.gen_bool(0.5);
        let scores: Vec<f64> = (0..len)
            .map(|_| {
                if quantized {
                    rng.gen_range(0..4) as f64 / 4.0
                } else {
                    rng.gen_range(-1.0..1.0)
                }
            })
            .collect();
        let mut labels: Vec<Label> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Label::Mci
                } else {
                    Label::Control
                }
            })
            .collect();
        labels[0] = Label::Mci;
        labels[1] = Label::Control;
        let got = auc(&scores, &labels).unwrap();
        let want = pair_counting_auc(&scores, &labels);
        assert_eq!(got, want, "case={case}");
    }
    assert!(start.elapsed() < Duration::from_secs(30));
}

// --- 4: weighted metrics arithmetic --------------------------------------

#[test]
fn weighted_metrics_match_hand_arithmetic_and_accuracy_identity() {
    let cm = ConfusionMatrix {
        tp: 3,
        fn_: 1,
        fp: 2,
        tn: 4,
    };
    let report = weighted_prf(&cm, 0.0, false);
    assert!((report.weighted_precision - 0.72).abs() <= 1e-12);
    assert!((report.weighted_recall - 0.70).abs() <= 1e-12);
    assert!((report.accuracy - 0.70).abs() <= 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let cm = ConfusionMatrix {
            tp: rng.gen_range(0..50),
            fn_: rng.gen_range(0..50),
            fp: rng.gen_range(0..50),
            tn: rng.gen_range(1..50),
        };
        let report = weighted_prf(&cm, 0.0, false);
        assert!(
            (report.weighted_recall - report.accuracy).abs() <= 1e-12,
            "cm={cm:?}"
        );
    }
}

// --- 5: classifier numerics ----------------------------------------------

#[test]
fn logistic_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..100 {
        let dim = rng.gen_range(1..=5);
        let rows: Vec<Vec<f64>> = (0..rng.gen_range(5..=25))
            .map(|_| (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .collect();
        let targets: Vec<f64> = rows.iter().map(|_| f64::from(rng.gen_bool(0.5))).collect();
        let ridge = [0.0, 1e-8, 0.1, 1.0][rng.gen_range(0..4)];
        let w: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b = rng.gen_range(-1.0..1.0);

        let (_, grad_w, grad_b) =
            classify::logistic::objective_and_gradient(&w, b, &rows, &targets, ridge);
        let h = 1e-5;
        let obj = |w: &[f64], b: f64| {
            classify::logistic::objective_and_gradient(w, b, &rows, &targets, ridge).0
        };
        for j in 0..dim {
            let mut wp = w.clone();
            let mut wm = w.clone();
            wp[j] += h;
            wm[j] -= h;
            let fd = (obj(&wp, b) - obj(&wm, b)) / (2.0 * h);
            assert!(
                (fd - grad_w[j]).abs() <= 1e-6 * grad_w[j].abs().max(1.0),
                "case={case} coordinate={j}: fd={fd} analytic={}",
                grad_w[j]
            );
        }
        let fd_b = (obj(&w, b + h) - obj(&w, b - h)) / (2.0 * h);
        assert!(
            (fd_b - grad_b).abs() <= 1e-6 * grad_b.abs().max(1.0),
            "case={case} bias"
        );
    }
}

fn dense_dataset(rows: &[Vec<f64>], labels: &[Label]) -> Dataset {
    let dim = rows[0].len();
    Dataset {
        vectors: rows
            .iter()
            .map(|r| {
                let entries = r
                    .iter()
                    .enumerate()
                    .filter(|&(_, &v)| v != 0.0)
                    .map(|(i, &v)| (i, v))
                    .collect();
                SparseVector::new(dim, entries).unwrap()
            })
            .collect(),
        labels: labels.to_vec(),
        participant_ids: (0..rows.len()).map(|i| format!("p{i}")).collect(),
        dim,
        feature_names: (0..dim).map(|j| format!("f{j}")).collect(),
    }
}

#[test]
fn smo_solution_satisfies_kkt_conditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let tol = 1e-3 + 1e-9;
    for case in 0..20 {
        let n = rng.gen_range(6..=40);
        let dim = rng.gen_range(2..=6);
        // Overlapping class blobs so some points sit at the box bound.
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let center = if i % 2 == 0 { 0.6 } else { -0.6 };
                (0..dim)
                    .map(|_| center + rng.gen_range(-1.0..1.0))
                    .collect()
            })
            .collect();
        let labels: Vec<Label> = (0..n)
            .map(|i| {
                if i % 2 == 0 {
                    Label::Mci
                } else {
                    Label::Control
                }
            })
            .collect();
        let data = dense_dataset(&rows, &labels);

        let c = [0.5, 1.0, 4.0][case % 3];
        let params = SvmParams {
            c,
            kernel: classify::Kernel::Rbf { gamma: 0.5 },
            standardize: false,
            platt_calibrate: false,
        };
        let model = svm::train(&params, &data);

        assert!(
            model.alpha_dot_y().abs() <= 1e-9,
            "case={case}: sum alpha_i y_i"
        );
        let bound_eps = 1e-8 * c;
        for (i, row) in rows.iter().enumerate() {
            let y = if labels[i] == Label::Mci { 1.0 } else { -1.0 };
            let margin = y * model.decision_value(row);
            let a = model.alpha[i];
            assert!(
                (-bound_eps..=c + bound_eps).contains(&a),
                "case={case}: alpha in box"
            );
            let violation = if a <= bound_eps {
                (1.0 - margin).max(0.0)
            } else if a >= c - bound_eps {
                (margin - 1.0).max(0.0)
            } else {
                (margin - 1.0).abs()
            };
            assert!(
                violation <= tol,
                "case={case} point={i}: alpha={a} margin={margin} violation={violation}"
            );
        }
    }
}

#[test]
fn nb_posterior_pairs_sum_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for kernel_density in [true, false] {
        let rows: Vec<Vec<f64>> = (0..24)
            .map(|_| (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect())
            .collect();
        let labels: Vec<Label> = (0..24)
            .map(|i| if i < 12 { Label::Mci } else { Label::Control })
            .collect();
        let data = dense_dataset(&rows, &labels);
        let model = classify::naive_bayes::train(&NbParams { kernel_density }, &data);
        for _ in 0..200 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let (p_pos, p_neg) = model.posteriors(&x);
            assert!(
                (p_pos + p_neg - 1.0).abs() <= 1e-12,
                "kd={kernel_density} x={x:?}"
            );
        }
    }
}

// --- 6: discrimination on the shipped corpus, chance under permutation ---

#[test]
fn all_four_models_separate_the_synthetic_corpus() {
    let start = Instant::now();
    let corpus = load_fixture_corpus("train_eval.csv");
    let (mci, control) = corpus.class_counts();
    assert_eq!((mci, control), (19, 19));
    let counted = compound_counts(&corpus);
    let cfg = CvConfig {
        folds: 10,
        k_top: 200,
        ranking: RankingMethod::InfoGain,
        leakage: LeakageMode::PerFold,
        weighting: Weighting::Count,
        seed: 0,
    };
    let specs = [
        ModelSpec::svm_default(),
        ModelSpec::naive_bayes_default(),
        ModelSpec::logistic_default(),
        ModelSpec::tree_default(),
    ];
    for spec in &specs {
        let outcome = cross_validate(&counted, spec, &cfg).unwrap();
        assert!(
            outcome.report.auc >= 0.90,
            "{}: pooled AUC {}",
            spec.family_name(),
            outcome.report.auc
        );
    }

    // Label permutation: discrimination must collapse to chance.
    for spec in &specs {
        let mut sum = 0.0;
        for p in 0..20u64 {
            let mut permuted = counted.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(900 + p);
            permuted.labels.shuffle(&mut rng);
            let outcome = cross_validate(&permuted, spec, &cfg).unwrap();
            sum += outcome.report.auc;
        }
        let mean = sum / 20.0;
        assert!(
            (0.35..=0.65).contains(&mean),
            "{}: permuted mean AUC {mean}",
            spec.family_name()
        );
    }
    assert!(start.elapsed() < Duration::from_secs(300));
}

// --- 7: leave-pair-out equals a hand-run of all nine pipelines ----------

#[test]
fn leave_pair_out_matches_hand_enumeration() {
    let corpus = load_fixture_corpus("toy.csv");
    let (mci, control) = corpus.class_counts();
    assert_eq!((mci, control), (3, 3));
    let counted = compound_counts(&corpus);
    let cfg = CvConfig {
        folds: 3,
        k_top: 10,
        ranking: RankingMethod::InfoGain,
        leakage: LeakageMode::PerFold,
        weighting: Weighting::Count,
        seed: 0,
    };
    let spec = ModelSpec::logistic_default();
    let got = leave_pair_out_auc(&counted, &spec, &cfg).unwrap();

    let pos: Vec<usize> = (0..counted.len())
        .filter(|&i| counted.labels[i] == Label::Mci)
        .collect();
    let neg: Vec<usize> = (0..counted.len())
        .filter(|&i| counted.labels[i] == Label::Control)
        .collect();
    let mut num = 0u64;
    let mut runs = 0;
    for &i in &pos {
        for &j in &neg {
            let rest: Vec<usize> = (0..counted.len()).filter(|&t| t != i && t != j).collect();
            let train_counts = counted.subset(&rest);
            let vocab = select_vocabulary(&train_counts, cfg.ranking, cfg.k_top).unwrap();
            let train_ds = make_dataset(&train_counts, &vocab, cfg.weighting);
            let model = classify::train(&spec, &train_ds).unwrap();
            let si = classify::predict_score(
                &model,
                &vectorize(&counted.counts[i], &vocab, cfg.weighting),
            )
            .unwrap();
            let sj = classify::predict_score(
                &model,
                &vectorize(&counted.counts[j], &vocab, cfg.weighting),
            )
            .unwrap();
            num += match si.value.total_cmp(&sj.value) {
                std::cmp::Ordering::Greater => 2,
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Less => 0,
            };
            runs += 1;
        }
    }
    assert_eq!(runs, 9);
    let want = num as f64 / 18.0;
    assert_eq!(got, want);
}

// --- 8: rerun determinism through the binary -----------------------------

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skipscreen"))
}

fn run_to(config: &Path, subcommand: &str, out_dir: &Path) {
    let out = bin()
        .arg(subcommand)
        .arg("--config")
        .arg(config)
        .arg("--out-dir")
        .arg(out_dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{subcommand} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn csv_snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect()
}

#[test]
fn evaluate_and_curves_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    fs::write(
        &config,
        format!(
            "train_manifest = \"{}/train_eval.csv\"\n\
             seed = 17\n\
             curve_ks = [10, 50, 200]\n\
             [models]\nfamilies = [\"logistic\", \"tree\"]\n",
            fixture_root().display()
        ),
    )
    .unwrap();
    let mut snapshots = Vec::new();
    for name in ["a", "b"] {
        let eval_dir = dir.path().join(name).join("eval");
        let curve_dir = dir.path().join(name).join("curves");
        run_to(&config, "evaluate", &eval_dir);
        run_to(&config, "curves", &curve_dir);
        let mut snap = csv_snapshot(&eval_dir);
        snap.extend(csv_snapshot(&curve_dir));
        snapshots.push(snap);
    }
    assert!(snapshots[0].len() >= 6, "metrics plus five curve files");
    assert_eq!(snapshots[0], snapshots[1]);
}

// --- 9: the full tuned protocol runs end to end --------------------------

#[test]
fn grid_then_evaluate_protocol_runs_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    fs::write(
        &config,
        format!(
            "train_manifest = \"{root}/train_eval.csv\"\n\
             validation_manifest = \"{root}/validation.csv\"\n\
             k_top = 200\n\
             folds = 10\n",
            root = fixture_root().display()
        ),
    )
    .unwrap();

    let validation = load_fixture_corpus("validation.csv");
    assert_eq!(validation.class_counts(), (8, 8));

    let grid_dir = dir.path().join("grid");
    run_to(&config, "grid", &grid_dir);
    let best = grid_dir.join("best_specs.toml");
    assert!(best.exists());

    let eval_dir = dir.path().join("eval");
    let out = bin()
        .args(["evaluate", "--config"])
        .arg(&config)
        .arg("--models")
        .arg(&best)
        .arg("--out-dir")
        .arg(&eval_dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let metrics = fs::read_to_string(eval_dir.join("metrics.csv")).unwrap();
    let rows: Vec<&str> = metrics.lines().collect();
    assert_eq!(
        rows[0],
        "model,feature_set,k_top,weighted_precision,weighted_recall,weighted_f1,auc"
    );
    assert_eq!(rows.len(), 6, "four tuned models plus the baseline row");
    for family in ["svm", "naive_bayes", "logistic", "tree"] {
        assert!(
            rows.iter()
                .any(|r| r.starts_with(&format!("{family},compound,200,"))),
            "missing row for {family}"
        );
    }
    let baseline = rows.iter().find(|r| r.contains(",baseline,")).unwrap();
    assert!(baseline.starts_with("svm,baseline,7,"));
    for row in &rows[1..] {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 7);
        for cell in &cells[3..] {
            let v: f64 = cell.parse().unwrap();
            assert!((0.0..=1.0).contains(&v), "metric out of range in {row}");
        }
    }
}
