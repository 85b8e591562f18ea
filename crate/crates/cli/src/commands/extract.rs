//! `extract`: vectorize the training corpus once and write the sparse
//! dataset, the feature-name sidecar, and the baseline feature CSV.

use skipscreen_core::baseline::{
    baseline_vector, pos_tag, write_baseline_csv, PosBigramModel, PosTag,
};
use skipscreen_core::eval::select_vocabulary;
use skipscreen_core::features::{make_dataset, write_dataset, write_sidecar};
use skipscreen_core::ingest::Label;

use super::{count_features, load_corpus, write_files};
use crate::config::RunConfig;
use crate::CliError;

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let corpus = load_corpus(cfg, &cfg.train_manifest)?;
    let counted = count_features(cfg, &corpus);
    let vocab = select_vocabulary(&counted, cfg.ranking, cfg.k_top)?;
    if vocab.len() < cfg.k_top {
        eprintln!(
            "warning: vocabulary holds {} features, fewer than the requested top {}",
            vocab.len(),
            cfg.k_top
        );
    }
    let dataset = make_dataset(&counted, &vocab, cfg.weighting);

    let control_seqs: Vec<Vec<PosTag>> = corpus
        .samples
        .iter()
        .filter(|s| s.label == Label::Control)
        .flat_map(pos_tag)
        .collect();
    let bigram = if control_seqs.is_empty() {
        eprintln!("warning: no control utterances; POS cross-entropy uses a uniform reference");
        PosBigramModel::uniform()
    } else {
        PosBigramModel::fit("control samples, full corpus", &control_seqs)
    };
    let rows: Vec<_> = corpus
        .samples
        .iter()
        .map(|s| {
            (
                s.participant_id.clone(),
                s.label,
                baseline_vector(s, &bigram),
            )
        })
        .collect();

    let files = vec![
        ("dataset.txt".to_string(), write_dataset(&dataset)),
        ("feature_names.txt".to_string(), write_sidecar(&dataset)),
        ("baseline.csv".to_string(), write_baseline_csv(&rows)),
    ];
    write_files(&cfg.out_dir, &files)?;

    let (mci, control) = corpus.class_counts();
    println!(
        "{} samples ({mci} {}, {control} {}), {} features kept",
        corpus.samples.len(),
        Label::Mci,
        Label::Control,
        vocab.len()
    );
    Ok(())
}
