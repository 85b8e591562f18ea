//! One module per subcommand, plus the loading and writing steps they
//! share. Output files are rendered to strings first and written last, so
//! a failing run leaves no partial output behind.

pub mod curves;
pub mod evaluate;
pub mod extract;
pub mod grid;
pub mod synth;

use std::path::Path;

use skipscreen_core::features::CountedCorpus;
use skipscreen_core::ingest::{Corpus, CorpusManifest, LoadOptions};

use crate::config::RunConfig;
use crate::CliError;

/// Loads a manifest, applies the visit policy, and reports every skip and
/// warning on stderr.
pub fn load_corpus(cfg: &RunConfig, manifest_path: &Path) -> Result<Corpus, CliError> {
    let manifest =
        CorpusManifest::read(manifest_path).map_err(|e| CliError::Config(e.to_string()))?;
    let options = LoadOptions {
        include_investigator: cfg.include_investigator,
        ..LoadOptions::default()
    };
    let (corpus, skipped, warnings) = Corpus::load_selected(&manifest, &options, cfg.visit_policy)
        .map_err(|e| CliError::Config(e.to_string()))?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    for pid in skipped {
        eprintln!("warning: {pid}: no visit matches the policy");
    }
    if corpus.samples.is_empty() {
        return Err(CliError::Validation(format!(
            "{}: no usable samples after visit selection",
            manifest_path.display()
        )));
    }
    Ok(corpus)
}

pub fn count_features(cfg: &RunConfig, corpus: &Corpus) -> CountedCorpus {
    CountedCorpus::from_corpus(corpus, &cfg.feature_set)
}

/// Writes every (name, content) pair under `out_dir`, creating it first.
pub fn write_files(out_dir: &Path, files: &[(String, String)]) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    for (name, content) in files {
        let path = out_dir.join(name);
        std::fs::write(&path, content)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// CSV cell: full-precision shortest-roundtrip float formatting, so reruns
/// with the same seed are byte-identical.
pub fn fmt_float(v: f64) -> String {
    format!("{v}")
}
