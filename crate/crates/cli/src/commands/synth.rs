//! `synth`: write the deterministic synthetic demonstration corpora (a
//! 19+19 train/eval split with an 8+8 validation split, plus a six-sample
//! toy corpus) so every other subcommand has something to run on.

use std::path::Path;

use skipscreen_core::synthetic::{generate, toy_corpus, SyntheticConfig};

use crate::CliError;

pub fn run(out_dir: &Path, seed: u64) -> Result<(), CliError> {
    let cfg = SyntheticConfig {
        seed,
        ..SyntheticConfig::default()
    };
    let corpus = generate(&cfg);
    let toy = toy_corpus();
    for c in [&corpus, &toy] {
        c.write(out_dir)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", out_dir.display())))?;
    }
    println!(
        "wrote {} files under {} (seed {seed})",
        corpus.files.len() + toy.files.len(),
        out_dir.display()
    );
    Ok(())
}
