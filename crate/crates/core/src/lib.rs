//! Screening for mild cognitive impairment from clinical interview transcripts.
//!
//! The pipeline runs in five stages, each of which is usable on its own:
//!
//! 1. [`ingest`] — parse CHAT-format (or plain-text) transcripts into
//!    labeled, per-visit token sequences and apply a visit-selection policy.
//! 2. [`skipgram`] — enumerate exact-skip skip-grams of every utterance and
//!    combine several skip-gram families into one compound feature space.
//! 3. [`features`] — build a vocabulary over a corpus, rank features by an
//!    informativeness criterion, keep the top K, and vectorize samples into
//!    a sparse dataset. [`baseline`] computes an alternative 7-feature
//!    linguistic/timing representation from the same transcripts.
//! 4. [`classify`] — from-scratch SVM (SMO), naive Bayes with optional
//!    kernel-density likelihoods, ridge-penalized logistic regression, and a
//!    gain-ratio decision tree with pessimistic-error pruning.
//! 5. [`eval`] — stratified k-fold and leave-pair-out cross-validation,
//!    weighted precision/recall/F1, pooled ROC/AUC, and grid search on a
//!    participant-disjoint validation corpus.
//!
//! Real clinical corpora are access-restricted and never shipped; the
//! [`synthetic`] module generates deterministic stand-in corpora with the
//! same shape so the full pipeline can be exercised end to end.

pub mod baseline;
pub mod classify;
pub mod eval;
pub mod features;
pub mod ingest;
pub mod skipgram;
pub mod synthetic;

pub use ingest::Label;
