//! Stylometric feature extraction over dependency-annotated Ukrainian text.
//!
//! The pipeline is: [`conllu`] parses CoNLL-U into documents, [`morph`]
//! corrects tagger features and derives inflection classes, tense profiles
//! and transitivity, [`metrics`] evaluates the registry of metrics, and
//! [`matrix`] stores the resulting document × metric table.

pub mod conllu;
pub mod lexicon;
pub mod matrix;
pub mod metrics;
pub mod morph;

pub use conllu::{parse_conllu, parse_conllu_str, ConlluError, Document, Sentence, Token, Upos};
pub use lexicon::{Lexicon, LexiconError, Lexicons};
pub use matrix::{FeatureMatrix, MatrixError};
pub use metrics::{
    builtin_registry, compute_matrix, AnalyzedDocument, Group, MatchTrace, MetricRegistry, MetricSpec, MetricsError,
    Scope,
};
pub use morph::{DerivedMorph, InflectionClass, Morphology, TenseProfile, Transitivity};
