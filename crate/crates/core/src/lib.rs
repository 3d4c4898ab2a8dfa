//! Corpus analytics for measuring how sentiment and semantic-field width
//! shift between a source text and its human or machine translations.
//!
//! The pipeline runs lexicon-based counting over lemmatized strata:
//!
//! * [`ingest`] loads texts from a manifest, tokenizes and lemmatizes them;
//! * [`lexicon`] merges sentiment dictionaries into three disjoint lists and
//!   loads the bilingual concept map;
//! * [`freq`] computes unique-lemma counts, observed frequencies, deviations
//!   from a reference corpus and tokens-per-lemma;
//! * [`field`] counts translation variants per concept;
//! * [`vectors`] builds concept-space vectors (cosine, Euclidean, PCA);
//! * [`stats`] holds one-way ANOVA and Tukey HSD with their distribution kernels;
//! * [`synth`] generates synthetic corpora and translation channels;
//! * [`report`] drives the `validate`, `analyze` and `synth` commands.

pub mod error;
pub mod field;
pub mod freq;
pub mod ingest;
pub mod lexicon;
pub mod report;
pub mod stats;
pub mod synth;
pub mod vectors;

pub use error::{Error, Result};
pub use field::{field_width_index, top_k_concepts, variant_counts, VariantProfile};
pub use freq::{
    expected_deviation, observed_frequency, tokens_per_lemma, unique_lemma_counts, DeviationMode,
    FrequencyTable,
};
pub use ingest::{
    lemmatize, load_corpus, stratify, tokenize, CorpusStratum, Document, LangProfile, LemmaDict,
    TranslationKind,
};
pub use lexicon::{
    load_concept_map, load_lexicon_sources, merge_disjoint, ConceptMap, SentimentClass,
    SentimentLexicon, Side,
};
pub use stats::{one_way_anova, tukey_hsd, AnovaResult, GroupSample, TukeyResult};
pub use synth::{apply_channel, generate_source, ChannelKind, ChannelParams};
pub use vectors::{concept_vector, cosine, euclidean, pca_2d, ConceptVector};

/// A normalized citation form; the unit of all counting.
pub type Lemma = String;
