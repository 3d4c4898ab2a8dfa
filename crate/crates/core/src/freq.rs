//! Per-stratum frequency metrics for each sentiment class.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, Error, Result};
use crate::ingest::CorpusStratum;
use crate::lexicon::{SentimentClass, SentimentLexicon};
use crate::Lemma;

/// Per-million to percent.
pub const PER_MILLION_PER_PERCENT: f64 = 10_000.0;

/// Reference frequencies from a general-purpose corpus, in occurrences per million words.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrequencyTable {
    pub language_code: String,
    pub corpus_name: String,
    freqs: HashMap<Lemma, f64>,
}

/// Result of looking a lemma up in a [`FrequencyTable`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coverage {
    Covered(f64),
    /// Absent from the table. The frequency reads as 0 but must not be used as one.
    Uncovered,
}

impl Coverage {
    pub fn per_million(self) -> f64 {
        match self {
            Coverage::Covered(f) => f,
            Coverage::Uncovered => 0.0,
        }
    }
}

impl FrequencyTable {
    pub fn new(language_code: impl Into<String>, corpus_name: impl Into<String>) -> Self {
        Self {
            language_code: language_code.into(),
            corpus_name: corpus_name.into(),
            freqs: HashMap::new(),
        }
    }

    pub fn insert(&mut self, lemma: impl Into<Lemma>, per_million: f64) -> Result<()> {
        if !per_million.is_finite() || per_million < 0.0 {
            return Err(Error::Validation(format!(
                "reference frequency must be finite and non-negative, got {per_million}"
            )));
        }
        self.freqs.insert(lemma.into(), per_million);
        Ok(())
    }

    /// Parses `lemma<TAB>per_million` lines. A `# corpus: NAME` comment sets
    /// the corpus name; other comments are ignored.
    pub fn parse(text: &str, path: &Path, language_code: &str) -> Result<Self> {
        let mut table = Self::new(language_code, "");
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            let trimmed = line.trim();
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some(name) = comment.trim().strip_prefix("corpus:") {
                    table.corpus_name = name.trim().to_string();
                }
                continue;
            }
            if trimmed.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                file: path.to_path_buf(),
                line: idx + 1,
                message,
            };
            let (lemma, value) = line
                .split_once('\t')
                .ok_or_else(|| parse_err("expected lemma<TAB>per_million".into()))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad frequency {:?}", value.trim())))?;
            table
                .insert(lemma.trim(), value)
                .map_err(|e| parse_err(e.to_string()))?;
        }
        Ok(table)
    }

    pub fn load(path: &Path, language_code: &str) -> Result<Self> {
        Self::parse(&read_to_string(path)?, path, language_code)
    }

    pub fn lookup(&self, lemma: &str) -> Coverage {
        self.freqs
            .get(lemma)
            .map_or(Coverage::Uncovered, |f| Coverage::Covered(*f))
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    /// Entries sorted by lemma.
    pub fn entries(&self) -> Vec<(&str, f64)> {
        let mut entries: Vec<_> = self.freqs.iter().map(|(l, f)| (l.as_str(), *f)).collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));
        entries
    }
}

fn check_language(stratum: &CorpusStratum, expected: &str) -> Result<()> {
    if stratum.language_code != expected {
        return Err(Error::LanguageMismatch {
            expected: expected.to_string(),
            found: stratum.language_code.clone(),
        });
    }
    Ok(())
}

/// Token counts of the lexicon lemmas attested in the stratum, per class.
pub fn class_token_counts(
    stratum: &CorpusStratum,
    lexicon: &SentimentLexicon,
) -> Result<BTreeMap<SentimentClass, BTreeMap<Lemma, usize>>> {
    check_language(stratum, &lexicon.language_code)?;
    let mut out: BTreeMap<SentimentClass, BTreeMap<Lemma, usize>> = SentimentClass::ALL
        .iter()
        .map(|c| (*c, BTreeMap::new()))
        .collect();
    for (lemma, count) in stratum.lemma_counts() {
        if let Some(class) = lexicon.class_of(lemma) {
            out.get_mut(&class)
                .expect("all classes present")
                .insert(lemma.to_string(), count);
        }
    }
    Ok(out)
}

/// Number of distinct stratum lemmas in each class list.
pub fn unique_lemma_counts(
    stratum: &CorpusStratum,
    lexicon: &SentimentLexicon,
) -> Result<BTreeMap<SentimentClass, usize>> {
    Ok(class_token_counts(stratum, lexicon)?
        .into_iter()
        .map(|(c, m)| (c, m.len()))
        .collect())
}

/// Occurrences of `lemma` as a percentage of the stratum's total words.
pub fn observed_frequency(stratum: &CorpusStratum, lemma: &str) -> Result<f64> {
    let total = stratum.total_word_count();
    if total == 0 {
        return Err(Error::EmptyStratum);
    }
    let count = stratum.lemmas().filter(|l| *l == lemma).count();
    Ok(percent(count, total))
}

pub(crate) fn percent(count: usize, total: usize) -> f64 {
    100.0 * count as f64 / total as f64
}

/// How observed and expected frequencies are compared.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeviationMode {
    /// observed − expected, both in percent.
    #[default]
    Difference,
    /// observed / expected.
    Ratio,
}

impl DeviationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DeviationMode::Difference => "difference",
            DeviationMode::Ratio => "ratio",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaDeviation {
    pub observed_pct: f64,
    pub expected_pct: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationSummary {
    /// Mean over covered attested lemmas; `None` when there are none.
    pub mean_deviation: Option<f64>,
    pub median_deviation: Option<f64>,
    pub per_lemma: BTreeMap<Lemma, LemmaDeviation>,
    /// Attested lemmas the reference table cannot score.
    pub uncovered: BTreeSet<Lemma>,
}

/// Deviation of each attested class lemma from its reference frequency.
pub fn expected_deviation(
    stratum: &CorpusStratum,
    lexicon: &SentimentLexicon,
    reference: &FrequencyTable,
    mode: DeviationMode,
) -> Result<BTreeMap<SentimentClass, DeviationSummary>> {
    check_language(stratum, &reference.language_code)?;
    let counts = class_token_counts(stratum, lexicon)?;
    let total = stratum.total_word_count();
    let mut out = BTreeMap::new();
    for (class, lemmas) in counts {
        let mut per_lemma = BTreeMap::new();
        let mut uncovered = BTreeSet::new();
        for (lemma, count) in lemmas {
            let expected_pct = match reference.lookup(&lemma) {
                Coverage::Covered(pm) => pm / PER_MILLION_PER_PERCENT,
                Coverage::Uncovered => {
                    uncovered.insert(lemma);
                    continue;
                }
            };
            let observed_pct = percent(count, total);
            let deviation = match mode {
                DeviationMode::Difference => observed_pct - expected_pct,
                DeviationMode::Ratio if expected_pct > 0.0 => observed_pct / expected_pct,
                DeviationMode::Ratio => {
                    uncovered.insert(lemma);
                    continue;
                }
            };
            per_lemma.insert(
                lemma,
                LemmaDeviation {
                    observed_pct,
                    expected_pct,
                    deviation,
                },
            );
        }
        let values: Vec<f64> = per_lemma.values().map(|d| d.deviation).collect();
        out.insert(
            class,
            DeviationSummary {
                mean_deviation: mean(&values),
                median_deviation: median(&values),
                per_lemma,
                uncovered,
            },
        );
    }
    Ok(out)
}

pub(crate) fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

pub(crate) fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    Some(if sorted.len().is_multiple_of(2) {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TokensPerLemma {
    pub unique_lemmas: usize,
    pub tokens: usize,
    /// Absent when the class has no attested lemmas.
    pub mean: Option<f64>,
    /// Token count → number of lemmas with that count.
    pub histogram: BTreeMap<usize, usize>,
}

pub fn tokens_per_lemma(
    stratum: &CorpusStratum,
    lexicon: &SentimentLexicon,
) -> Result<BTreeMap<SentimentClass, TokensPerLemma>> {
    Ok(class_token_counts(stratum, lexicon)?
        .into_iter()
        .map(|(class, lemmas)| {
            let mut histogram = BTreeMap::new();
            for count in lemmas.values() {
                *histogram.entry(*count).or_insert(0) += 1;
            }
            let tokens: usize = lemmas.values().sum();
            let unique_lemmas = lemmas.len();
            let mean = (unique_lemmas > 0).then(|| tokens as f64 / unique_lemmas as f64);
            (
                class,
                TokensPerLemma {
                    unique_lemmas,
                    tokens,
                    mean,
                    histogram,
                },
            )
        })
        .collect())
}

/// All frequency metrics for one class of one stratum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassStats {
    pub unique_lemma_count: usize,
    pub token_count: usize,
    pub mean_tokens_per_lemma: Option<f64>,
    pub observed_freq_pct: BTreeMap<Lemma, f64>,
    pub expected_deviation: Option<DeviationSummary>,
}

pub type StratumSentimentStats = BTreeMap<SentimentClass, ClassStats>;

pub fn stratum_stats(
    stratum: &CorpusStratum,
    lexicon: &SentimentLexicon,
    reference: Option<&FrequencyTable>,
    mode: DeviationMode,
) -> Result<StratumSentimentStats> {
    let total = stratum.total_word_count();
    let mut deviations = match reference {
        Some(r) => Some(expected_deviation(stratum, lexicon, r, mode)?),
        None => None,
    };
    Ok(class_token_counts(stratum, lexicon)?
        .into_iter()
        .map(|(class, lemmas)| {
            let token_count: usize = lemmas.values().sum();
            let unique_lemma_count = lemmas.len();
            let stats = ClassStats {
                unique_lemma_count,
                token_count,
                mean_tokens_per_lemma: (unique_lemma_count > 0)
                    .then(|| token_count as f64 / unique_lemma_count as f64),
                observed_freq_pct: lemmas
                    .into_iter()
                    .map(|(l, c)| (l, percent(c, total)))
                    .collect(),
                expected_deviation: deviations.as_mut().and_then(|d| d.remove(&class)),
            };
            (class, stats)
        })
        .collect())
}
