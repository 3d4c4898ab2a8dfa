//! Synthetic source corpora and parameterized translation channels.
//!
//! A channel re-emits every concept token of a source stratum as a
//! target-language variant of the same concept. Source variants, ranked by
//! token count, map onto target variants ranked by reference frequency.
//! The machine channel keeps at most as many variants as the source used
//! and folds the rest onto the most frequent one. The human channel adds
//! further target variants. `norm_pull` blends each emitted lemma's rate
//! toward its reference frequency.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Binomial;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freq::FrequencyTable;
use crate::ingest::{CorpusStratum, Document, TranslationKind};
use crate::lexicon::{ConceptMap, Side};
use crate::Lemma;

/// Target/source word ratio used when no inflation is configured.
pub const DEFAULT_LENGTH_INFLATION: f64 = 1.19;
pub const DEFAULT_MACHINE_FACTOR: f64 = 0.4;
pub const DEFAULT_HUMAN_FACTOR: f64 = 1.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Machine,
    Human,
}

impl ChannelKind {
    pub fn translation_kind(self) -> TranslationKind {
        match self {
            ChannelKind::Machine => TranslationKind::Machine,
            ChannelKind::Human => TranslationKind::Human,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub kind: ChannelKind,
    /// Expected variants out per variant in; below 1 narrows.
    pub narrow_widen_factor: f64,
    /// 0 keeps the channel's own rates, 1 emits at reference rates.
    #[serde(default)]
    pub norm_pull: f64,
    #[serde(default = "default_inflation")]
    pub length_inflation: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_inflation() -> f64 {
    DEFAULT_LENGTH_INFLATION
}

impl ChannelParams {
    pub fn machine(seed: u64) -> Self {
        Self {
            kind: ChannelKind::Machine,
            narrow_widen_factor: DEFAULT_MACHINE_FACTOR,
            norm_pull: 0.0,
            length_inflation: DEFAULT_LENGTH_INFLATION,
            seed,
        }
    }

    pub fn human(seed: u64) -> Self {
        Self {
            kind: ChannelKind::Human,
            narrow_widen_factor: DEFAULT_HUMAN_FACTOR,
            ..Self::machine(seed)
        }
    }

    /// Factor 1, no pull, no inflation.
    pub fn identity(kind: ChannelKind, seed: u64) -> Self {
        Self {
            kind,
            narrow_widen_factor: 1.0,
            norm_pull: 0.0,
            length_inflation: 1.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length_inflation.is_finite() && self.length_inflation > 0.0) {
            return Err(Error::InvalidParam(format!(
                "length_inflation must be positive, got {}",
                self.length_inflation
            )));
        }
        if !(self.narrow_widen_factor.is_finite() && self.narrow_widen_factor > 0.0) {
            return Err(Error::InvalidParam(format!(
                "narrow_widen_factor must be positive, got {}",
                self.narrow_widen_factor
            )));
        }
        if !(0.0..=1.0).contains(&self.norm_pull) {
            return Err(Error::InvalidParam(format!(
                "norm_pull must lie in [0, 1], got {}",
                self.norm_pull
            )));
        }
        Ok(())
    }
}

/// Settings for [`generate_source`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub language: String,
    pub target_words: usize,
    /// Share of words drawn from concept lemmas; the rest is filler.
    #[serde(default = "default_density")]
    pub concept_density: f64,
    /// Relative weight per concept id; empty means uniform.
    #[serde(default)]
    pub concept_budget: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

fn default_density() -> f64 {
    0.1
}

impl SourceSpec {
    pub fn new(language: impl Into<String>, target_words: usize, seed: u64) -> Self {
        Self {
            language: language.into(),
            target_words,
            concept_density: default_density(),
            concept_budget: BTreeMap::new(),
            seed,
        }
    }
}

const FILLER_VOCABULARY: usize = 200;
const WORDS_PER_LINE: usize = 20;

/// Letter-only filler lemmas (`filaa`, `filab`, …) that collide with no concept lemma.
pub fn filler_vocabulary(map: &ConceptMap, size: usize) -> Vec<Lemma> {
    let taken: BTreeSet<&str> = map
        .concepts()
        .flat_map(|c| c.source_lemmas.iter().chain(&c.target_lemmas))
        .map(String::as_str)
        .collect();
    let mut out = Vec::with_capacity(size);
    let mut i = 0usize;
    while out.len() < size {
        let word = format!(
            "fil{}{}{}",
            (b'a' + (i / 676 % 26) as u8) as char,
            (b'a' + (i / 26 % 26) as u8) as char,
            (b'a' + (i % 26) as u8) as char
        );
        if !taken.contains(word.as_str()) {
            out.push(word);
        }
        i += 1;
    }
    out
}

fn zipf_weights(n: usize) -> Vec<f64> {
    (1..=n).map(|r| 1.0 / r as f64).collect()
}

fn document_text(lemmas: &[Lemma]) -> String {
    let mut text = String::new();
    for line in lemmas.chunks(WORDS_PER_LINE) {
        text.push_str(&line.join(" "));
        text.push('\n');
    }
    text
}

/// Sample a source-language stratum: concept lemmas at `concept_density`,
/// Zipf-distributed within each concept, padded with filler.
pub fn generate_source(map: &ConceptMap, spec: &SourceSpec) -> Result<CorpusStratum> {
    if map.is_empty() {
        return Err(Error::InvalidParam("concept map is empty".into()));
    }
    if spec.target_words == 0 {
        return Err(Error::InvalidParam("target_words must be positive".into()));
    }
    if !(0.0..=1.0).contains(&spec.concept_density) {
        return Err(Error::InvalidParam(format!(
            "concept_density must lie in [0, 1], got {}",
            spec.concept_density
        )));
    }
    for (id, w) in &spec.concept_budget {
        if map.get(id).is_none() {
            return Err(Error::InvalidParam(format!("budget names unknown concept {id:?}")));
        }
        if !(w.is_finite() && *w >= 0.0) {
            return Err(Error::InvalidParam(format!(
                "budget weight for {id:?} must be finite and non-negative"
            )));
        }
    }
    let concepts: Vec<_> = map.concepts().collect();
    let weights: Vec<f64> = concepts
        .iter()
        .map(|c| {
            if spec.concept_budget.is_empty() {
                1.0
            } else {
                spec.concept_budget.get(&c.id).copied().unwrap_or(0.0)
            }
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut lemmas: Vec<Lemma> = Vec::with_capacity(spec.target_words);
    let concept_tokens = if weights.iter().any(|w| *w > 0.0) {
        (spec.target_words as f64 * spec.concept_density).round() as usize
    } else {
        0
    };
    if concept_tokens > 0 {
        let pick_concept = WeightedIndex::new(&weights).expect("positive weights");
        let variant_pickers: Vec<(Vec<&Lemma>, WeightedIndex<f64>)> = concepts
            .iter()
            .map(|c| {
                let variants: Vec<&Lemma> = c.source_lemmas.iter().collect();
                let picker = WeightedIndex::new(zipf_weights(variants.len())).expect("non-empty");
                (variants, picker)
            })
            .collect();
        for _ in 0..concept_tokens {
            let (variants, picker) = &variant_pickers[pick_concept.sample(&mut rng)];
            lemmas.push(variants[picker.sample(&mut rng)].clone());
        }
    }
    let filler = filler_vocabulary(map, FILLER_VOCABULARY);
    let pick_filler = WeightedIndex::new(zipf_weights(filler.len())).expect("non-empty");
    while lemmas.len() < spec.target_words {
        lemmas.push(filler[pick_filler.sample(&mut rng)].clone());
    }
    lemmas.shuffle(&mut rng);

    let id = format!("synthetic-source-{}", spec.seed);
    let text = document_text(&lemmas);
    Ok(CorpusStratum::new(spec.language.clone(), TranslationKind::Source)
        .with_document(Document::from_lemmas(id, text, lemmas)))
}

fn stochastic_round(x: f64, rng: &mut impl Rng) -> usize {
    let floor = x.floor();
    let frac = x - floor;
    floor as usize + usize::from(rng.random::<f64>() < frac)
}

fn multinomial(n: usize, weights: &[f64], rng: &mut impl Rng) -> Vec<usize> {
    let mut out = vec![0; weights.len()];
    let mut remaining = n as u64;
    let mut mass: f64 = weights.iter().sum();
    for (i, w) in weights.iter().enumerate() {
        if remaining == 0 || mass <= 0.0 {
            break;
        }
        let p = (w / mass).clamp(0.0, 1.0);
        let draw = if i + 1 == weights.len() || p >= 1.0 {
            remaining
        } else {
            Binomial::new(remaining, p).expect("valid binomial").sample(rng)
        };
        out[i] = draw as usize;
        remaining -= draw;
        mass -= w;
    }
    out
}

/// Re-emit `source` through a translation channel into `target_ref`'s language.
pub fn apply_channel(
    source: &CorpusStratum,
    map: &ConceptMap,
    params: &ChannelParams,
    target_ref: &FrequencyTable,
) -> Result<CorpusStratum> {
    params.validate()?;
    if let Some(lang) = map.language(Side::Source) {
        if lang != source.language_code {
            return Err(Error::LanguageMismatch {
                expected: lang.to_string(),
                found: source.language_code.clone(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let source_total = source.total_word_count();
    let total_out = (source_total as f64 * params.length_inflation).round() as usize;

    let mut source_variants: BTreeMap<&str, HashMap<&str, usize>> = BTreeMap::new();
    let mut filler_pool: Vec<&str> = Vec::new();
    for lemma in source.lemmas() {
        match map.concept_of(Side::Source, lemma) {
            Some(c) => *source_variants
                .entry(c.id.as_str())
                .or_default()
                .entry(lemma)
                .or_insert(0) += 1,
            None => filler_pool.push(lemma),
        }
    }

    let mut out: Vec<Lemma> = Vec::with_capacity(total_out);
    for concept in map.concepts() {
        let Some(variants) = source_variants.get(concept.id.as_str()) else {
            continue;
        };
        let mut ranked_source: Vec<(&str, usize)> = variants.iter().map(|(l, c)| (*l, *c)).collect();
        ranked_source.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let n_in: usize = ranked_source.iter().map(|v| v.1).sum();
        let v_in = ranked_source.len();

        let mut targets: Vec<&Lemma> = concept.target_lemmas.iter().collect();
        targets.sort_by(|a, b| {
            target_ref
                .lookup(b)
                .per_million()
                .total_cmp(&target_ref.lookup(a).per_million())
                .then_with(|| a.cmp(b))
        });
        let t = targets.len();

        let wanted = stochastic_round(v_in as f64 * params.narrow_widen_factor, &mut rng);
        let m = match params.kind {
            ChannelKind::Machine => wanted.clamp(1, v_in).min(t),
            ChannelKind::Human => wanted.clamp(1, t),
        };

        // Expected channel tokens per target variant before the pull.
        let mut channel = vec![0.0; t];
        let scale = params.length_inflation;
        let mapped = m.min(v_in);
        for (rank, (_, count)) in ranked_source.iter().enumerate() {
            let slot = if rank < mapped { rank } else { 0 };
            channel[slot] += *count as f64 * scale;
        }
        if m > v_in {
            // Widening: extra variants drawn from the unused target lemmas,
            // each taking an equal share of the concept's mass.
            let extra = m - v_in;
            let keep = v_in as f64 / m as f64;
            let mass: f64 = channel.iter().sum();
            channel.iter_mut().for_each(|x| *x *= keep);
            let picks = rand::seq::index::sample(&mut rng, t - v_in, extra);
            for idx in picks.iter() {
                channel[v_in + idx] = mass / m as f64;
            }
        }

        let pull = params.norm_pull;
        let mixed: Vec<f64> = channel
            .iter()
            .zip(&targets)
            .map(|(chan, lemma)| {
                if *chan <= 0.0 {
                    return 0.0;
                }
                let reference = total_out as f64 * target_ref.lookup(lemma).per_million() / 1e6;
                (1.0 - pull) * chan + pull * reference
            })
            .collect();
        let n_out = mixed.iter().sum::<f64>().round() as usize;
        debug_assert!(pull > 0.0 || n_out == (n_in as f64 * scale).round() as usize);
        for (lemma, count) in targets.iter().zip(multinomial(n_out, &mixed, &mut rng)) {
            out.extend(std::iter::repeat_n((*lemma).clone(), count));
        }
    }

    let filler_needed = total_out.saturating_sub(out.len());
    if filler_needed > 0 {
        if filler_pool.is_empty() {
            let vocab = filler_vocabulary(map, FILLER_VOCABULARY);
            let pick = WeightedIndex::new(zipf_weights(vocab.len())).expect("non-empty");
            out.extend((0..filler_needed).map(|_| vocab[pick.sample(&mut rng)].clone()));
        } else {
            out.extend(
                (0..filler_needed)
                    .map(|_| filler_pool[rng.random_range(0..filler_pool.len())].to_string()),
            );
        }
    }
    out.shuffle(&mut rng);

    let mut stratum = CorpusStratum::new(
        target_ref.language_code.clone(),
        params.kind.translation_kind(),
    );
    stratum.group_keys = source.group_keys.clone();
    let id = format!("synthetic-{}-{}", params.kind.translation_kind(), params.seed);
    let text = document_text(&out);
    Ok(stratum.with_document(Document::from_lemmas(id, text, out)))
}

/// Reference table over one side of a concept map: each concept gets a base
/// rate between 600 and 1,800 per million, split across its variants as
/// `base / sqrt(rank)` in lemma order.
pub fn synthetic_reference(map: &ConceptMap, side: Side, language: &str) -> FrequencyTable {
    let mut table = FrequencyTable::new(language, "synthetic reference");
    for (i, concept) in map.concepts().enumerate() {
        let base = 600.0 + 1200.0 * ((i * 7919) % 97) as f64 / 96.0;
        for (rank, lemma) in concept.lemmas(side).iter().enumerate() {
            table
                .insert(lemma.clone(), base / ((rank + 1) as f64).sqrt())
                .expect("finite rate");
        }
    }
    table
}
