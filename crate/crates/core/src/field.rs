//! Semantic-field width: how many synonym variants of each concept a stratum
//! attests, and how that compares to a baseline stratum.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::CorpusStratum;
use crate::lexicon::{ConceptMap, SentimentClass, Side};
use crate::Lemma;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VariantProfile {
    pub concept_id: String,
    pub class: SentimentClass,
    pub attested_variants: BTreeSet<Lemma>,
    pub variant_count: usize,
    pub token_total: usize,
}

/// One profile per concept in id order, including unattested concepts.
pub fn variant_counts(
    stratum: &CorpusStratum,
    map: &ConceptMap,
    side: Side,
) -> Result<Vec<VariantProfile>> {
    if let Some(lang) = map.language(side) {
        if lang != stratum.language_code {
            return Err(Error::LanguageMismatch {
                expected: lang.to_string(),
                found: stratum.language_code.clone(),
            });
        }
    }
    let mut tokens: BTreeMap<&str, BTreeMap<&str, usize>> = BTreeMap::new();
    for lemma in stratum.lemmas() {
        if let Some(concept) = map.concept_of(side, lemma) {
            *tokens
                .entry(concept.id.as_str())
                .or_default()
                .entry(lemma)
                .or_insert(0) += 1;
        }
    }
    Ok(map
        .concepts()
        .map(|concept| {
            let attested = tokens.remove(concept.id.as_str()).unwrap_or_default();
            VariantProfile {
                concept_id: concept.id.clone(),
                class: concept.class,
                variant_count: attested.len(),
                token_total: attested.values().sum(),
                attested_variants: attested.into_keys().map(str::to_string).collect(),
            }
        })
        .collect())
}

/// The `k` profiles with the most tokens; ties go to the smaller concept id.
pub fn top_k_concepts(profiles: &[VariantProfile], k: usize) -> Result<Vec<VariantProfile>> {
    if k == 0 {
        return Err(Error::InvalidParam("k must be at least 1".into()));
    }
    let mut ranked = profiles.to_vec();
    ranked.sort_by(|a, b| {
        b.token_total
            .cmp(&a.token_total)
            .then_with(|| a.concept_id.cmp(&b.concept_id))
    });
    ranked.truncate(k);
    Ok(ranked)
}

/// Ratio of mean attested variants per concept, test over baseline, taken
/// over the concepts the baseline attests. Below 1 the field narrowed.
pub fn field_width_index(test: &[VariantProfile], baseline: &[VariantProfile]) -> Result<f64> {
    let test_by_id: BTreeMap<&str, &VariantProfile> =
        test.iter().map(|p| (p.concept_id.as_str(), p)).collect();
    let baseline_ids: BTreeSet<&str> = baseline.iter().map(|p| p.concept_id.as_str()).collect();
    if test_by_id.keys().copied().collect::<BTreeSet<_>>() != baseline_ids {
        return Err(Error::Validation(
            "variant profiles come from different concept maps".into(),
        ));
    }
    let attested: Vec<&VariantProfile> = baseline.iter().filter(|p| p.variant_count > 0).collect();
    if attested.is_empty() {
        return Err(Error::EmptyBaseline);
    }
    let base: usize = attested.iter().map(|p| p.variant_count).sum();
    let tested: usize = attested
        .iter()
        .map(|p| test_by_id[p.concept_id.as_str()].variant_count)
        .sum();
    // Both means share the denominator |attested|.
    Ok(tested as f64 / base as f64)
}

/// Mean variant count over the concepts a stratum attests.
pub fn mean_variants_per_concept(profiles: &[VariantProfile]) -> Option<f64> {
    let attested: Vec<usize> = profiles
        .iter()
        .filter(|p| p.variant_count > 0)
        .map(|p| p.variant_count)
        .collect();
    (!attested.is_empty()).then(|| attested.iter().sum::<usize>() as f64 / attested.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldWidthReport {
    pub stratum: String,
    pub mean_variants_per_concept: Option<f64>,
    pub concepts_ranked: Vec<VariantProfile>,
    /// `None` when the baseline attests no concept.
    pub width_ratio_vs_baseline: Option<f64>,
    /// Concepts left out of the ratio because the baseline never attests them.
    pub excluded_concepts: Vec<String>,
}

pub fn field_width_report(
    stratum: impl Into<String>,
    test: &[VariantProfile],
    baseline: &[VariantProfile],
) -> Result<FieldWidthReport> {
    let width_ratio_vs_baseline = match field_width_index(test, baseline) {
        Ok(v) => Some(v),
        Err(Error::EmptyBaseline) => None,
        Err(e) => return Err(e),
    };
    Ok(FieldWidthReport {
        stratum: stratum.into(),
        mean_variants_per_concept: mean_variants_per_concept(test),
        concepts_ranked: top_k_concepts(test, test.len().max(1))?,
        width_ratio_vs_baseline,
        excluded_concepts: baseline
            .iter()
            .filter(|p| p.variant_count == 0)
            .map(|p| p.concept_id.clone())
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{Document, TranslationKind};
    use crate::lexicon::Concept;

    fn map() -> ConceptMap {
        let mut map = ConceptMap::new();
        let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        map.insert(Concept {
            id: "say".into(),
            class: SentimentClass::Epistemic,
            source_lemmas: set(&["сказать", "говорить"]),
            target_lemmas: set(&["say", "tell", "state"]),
        })
        .unwrap();
        map.insert(Concept {
            id: "good".into(),
            class: SentimentClass::Positive,
            source_lemmas: set(&["хороший"]),
            target_lemmas: set(&["good", "fine"]),
        })
        .unwrap();
        map.with_languages("ru", "en")
    }

    fn stratum(lang: &str, words: &[&str]) -> CorpusStratum {
        CorpusStratum::new(lang, TranslationKind::Human).with_document(Document::from_lemmas(
            "d",
            "",
            words.iter().map(|w| w.to_string()).collect(),
        ))
    }

    fn profile(id: &str, variants: usize, tokens: usize) -> VariantProfile {
        VariantProfile {
            concept_id: id.into(),
            class: SentimentClass::Epistemic,
            attested_variants: (0..variants).map(|i| format!("{id}{i}")).collect(),
            variant_count: variants,
            token_total: tokens,
        }
    }

    #[test]
    fn counts_attested_variants() {
        let s = stratum("en", &["say", "say", "say", "say", "say", "tell", "other"]);
        let profiles = variant_counts(&s, &map(), Side::Target).unwrap();
        let say = profiles.iter().find(|p| p.concept_id == "say").unwrap();
        assert_eq!(say.variant_count, 2);
        assert_eq!(say.token_total, 6);
        let good = profiles.iter().find(|p| p.concept_id == "good").unwrap();
        assert_eq!(good.variant_count, 0);
        assert!(good.attested_variants.is_empty());
    }

    #[test]
    fn empty_stratum_all_zero() {
        let s = CorpusStratum::new("en", TranslationKind::Human);
        let profiles = variant_counts(&s, &map(), Side::Target).unwrap();
        assert_eq!(profiles.len(), 2);
        assert!(profiles.iter().all(|p| p.variant_count == 0));
    }

    #[test]
    fn side_language_mismatch() {
        let s = stratum("en", &["say"]);
        assert!(variant_counts(&s, &map(), Side::Source).is_err());
    }

    #[test]
    fn top_k_order_and_ties() {
        let profiles: Vec<_> = (0..10).map(|i| profile(&format!("c{i}"), 1, i)).collect();
        let top = top_k_concepts(&profiles, 5).unwrap();
        let ids: Vec<_> = top.iter().map(|p| p.concept_id.as_str()).collect();
        assert_eq!(ids, ["c9", "c8", "c7", "c6", "c5"]);

        let tied = [profile("b", 1, 7), profile("a", 2, 7), profile("c", 1, 3)];
        let top = top_k_concepts(&tied, 2).unwrap();
        assert_eq!(top[0].concept_id, "a");
        assert_eq!(top[1].concept_id, "b");
        assert_eq!(top_k_concepts(&tied, 50).unwrap().len(), 3);
        assert!(top_k_concepts(&tied, 0).is_err());
    }

    #[test]
    fn width_index_identity_and_collapse() {
        let base = [profile("a", 2, 5), profile("b", 3, 5), profile("c", 0, 0)];
        assert_eq!(field_width_index(&base, &base).unwrap(), 1.0);
        let base = [profile("a", 2, 5), profile("b", 3, 5)];
        let collapsed = [profile("a", 1, 5), profile("b", 1, 5)];
        assert!((field_width_index(&collapsed, &base).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn width_index_empty_baseline() {
        let base = [profile("a", 0, 0)];
        let err = field_width_index(&base, &base).unwrap_err();
        assert_eq!(err.to_string(), "empty baseline field");
    }

    #[test]
    fn width_index_requires_same_map() {
        let base = [profile("a", 1, 1)];
        let other = [profile("b", 1, 1)];
        assert!(field_width_index(&other, &base).is_err());
    }

    #[test]
    fn report_lists_excluded() {
        let base = [profile("a", 2, 5), profile("b", 0, 0)];
        let test = [profile("a", 3, 5), profile("b", 1, 1)];
        let report = field_width_report("en/human", &test, &base).unwrap();
        assert_eq!(report.excluded_concepts, ["b"]);
        assert_eq!(report.width_ratio_vs_baseline, Some(1.5));
        assert_eq!(report.mean_variants_per_concept, Some(2.0));
    }
}
