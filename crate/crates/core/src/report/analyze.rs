//! The `analyze` command: every statistic per grouping factor, computed in
//! memory and then written as one bundle of CSV tables plus `summary.json`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

use super::bundle::{num, opt, write_all, Table};
use super::config::RunConfig;
use super::validate::{check, InputDigest, Inputs};
use super::CommandError;
use crate::error::{Error, Result};
use crate::field::{
    field_width_index, mean_variants_per_concept, top_k_concepts, variant_counts, VariantProfile,
};
use crate::freq::{class_token_counts, expected_deviation, percent, tokens_per_lemma, DeviationMode, DeviationSummary};
use crate::ingest::{stratify, CorpusStratum, TranslationKind};
use crate::lexicon::{ConceptMap, SentimentClass, SentimentLexicon, Side};
use crate::stats::{one_way_anova, tukey_hsd, AnovaResult, GroupSample, TukeyResult};
use crate::vectors::{concept_vector, cosine, euclidean, pca_2d, ConceptVector};
use crate::Lemma;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub deviation_mode: DeviationMode,
    pub alpha: f64,
    pub top_k: usize,
    pub priority: Vec<SentimentClass>,
    pub factors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LexiconSummary {
    pub attested: bool,
    pub sizes: BTreeMap<SentimentClass, usize>,
    pub conflicts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumTotals {
    pub label: String,
    pub language: String,
    pub translation_kind: TranslationKind,
    pub group_keys: BTreeMap<String, String>,
    pub documents: usize,
    pub total_words: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub unique_lemmas: usize,
    pub tokens: usize,
    /// Class tokens as a percentage of all words in the stratum.
    pub class_pct: f64,
    pub mean_tokens_per_lemma: Option<f64>,
    pub tokens_per_lemma_histogram: BTreeMap<usize, usize>,
    pub lemma_tokens: BTreeMap<Lemma, usize>,
    pub deviation: Option<DeviationSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldReport {
    pub side: Side,
    pub profiles: Vec<VariantProfile>,
    pub top_concepts: Vec<String>,
    pub mean_variants_per_concept: Option<f64>,
    /// Against the merged source-kind strata of the map's source language.
    pub field_width_index: Option<f64>,
    pub excluded_concepts: Vec<String>,
    pub concept_vector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelReport {
    pub label: String,
    pub value: String,
    pub language: String,
    pub translation_kind: TranslationKind,
    pub documents: usize,
    pub total_words: usize,
    pub classes: BTreeMap<SentimentClass, ClassReport>,
    pub field: Option<FieldReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDistance {
    pub a: String,
    pub b: String,
    /// Absent when either vector is zero.
    pub cosine: Option<f64>,
    pub euclidean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PcaReport {
    pub labels: Vec<String>,
    pub coords: Vec<(f64, f64)>,
    pub eigenvalues: (f64, f64),
    pub explained_variance: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassTests {
    pub class: SentimentClass,
    pub anova: Option<AnovaResult>,
    pub tukey: Option<TukeyResult>,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorReport {
    pub factor: String,
    pub levels: Vec<LevelReport>,
    pub similarity: Vec<PairDistance>,
    pub pca: Option<PcaReport>,
    pub pca_skipped: Option<String>,
    pub tests: Vec<ClassTests>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub inputs_sha256: String,
    pub settings: Settings,
    pub inputs: Vec<InputDigest>,
    pub lexicons: BTreeMap<String, LexiconSummary>,
    pub strata: Vec<StratumTotals>,
    pub factors: Vec<FactorReport>,
}

#[derive(Debug, Clone)]
pub struct AnalyzeOutcome {
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub summary: Summary,
}

struct Level {
    label: String,
    value: String,
    stratum: CorpusStratum,
}

/// Merge strata per factor value, keeping language and translation kind apart.
fn factor_levels(strata: &[CorpusStratum], factor: &str) -> Result<Vec<Level>> {
    let mut partitions: BTreeMap<(String, TranslationKind), Vec<CorpusStratum>> = BTreeMap::new();
    for s in strata {
        partitions
            .entry((s.language_code.clone(), s.translation_kind))
            .or_default()
            .push(s.clone());
    }
    let mut levels = Vec::new();
    for ((lang, kind), members) in partitions {
        for (value, stratum) in stratify(&members, factor)? {
            let label = match factor {
                "language" | "translation_kind" => format!("{lang}/{kind}"),
                _ => format!("{lang}/{kind}[{factor}={value}]"),
            };
            levels.push(Level {
                label,
                value,
                stratum,
            });
        }
    }
    Ok(levels)
}

fn side_for(map: &ConceptMap, stratum: &CorpusStratum) -> Option<Side> {
    let lang = stratum.language_code.as_str();
    let (src, tgt) = (map.language(Side::Source)?, map.language(Side::Target)?);
    if src == tgt && lang == src {
        return Some(if stratum.translation_kind == TranslationKind::Source {
            Side::Source
        } else {
            Side::Target
        });
    }
    if lang == src {
        Some(Side::Source)
    } else if lang == tgt {
        Some(Side::Target)
    } else {
        None
    }
}

/// All source-kind documents in the map's source language.
fn baseline_stratum(strata: &[CorpusStratum], map: &ConceptMap) -> Option<CorpusStratum> {
    let lang = map.language(Side::Source)?;
    let mut baseline = CorpusStratum::new(lang, TranslationKind::Source);
    for s in strata
        .iter()
        .filter(|s| s.language_code == lang && s.translation_kind == TranslationKind::Source)
    {
        baseline.documents.extend(s.documents.iter().cloned());
    }
    (!baseline.documents.is_empty()).then_some(baseline)
}

fn class_reports(
    stratum: &CorpusStratum,
    lexicon: &SentimentLexicon,
    reference: Option<&crate::freq::FrequencyTable>,
    mode: DeviationMode,
) -> Result<BTreeMap<SentimentClass, ClassReport>> {
    let total = stratum.total_word_count();
    let counts = class_token_counts(stratum, lexicon)?;
    let mut tpl = tokens_per_lemma(stratum, lexicon)?;
    let mut deviations = match reference {
        Some(r) if total > 0 => Some(expected_deviation(stratum, lexicon, r, mode)?),
        _ => None,
    };
    Ok(counts
        .into_iter()
        .map(|(class, lemma_tokens)| {
            let t = tpl.remove(&class).expect("every class present");
            let report = ClassReport {
                unique_lemmas: t.unique_lemmas,
                tokens: t.tokens,
                class_pct: if total > 0 { percent(t.tokens, total) } else { 0.0 },
                mean_tokens_per_lemma: t.mean,
                tokens_per_lemma_histogram: t.histogram,
                lemma_tokens,
                deviation: deviations.as_mut().and_then(|d| d.remove(&class)),
            };
            (class, report)
        })
        .collect())
}

fn field_report(
    stratum: &CorpusStratum,
    map: &ConceptMap,
    side: Side,
    baseline: Option<&[VariantProfile]>,
    top_k: usize,
) -> Result<FieldReport> {
    let profiles = variant_counts(stratum, map, side)?;
    let top_concepts = top_k_concepts(&profiles, top_k)?
        .into_iter()
        .filter(|p| p.token_total > 0)
        .map(|p| p.concept_id)
        .collect();
    let field_width_index = match baseline {
        Some(b) => match field_width_index(&profiles, b) {
            Ok(v) => Some(v),
            Err(Error::EmptyBaseline) => None,
            Err(e) => return Err(e),
        },
        None => None,
    };
    let excluded_concepts = baseline
        .map(|b| {
            b.iter()
                .filter(|p| p.variant_count == 0)
                .map(|p| p.concept_id.clone())
                .collect()
        })
        .unwrap_or_default();
    let concept_vector = concept_vector(stratum, map, side)?.values;
    Ok(FieldReport {
        side,
        mean_variants_per_concept: mean_variants_per_concept(&profiles),
        profiles,
        top_concepts,
        field_width_index,
        excluded_concepts,
        concept_vector,
    })
}

/// Per-document share of class tokens, one group per level.
fn class_groups(levels: &[Level], lexicons: &BTreeMap<String, SentimentLexicon>, class: SentimentClass) -> Vec<GroupSample> {
    levels
        .iter()
        .map(|level| {
            let lexicon = &lexicons[&level.stratum.language_code];
            let values = level
                .stratum
                .documents
                .iter()
                .filter(|d| d.total_word_count > 0)
                .map(|d| {
                    let hits = d
                        .lemmas
                        .iter()
                        .filter(|l| lexicon.class_of(l) == Some(class))
                        .count();
                    percent(hits, d.total_word_count)
                })
                .collect();
            GroupSample::new(level.label.clone(), values)
        })
        .collect()
}

fn class_tests(
    levels: &[Level],
    lexicons: &BTreeMap<String, SentimentLexicon>,
    class: SentimentClass,
    alpha: f64,
) -> Result<ClassTests> {
    let groups = class_groups(levels, lexicons, class);
    let skip = |reason: String| ClassTests {
        class,
        anova: None,
        tukey: None,
        skipped: Some(reason),
    };
    if groups.len() < 2 {
        return Ok(skip("factor has fewer than two levels".into()));
    }
    if let Some(g) = groups.iter().find(|g| g.values.len() < 2) {
        return Ok(skip(format!(
            "{} has {} non-empty document(s); at least 2 per level are needed",
            g.label,
            g.values.len()
        )));
    }
    Ok(ClassTests {
        class,
        anova: Some(one_way_anova(&groups)?),
        tukey: Some(tukey_hsd(&groups, alpha)?),
        skipped: None,
    })
}

fn vector_comparisons(
    vectors: &[ConceptVector],
) -> Result<(Vec<PairDistance>, Option<PcaReport>, Option<String>)> {
    let mut similarity = Vec::new();
    for (i, a) in vectors.iter().enumerate() {
        for b in &vectors[i + 1..] {
            let cos = match cosine(a, b) {
                Ok(c) => Some(c),
                Err(Error::UndefinedCosine) => None,
                Err(e) => return Err(e),
            };
            similarity.push(PairDistance {
                a: a.stratum_label.clone(),
                b: b.stratum_label.clone(),
                cosine: cos,
                euclidean: euclidean(a, b)?,
            });
        }
    }
    if vectors.len() < 2 {
        return Ok((similarity, None, Some("fewer than two concept vectors".into())));
    }
    match pca_2d(vectors) {
        Ok(p) => Ok((
            similarity,
            Some(PcaReport {
                labels: p.labels,
                coords: p.coords,
                eigenvalues: (p.axes[0].value, p.axes[1].value),
                explained_variance: p.explained_variance,
            }),
            None,
        )),
        Err(Error::DegenerateCovariance) => {
            Ok((similarity, None, Some("concept vectors have zero variance".into())))
        }
        Err(e) => Err(e),
    }
}

fn factor_report(config: &RunConfig, inputs: &Inputs, factor: &str, baseline: Option<&[VariantProfile]>) -> Result<FactorReport> {
    let ctx = |what: String| move |e: Error| e.context(what);
    let levels = factor_levels(&inputs.strata, factor).map_err(ctx(format!("factor {factor}")))?;
    let mut reports = Vec::with_capacity(levels.len());
    let mut vectors = Vec::new();
    for level in &levels {
        let s = &level.stratum;
        let where_ = format!("factor {factor}, stratum {}", level.label);
        let lexicon = &inputs.lexicons[&s.language_code];
        let classes = class_reports(
            s,
            lexicon,
            inputs.references.get(&s.language_code),
            config.deviation_mode,
        )
        .map_err(ctx(where_.clone()))?;
        let field = match &inputs.concept_map {
            Some(map) => match side_for(map, s) {
                Some(side) => {
                    let report = field_report(s, map, side, baseline, config.top_k)
                        .map_err(ctx(where_.clone()))?;
                    vectors.push(
                        ConceptVector::new(
                            level.label.clone(),
                            map.concepts().map(|c| c.id.clone()).collect(),
                            report.concept_vector.clone(),
                        )
                        .map_err(ctx(where_.clone()))?,
                    );
                    Some(report)
                }
                None => None,
            },
            None => None,
        };
        reports.push(LevelReport {
            label: level.label.clone(),
            value: level.value.clone(),
            language: s.language_code.clone(),
            translation_kind: s.translation_kind,
            documents: s.documents.len(),
            total_words: s.total_word_count(),
            classes,
            field,
        });
    }
    let (similarity, pca, pca_skipped) =
        vector_comparisons(&vectors).map_err(ctx(format!("factor {factor}, concept vectors")))?;
    let tests = SentimentClass::ALL
        .iter()
        .map(|&class| {
            class_tests(&levels, &inputs.lexicons, class, config.alpha)
                .map_err(ctx(format!("factor {factor}, class {class}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FactorReport {
        factor: factor.to_string(),
        levels: reports,
        similarity,
        pca,
        pca_skipped,
        tests,
    })
}

/// Compute the full summary from validated inputs. Nothing is written.
pub fn run_analysis(config: &RunConfig, inputs: &Inputs) -> Result<Summary> {
    let baseline = match &inputs.concept_map {
        Some(map) => match baseline_stratum(&inputs.strata, map) {
            Some(b) => Some(
                variant_counts(&b, map, Side::Source).map_err(|e| e.context("source baseline"))?,
            ),
            None => None,
        },
        None => None,
    };
    let factors = config
        .factors
        .iter()
        .map(|f| factor_report(config, inputs, f, baseline.as_deref()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Summary {
        inputs_sha256: inputs.combined_sha256(),
        settings: Settings {
            deviation_mode: config.deviation_mode,
            alpha: config.alpha,
            top_k: config.top_k,
            priority: config.priority.order().to_vec(),
            factors: config.factors.clone(),
        },
        inputs: inputs.digests.clone(),
        lexicons: inputs
            .lexicons
            .iter()
            .map(|(lang, lex)| {
                let sizes = SentimentClass::ALL
                    .iter()
                    .map(|&c| (c, lex.list(c).len()))
                    .collect();
                let summary = LexiconSummary {
                    attested: lex.attested,
                    sizes,
                    conflicts: lex.conflicts().len(),
                };
                (lang.clone(), summary)
            })
            .collect(),
        strata: inputs
            .strata
            .iter()
            .map(|s| StratumTotals {
                label: s.label(),
                language: s.language_code.clone(),
                translation_kind: s.translation_kind,
                group_keys: s.group_keys.clone(),
                documents: s.documents.len(),
                total_words: s.total_word_count(),
            })
            .collect(),
        factors,
    })
}

fn mode_line(s: &Settings) -> String {
    let priority: Vec<&str> = s.priority.iter().map(|c| c.as_str()).collect();
    format!(
        "deviation={}; alpha={}; top_k={}; priority={}; factors={}",
        s.deviation_mode.as_str(),
        num(s.alpha),
        s.top_k,
        priority.join(">"),
        s.factors.join(",")
    )
}

fn join_keys(keys: &BTreeMap<String, String>) -> String {
    keys.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Every table of the bundle, rendered, plus `summary.json`.
pub fn render_bundle(summary: &Summary) -> Result<Vec<(String, Vec<u8>)>> {
    let mut strata = Table::new(
        "strata.csv",
        "ingest word totals per stratum",
        &["stratum", "language", "translation_kind", "group_keys", "documents", "total_words"],
    );
    for s in &summary.strata {
        strata.push(vec![
            s.label.clone(),
            s.language.clone(),
            s.translation_kind.to_string(),
            join_keys(&s.group_keys),
            s.documents.to_string(),
            s.total_words.to_string(),
        ]);
    }

    let mut unique = Table::new(
        "unique_lemmas.csv",
        "unique sentiment lemmas per class and stratum",
        &["factor", "stratum", "class", "unique_lemmas", "tokens", "class_pct", "total_words"],
    );
    let mut tpl = Table::new(
        "tokens_per_lemma.csv",
        "mean tokens per sentiment lemma",
        &["factor", "stratum", "class", "unique_lemmas", "tokens", "mean_tokens_per_lemma"],
    );
    let mut hist = Table::new(
        "tokens_per_lemma_hist.csv",
        "tokens-per-lemma histogram",
        &["factor", "stratum", "class", "tokens_per_lemma", "lemmas"],
    );
    let mut observed = Table::new(
        "observed.csv",
        "observed lemma frequencies as percent of stratum words",
        &["factor", "stratum", "class", "lemma", "tokens", "observed_pct"],
    );
    let mut deviation = Table::new(
        "deviation.csv",
        "per-lemma deviation from reference-corpus frequency",
        &["factor", "stratum", "class", "lemma", "observed_pct", "expected_pct", "deviation"],
    );
    let mut dev_summary = Table::new(
        "deviation_summary.csv",
        "class mean and median deviation from reference-corpus frequency",
        &[
            "factor",
            "stratum",
            "class",
            "covered_lemmas",
            "uncovered_lemmas",
            "mean_deviation",
            "median_deviation",
        ],
    );
    let mut variants = Table::new(
        "variants.csv",
        "translation variants per concept",
        &["factor", "stratum", "side", "concept_id", "class", "variant_count", "token_total", "variants"],
    );
    let mut top = Table::new(
        "top_concepts.csv",
        "most frequent concepts by token count",
        &["factor", "stratum", "rank", "concept_id", "class", "token_total", "variant_count", "variants"],
    );
    let mut width = Table::new(
        "field_width.csv",
        "semantic-field width against the source baseline",
        &[
            "factor",
            "stratum",
            "side",
            "mean_variants_per_concept",
            "field_width_index",
            "excluded_concepts",
        ],
    );
    let mut similarity = Table::new(
        "similarity.csv",
        "concept-vector cosine similarity and Euclidean distance",
        &["factor", "a", "b", "cosine", "euclidean"],
    );
    let mut pca = Table::new(
        "pca.csv",
        "concept-vector PCA coordinates",
        &["factor", "stratum", "pc1", "pc2"],
    );
    let mut pca_var = Table::new(
        "pca_variance.csv",
        "concept-vector PCA explained variance",
        &["factor", "component", "eigenvalue", "explained_variance"],
    );
    let mut anova = Table::new(
        "anova.csv",
        "one-way ANOVA of per-document class share across factor levels",
        &[
            "factor",
            "class",
            "df_between",
            "df_within",
            "ss_between",
            "ss_within",
            "f_stat",
            "p_value",
            "degenerate_variance",
            "levene_f",
            "levene_p",
            "note",
        ],
    );
    let mut tukey = Table::new(
        "tukey.csv",
        "Tukey HSD pairwise comparisons",
        &["factor", "class", "a", "b", "mean_diff", "q_stat", "p_adj", "significant"],
    );
    let mut inputs = Table::new(
        "inputs.csv",
        "input file checksums",
        &["role", "path", "bytes", "sha256"],
    );

    for d in &summary.inputs {
        inputs.push(vec![d.role.clone(), d.path.clone(), d.bytes.to_string(), d.sha256.clone()]);
    }

    for f in &summary.factors {
        let factor = &f.factor;
        for level in &f.levels {
            let label = &level.label;
            for (class, c) in &level.classes {
                let row = |rest: Vec<String>| {
                    let mut r = vec![factor.clone(), label.clone(), class.to_string()];
                    r.extend(rest);
                    r
                };
                unique.push(row(vec![
                    c.unique_lemmas.to_string(),
                    c.tokens.to_string(),
                    num(c.class_pct),
                    level.total_words.to_string(),
                ]));
                tpl.push(row(vec![
                    c.unique_lemmas.to_string(),
                    c.tokens.to_string(),
                    opt(c.mean_tokens_per_lemma),
                ]));
                for (k, n) in &c.tokens_per_lemma_histogram {
                    hist.push(row(vec![k.to_string(), n.to_string()]));
                }
                for (lemma, n) in &c.lemma_tokens {
                    observed.push(row(vec![
                        lemma.clone(),
                        n.to_string(),
                        num(percent(*n, level.total_words)),
                    ]));
                }
                if let Some(d) = &c.deviation {
                    for (lemma, ld) in &d.per_lemma {
                        deviation.push(row(vec![
                            lemma.clone(),
                            num(ld.observed_pct),
                            num(ld.expected_pct),
                            num(ld.deviation),
                        ]));
                    }
                    dev_summary.push(row(vec![
                        d.per_lemma.len().to_string(),
                        d.uncovered.len().to_string(),
                        opt(d.mean_deviation),
                        opt(d.median_deviation),
                    ]));
                }
            }
            if let Some(field) = &level.field {
                let side = field.side.to_string();
                let list = |p: &VariantProfile| {
                    p.attested_variants.iter().cloned().collect::<Vec<_>>().join(" ")
                };
                for p in &field.profiles {
                    variants.push(vec![
                        factor.clone(),
                        label.clone(),
                        side.clone(),
                        p.concept_id.clone(),
                        p.class.to_string(),
                        p.variant_count.to_string(),
                        p.token_total.to_string(),
                        list(p),
                    ]);
                }
                for (rank, id) in field.top_concepts.iter().enumerate() {
                    let p = field
                        .profiles
                        .iter()
                        .find(|p| &p.concept_id == id)
                        .expect("top concept among profiles");
                    top.push(vec![
                        factor.clone(),
                        label.clone(),
                        (rank + 1).to_string(),
                        id.clone(),
                        p.class.to_string(),
                        p.token_total.to_string(),
                        p.variant_count.to_string(),
                        list(p),
                    ]);
                }
                width.push(vec![
                    factor.clone(),
                    label.clone(),
                    side,
                    opt(field.mean_variants_per_concept),
                    opt(field.field_width_index),
                    field.excluded_concepts.join(" "),
                ]);
            }
        }
        for pair in &f.similarity {
            similarity.push(vec![
                factor.clone(),
                pair.a.clone(),
                pair.b.clone(),
                opt(pair.cosine),
                num(pair.euclidean),
            ]);
        }
        if let Some(p) = &f.pca {
            for (label, (x, y)) in p.labels.iter().zip(&p.coords) {
                pca.push(vec![factor.clone(), label.clone(), num(*x), num(*y)]);
            }
            pca_var.push(vec![factor.clone(), "1".into(), num(p.eigenvalues.0), num(p.explained_variance.0)]);
            pca_var.push(vec![factor.clone(), "2".into(), num(p.eigenvalues.1), num(p.explained_variance.1)]);
        }
        for t in &f.tests {
            let class = t.class.to_string();
            match &t.anova {
                Some(a) => {
                    let (lf, lp) = match &a.levene {
                        Some(l) => (num(l.f_stat), num(l.p_value)),
                        None => (String::new(), String::new()),
                    };
                    anova.push(vec![
                        factor.clone(),
                        class.clone(),
                        a.df_between.to_string(),
                        a.df_within.to_string(),
                        num(a.ss_between),
                        num(a.ss_within),
                        num(a.f_stat),
                        num(a.p_value),
                        a.degenerate_variance.to_string(),
                        lf,
                        lp,
                        String::new(),
                    ]);
                }
                None => {
                    let mut row = vec![factor.clone(), class.clone()];
                    row.extend(std::iter::repeat_n(String::new(), 9));
                    row.push(t.skipped.clone().unwrap_or_default());
                    anova.push(row);
                }
            }
            if let Some(tk) = &t.tukey {
                for p in &tk.pairs {
                    tukey.push(vec![
                        factor.clone(),
                        class.clone(),
                        p.a.clone(),
                        p.b.clone(),
                        num(p.mean_diff),
                        num(p.q_stat),
                        num(p.p_adj),
                        p.significant_at_alpha.to_string(),
                    ]);
                }
            }
        }
    }

    let mode = mode_line(&summary.settings);
    let mut files = Vec::new();
    for table in [
        strata, unique, tpl, hist, observed, deviation, dev_summary, variants, top, width,
        similarity, pca, pca_var, anova, tukey, inputs,
    ] {
        files.push((
            table.file.to_string(),
            table.render(&mode, &summary.inputs_sha256)?.into_bytes(),
        ));
    }
    let mut json = serde_json::to_string_pretty(summary)
        .map_err(|e| Error::Validation(format!("summary.json: {e}")))?;
    json.push('\n');
    files.push(("summary.json".to_string(), json.into_bytes()));
    Ok(files)
}

/// Validate, analyze and write the bundle to the configured output directory.
pub fn analyze(config: &RunConfig) -> Result<AnalyzeOutcome, CommandError> {
    let (report, inputs) = check(config);
    let Some(inputs) = inputs else {
        return Err(CommandError::Invalid(report));
    };
    let summary = run_analysis(config, &inputs).map_err(CommandError::Analysis)?;
    let files = render_bundle(&summary).map_err(CommandError::Analysis)?;
    let output_dir = config.output_path();
    let files = write_all(&output_dir, &files).map_err(CommandError::Analysis)?;
    Ok(AnalyzeOutcome {
        output_dir,
        files,
        summary,
    })
}
