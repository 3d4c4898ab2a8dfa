//! The `synth` command: a synthetic source text, its channel translations,
//! and everything `analyze` needs to read them back.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use super::bundle::write_all;
use super::config::{ConceptMapConfig, LexiconConfig, RunConfig, SynthConfig};
use super::CommandError;
use crate::error::{Error, Result};
use crate::freq::FrequencyTable;
use crate::ingest::{tokenize, LangProfile, Manifest, ManifestEntry, TranslationKind};
use crate::lexicon::{merge_disjoint, ConceptMap, Priority, RawEntry, Side};
use crate::synth::{apply_channel, generate_source, synthetic_reference, ChannelParams, SourceSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratedText {
    pub id: String,
    pub path: PathBuf,
    pub translation_kind: TranslationKind,
    pub words: usize,
}

#[derive(Debug, Clone)]
pub struct SynthOutcome {
    pub output_dir: PathBuf,
    pub texts: Vec<GeneratedText>,
    pub files: Vec<PathBuf>,
}

fn channels(synth: &SynthConfig) -> Vec<ChannelParams> {
    if synth.channels.is_empty() {
        vec![ChannelParams::machine(synth.seed), ChannelParams::human(synth.seed)]
    } else {
        synth.channels.clone()
    }
}

/// Every lemma must survive tokenization unchanged, or the written texts
/// would not read back as the lemmas generated.
fn check_round_trip(map: &ConceptMap, side: Side, profile: &LangProfile) -> Result<()> {
    for concept in map.concepts() {
        for lemma in concept.lemmas(side) {
            if tokenize(lemma, profile) != [lemma.as_str()] {
                return Err(Error::InvalidParam(format!(
                    "concept {} lemma {lemma:?} is not a single {} token",
                    concept.id,
                    profile.language_code()
                )));
            }
        }
    }
    Ok(())
}

fn concept_map_tsv(map: &ConceptMap) -> String {
    let mut out = String::from("# concept_id\tclass\tsource lemmas\ttarget lemmas\n");
    for c in map.concepts() {
        let join = |side| c.lemmas(side).iter().cloned().collect::<Vec<_>>().join(",");
        let _ = writeln!(out, "{}\t{}\t{}\t{}", c.id, c.class, join(Side::Source), join(Side::Target));
    }
    out
}

fn reference_tsv(table: &FrequencyTable) -> String {
    let mut out = format!("# corpus: {}\n", table.corpus_name);
    for (lemma, pm) in table.entries() {
        let _ = writeln!(out, "{lemma}\t{pm}");
    }
    out
}

/// `lemma<TAB>class` lines covering every concept lemma in `language`.
fn lexicon_tsv(map: &ConceptMap, language: &str) -> String {
    let raws: Vec<RawEntry> = [Side::Source, Side::Target]
        .into_iter()
        .filter(|side| map.language(*side) == Some(language))
        .flat_map(|side| {
            map.concepts().flat_map(move |c| {
                c.lemmas(side).iter().map(move |l| RawEntry {
                    lemma: l.clone(),
                    class: c.class,
                    source: "concept-map".into(),
                })
            })
        })
        .collect();
    let lexicon = merge_disjoint(language, &raws, &Priority::default());
    let mut out = String::new();
    for class in crate::lexicon::SentimentClass::ALL {
        for lemma in lexicon.list(class) {
            let _ = writeln!(out, "{lemma}\t{class}");
        }
    }
    out
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Validation(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text.into_bytes())
}

fn config_error(e: Error) -> CommandError {
    CommandError::Config(e)
}

/// Generate the corpus described by `config` into its output directory.
pub fn synth(config: &RunConfig) -> Result<SynthOutcome, CommandError> {
    let settings = config.synth_or_default();
    let entry = config
        .concept_map
        .as_ref()
        .ok_or_else(|| config_error(Error::InvalidParam("no concept map configured".into())))?;
    let (src, tgt) = (entry.source_language.as_str(), entry.target_language.as_str());
    let map = ConceptMap::load(&config.resolve(&entry.path))
        .map_err(config_error)?
        .with_languages(src, tgt);
    for (side, lang) in [(Side::Source, src), (Side::Target, tgt)] {
        let profile = LangProfile::for_code(lang).ok_or_else(|| {
            config_error(Error::Validation(format!("unsupported language {lang:?}")))
        })?;
        check_round_trip(&map, side, &profile).map_err(config_error)?;
    }
    let channels = channels(&settings);
    for c in &channels {
        c.validate().map_err(config_error)?;
    }

    let mut references = BTreeMap::new();
    for (side, lang) in [(Side::Source, src), (Side::Target, tgt)] {
        if references.contains_key(lang) {
            continue;
        }
        let table = match config.frequency_tables.get(lang) {
            Some(path) => FrequencyTable::load(&config.resolve(path), lang).map_err(config_error)?,
            None => synthetic_reference(&map, side, lang),
        };
        references.insert(lang.to_string(), table);
    }

    let spec = SourceSpec {
        language: src.to_string(),
        target_words: settings.words,
        concept_density: settings.density,
        concept_budget: settings.concept_budget.clone(),
        seed: settings.seed,
    };
    let source = generate_source(&map, &spec).map_err(config_error)?;

    let mut files: Vec<(String, Vec<u8>)> = Vec::new();
    let mut texts = Vec::new();
    let mut documents = Vec::new();
    let mut push_text = |id: String, kind: TranslationKind, lang: &str, text: &str, words: usize| {
        let path = PathBuf::from(format!("corpus/{id}.txt"));
        files.push((path.display().to_string(), text.as_bytes().to_vec()));
        documents.push(ManifestEntry {
            path: path.clone(),
            id: id.clone(),
            language: lang.to_string(),
            translation_kind: kind,
            group_keys: BTreeMap::from([("channel".to_string(), id.clone())]),
        });
        texts.push(GeneratedText {
            id,
            path,
            translation_kind: kind,
            words,
        });
    };
    let doc = &source.documents[0];
    push_text("source".into(), TranslationKind::Source, src, &doc.raw_text, doc.total_word_count);
    for params in &channels {
        let out = apply_channel(&source, &map, params, &references[tgt])
            .map_err(|e| CommandError::Analysis(e.context(format!("{:?} channel", params.kind))))?;
        let doc = &out.documents[0];
        let id = format!("{}-{}", params.kind.translation_kind(), params.seed);
        push_text(id, out.translation_kind, tgt, &doc.raw_text, doc.total_word_count);
    }
    // Two channels of the same kind and seed would overwrite each other.
    for (i, t) in texts.iter().enumerate() {
        if texts[..i].iter().any(|o| o.id == t.id) {
            return Err(config_error(Error::InvalidParam(format!(
                "two channels both produce {}",
                t.id
            ))));
        }
    }

    let manifest = Manifest {
        lemma_dicts: BTreeMap::new(),
        documents,
    };
    let mut lexicons = BTreeMap::new();
    let mut frequency_tables = BTreeMap::new();
    for lang in references.keys() {
        let lex = format!("lexicon-{lang}.tsv");
        let refp = format!("reference-{lang}.tsv");
        files.push((lex.clone(), lexicon_tsv(&map, lang).into_bytes()));
        files.push((refp.clone(), reference_tsv(&references[lang]).into_bytes()));
        lexicons.insert(
            lang.clone(),
            LexiconConfig {
                paths: vec![PathBuf::from(lex)],
                attested: false,
            },
        );
        frequency_tables.insert(lang.clone(), PathBuf::from(refp));
    }
    files.push(("concepts.tsv".into(), concept_map_tsv(&map).into_bytes()));
    let analyze_config = RunConfig {
        manifest: Some(PathBuf::from("manifest.json")),
        lexicons,
        concept_map: Some(ConceptMapConfig {
            path: PathBuf::from("concepts.tsv"),
            source_language: src.to_string(),
            target_language: tgt.to_string(),
        }),
        frequency_tables,
        synth: None,
        output_dir: PathBuf::from("report"),
        base_dir: PathBuf::new(),
        ..config.clone()
    };
    files.push(("manifest.json".into(), to_json(&manifest).map_err(CommandError::Analysis)?));
    files.push(("analyze.json".into(), to_json(&analyze_config).map_err(CommandError::Analysis)?));

    let output_dir = config.output_path();
    let files = write_all(&output_dir, &files).map_err(CommandError::Analysis)?;
    Ok(SynthOutcome {
        output_dir,
        texts,
        files,
    })
}
