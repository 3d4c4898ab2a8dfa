//! Text ingestion: tokenization, dictionary lemmatization and grouping of
//! documents into strata keyed by language, translation kind and metadata.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, Error, Result};
use crate::Lemma;

/// Which version of a text a stratum holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TranslationKind {
    Source,
    Human,
    Machine,
}

impl TranslationKind {
    pub const ALL: [TranslationKind; 3] = [Self::Source, Self::Human, Self::Machine];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Source => "source",
            Self::Human => "human",
            Self::Machine => "machine",
        }
    }
}

impl fmt::Display for TranslationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TranslationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "source" => Ok(Self::Source),
            "human" => Ok(Self::Human),
            "machine" => Ok(Self::Machine),
            other => Err(Error::Validation(format!("unknown translation kind {other:?}"))),
        }
    }
}

/// Character classes that make up words in one language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LangProfile {
    language_code: String,
    letter_classes: Vec<RangeInclusive<char>>,
    case_fold: bool,
}

const LATIN: [RangeInclusive<char>; 5] = [
    'A'..='Z',
    'a'..='z',
    '\u{00C0}'..='\u{00D6}',
    '\u{00D8}'..='\u{00F6}',
    '\u{00F8}'..='\u{024F}',
];

impl LangProfile {
    pub fn new(
        language_code: impl Into<String>,
        letter_classes: Vec<RangeInclusive<char>>,
        case_fold: bool,
    ) -> Result<Self> {
        let language_code = language_code.into();
        if language_code.is_empty() {
            return Err(Error::Validation("empty language code".into()));
        }
        if letter_classes.is_empty() || letter_classes.iter().all(|r| r.is_empty()) {
            return Err(Error::Validation(format!(
                "language {language_code:?} has no letter classes"
            )));
        }
        Ok(Self {
            language_code,
            letter_classes,
            case_fold,
        })
    }

    /// Latin letters including the Latin-1 and Latin Extended blocks.
    pub fn english() -> Self {
        Self {
            language_code: "en".into(),
            letter_classes: LATIN.to_vec(),
            case_fold: true,
        }
    }

    /// Cyrillic plus Latin, so embedded Latin words still tokenize.
    pub fn russian() -> Self {
        let mut letter_classes = vec!['\u{0400}'..='\u{04FF}'];
        letter_classes.extend(LATIN);
        Self {
            language_code: "ru".into(),
            letter_classes,
            case_fold: true,
        }
    }

    /// Built-in profile for a language code, if one exists.
    pub fn for_code(code: &str) -> Option<Self> {
        match code {
            "en" => Some(Self::english()),
            "ru" => Some(Self::russian()),
            _ => None,
        }
    }

    pub fn language_code(&self) -> &str {
        &self.language_code
    }

    pub fn case_fold(&self) -> bool {
        self.case_fold
    }

    pub fn is_letter(&self, c: char) -> bool {
        self.letter_classes.iter().any(|r| r.contains(&c))
    }
}

/// Split `text` into maximal runs of letter-class characters.
pub fn tokenize(text: &str, profile: &LangProfile) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for c in text.chars() {
        if profile.is_letter(c) {
            current.push(c);
        } else if !current.is_empty() {
            tokens.push(finish_token(std::mem::take(&mut current), profile));
        }
    }
    if !current.is_empty() {
        tokens.push(finish_token(current, profile));
    }
    tokens
}

/// Fold per character, keeping any character whose lowercase form would
/// leave the letter classes (`Ⱥ` lowercases to `ⱥ`, outside Latin Extended-B).
fn finish_token(token: String, profile: &LangProfile) -> String {
    if !profile.case_fold {
        return token;
    }
    let mut out = String::with_capacity(token.len());
    for c in token.chars() {
        let lower: Vec<char> = c.to_lowercase().collect();
        if lower.iter().all(|l| profile.is_letter(*l)) {
            out.extend(lower);
        } else {
            out.push(c);
        }
    }
    out
}

/// Surface form to lemma lookup with identity fallback.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaDict {
    language_code: String,
    entries: HashMap<String, Lemma>,
}

impl LemmaDict {
    pub fn empty(language_code: impl Into<String>) -> Self {
        Self {
            language_code: language_code.into(),
            entries: HashMap::new(),
        }
    }

    pub fn from_pairs<I, S, L>(language_code: impl Into<String>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, L)>,
        S: AsRef<str>,
        L: Into<String>,
    {
        let mut dict = Self::empty(language_code);
        for (surface, lemma) in pairs {
            let lemma = lemma.into();
            if lemma.is_empty() {
                return Err(Error::Validation(format!(
                    "surface form {:?} maps to an empty lemma",
                    surface.as_ref()
                )));
            }
            dict.entries.insert(surface.as_ref().to_lowercase(), lemma);
        }
        Ok(dict)
    }

    /// Reads a `surface<TAB>lemma` file; `#` lines and blank lines are skipped.
    pub fn load(path: &Path, language_code: &str) -> Result<Self> {
        let text = read_to_string(path)?;
        let mut dict = Self::empty(language_code);
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let parse_err = |message: &str| Error::Parse {
                file: path.to_path_buf(),
                line: idx + 1,
                message: message.to_string(),
            };
            let (surface, lemma) = line
                .split_once('\t')
                .ok_or_else(|| parse_err("expected surface<TAB>lemma"))?;
            let (surface, lemma) = (surface.trim(), lemma.trim());
            if surface.is_empty() || lemma.is_empty() {
                return Err(parse_err("empty surface form or lemma"));
            }
            dict.entries
                .insert(surface.to_lowercase(), lemma.to_string());
        }
        Ok(dict)
    }

    pub fn language_code(&self) -> &str {
        &self.language_code
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup<'a>(&'a self, surface: &'a str) -> &'a str {
        self.entries.get(surface).map_or(surface, String::as_str)
    }
}

/// Map each token through the dictionary; unmatched tokens pass through.
pub fn lemmatize<S: AsRef<str>>(tokens: &[S], dict: &LemmaDict) -> Vec<Lemma> {
    tokens
        .iter()
        .map(|t| dict.lookup(t.as_ref()).to_string())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub raw_text: String,
    pub lemmas: Vec<Lemma>,
    pub total_word_count: usize,
}

impl Document {
    pub fn from_text(
        id: impl Into<String>,
        raw_text: impl Into<String>,
        profile: &LangProfile,
        dict: &LemmaDict,
    ) -> Self {
        let raw_text = raw_text.into();
        let lemmas = lemmatize(&tokenize(&raw_text, profile), dict);
        Self::from_lemmas(id, raw_text, lemmas)
    }

    pub fn from_lemmas(id: impl Into<String>, raw_text: impl Into<String>, lemmas: Vec<Lemma>) -> Self {
        Self {
            id: id.into(),
            raw_text: raw_text.into(),
            total_word_count: lemmas.len(),
            lemmas,
        }
    }
}

/// A lemmatized sub-corpus sharing language, translation kind and group keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusStratum {
    pub language_code: String,
    pub translation_kind: TranslationKind,
    pub group_keys: BTreeMap<String, String>,
    pub documents: Vec<Document>,
}

impl CorpusStratum {
    pub fn new(language_code: impl Into<String>, translation_kind: TranslationKind) -> Self {
        Self {
            language_code: language_code.into(),
            translation_kind,
            group_keys: BTreeMap::new(),
            documents: Vec::new(),
        }
    }

    pub fn with_key(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.group_keys.insert(key.into(), value.into());
        self
    }

    pub fn with_document(mut self, doc: Document) -> Self {
        self.documents.push(doc);
        self
    }

    pub fn total_word_count(&self) -> usize {
        self.documents.iter().map(|d| d.total_word_count).sum()
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.documents
            .iter()
            .flat_map(|d| d.lemmas.iter().map(String::as_str))
    }

    /// Token count per lemma over all documents.
    pub fn lemma_counts(&self) -> HashMap<&str, usize> {
        let mut counts = HashMap::new();
        for lemma in self.lemmas() {
            *counts.entry(lemma).or_insert(0) += 1;
        }
        counts
    }

    /// Value of a grouping key; `language` and `translation_kind` are built in.
    pub fn key_value(&self, key: &str) -> Option<String> {
        match key {
            "language" => Some(self.language_code.clone()),
            "translation_kind" => Some(self.translation_kind.to_string()),
            _ => self.group_keys.get(key).cloned(),
        }
    }

    /// Human-readable label, e.g. `ru/source[summit=G8,term=2000-2003]`.
    pub fn label(&self) -> String {
        let mut label = format!("{}/{}", self.language_code, self.translation_kind);
        if !self.group_keys.is_empty() {
            let keys: Vec<String> = self
                .group_keys
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            label.push('[');
            label.push_str(&keys.join(","));
            label.push(']');
        }
        label
    }
}

/// One manifest entry naming a text file and its stratum assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub id: String,
    pub language: String,
    pub translation_kind: TranslationKind,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub group_keys: BTreeMap<String, String>,
}

/// Corpus manifest. Relative paths resolve against the manifest's directory.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    /// Optional `surface<TAB>lemma` dictionary per language code.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lemma_dicts: BTreeMap<String, PathBuf>,
    pub documents: Vec<ManifestEntry>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ManifestRepr {
    Full(Manifest),
    Bare(Vec<ManifestEntry>),
}

impl Manifest {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let repr: ManifestRepr = serde_json::from_str(text).map_err(|source| Error::Manifest {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(match repr {
            ManifestRepr::Full(m) => m,
            ManifestRepr::Bare(documents) => Manifest {
                lemma_dicts: BTreeMap::new(),
                documents,
            },
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_to_string(path)?, path)
    }

    /// Checks for unique ids and known languages without touching the text files.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for entry in &self.documents {
            if !seen.insert(entry.id.as_str()) {
                return Err(Error::Validation(format!(
                    "duplicate document id {:?}",
                    entry.id
                )));
            }
            if LangProfile::for_code(&entry.language).is_none() {
                return Err(Error::Validation(format!(
                    "unknown language_code {:?} for document {:?}",
                    entry.language, entry.id
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}

/// Read, tokenize and lemmatize every listed file, grouping documents into
/// strata in order of first appearance.
pub fn load_corpus(manifest_path: &Path) -> Result<Vec<CorpusStratum>> {
    let manifest = Manifest::load(manifest_path)?;
    let base = manifest_path.parent().unwrap_or_else(|| Path::new(""));
    load_manifest(&manifest, base)
}

pub fn load_manifest(manifest: &Manifest, base: &Path) -> Result<Vec<CorpusStratum>> {
    manifest.validate()?;

    let mut dicts = HashMap::new();
    for (lang, path) in &manifest.lemma_dicts {
        dicts.insert(lang.as_str(), LemmaDict::load(&resolve(base, path), lang)?);
    }

    let mut strata: Vec<CorpusStratum> = Vec::new();
    let mut index: HashMap<(String, TranslationKind, BTreeMap<String, String>), usize> =
        HashMap::new();
    for entry in &manifest.documents {
        let profile = LangProfile::for_code(&entry.language)
            .expect("languages checked by Manifest::validate");
        let empty = LemmaDict::empty(entry.language.clone());
        let dict = dicts.get(entry.language.as_str()).unwrap_or(&empty);
        let text = read_to_string(&resolve(base, &entry.path))?;
        let doc = Document::from_text(entry.id.clone(), text, &profile, dict);

        let key = (
            entry.language.clone(),
            entry.translation_kind,
            entry.group_keys.clone(),
        );
        let slot = *index.entry(key).or_insert_with(|| {
            let mut stratum = CorpusStratum::new(entry.language.clone(), entry.translation_kind);
            stratum.group_keys = entry.group_keys.clone();
            strata.push(stratum);
            strata.len() - 1
        });
        strata[slot].documents.push(doc);
    }
    Ok(strata)
}

/// Merge strata that share a value of `key`.
///
/// Merged strata keep the group keys on which all members agree. Members of
/// one group must share language and translation kind.
pub fn stratify(strata: &[CorpusStratum], key: &str) -> Result<BTreeMap<String, CorpusStratum>> {
    let mut merged: BTreeMap<String, CorpusStratum> = BTreeMap::new();
    for stratum in strata {
        let value = stratum.key_value(key).ok_or_else(|| Error::MissingKey {
            key: key.to_string(),
            stratum: stratum.label(),
        })?;
        match merged.get_mut(&value) {
            None => {
                merged.insert(value, stratum.clone());
            }
            Some(target) => {
                if target.language_code != stratum.language_code
                    || target.translation_kind != stratum.translation_kind
                {
                    return Err(Error::Validation(format!(
                        "cannot merge {} into {key}={value}: mixed language or translation kind",
                        stratum.label()
                    )));
                }
                target
                    .group_keys
                    .retain(|k, v| stratum.group_keys.get(k) == Some(v));
                target.documents.extend(stratum.documents.iter().cloned());
            }
        }
    }
    Ok(merged)
}
