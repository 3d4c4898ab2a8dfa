use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use crate::error::{Error, Result};
use crate::freq::FrequencyTable;
use crate::ingest::{load_manifest, resolve, CorpusStratum, LangProfile, Manifest};
use crate::lexicon::{
    load_lexicon_sources, merge_disjoint, ConceptMap, SentimentLexicon, Side,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub severity: Severity,
    pub category: &'static str,
    pub location: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let severity = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{severity}[{}] {}: {}", self.category, self.location, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    fn error(&mut self, category: &'static str, location: impl Into<String>, err: impl fmt::Display) {
        self.findings.push(Finding {
            severity: Severity::Error,
            category,
            location: location.into(),
            message: err.to_string(),
        });
    }

    fn warning(&mut self, category: &'static str, location: impl Into<String>, message: impl Into<String>) {
        self.findings.push(Finding {
            severity: Severity::Warning,
            category,
            location: location.into(),
            message: message.into(),
        });
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Warning)
    }

    pub fn is_clean(&self) -> bool {
        self.errors().next().is_none()
    }
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for finding in &self.findings {
            writeln!(f, "{finding}")?;
        }
        write!(
            f,
            "{}, {}",
            plural(self.errors().count(), "error"),
            plural(self.warnings().count(), "warning")
        )
    }
}

/// A hashed input file, named as it appears in the config or manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Everything `analyze` needs, loaded once by validation.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub strata: Vec<CorpusStratum>,
    pub lexicons: BTreeMap<String, SentimentLexicon>,
    pub concept_map: Option<ConceptMap>,
    pub references: BTreeMap<String, FrequencyTable>,
    pub digests: Vec<InputDigest>,
}

impl Inputs {
    /// SHA-256 over the `role<TAB>path<TAB>sha256` lines of every input.
    pub fn combined_sha256(&self) -> String {
        let mut hasher = Sha256::new();
        for d in &self.digests {
            hasher.update(format!("{}\t{}\t{}\n", d.role, d.path, d.sha256));
        }
        hex::encode(hasher.finalize())
    }
}

fn digest(role: &str, shown: &Path, path: &Path) -> Result<InputDigest> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(InputDigest {
        role: role.to_string(),
        path: shown.display().to_string(),
        bytes: bytes.len() as u64,
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

fn load_lexicons(
    config: &RunConfig,
    report: &mut ValidationReport,
    digests: &mut Vec<InputDigest>,
) -> BTreeMap<String, SentimentLexicon> {
    let mut out = BTreeMap::new();
    for (lang, entry) in &config.lexicons {
        let location = format!("lexicons.{lang}");
        if LangProfile::for_code(lang).is_none() {
            report.error("config", &location, format!("unsupported language {lang:?}"));
            continue;
        }
        if entry.paths.is_empty() {
            report.error("config", &location, "no lexicon files listed");
            continue;
        }
        let paths: Vec<PathBuf> = entry.paths.iter().map(|p| config.resolve(p)).collect();
        let mut ok = true;
        for (shown, path) in entry.paths.iter().zip(&paths) {
            match digest(&format!("lexicon:{lang}"), shown, path) {
                Ok(d) => digests.push(d),
                Err(e) => {
                    report.error("missing-file", &location, e);
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        let raws = match load_lexicon_sources(&paths) {
            Ok(raws) => raws,
            Err(e) => {
                report.error("lexicon", &location, e);
                continue;
            }
        };
        let lexicon = merge_disjoint(lang, &raws, &config.priority).with_attested(entry.attested);
        for c in lexicon.conflicts() {
            let claimed: Vec<&str> = c.claimed.iter().map(|k| k.as_str()).collect();
            report.warning(
                "lexicon-conflict",
                &location,
                format!(
                    "{:?} is listed as {}; kept as {}",
                    c.lemma,
                    claimed.join(" and "),
                    c.resolved
                ),
            );
        }
        out.insert(lang.clone(), lexicon);
    }
    out
}

fn load_map(
    config: &RunConfig,
    lexicons: &BTreeMap<String, SentimentLexicon>,
    report: &mut ValidationReport,
    digests: &mut Vec<InputDigest>,
) -> Option<ConceptMap> {
    let entry = config.concept_map.as_ref()?;
    let path = config.resolve(&entry.path);
    match digest("concept_map", &entry.path, &path) {
        Ok(d) => digests.push(d),
        Err(e) => {
            report.error("missing-file", "concept_map", e);
            return None;
        }
    }
    let map = match ConceptMap::load(&path) {
        Ok(map) => map,
        Err(e) => {
            report.error("concept-map", "concept_map", e);
            return None;
        }
    };
    let mut missing = false;
    for (side, lang) in [
        (Side::Source, &entry.source_language),
        (Side::Target, &entry.target_language),
    ] {
        if !lexicons.contains_key(lang) {
            report.error(
                "concept-map",
                format!("concept_map.{side}_language"),
                format!("no lexicon configured for {lang:?}"),
            );
            missing = true;
        }
    }
    if missing {
        return None;
    }
    if let Err(e) = map.check_against(
        &lexicons[&entry.source_language],
        &lexicons[&entry.target_language],
    ) {
        report.error("concept-map", "concept_map", e);
        return None;
    }
    Some(map.with_languages(&entry.source_language, &entry.target_language))
}

fn load_references(
    config: &RunConfig,
    report: &mut ValidationReport,
    digests: &mut Vec<InputDigest>,
) -> BTreeMap<String, FrequencyTable> {
    let mut out = BTreeMap::new();
    for (lang, shown) in &config.frequency_tables {
        let location = format!("frequency_tables.{lang}");
        let path = config.resolve(shown);
        match digest(&format!("frequency_table:{lang}"), shown, &path) {
            Ok(d) => digests.push(d),
            Err(e) => {
                report.error("missing-file", &location, e);
                continue;
            }
        }
        match FrequencyTable::load(&path, lang) {
            Ok(table) => {
                out.insert(lang.clone(), table);
            }
            Err(e) => report.error("frequency-table", &location, e),
        }
    }
    out
}

fn load_corpus(
    config: &RunConfig,
    report: &mut ValidationReport,
    digests: &mut Vec<InputDigest>,
) -> Option<(Manifest, PathBuf)> {
    let Some(shown) = &config.manifest else {
        report.error("config", "manifest", "no manifest configured");
        return None;
    };
    let path = config.resolve(shown);
    match digest("manifest", shown, &path) {
        Ok(d) => digests.push(d),
        Err(e) => {
            report.error("missing-file", "manifest", e);
            return None;
        }
    }
    let manifest = match Manifest::load(&path) {
        Ok(m) => m,
        Err(e) => {
            report.error("manifest", "manifest", e);
            return None;
        }
    };
    if let Err(e) = manifest.validate() {
        report.error("manifest", "manifest", e);
        return None;
    }
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut ok = true;
    for (lang, dict) in &manifest.lemma_dicts {
        match digest(&format!("lemma_dict:{lang}"), dict, &resolve(&base, dict)) {
            Ok(d) => digests.push(d),
            Err(e) => {
                report.error("missing-file", format!("manifest.lemma_dicts.{lang}"), e);
                ok = false;
            }
        }
    }
    for (i, doc) in manifest.documents.iter().enumerate() {
        match digest("document", &doc.path, &resolve(&base, &doc.path)) {
            Ok(d) => digests.push(d),
            Err(e) => {
                report.error("missing-file", format!("manifest.documents[{i}] ({})", doc.id), e);
                ok = false;
            }
        }
    }
    ok.then_some((manifest, base))
}

/// Check every configured input and load it.
///
/// Returns the loaded inputs only when no error was found.
pub fn check(config: &RunConfig) -> (ValidationReport, Option<Inputs>) {
    let mut report = ValidationReport::default();
    let mut digests = Vec::new();
    if let Err(e) = config.check_settings() {
        report.error("config", "settings", e);
    }

    let corpus = load_corpus(config, &mut report, &mut digests);
    let lexicons = load_lexicons(config, &mut report, &mut digests);
    let concept_map = load_map(config, &lexicons, &mut report, &mut digests);
    let references = load_references(config, &mut report, &mut digests);

    let Some((manifest, base)) = corpus else {
        return (report, None);
    };
    let languages: BTreeSet<&str> = manifest.documents.iter().map(|d| d.language.as_str()).collect();
    for lang in &languages {
        if !config.lexicons.contains_key(*lang) {
            report.error(
                "config",
                "lexicons",
                format!("no lexicon configured for language {lang:?} used by the manifest"),
            );
        }
        if !config.frequency_tables.contains_key(*lang) {
            report.warning(
                "config",
                "frequency_tables",
                format!("no frequency table for {lang:?}; expected deviations are skipped"),
            );
        }
    }
    if !report.is_clean() {
        return (report, None);
    }

    let strata = match load_manifest(&manifest, &base) {
        Ok(strata) => strata,
        Err(e) => {
            report.error("manifest", "manifest", e);
            return (report, None);
        }
    };
    for factor in &config.factors {
        if let Some(s) = strata.iter().find(|s| s.key_value(factor).is_none()) {
            report.error(
                "config",
                "factors",
                Error::MissingKey {
                    key: factor.clone(),
                    stratum: s.label(),
                },
            );
        }
    }
    if !report.is_clean() {
        return (report, None);
    }
    let inputs = Inputs {
        strata,
        lexicons,
        concept_map,
        references,
        digests,
    };
    (report, Some(inputs))
}
