//! Sentiment lexicons and the bilingual concept map.
//!
//! Dictionary sources are merged into three pairwise-disjoint lists. A lemma
//! claimed by several classes goes to the class that comes first in the
//! configured [`Priority`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, Error, Result};
use crate::Lemma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentClass {
    Positive,
    Negative,
    Epistemic,
}

impl SentimentClass {
    pub const ALL: [SentimentClass; 3] = [Self::Positive, Self::Negative, Self::Epistemic];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Positive => "positive",
            Self::Negative => "negative",
            Self::Epistemic => "epistemic",
        }
    }
}

impl fmt::Display for SentimentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SentimentClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "positive" => Ok(Self::Positive),
            "negative" => Ok(Self::Negative),
            "epistemic" => Ok(Self::Epistemic),
            other => Err(other.to_string()),
        }
    }
}

/// Which language side of a concept map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Source,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Source => "source",
            Side::Target => "target",
        })
    }
}

/// One `lemma<TAB>class` line with the dictionary it came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RawEntry {
    pub lemma: Lemma,
    pub class: SentimentClass,
    pub source: String,
}

/// Read lexicon files, keeping duplicates across sources.
///
/// The source name of each entry is the file stem.
pub fn load_lexicon_sources<P: AsRef<Path>>(paths: &[P]) -> Result<Vec<RawEntry>> {
    let mut entries = Vec::new();
    for path in paths {
        let path = path.as_ref();
        let source = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        entries.extend(parse_lexicon(&read_to_string(path)?, path, &source)?);
    }
    Ok(entries)
}

pub fn parse_lexicon(text: &str, path: &Path, source: &str) -> Result<Vec<RawEntry>> {
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != 2 || fields[0].is_empty() {
            return Err(Error::Parse {
                file: path.to_path_buf(),
                line: idx + 1,
                message: "expected lemma<TAB>class".into(),
            });
        }
        let class = fields[1].parse().map_err(|label| Error::UnknownClass {
            file: path.to_path_buf(),
            line: idx + 1,
            label,
        })?;
        entries.push(RawEntry {
            lemma: fields[0].to_string(),
            class,
            source: source.to_string(),
        });
    }
    Ok(entries)
}

/// Conflict-resolution order: a permutation of the three classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<SentimentClass>", into = "Vec<SentimentClass>")]
pub struct Priority([SentimentClass; 3]);

impl Priority {
    pub fn new(order: &[SentimentClass]) -> Result<Self> {
        let distinct: BTreeSet<_> = order.iter().collect();
        if order.len() != 3 || distinct.len() != 3 {
            return Err(Error::Validation(format!(
                "priority must be a permutation of the three classes, got {order:?}"
            )));
        }
        Ok(Self([order[0], order[1], order[2]]))
    }

    pub fn rank(&self, class: SentimentClass) -> usize {
        self.0.iter().position(|c| *c == class).expect("permutation")
    }

    pub fn order(&self) -> [SentimentClass; 3] {
        self.0
    }
}

impl Default for Priority {
    fn default() -> Self {
        Self([
            SentimentClass::Epistemic,
            SentimentClass::Negative,
            SentimentClass::Positive,
        ])
    }
}

impl TryFrom<Vec<SentimentClass>> for Priority {
    type Error = Error;

    fn try_from(v: Vec<SentimentClass>) -> Result<Self> {
        Self::new(&v)
    }
}

impl From<Priority> for Vec<SentimentClass> {
    fn from(p: Priority) -> Self {
        p.0.to_vec()
    }
}

/// A lemma claimed by more than one class before merging.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub lemma: Lemma,
    pub claimed: BTreeSet<SentimentClass>,
    pub resolved: SentimentClass,
}

/// Three pairwise-disjoint lemma lists for one language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentimentLexicon {
    pub language_code: String,
    lists: BTreeMap<SentimentClass, BTreeSet<Lemma>>,
    provenance: BTreeMap<Lemma, BTreeSet<String>>,
    conflicts: Vec<Conflict>,
    pub attested: bool,
}

impl SentimentLexicon {
    pub fn empty(language_code: impl Into<String>) -> Self {
        Self {
            language_code: language_code.into(),
            lists: SentimentClass::ALL
                .iter()
                .map(|c| (*c, BTreeSet::new()))
                .collect(),
            provenance: BTreeMap::new(),
            conflicts: Vec::new(),
            attested: false,
        }
    }

    pub fn with_attested(mut self, attested: bool) -> Self {
        self.attested = attested;
        self
    }

    pub fn list(&self, class: SentimentClass) -> &BTreeSet<Lemma> {
        &self.lists[&class]
    }

    pub fn class_of(&self, lemma: &str) -> Option<SentimentClass> {
        SentimentClass::ALL
            .into_iter()
            .find(|c| self.lists[c].contains(lemma))
    }

    pub fn provenance(&self, lemma: &str) -> Option<&BTreeSet<String>> {
        self.provenance.get(lemma)
    }

    /// Cross-listed lemmas found while merging, in lemma order.
    pub fn conflicts(&self) -> &[Conflict] {
        &self.conflicts
    }

    pub fn len(&self) -> usize {
        self.lists.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lexicon whose lists are exactly the concept lemmas of one side.
    pub fn from_concept_map(map: &ConceptMap, side: Side, language_code: &str) -> Self {
        let raws: Vec<RawEntry> = map
            .concepts()
            .flat_map(|c| {
                c.lemmas(side).iter().map(move |l| RawEntry {
                    lemma: l.clone(),
                    class: c.class,
                    source: "concept-map".into(),
                })
            })
            .collect();
        merge_disjoint(language_code, &raws, &Priority::default())
    }
}

/// Merge raw entries into disjoint lists, resolving conflicts by priority.
pub fn merge_disjoint(language_code: &str, raws: &[RawEntry], priority: &Priority) -> SentimentLexicon {
    let mut claims: BTreeMap<&str, BTreeSet<SentimentClass>> = BTreeMap::new();
    let mut lexicon = SentimentLexicon::empty(language_code);
    for raw in raws {
        claims.entry(&raw.lemma).or_default().insert(raw.class);
        lexicon
            .provenance
            .entry(raw.lemma.clone())
            .or_default()
            .insert(raw.source.clone());
    }
    for (lemma, classes) in claims {
        let resolved = *classes
            .iter()
            .min_by_key(|c| priority.rank(**c))
            .expect("at least one claim");
        lexicon
            .lists
            .get_mut(&resolved)
            .expect("all classes present")
            .insert(lemma.to_string());
        if classes.len() > 1 {
            lexicon.conflicts.push(Conflict {
                lemma: lemma.to_string(),
                claimed: classes,
                resolved,
            });
        }
    }
    lexicon
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Concept {
    pub id: String,
    pub class: SentimentClass,
    pub source_lemmas: BTreeSet<Lemma>,
    pub target_lemmas: BTreeSet<Lemma>,
}

impl Concept {
    pub fn lemmas(&self, side: Side) -> &BTreeSet<Lemma> {
        match side {
            Side::Source => &self.source_lemmas,
            Side::Target => &self.target_lemmas,
        }
    }
}

/// Concept id to source- and target-language synonym sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConceptMap {
    concepts: BTreeMap<String, Concept>,
    source_index: HashMap<Lemma, String>,
    target_index: HashMap<Lemma, String>,
    languages: Option<(String, String)>,
}

impl ConceptMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records the language codes of the source and target sides.
    pub fn with_languages(mut self, source: impl Into<String>, target: impl Into<String>) -> Self {
        self.languages = Some((source.into(), target.into()));
        self
    }

    pub fn language(&self, side: Side) -> Option<&str> {
        self.languages.as_ref().map(|(s, t)| match side {
            Side::Source => s.as_str(),
            Side::Target => t.as_str(),
        })
    }

    /// Adds a concept, enforcing unique ids, non-empty sides and at most
    /// one concept per lemma on each side.
    pub fn insert(&mut self, concept: Concept) -> Result<()> {
        if self.concepts.contains_key(&concept.id) {
            return Err(Error::Validation(format!(
                "duplicate concept id {:?}",
                concept.id
            )));
        }
        for side in [Side::Source, Side::Target] {
            if concept.lemmas(side).is_empty() {
                return Err(Error::Validation(format!(
                    "concept {:?} has no {side} lemmas",
                    concept.id
                )));
            }
            let index = match side {
                Side::Source => &self.source_index,
                Side::Target => &self.target_index,
            };
            for lemma in concept.lemmas(side) {
                if let Some(other) = index.get(lemma) {
                    return Err(Error::Validation(format!(
                        "{side} lemma {lemma:?} belongs to both {other:?} and {:?}",
                        concept.id
                    )));
                }
            }
        }
        for lemma in &concept.source_lemmas {
            self.source_index.insert(lemma.clone(), concept.id.clone());
        }
        for lemma in &concept.target_lemmas {
            self.target_index.insert(lemma.clone(), concept.id.clone());
        }
        self.concepts.insert(concept.id.clone(), concept);
        Ok(())
    }

    /// Parses `concept_id<TAB>class<TAB>src,src…<TAB>tgt,tgt…` lines.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut map = Self::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                file: path.to_path_buf(),
                line: idx + 1,
                message,
            };
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if fields.len() != 4 || fields[0].is_empty() {
                return Err(parse_err(
                    "expected concept_id<TAB>class<TAB>source lemmas<TAB>target lemmas".into(),
                ));
            }
            let class = fields[1].parse().map_err(|label| Error::UnknownClass {
                file: path.to_path_buf(),
                line: idx + 1,
                label,
            })?;
            let split = |s: &str| -> BTreeSet<Lemma> {
                s.split(',')
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(str::to_string)
                    .collect()
            };
            map.insert(Concept {
                id: fields[0].to_string(),
                class,
                source_lemmas: split(fields[2]),
                target_lemmas: split(fields[3]),
            })
            .map_err(|e| parse_err(e.to_string()))?;
        }
        Ok(map)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_to_string(path)?, path)
    }

    /// Every concept lemma must sit in its side's lexicon under the concept's class.
    pub fn check_against(&self, source: &SentimentLexicon, target: &SentimentLexicon) -> Result<()> {
        for concept in self.concepts.values() {
            for (side, lexicon) in [(Side::Source, source), (Side::Target, target)] {
                for lemma in concept.lemmas(side) {
                    match lexicon.class_of(lemma) {
                        None => {
                            return Err(Error::Validation(format!(
                                "concept {:?}: {side} lemma {lemma:?} absent from the {} lexicon",
                                concept.id, lexicon.language_code
                            )))
                        }
                        Some(class) if class != concept.class => {
                            return Err(Error::Validation(format!(
                                "concept {:?}: class mismatch, {side} lemma {lemma:?} is {class} but the concept is {}",
                                concept.id, concept.class
                            )))
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    /// Concepts in id order.
    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.values()
    }

    pub fn get(&self, id: &str) -> Option<&Concept> {
        self.concepts.get(id)
    }

    pub fn concept_of(&self, side: Side, lemma: &str) -> Option<&Concept> {
        let index = match side {
            Side::Source => &self.source_index,
            Side::Target => &self.target_index,
        };
        index.get(lemma).map(|id| &self.concepts[id])
    }
}

/// Load a concept map and check it against both lexicons.
pub fn load_concept_map(
    path: &Path,
    source_lexicon: &SentimentLexicon,
    target_lexicon: &SentimentLexicon,
) -> Result<ConceptMap> {
    let map = ConceptMap::load(path)?;
    map.check_against(source_lexicon, target_lexicon)?;
    Ok(map.with_languages(&source_lexicon.language_code, &target_lexicon.language_code))
}
