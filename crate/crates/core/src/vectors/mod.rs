//! Concept-space document vectors and similarity diagnostics.
//!
//! A stratum's vector holds, for every concept of a [`ConceptMap`], the
//! tokens of that concept's lemmas per 1,000 words. Vectors from either
//! language side share dimensions, so source and translations compare
//! directly.

mod pca;

pub use pca::{pca_2d, symmetric_top_eigenpairs, Eigenpair, Pca2d};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::CorpusStratum;
use crate::lexicon::{ConceptMap, Side};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConceptVector {
    pub stratum_label: String,
    pub dims: Vec<String>,
    pub values: Vec<f64>,
}

impl ConceptVector {
    pub fn new(stratum_label: impl Into<String>, dims: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if dims.len() != values.len() {
            return Err(Error::DimMismatch(format!(
                "{} dims but {} values",
                dims.len(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::Validation(format!(
                "concept vector values must be finite and non-negative, got {v}"
            )));
        }
        Ok(Self {
            stratum_label: stratum_label.into(),
            dims,
            values,
        })
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn check_dims(&self, other: &ConceptVector) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimMismatch(format!(
                "{} and {} use different concept dimensions",
                self.stratum_label, other.stratum_label
            )));
        }
        Ok(())
    }
}

/// Tokens of each concept's `side` lemmas per 1,000 words; dims in concept-id order.
pub fn concept_vector(stratum: &CorpusStratum, map: &ConceptMap, side: Side) -> Result<ConceptVector> {
    let total = stratum.total_word_count();
    if total == 0 {
        return Err(Error::EmptyStratum);
    }
    let dims: Vec<String> = map.concepts().map(|c| c.id.clone()).collect();
    let mut counts = vec![0usize; dims.len()];
    let position: std::collections::HashMap<&str, usize> =
        dims.iter().enumerate().map(|(i, d)| (d.as_str(), i)).collect();
    for lemma in stratum.lemmas() {
        if let Some(concept) = map.concept_of(side, lemma) {
            counts[position[concept.id.as_str()]] += 1;
        }
    }
    let values = counts
        .into_iter()
        .map(|c| 1000.0 * c as f64 / total as f64)
        .collect();
    ConceptVector::new(stratum.label(), dims, values)
}

pub fn cosine(u: &ConceptVector, v: &ConceptVector) -> Result<f64> {
    u.check_dims(v)?;
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::UndefinedCosine);
    }
    let dot: f64 = u.values.iter().zip(&v.values).map(|(a, b)| a * b).sum();
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

pub fn euclidean(u: &ConceptVector, v: &ConceptVector) -> Result<f64> {
    u.check_dims(v)?;
    Ok(u.values
        .iter()
        .zip(&v.values)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}
