//! Two-component PCA by power iteration with deflation on the sample covariance.

use serde::Serialize;

use super::ConceptVector;
use crate::error::{Error, Result};

/// Relative eigenvalue change at which iteration stops.
const EIGENVALUE_TOL: f64 = 1e-10;
/// Stopping residual `|Σw − λw|` for a unit `w` on the deflated matrix. Kept
/// well under 1e-8 so later axes still meet 1e-8 against the original matrix.
const RESIDUAL_TOL: f64 = 1e-10;
/// Relative floor on the stopping residual for matrices with a very large trace.
const RESIDUAL_FLOOR: f64 = 1e-12;
const MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenpair {
    pub value: f64,
    /// Unit vector, oriented so its largest-magnitude entry is positive.
    pub vector: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pca2d {
    pub labels: Vec<String>,
    pub coords: Vec<(f64, f64)>,
    /// Fractions of total variance on each axis; first >= second.
    pub explained_variance: (f64, f64),
    pub axes: [Eigenpair; 2],
}

type Matrix = Vec<Vec<f64>>;

fn mat_vec(m: &Matrix, v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn orthogonalize(v: &mut [f64], against: &[Vec<f64>]) {
    for u in against {
        let p = dot(v, u);
        v.iter_mut().zip(u).for_each(|(x, y)| *x -= p * y);
    }
}

fn orient(v: &mut [f64]) {
    let lead = v
        .iter()
        .copied()
        .fold(0.0_f64, |best, x| if x.abs() > best.abs() { x } else { best });
    if lead < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Start vector: the candidate with the largest component outside `found`,
/// falling back to the unit axis least covered by `found`.
fn start_vector(candidates: &[Vec<f64>], found: &[Vec<f64>], dim: usize) -> Vec<f64> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for c in candidates {
        let mut v = c.clone();
        orthogonalize(&mut v, found);
        let n = norm(&v);
        if best.as_ref().is_none_or(|(bn, _)| n > *bn) {
            best = Some((n, v));
        }
    }
    let scale = candidates.iter().map(|c| norm(c)).fold(0.0, f64::max);
    match best {
        Some((n, mut v)) if n > 1e-12 * scale.max(f64::MIN_POSITIVE) => {
            v.iter_mut().for_each(|x| *x /= n);
            v
        }
        _ => {
            let axis = (0..dim)
                .min_by(|&i, &j| {
                    let ci: f64 = found.iter().map(|u| u[i].abs()).sum();
                    let cj: f64 = found.iter().map(|u| u[j].abs()).sum();
                    ci.total_cmp(&cj)
                })
                .unwrap_or(0);
            let mut v = vec![0.0; dim];
            v[axis] = 1.0;
            orthogonalize(&mut v, found);
            let n = norm(&v);
            v.iter_mut().for_each(|x| *x /= n);
            v
        }
    }
}

/// Largest `count` eigenpairs of a symmetric positive semi-definite matrix,
/// found one at a time by power iteration on the deflated matrix.
///
/// `hints` seed the start vectors; rows of the data matrix work well.
pub fn symmetric_top_eigenpairs(matrix: &[Vec<f64>], count: usize, hints: &[Vec<f64>]) -> Vec<Eigenpair> {
    let dim = matrix.len();
    let mut deflated: Matrix = matrix.to_vec();
    let mut found: Vec<Vec<f64>> = Vec::new();
    let mut pairs = Vec::new();
    let trace = (0..dim).map(|i| matrix[i][i]).sum::<f64>();
    let tol = RESIDUAL_TOL.max(RESIDUAL_FLOOR * trace);
    for _ in 0..count.min(dim) {
        let mut w = start_vector(hints, &found, dim);
        let mut lambda = 0.0;
        let mut iterations = 0;
        for it in 1..=MAX_ITERATIONS {
            iterations = it;
            let mut y = mat_vec(&deflated, &w);
            orthogonalize(&mut y, &found);
            let next = dot(&w, &y);
            let residual = y
                .iter()
                .zip(&w)
                .map(|(a, b)| (a - next * b).powi(2))
                .sum::<f64>()
                .sqrt();
            let settled = (next - lambda).abs() <= EIGENVALUE_TOL * next.abs().max(f64::MIN_POSITIVE);
            lambda = next;
            let negligible = next.abs() <= tol;
            if residual <= tol && (settled || negligible) {
                break;
            }
            let n = norm(&y);
            if n == 0.0 {
                break;
            }
            w = y.into_iter().map(|x| x / n).collect();
        }
        orient(&mut w);
        for (i, row) in deflated.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x -= lambda * w[i] * w[j];
            }
        }
        found.push(w.clone());
        pairs.push(Eigenpair {
            value: lambda.max(0.0),
            vector: w,
            iterations,
        });
    }
    pairs
}

/// Project vectors onto the top two principal axes of their sample covariance.
pub fn pca_2d(vectors: &[ConceptVector]) -> Result<Pca2d> {
    if vectors.len() < 2 {
        return Err(Error::InvalidParam("PCA needs at least two vectors".into()));
    }
    let dims = &vectors[0].dims;
    if let Some(v) = vectors.iter().find(|v| &v.dims != dims) {
        return Err(Error::DimMismatch(format!(
            "{} does not share the concept dimensions of {}",
            v.stratum_label, vectors[0].stratum_label
        )));
    }
    if vectors.iter().all(|v| v.values == vectors[0].values) {
        return Err(Error::DegenerateCovariance);
    }
    let n = vectors.len();
    let d = dims.len();
    let mean: Vec<f64> = (0..d)
        .map(|j| vectors.iter().map(|v| v.values[j]).sum::<f64>() / n as f64)
        .collect();
    let centered: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| v.values.iter().zip(&mean).map(|(x, m)| x - m).collect())
        .collect();
    let mut cov = vec![vec![0.0; d]; d];
    for row in &centered {
        for i in 0..d {
            if row[i] == 0.0 {
                continue;
            }
            for j in i..d {
                cov[i][j] += row[i] * row[j];
            }
        }
    }
    #[allow(clippy::needless_range_loop)]
    for i in 0..d {
        for j in i..d {
            cov[i][j] /= (n - 1) as f64;
            cov[j][i] = cov[i][j];
        }
    }
    let trace: f64 = (0..d).map(|i| cov[i][i]).sum();
    if trace <= 0.0 {
        return Err(Error::DegenerateCovariance);
    }

    let mut pairs = symmetric_top_eigenpairs(&cov, 2, &centered);
    if pairs.len() < 2 {
        // One-dimensional space: the second axis carries nothing.
        pairs.push(Eigenpair {
            value: 0.0,
            vector: vec![0.0; d],
            iterations: 0,
        });
    }
    let coords = centered
        .iter()
        .map(|row| (dot(row, &pairs[0].vector), dot(row, &pairs[1].vector)))
        .collect();
    let explained = (pairs[0].value / trace, pairs[1].value / trace);
    let axes: [Eigenpair; 2] = pairs.try_into().expect("two axes");
    Ok(Pca2d {
        labels: vectors.iter().map(|v| v.stratum_label.clone()).collect(),
        coords,
        explained_variance: explained,
        axes,
    })
}
