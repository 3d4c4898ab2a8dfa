use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::dist::{f_sf, studentized_range_sf};
use crate::error::{Error, Result};

/// Values observed for one level of a factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSample {
    pub label: String,
    pub values: Vec<f64>,
}

impl GroupSample {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            label: label.into(),
            values,
        }
    }

    fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Absolute-deviation ANOVA on the same groups, as a variance-homogeneity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeveneDiagnostic {
    pub f_stat: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnovaResult {
    pub f_stat: f64,
    pub df_between: u32,
    pub df_within: u32,
    pub p_value: f64,
    pub ss_between: f64,
    pub ss_within: f64,
    pub ss_total: f64,
    pub ms_within: f64,
    pub group_means: BTreeMap<String, f64>,
    /// Set when the within-group variance is zero but group means differ.
    pub degenerate_variance: bool,
    /// `None` when the absolute deviations are themselves constant.
    pub levene: Option<LeveneDiagnostic>,
}

struct Decomposition {
    ss_between: f64,
    ss_within: f64,
    ss_total: f64,
    df_between: u32,
    df_within: u32,
}

fn validate(groups: &[GroupSample]) -> Result<()> {
    if groups.len() < 2 {
        return Err(Error::InvalidParam(format!(
            "ANOVA needs at least 2 groups, got {}",
            groups.len()
        )));
    }
    let mut labels = BTreeSet::new();
    for g in groups {
        if g.values.len() < 2 {
            return Err(Error::InvalidParam(format!(
                "group {:?} has {} value(s); at least 2 are required",
                g.label,
                g.values.len()
            )));
        }
        if g.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParam(format!(
                "group {:?} contains a non-finite value",
                g.label
            )));
        }
        if !labels.insert(g.label.as_str()) {
            return Err(Error::InvalidParam(format!("duplicate group label {:?}", g.label)));
        }
    }
    Ok(())
}

fn decompose(groups: &[GroupSample]) -> Decomposition {
    let n: usize = groups.iter().map(|g| g.values.len()).sum();
    let grand = groups.iter().flat_map(|g| &g.values).sum::<f64>() / n as f64;
    let mut ss_between = 0.0;
    let mut ss_within = 0.0;
    let mut ss_total = 0.0;
    for g in groups {
        let m = g.mean();
        ss_between += g.values.len() as f64 * (m - grand).powi(2);
        for v in &g.values {
            ss_within += (v - m).powi(2);
            ss_total += (v - grand).powi(2);
        }
    }
    Decomposition {
        ss_between,
        ss_within,
        ss_total,
        df_between: (groups.len() - 1) as u32,
        df_within: (n - groups.len()) as u32,
    }
}

/// F statistic, p-value, and whether zero within-group variance met
/// distinct group means.
fn f_test(d: &Decomposition) -> (f64, f64, bool) {
    if d.ss_total == 0.0 {
        return (0.0, 1.0, false);
    }
    let within_zero = d.ss_within <= 1e-14 * d.ss_total;
    if within_zero {
        return (f64::INFINITY, 0.0, true);
    }
    let ms_between = d.ss_between / f64::from(d.df_between);
    let ms_within = d.ss_within / f64::from(d.df_within);
    let f = ms_between / ms_within;
    (f, f_sf(f, d.df_between, d.df_within), false)
}

fn levene(groups: &[GroupSample]) -> Option<LeveneDiagnostic> {
    let deviations: Vec<GroupSample> = groups
        .iter()
        .map(|g| {
            let m = g.mean();
            GroupSample::new(g.label.clone(), g.values.iter().map(|v| (v - m).abs()).collect())
        })
        .collect();
    let d = decompose(&deviations);
    let (f_stat, p_value, degenerate) = f_test(&d);
    (!degenerate && d.ss_total > 0.0).then_some(LeveneDiagnostic { f_stat, p_value })
}

pub fn one_way_anova(groups: &[GroupSample]) -> Result<AnovaResult> {
    validate(groups)?;
    let d = decompose(groups);
    let (f_stat, p_value, degenerate_variance) = f_test(&d);
    Ok(AnovaResult {
        f_stat,
        df_between: d.df_between,
        df_within: d.df_within,
        p_value,
        ss_between: d.ss_between,
        ss_within: d.ss_within,
        ss_total: d.ss_total,
        ms_within: d.ss_within / f64::from(d.df_within),
        group_means: groups.iter().map(|g| (g.label.clone(), g.mean())).collect(),
        degenerate_variance,
        levene: levene(groups),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TukeyPair {
    pub a: String,
    pub b: String,
    /// mean(a) − mean(b)
    pub mean_diff: f64,
    pub q_stat: f64,
    pub p_adj: f64,
    pub significant_at_alpha: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TukeyResult {
    pub alpha: f64,
    pub pairs: Vec<TukeyPair>,
    pub degenerate_variance: bool,
}

/// Tukey HSD over every unordered pair, with the Tukey–Kramer standard
/// error for unequal group sizes.
pub fn tukey_hsd(groups: &[GroupSample], alpha: f64) -> Result<TukeyResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParam(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    validate(groups)?;
    let d = decompose(groups);
    let k = groups.len() as u32;
    let ms_within = d.ss_within / f64::from(d.df_within);
    let within_zero = d.ss_within <= 1e-14 * d.ss_total || d.ss_total == 0.0;
    let mut degenerate_variance = false;
    let mut pairs = Vec::with_capacity(groups.len() * (groups.len() - 1) / 2);
    for (i, a) in groups.iter().enumerate() {
        for b in &groups[i + 1..] {
            let mean_diff = a.mean() - b.mean();
            let (q_stat, p_adj) = if within_zero {
                if mean_diff.abs() <= 1e-12 * d.ss_total.sqrt().max(1.0) {
                    (0.0, 1.0)
                } else {
                    degenerate_variance = true;
                    (f64::INFINITY, 0.0)
                }
            } else {
                let se = (ms_within / 2.0
                    * (1.0 / a.values.len() as f64 + 1.0 / b.values.len() as f64))
                    .sqrt();
                let q = mean_diff.abs() / se;
                (q, studentized_range_sf(q, k, d.df_within))
            };
            pairs.push(TukeyPair {
                a: a.label.clone(),
                b: b.label.clone(),
                mean_diff,
                q_stat,
                p_adj,
                significant_at_alpha: p_adj < alpha,
            });
        }
    }
    Ok(TukeyResult {
        alpha,
        pairs,
        degenerate_variance,
    })
}
