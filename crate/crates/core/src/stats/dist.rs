//! F and studentized-range distribution functions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::OnceLock;

use super::quadrature::GaussLegendre;
use super::special::{inc_beta_split, ln_gamma};

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// CDF of the F distribution with `d1`, `d2` degrees of freedom.
pub fn f_cdf(x: f64, d1: u32, d2: u32) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    let (d1, d2) = (f64::from(d1), f64::from(d2));
    let denom = d1 * x + d2;
    inc_beta_split(d1 * x / denom, d2 / denom, d1 / 2.0, d2 / 2.0)
}

/// Upper tail `1 − f_cdf`, evaluated without cancellation.
pub fn f_sf(x: f64, d1: u32, d2: u32) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    let (d1, d2) = (f64::from(d1), f64::from(d2));
    let denom = d1 * x + d2;
    inc_beta_split(d2 / denom, d1 * x / denom, d2 / 2.0, d1 / 2.0)
}

/// Smallest x with `cdf(x) >= p`, by bracketing and bisection.
fn invert_cdf(p: f64, cdf: impl Fn(f64) -> f64) -> f64 {
    assert!((0.0..1.0).contains(&p), "probability must lie in [0, 1)");
    if p == 0.0 {
        return 0.0;
    }
    let mut hi = 1.0;
    while cdf(hi) < p {
        hi *= 2.0;
        assert!(hi < 1e12, "quantile bracket diverged");
    }
    let mut lo = 0.0;
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn f_quantile(p: f64, d1: u32, d2: u32) -> f64 {
    invert_cdf(p, |x| f_cdf(x, d1, d2))
}

// Inner integral over the location of the largest normal: 34 panels of
// width 0.5 on [-8.5, 8.5], 10 nodes each.
const INNER_HALF_WIDTH: f64 = 8.5;
const INNER_PANELS: usize = 34;
// Outer integral over the scaled chi variable: 40 panels, 10 nodes each,
// on the mean +/- 12 standard deviations (clipped at 0).
const OUTER_PANELS: usize = 40;
const OUTER_SPREAD: f64 = 12.0;
const NODES_PER_PANEL: usize = 10;
/// Degrees of freedom beyond which the chi factor is treated as a point mass at 1.
const DF_INFINITE: f64 = 1e7;

struct InnerGrid {
    /// (z, weight · φ(z), Φ(z))
    points: Vec<(f64, f64, f64)>,
}

fn inner_grid() -> &'static InnerGrid {
    static GRID: OnceLock<InnerGrid> = OnceLock::new();
    GRID.get_or_init(|| {
        let gl = GaussLegendre::new(NODES_PER_PANEL);
        let points = gl
            .composite(-INNER_HALF_WIDTH, INNER_HALF_WIDTH, INNER_PANELS)
            .into_iter()
            .map(|(z, w)| (z, w * normal_pdf(z), normal_cdf(z)))
            .collect();
        InnerGrid { points }
    })
}

fn outer_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NODES_PER_PANEL))
}

/// P(range of `k` iid standard normals <= w).
fn normal_range_cdf(w: f64, k: u32) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    let exponent = (k - 1) as i32;
    let sum: f64 = inner_grid()
        .points
        .iter()
        .map(|&(z, wphi, cdf_z)| {
            let inner = (cdf_z - normal_cdf(z - w)).max(0.0);
            wphi * inner.powi(exponent)
        })
        .sum();
    (f64::from(k) * sum).min(1.0)
}

/// CDF of the studentized range for `k` means and `df` error degrees of freedom.
///
/// Integrates the normal-range probability against the density of
/// `s = sqrt(χ²_df / df)` with fixed composite Gauss–Legendre rules
/// (400 outer nodes by 340 inner nodes).
pub fn studentized_range_cdf(q: f64, k: u32, df: u32) -> f64 {
    assert!(k >= 2, "studentized range needs k >= 2");
    assert!(df >= 1, "studentized range needs df >= 1");
    if q.is_nan() || q <= 0.0 {
        return 0.0;
    }
    if q.is_infinite() {
        return 1.0;
    }
    let nu = f64::from(df);
    if nu >= DF_INFINITE {
        return normal_range_cdf(q, k);
    }
    let sd = (2.0 * nu).sqrt().recip();
    let lo = (1.0 - OUTER_SPREAD * sd).max(0.0);
    let hi = 1.0 + OUTER_SPREAD * sd;
    let log_norm = 0.5 * nu * (0.5 * nu).ln() + std::f64::consts::LN_2 - ln_gamma(0.5 * nu);
    let total: f64 = outer_rule()
        .composite(lo, hi, OUTER_PANELS)
        .into_iter()
        .map(|(s, w)| {
            let log_density = log_norm + (nu - 1.0) * s.ln() - 0.5 * nu * s * s;
            w * log_density.exp() * normal_range_cdf(q * s, k)
        })
        .sum();
    total.clamp(0.0, 1.0)
}

pub fn studentized_range_sf(q: f64, k: u32, df: u32) -> f64 {
    (1.0 - studentized_range_cdf(q, k, df)).clamp(0.0, 1.0)
}

pub fn studentized_range_quantile(p: f64, k: u32, df: u32) -> f64 {
    invert_cdf(p, |q| studentized_range_cdf(q, k, df))
}
