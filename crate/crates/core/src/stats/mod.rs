//! One-way ANOVA and Tukey HSD with the F and studentized-range
//! distributions implemented as numerical kernels.

mod anova;
mod dist;
mod quadrature;
mod special;

pub use anova::{
    one_way_anova, tukey_hsd, AnovaResult, GroupSample, LeveneDiagnostic, TukeyPair, TukeyResult,
};
pub use dist::{
    f_cdf, f_quantile, f_sf, normal_cdf, studentized_range_cdf, studentized_range_quantile,
    studentized_range_sf,
};
pub use quadrature::GaussLegendre;
pub use special::{ln_gamma, regularized_incomplete_beta};
