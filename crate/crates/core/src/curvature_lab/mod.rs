//! Numerical check of the sharpness construction around one blow-up point.
//!
//! The background is flat (`ǧ = δ`, `h₁ = 0`), so the glued metric is
//! `g_t = δ + φ(ϱ/t)·t⁴·h₂`, with `h₂` the pullback of the Fubini–Study
//! metric under `C²∖0 → CP¹`. It is a rescaled Burns metric (scalar-flat)
//! for `ϱ < t/2` and flat for `ϱ > t`. In between, the perturbation and its
//! first two derivatives are `O(t²)`, `O(t)` and `O(1)`, so `s` stays bounded
//! while the annulus volume is `O(t⁴)` and `∫ s² dμ` collapses to the
//! background value, here 0.
//!
//! The exceptional divisor `ϱ = 0` is never sampled.

mod curvature;
mod cutoff;
mod lab;
mod metric;
pub mod quadrature;

pub use curvature::{metric_jet_fd, scalar_curvature_fd, scalar_curvature_from_jet, MetricJet};
pub use cutoff::{cutoff_phi, CutoffProfile};
pub use lab::{
    annulus_euclidean_volume, fit_exponent, glue_report_csv, integral_row, run_glue_lab,
    s2_integral_scaling, shell_integral, thresholds, transition_norm_bounds,
    transition_norm_bounds_at, BoundFit, Check, GlueExponents, GlueReport, GlueRow, GluingConfig,
    IntegralRow, IntegralScaling, NormSample, Quantity, ShellIntegral, BURNS_INNER_FRACTION,
};
pub use metric::{
    complex_structure, fs_pullback_jet, fs_pullback_metric, glued_metric, is_positive_definite,
    BurnsMetric, ConformalMetric, FlatMetric, GluedMetric, MetricField, Point,
};
