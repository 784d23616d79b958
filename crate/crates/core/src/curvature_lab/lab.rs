use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::curvature::scalar_curvature_fd;
use super::cutoff::CutoffProfile;
use super::metric::{GluedMetric, MetricField};
use super::quadrature::{doubled, pairwise_sum, sample_grid, RadialMap, Resolution, ShellGrid};
use crate::error::{Error, Result};

/// Exponent windows checked by [`run_glue_lab`].
pub mod thresholds {
    pub const NORM0: (f64, f64) = (1.7, 2.3);
    pub const NORM1: (f64, f64) = (0.7, 1.3);
    pub const NORM2: (f64, f64) = (-0.3, 0.3);
    pub const ANNULUS_INTEGRAL_MIN: f64 = 3.5;
    pub const MAX_ABS_S_MIN: f64 = -0.1;
    /// Relative error allowed on the Euclidean annulus volume.
    pub const VOLUME_REL: f64 = 0.005;
    /// Relative change allowed when the quadrature resolution is doubled.
    pub const QUADRATURE_REL: f64 = 0.02;
}

/// Inner radius of the Burns region, as a fraction of `t`.
pub const BURNS_INNER_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluingConfig {
    pub t_grid: Vec<f64>,
    /// Finite-difference step relative to `ϱ`: `h = fd_step·ϱ`.
    pub fd_step: f64,
    /// Gauss nodes for integrals, `[ϱ, η, ξ₁, ξ₂]`.
    pub quad_resolution: Resolution,
    /// Closed grid for sup norms, `[ϱ, η, ξ₁, ξ₂]`.
    pub sample_resolution: Resolution,
    pub cutoff: CutoffProfile,
}

impl Default for GluingConfig {
    fn default() -> Self {
        Self {
            t_grid: vec![0.4, 0.2, 0.1, 0.05],
            fd_step: 1e-3,
            quad_resolution: [16, 4, 4, 4],
            sample_resolution: [33, 9, 8, 8],
            cutoff: CutoffProfile::default(),
        }
    }
}

impl GluingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.t_grid.is_empty() {
            return Err(Error::InvalidInput("t grid is empty".into()));
        }
        if let Some(t) = self.t_grid.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
            return Err(Error::InvalidInput(format!("t = {t} must lie in (0, 1)")));
        }
        let t_min = self.t_grid.iter().copied().fold(f64::INFINITY, f64::min);
        if !(self.fd_step > 0.0 && self.fd_step <= t_min / 10.0) {
            return Err(Error::InvalidInput(format!(
                "fd_step = {} must be positive and at most min(t)/10 = {}",
                self.fd_step,
                t_min / 10.0
            )));
        }
        if self
            .quad_resolution
            .iter()
            .chain(&self.sample_resolution)
            .any(|n| *n == 0)
        {
            return Err(Error::InvalidInput("resolutions must be positive".into()));
        }
        Ok(())
    }

    /// At least four scales spanning a factor of eight, needed for fits.
    pub fn validate_for_scaling(&self) -> Result<()> {
        self.validate()?;
        let lo = self.t_grid.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.t_grid.iter().copied().fold(0.0, f64::max);
        if self.t_grid.len() < 4 || hi / lo < 8.0 - 1e-12 {
            return Err(Error::InvalidInput(format!(
                "need at least 4 values of t spanning a factor >= 8, got {:?}",
                self.t_grid
            )));
        }
        Ok(())
    }

    /// Scales sorted from largest to smallest.
    fn sorted_t(&self) -> Vec<f64> {
        let mut ts = self.t_grid.clone();
        ts.sort_by(|a, b| b.total_cmp(a));
        ts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    Norm0,
    Norm1,
    Norm2,
    AnnulusIntegral,
    MaxAbsScalar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundFit {
    pub quantity: Quantity,
    pub samples: Vec<(f64, f64)>,
    /// Least-squares slope of `log value` against `log t`.
    pub fitted_exponent: f64,
}

impl BoundFit {
    pub fn new(quantity: Quantity, samples: Vec<(f64, f64)>) -> Result<Self> {
        let fitted_exponent = fit_exponent(&samples)?;
        Ok(Self {
            quantity,
            samples,
            fitted_exponent,
        })
    }
}

pub fn fit_exponent(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InvalidInput(
            "need at least two samples to fit".into(),
        ));
    }
    if samples.iter().any(|(t, v)| !(*t > 0.0 && *v > 0.0)) {
        return Err(Error::InvalidInput(
            "log-log fit needs positive samples".into(),
        ));
    }
    let n = samples.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples.iter().map(|(t, v)| (t.ln(), v.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("all t values are equal".into()));
    }
    Ok(sxy / sxx)
}

/// Sup over the transition annulus of the max-abs entry of the
/// perturbation `φ(ϱ/t)·t⁴·h₂` and of its first and second coordinate
/// derivatives. Derivatives are the closed-form ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSample {
    pub t: f64,
    pub norm0: f64,
    pub norm1: f64,
    pub norm2: f64,
}

pub fn transition_norm_bounds(cfg: &GluingConfig, t: f64) -> Result<NormSample> {
    transition_norm_bounds_at(cfg, t, cfg.sample_resolution)
}

pub fn transition_norm_bounds_at(
    cfg: &GluingConfig,
    t: f64,
    res: Resolution,
) -> Result<NormSample> {
    let metric = GluedMetric::new(t, cfg.cutoff.clone())?;
    let points = sample_grid(0.5 * t, t, res);
    let sups: Vec<(f64, f64, f64)> = points
        .par_iter()
        .map(|x| {
            let (p, d1, d2) = metric.perturbation_jet(x)?;
            let n1 = d1.iter().map(|m| m.abs().max()).fold(0.0, f64::max);
            let n2 = d2
                .iter()
                .flatten()
                .map(|m| m.abs().max())
                .fold(0.0, f64::max);
            Ok((p.abs().max(), n1, n2))
        })
        .collect::<Result<_>>()?;
    let (norm0, norm1, norm2) = sups.iter().fold((0.0, 0.0, 0.0), |acc, s| {
        (
            f64::max(acc.0, s.0),
            f64::max(acc.1, s.1),
            f64::max(acc.2, s.2),
        )
    });
    Ok(NormSample {
        t,
        norm0,
        norm1,
        norm2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellIntegral {
    /// `∫ s² dμ_g`
    pub s2: f64,
    pub max_abs_s: f64,
    /// Euclidean volume of the shell as seen by the quadrature.
    pub euclidean_volume: f64,
}

/// `∫ s² dμ` over `r0 ≤ ϱ ≤ r1` with FD scalar curvature at step `fd_step·ϱ`.
pub fn shell_integral<M: MetricField + ?Sized>(
    metric: &M,
    r0: f64,
    r1: f64,
    res: Resolution,
    radial: RadialMap,
    fd_step: f64,
) -> Result<ShellIntegral> {
    let grid = ShellGrid::new(r0, r1, res, radial)?;
    let values: Vec<(f64, f64)> = grid
        .points
        .par_iter()
        .zip(grid.weights.par_iter())
        .map(|(x, w)| {
            let s = scalar_curvature_fd(metric, x, fd_step * x.norm())?;
            let density = metric.metric(x)?.determinant().sqrt();
            Ok((w * density * s * s, s.abs()))
        })
        .collect::<Result<_>>()?;
    let terms: Vec<f64> = values.iter().map(|v| v.0).collect();
    Ok(ShellIntegral {
        s2: pairwise_sum(&terms),
        max_abs_s: values.iter().map(|v| v.1).fold(0.0, f64::max),
        euclidean_volume: pairwise_sum(&grid.weights),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralRow {
    pub t: f64,
    pub annulus: ShellIntegral,
    /// `∫ s² dμ` over `t/100 ≤ ϱ ≤ t/2`, where the metric is Burns.
    pub burns_region_integral: f64,
}

impl IntegralRow {
    /// `∫ s² dμ` over `ϱ < 2t`; the metric is flat for `ϱ > t`.
    pub fn total(&self) -> f64 {
        self.annulus.s2 + self.burns_region_integral
    }
}

pub fn annulus_euclidean_volume(t: f64) -> f64 {
    PI * PI / 2.0 * t.powi(4) * (1.0 - 1.0 / 16.0)
}

fn relative_change(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn integral_row(cfg: &GluingConfig, t: f64) -> Result<IntegralRow> {
    let metric = GluedMetric::new(t, cfg.cutoff.clone())?;
    let annulus_at = |res| shell_integral(&metric, 0.5 * t, t, res, RadialMap::Linear, cfg.fd_step);
    let burns_at = |res| {
        shell_integral(
            &metric,
            BURNS_INNER_FRACTION * t,
            0.5 * t,
            res,
            RadialMap::Logarithmic,
            cfg.fd_step,
        )
    };
    let annulus = annulus_at(cfg.quad_resolution)?;
    let burns = burns_at(cfg.quad_resolution)?;
    let annulus_fine = annulus_at(doubled(cfg.quad_resolution))?;
    let burns_fine = burns_at(doubled(cfg.quad_resolution))?;

    let change = relative_change(annulus.s2, annulus_fine.s2);
    if change > thresholds::QUADRATURE_REL {
        return Err(Error::QuadratureUnconverged {
            quantity: format!("annulus integral at t = {t}"),
            change,
        });
    }
    let change = relative_change(annulus.s2 + burns.s2, annulus_fine.s2 + burns_fine.s2);
    if change > thresholds::QUADRATURE_REL {
        return Err(Error::QuadratureUnconverged {
            quantity: format!("total integral at t = {t}"),
            change,
        });
    }
    Ok(IntegralRow {
        t,
        annulus,
        burns_region_integral: burns.s2,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralScaling {
    pub rows: Vec<IntegralRow>,
    pub annulus_fit: BoundFit,
    pub max_abs_s_fit: BoundFit,
    /// Totals over `ϱ < 2t` strictly decrease as `t` decreases.
    pub totals_decreasing: bool,
}

pub fn s2_integral_scaling(cfg: &GluingConfig) -> Result<IntegralScaling> {
    cfg.validate_for_scaling()?;
    let rows = cfg
        .sorted_t()
        .into_iter()
        .map(|t| integral_row(cfg, t))
        .collect::<Result<Vec<_>>>()?;
    let annulus_fit = BoundFit::new(
        Quantity::AnnulusIntegral,
        rows.iter().map(|r| (r.t, r.annulus.s2)).collect(),
    )?;
    let max_abs_s_fit = BoundFit::new(
        Quantity::MaxAbsScalar,
        rows.iter().map(|r| (r.t, r.annulus.max_abs_s)).collect(),
    )?;
    let totals_decreasing = rows.windows(2).all(|w| w[1].total() < w[0].total());
    Ok(IntegralScaling {
        rows,
        annulus_fit,
        max_abs_s_fit,
        totals_decreasing,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlueRow {
    pub t: f64,
    pub norm0: f64,
    pub norm1: f64,
    pub norm2: f64,
    pub max_abs_s: f64,
    pub annulus_integral: f64,
    pub burns_region_integral: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlueExponents {
    pub norm0: f64,
    pub norm1: f64,
    pub norm2: f64,
    pub annulus_integral: f64,
    pub max_abs_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlueReport {
    pub t_grid: Vec<f64>,
    pub fd_step: f64,
    pub quad_resolution: Resolution,
    pub sample_resolution: Resolution,
    pub cutoff_degree: u32,
    pub rows: Vec<GlueRow>,
    pub exponents: GlueExponents,
    pub totals_decreasing: bool,
    pub max_volume_rel_error: f64,
    pub checks: Vec<Check>,
}

impl GlueReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn window_check(name: &str, value: f64, (lo, hi): (f64, f64)) -> Check {
    Check {
        name: name.into(),
        passed: (lo..=hi).contains(&value),
        detail: format!("{value:.4} in [{lo}, {hi}]"),
    }
}

fn floor_check(name: &str, value: f64, lo: f64) -> Check {
    Check {
        name: name.into(),
        passed: value >= lo,
        detail: format!("{value:.4} >= {lo}"),
    }
}

/// Norm bounds, scalar-curvature integrals and fitted exponents for every
/// scale in the grid.
pub fn run_glue_lab(cfg: &GluingConfig) -> Result<GlueReport> {
    let scaling = s2_integral_scaling(cfg)?;
    let norms = cfg
        .sorted_t()
        .into_iter()
        .map(|t| transition_norm_bounds(cfg, t))
        .collect::<Result<Vec<_>>>()?;

    let fit = |q, f: &dyn Fn(&NormSample) -> f64| {
        BoundFit::new(q, norms.iter().map(|n| (n.t, f(n))).collect())
    };
    let exponents = GlueExponents {
        norm0: fit(Quantity::Norm0, &|n| n.norm0)?.fitted_exponent,
        norm1: fit(Quantity::Norm1, &|n| n.norm1)?.fitted_exponent,
        norm2: fit(Quantity::Norm2, &|n| n.norm2)?.fitted_exponent,
        annulus_integral: scaling.annulus_fit.fitted_exponent,
        max_abs_s: scaling.max_abs_s_fit.fitted_exponent,
    };
    let rows: Vec<GlueRow> = norms
        .iter()
        .zip(&scaling.rows)
        .map(|(n, r)| GlueRow {
            t: n.t,
            norm0: n.norm0,
            norm1: n.norm1,
            norm2: n.norm2,
            max_abs_s: r.annulus.max_abs_s,
            annulus_integral: r.annulus.s2,
            burns_region_integral: r.burns_region_integral,
        })
        .collect();
    let max_volume_rel_error = scaling
        .rows
        .iter()
        .map(|r| relative_change(r.annulus.euclidean_volume, annulus_euclidean_volume(r.t)))
        .fold(0.0, f64::max);

    let checks = vec![
        window_check("norm0 exponent", exponents.norm0, thresholds::NORM0),
        window_check("norm1 exponent", exponents.norm1, thresholds::NORM1),
        window_check("norm2 exponent", exponents.norm2, thresholds::NORM2),
        floor_check(
            "annulus integral exponent",
            exponents.annulus_integral,
            thresholds::ANNULUS_INTEGRAL_MIN,
        ),
        floor_check(
            "max |s| exponent",
            exponents.max_abs_s,
            thresholds::MAX_ABS_S_MIN,
        ),
        Check {
            name: "total integral decreasing".into(),
            passed: scaling.totals_decreasing,
            detail: format!(
                "totals {:?}",
                scaling
                    .rows
                    .iter()
                    .map(IntegralRow::total)
                    .collect::<Vec<_>>()
            ),
        },
        Check {
            name: "annulus volume calibration".into(),
            passed: max_volume_rel_error <= thresholds::VOLUME_REL,
            detail: format!("{max_volume_rel_error:.3e} <= {}", thresholds::VOLUME_REL),
        },
    ];
    Ok(GlueReport {
        t_grid: cfg.sorted_t(),
        fd_step: cfg.fd_step,
        quad_resolution: cfg.quad_resolution,
        sample_resolution: cfg.sample_resolution,
        cutoff_degree: cfg.cutoff.degree(),
        rows,
        exponents,
        totals_decreasing: scaling.totals_decreasing,
        max_volume_rel_error,
        checks,
    })
}

pub fn glue_report_csv(report: &GlueReport) -> String {
    let mut out =
        String::from("t,norm0,norm1,norm2,max_abs_s,annulus_integral,burns_region_integral\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.t,
            r.norm0,
            r.norm1,
            r.norm2,
            r.max_abs_s,
            r.annulus_integral,
            r.burns_region_integral
        ));
    }
    out
}
