//! Metrics on a punctured chart of `R⁴ = C²`, coordinates ordered
//! `(Re z₁, Im z₁, Re z₂, Im z₂)`.

use nalgebra::{Cholesky, Matrix4, Vector4};

use super::cutoff::CutoffProfile;
use crate::error::{Error, Result};

pub type Point = Vector4<f64>;

/// A symmetric-matrix field with its first and second coordinate derivatives.
pub type MatrixJet = (Matrix4<f64>, [Matrix4<f64>; 4], [[Matrix4<f64>; 4]; 4]);

/// A field of symmetric 4×4 matrices on (part of) the chart.
pub trait MetricField: Sync {
    fn metric(&self, x: &Point) -> Result<Matrix4<f64>>;

    /// Point excluded from the chart, if any.
    fn puncture(&self) -> Option<Point> {
        None
    }
}

impl<F> MetricField for F
where
    F: Fn(&Point) -> Matrix4<f64> + Sync,
{
    fn metric(&self, x: &Point) -> Result<Matrix4<f64>> {
        Ok(self(x))
    }
}

/// Complex structure: multiplication by `i`.
pub fn complex_structure() -> Matrix4<f64> {
    Matrix4::new(
        0.0, -1.0, 0.0, 0.0, //
        1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, -1.0, //
        0.0, 0.0, 1.0, 0.0,
    )
}

/// Real form of the pulled-back Fubini–Study metric,
/// `Re(ξ* H(z) η)` with `H(z) = (|z|² I − z z*) / |z|⁴`.
///
/// In real terms this is `I/ϱ² − (x xᵀ + Jx (Jx)ᵀ)/ϱ⁴`: it kills the complex
/// line through `z` and is `ϱ⁻²` times the identity on its orthogonal line.
pub fn fs_pullback_metric(z: &Point) -> Result<Matrix4<f64>> {
    let r2 = z.norm_squared();
    if r2 == 0.0 {
        return Err(Error::InvalidInput(
            "Fubini-Study pullback is undefined at 0".into(),
        ));
    }
    let jz = complex_structure() * z;
    let m = z * z.transpose() + jz * jz.transpose();
    Ok(Matrix4::identity() / r2 - m / (r2 * r2))
}

/// `h₂` with its first and second coordinate derivatives,
/// `(h, [∂_i h], [[∂_i ∂_j h]])`.
pub fn fs_pullback_jet(z: &Point) -> Result<MatrixJet> {
    let h = fs_pullback_metric(z)?;
    let j = complex_structure();
    let r2 = z.norm_squared();
    let (r4, r6, r8) = (r2 * r2, r2 * r2 * r2, r2 * r2 * r2 * r2);
    let jz = j * z;
    let m = z * z.transpose() + jz * jz.transpose();
    let e = |i: usize| Point::ith(i, 1.0);
    let je = |i: usize| j.column(i).into_owned();

    // a = ϱ⁻², b = ϱ⁻⁴, h = a I − b M
    let da = |i: usize| -2.0 * z[i] / r4;
    let db = |i: usize| -4.0 * z[i] / r6;
    let dm = |i: usize| {
        e(i) * z.transpose()
            + z * e(i).transpose()
            + je(i) * jz.transpose()
            + jz * je(i).transpose()
    };
    let mut d1 = [Matrix4::zeros(); 4];
    for (i, out) in d1.iter_mut().enumerate() {
        *out = Matrix4::identity() * da(i) - dm(i) / r4 - m * db(i);
    }
    let mut d2 = [[Matrix4::zeros(); 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            let delta = if i == k { 1.0 } else { 0.0 };
            let dda = -2.0 * delta / r4 + 8.0 * z[i] * z[k] / r6;
            let ddb = -4.0 * delta / r6 + 24.0 * z[i] * z[k] / r8;
            let ddm = e(i) * e(k).transpose()
                + e(k) * e(i).transpose()
                + je(i) * je(k).transpose()
                + je(k) * je(i).transpose();
            d2[i][k] =
                Matrix4::identity() * dda - ddm / r4 - dm(i) * db(k) - dm(k) * db(i) - m * ddb;
        }
    }
    Ok((h, d1, d2))
}

pub fn is_positive_definite(g: &Matrix4<f64>) -> bool {
    Cholesky::new(*g).is_some()
}

/// Euclidean `δ`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FlatMetric;

impl MetricField for FlatMetric {
    fn metric(&self, _x: &Point) -> Result<Matrix4<f64>> {
        Ok(Matrix4::identity())
    }
}

/// `exp(2a|x|²)·δ`, whose scalar curvature is known in closed form.
#[derive(Debug, Clone, Copy)]
pub struct ConformalMetric {
    pub a: f64,
}

impl MetricField for ConformalMetric {
    fn metric(&self, x: &Point) -> Result<Matrix4<f64>> {
        Ok(Matrix4::identity() * (2.0 * self.a * x.norm_squared()).exp())
    }
}

/// `δ + c·h₂`: the Burns metric on the blown-up C², up to scale.
#[derive(Debug, Clone, Copy)]
pub struct BurnsMetric {
    pub c: f64,
}

impl MetricField for BurnsMetric {
    fn metric(&self, x: &Point) -> Result<Matrix4<f64>> {
        Ok(Matrix4::identity() + fs_pullback_metric(x)? * self.c)
    }

    fn puncture(&self) -> Option<Point> {
        Some(Point::zeros())
    }
}

/// `g_t = δ + φ(ϱ/t)·t⁴·h₂`: flat background glued to a Burns metric of
/// scale `t⁴` inside `ϱ < t/2`.
#[derive(Debug, Clone)]
pub struct GluedMetric {
    pub t: f64,
    pub cutoff: CutoffProfile,
}

impl GluedMetric {
    pub fn new(t: f64, cutoff: CutoffProfile) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidInput(format!("t = {t} must lie in (0, 1)")));
        }
        Ok(Self { t, cutoff })
    }

    /// `t⁴`, the Burns scale inside `ϱ < t/2`.
    pub fn burns_scale(&self) -> f64 {
        let t2 = self.t * self.t;
        t2 * t2
    }

    /// The perturbation `P = φ(ϱ/t)·t⁴·h₂` with its first and second
    /// derivatives, all in closed form.
    pub fn perturbation_jet(&self, x: &Point) -> Result<MatrixJet> {
        let (h, dh, ddh) = fs_pullback_jet(x)?;
        let r = x.norm();
        let t = self.t;
        let t4 = self.burns_scale();
        let (phi, dphi, ddphi) = self.cutoff.eval(r / t);
        let psi = t4 * phi;
        let dpsi: [f64; 4] = std::array::from_fn(|i| t4 * dphi * x[i] / (r * t));
        let mut p1 = [Matrix4::zeros(); 4];
        let mut p2 = [[Matrix4::zeros(); 4]; 4];
        for i in 0..4 {
            p1[i] = h * dpsi[i] + dh[i] * psi;
            for k in 0..4 {
                let delta = if i == k { 1.0 } else { 0.0 };
                let ddpsi = t4
                    * (ddphi * x[i] * x[k] / (r * r * t * t)
                        + dphi / t * (delta / r - x[i] * x[k] / (r * r * r)));
                p2[i][k] = h * ddpsi + dh[k] * dpsi[i] + dh[i] * dpsi[k] + ddh[i][k] * psi;
            }
        }
        Ok((h * psi, p1, p2))
    }
}

impl MetricField for GluedMetric {
    fn metric(&self, x: &Point) -> Result<Matrix4<f64>> {
        let r = x.norm();
        if r == 0.0 {
            return Err(Error::InvalidInput(
                "the chart excludes the exceptional divisor at 0".into(),
            ));
        }
        let phi = self.cutoff.value(r / self.t);
        if phi == 0.0 {
            return Ok(Matrix4::identity());
        }
        Ok(Matrix4::identity() + fs_pullback_metric(x)? * (phi * self.burns_scale()))
    }

    fn puncture(&self) -> Option<Point> {
        Some(Point::zeros())
    }
}

/// The glued family at scale `t`.
pub fn glued_metric(cutoff: &CutoffProfile, t: f64) -> Result<GluedMetric> {
    GluedMetric::new(t, cutoff.clone())
}
