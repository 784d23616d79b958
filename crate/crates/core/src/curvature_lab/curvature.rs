use nalgebra::Matrix4;

use super::metric::{is_positive_definite, MetricField, Point};
use crate::error::{Error, Result};

/// Metric with its first and second coordinate derivatives at a point.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub g: Matrix4<f64>,
    pub d1: [Matrix4<f64>; 4],
    pub d2: [[Matrix4<f64>; 4]; 4],
}

/// Second-order central differences: 33 metric evaluations.
pub fn metric_jet_fd<M: MetricField + ?Sized>(field: &M, x: &Point, h: f64) -> Result<MetricJet> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!("step {h} must be positive")));
    }
    if let Some(p) = field.puncture() {
        if (x - p).norm() <= 2.0 * h {
            return Err(Error::StepTooLarge {
                point: (*x).into(),
                step: h,
            });
        }
    }
    let g = field.metric(x)?;
    let e = |i: usize| Point::ith(i, h);
    let mut plus = [Matrix4::zeros(); 4];
    let mut minus = [Matrix4::zeros(); 4];
    for i in 0..4 {
        plus[i] = field.metric(&(x + e(i)))?;
        minus[i] = field.metric(&(x - e(i)))?;
    }
    let d1 = std::array::from_fn(|i| (plus[i] - minus[i]) / (2.0 * h));
    let mut d2 = [[Matrix4::zeros(); 4]; 4];
    for i in 0..4 {
        d2[i][i] = (plus[i] - g * 2.0 + minus[i]) / (h * h);
        for k in (i + 1)..4 {
            let pp = field.metric(&(x + e(i) + e(k)))?;
            let pm = field.metric(&(x + e(i) - e(k)))?;
            let mp = field.metric(&(x - e(i) + e(k)))?;
            let mm = field.metric(&(x - e(i) - e(k)))?;
            let v = (pp - pm - mp + mm) / (4.0 * h * h);
            d2[i][k] = v;
            d2[k][i] = v;
        }
    }
    Ok(MetricJet { g, d1, d2 })
}

/// Scalar curvature from a 2-jet of the metric,
/// `s = g^{ij} (∂_l Γ^l_ij − ∂_j Γ^l_il + Γ^l_lm Γ^m_ij − Γ^l_jm Γ^m_il)`.
pub fn scalar_curvature_from_jet(jet: &MetricJet) -> Option<f64> {
    let ginv = jet.g.try_inverse()?;
    let dg = |k: usize, a: usize, b: usize| jet.d1[k][(a, b)];
    let ddg = |k: usize, l: usize, a: usize, b: usize| jet.d2[k][l][(a, b)];

    // Γ_{m,ij} and Γ^l_ij
    let mut gamma_low = [[[0.0; 4]; 4]; 4];
    for m in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                gamma_low[m][i][j] = 0.5 * (dg(i, m, j) + dg(j, m, i) - dg(m, i, j));
            }
        }
    }
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for l in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                gamma[l][i][j] = (0..4).map(|m| ginv[(l, m)] * gamma_low[m][i][j]).sum();
            }
        }
    }
    // ∂_k g^{lm} = −g^{la} ∂_k g_ab g^{bm}
    let dginv: [Matrix4<f64>; 4] = std::array::from_fn(|k| -(ginv * jet.d1[k] * ginv));
    // ∂_k Γ^l_ij
    let mut dgamma = [[[[0.0; 4]; 4]; 4]; 4];
    for k in 0..4 {
        for l in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    let mut acc = 0.0;
                    for m in 0..4 {
                        let d_low = 0.5 * (ddg(k, i, m, j) + ddg(k, j, m, i) - ddg(k, m, i, j));
                        acc += dginv[k][(l, m)] * gamma_low[m][i][j] + ginv[(l, m)] * d_low;
                    }
                    dgamma[k][l][i][j] = acc;
                }
            }
        }
    }
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let mut ric = 0.0;
            for l in 0..4 {
                ric += dgamma[l][l][i][j] - dgamma[j][l][i][l];
                for m in 0..4 {
                    ric += gamma[l][l][m] * gamma[m][i][j] - gamma[l][j][m] * gamma[m][i][l];
                }
            }
            s += ginv[(i, j)] * ric;
        }
    }
    Some(s)
}

/// Central-difference scalar curvature at `x` with step `h`; O(h²) accurate
/// for C⁴ metrics.
pub fn scalar_curvature_fd<M: MetricField + ?Sized>(field: &M, x: &Point, h: f64) -> Result<f64> {
    let jet = metric_jet_fd(field, x, h)?;
    if !is_positive_definite(&jet.g) {
        return Err(Error::SingularMetric { point: (*x).into() });
    }
    scalar_curvature_from_jet(&jet).ok_or(Error::SingularMetric { point: (*x).into() })
}
