//! Product quadrature on spherical shells of `R⁴` in Hopf coordinates
//!
//! ```text
//! x = (ϱ cos η cos ξ₁, ϱ cos η sin ξ₁, ϱ sin η cos ξ₂, ϱ sin η sin ξ₂),
//! d⁴x = ϱ³ sin η cos η dϱ dη dξ₁ dξ₂,   η ∈ [0, π/2], ξ₁, ξ₂ ∈ [0, 2π).
//! ```
//!
//! Gauss–Legendre in `ϱ` (optionally in `log ϱ`) and `η`, periodic
//! trapezoid in the two circle angles.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::metric::Point;
use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "need at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Sum in a fixed pairwise order, independent of thread count.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n if n <= 8 => values.iter().sum(),
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadialMap {
    Linear,
    Logarithmic,
}

/// Nodes per coordinate: `[ϱ, η, ξ₁, ξ₂]`.
pub type Resolution = [usize; 4];

pub fn doubled(res: Resolution) -> Resolution {
    res.map(|n| 2 * n)
}

#[derive(Debug, Clone)]
pub struct ShellGrid {
    pub points: Vec<Point>,
    /// Euclidean volume weights.
    pub weights: Vec<f64>,
}

impl ShellGrid {
    /// Quadrature for the shell `r0 ≤ ϱ ≤ r1`.
    pub fn new(r0: f64, r1: f64, res: Resolution, radial: RadialMap) -> Result<Self> {
        if !(0.0 <= r0 && r0 < r1) || (radial == RadialMap::Logarithmic && r0 == 0.0) {
            return Err(Error::InvalidInput(format!("bad shell [{r0}, {r1}]")));
        }
        if res.contains(&0) {
            return Err(Error::InvalidInput(
                "resolution entries must be positive".into(),
            ));
        }
        let (gx, gw) = gauss_legendre(res[0]);
        let radii: Vec<(f64, f64)> = gx
            .iter()
            .zip(&gw)
            .map(|(x, w)| match radial {
                RadialMap::Linear => {
                    let half = 0.5 * (r1 - r0);
                    let r = r0 + half * (x + 1.0);
                    (r, w * half * r.powi(3))
                }
                RadialMap::Logarithmic => {
                    let (l0, l1) = (r0.ln(), r1.ln());
                    let half = 0.5 * (l1 - l0);
                    let r = (l0 + half * (x + 1.0)).exp();
                    // dϱ = ϱ d(log ϱ)
                    (r, w * half * r.powi(4))
                }
            })
            .collect();
        let (ex, ew) = gauss_legendre(res[1]);
        let etas: Vec<(f64, f64)> = ex
            .iter()
            .zip(&ew)
            .map(|(x, w)| {
                let eta = FRAC_PI_2 * 0.5 * (x + 1.0);
                (eta, w * FRAC_PI_2 * 0.5 * eta.sin() * eta.cos())
            })
            .collect();
        let circle =
            |n: usize| -> Vec<f64> { (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect() };
        let (xi1, xi2) = (circle(res[2]), circle(res[3]));
        let wxi = (2.0 * PI / res[2] as f64) * (2.0 * PI / res[3] as f64);

        let capacity = res.iter().product();
        let mut points = Vec::with_capacity(capacity);
        let mut weights = Vec::with_capacity(capacity);
        for (r, wr) in &radii {
            for (eta, we) in &etas {
                for a in &xi1 {
                    for b in &xi2 {
                        points.push(hopf_point(*r, *eta, *a, *b));
                        weights.push(wr * we * wxi);
                    }
                }
            }
        }
        Ok(Self { points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn hopf_point(r: f64, eta: f64, xi1: f64, xi2: f64) -> Point {
    let (c, s) = (eta.cos(), eta.sin());
    Point::new(
        r * c * xi1.cos(),
        r * c * xi1.sin(),
        r * s * xi2.cos(),
        r * s * xi2.sin(),
    )
}

/// Closed-endpoint sample grid on `r0 ≤ ϱ ≤ r1`, for sup-norm estimates.
pub fn sample_grid(r0: f64, r1: f64, res: Resolution) -> Vec<Point> {
    let closed = |a: f64, b: f64, n: usize| -> Vec<f64> {
        if n == 1 {
            return vec![0.5 * (a + b)];
        }
        (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect()
    };
    let radii = closed(r0, r1, res[0]);
    let etas = closed(0.0, FRAC_PI_2, res[1]);
    let circle =
        |n: usize| -> Vec<f64> { (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect() };
    let (xi1, xi2) = (circle(res[2]), circle(res[3]));
    let mut out = Vec::with_capacity(res.iter().product());
    for r in &radii {
        for eta in &etas {
            for a in &xi1 {
                for b in &xi2 {
                    out.push(hopf_point(*r, *eta, *a, *b));
                }
            }
        }
    }
    out
}
