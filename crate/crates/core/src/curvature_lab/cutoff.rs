use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smoothstep cutoff: 1 on `(−∞, 1/2]`, 0 on `[1, ∞)`, and on `[1/2, 1]`
/// the value `1 − S_N(2u − 1)` where `S_N` is the odd-degree `2N + 1`
/// smoothstep polynomial. Degree 5 is the quintic `6s⁵ − 15s⁴ + 10s³`,
/// which is C² across both plateaus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffProfile {
    degree: u32,
    /// Coefficients of `S_N` in increasing powers of `s`.
    coeffs: Vec<f64>,
}

impl Default for CutoffProfile {
    fn default() -> Self {
        Self::new(5).expect("quintic is valid")
    }
}

impl CutoffProfile {
    pub fn new(degree: u32) -> Result<Self> {
        if degree < 5 || degree.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "cutoff degree {degree} must be odd and at least 5"
            )));
        }
        let n = u64::from((degree - 1) / 2);
        // S_N(s) = s^{N+1} Σ_{i=0}^{N} C(N+i, i) C(2N+1, N−i) (−s)^i
        let mut coeffs = vec![0.0; degree as usize + 1];
        for i in 0..=n {
            let c = binomial(n + i, i) * binomial(2 * n + 1, n - i);
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[(n + 1 + i) as usize] = sign * c;
        }
        Ok(Self { degree, coeffs })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `(φ(u), φ'(u), φ''(u))`
    pub fn eval(&self, u: f64) -> (f64, f64, f64) {
        if u <= 0.5 {
            return (1.0, 0.0, 0.0);
        }
        if u >= 1.0 {
            return (0.0, 0.0, 0.0);
        }
        let s = 2.0 * u - 1.0;
        let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            ddp = ddp * s + dp * 2.0;
            dp = dp * s + p;
            p = p * s + c;
        }
        // ds/du = 2
        (1.0 - p, -2.0 * dp, -4.0 * ddp)
    }

    pub fn value(&self, u: f64) -> f64 {
        self.eval(u).0
    }
}

/// Value and first two derivatives of the cutoff at `u`.
pub fn cutoff_phi(profile: &CutoffProfile, u: f64) -> (f64, f64, f64) {
    profile.eval(u)
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quintic_coefficients() {
        let q = CutoffProfile::default();
        assert_eq!(q.coeffs, vec![0.0, 0.0, 0.0, 10.0, -15.0, 6.0]);
        let h = CutoffProfile::new(7).unwrap();
        // -20s⁷ + 70s⁶ - 84s⁵ + 35s⁴
        assert_eq!(h.coeffs, vec![0.0, 0.0, 0.0, 0.0, 35.0, -84.0, 70.0, -20.0]);
    }

    #[test]
    fn plateaus_and_midpoint() {
        let q = CutoffProfile::default();
        assert_eq!(cutoff_phi(&q, 0.3), (1.0, 0.0, 0.0));
        assert_eq!(cutoff_phi(&q, -4.0), (1.0, 0.0, 0.0));
        assert_eq!(cutoff_phi(&q, 2.0), (0.0, 0.0, 0.0));
        let (v, d, dd) = cutoff_phi(&q, 0.75);
        assert_eq!(v, 0.5);
        assert_eq!(d, -15.0 / 4.0);
        assert_eq!(dd, 0.0);
    }

    #[test]
    fn rejects_bad_degree() {
        assert!(CutoffProfile::new(3).is_err());
        assert!(CutoffProfile::new(6).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for degree in [5, 7, 9] {
            let p = CutoffProfile::new(degree).unwrap();
            let h = 1e-5;
            for i in 1..50 {
                let u = 0.5 + 0.5 * f64::from(i) / 50.0;
                let (_, d, dd) = p.eval(u);
                let fd = (p.value(u + h) - p.value(u - h)) / (2.0 * h);
                let fdd = (p.eval(u + h).1 - p.eval(u - h).1) / (2.0 * h);
                assert!((d - fd).abs() < 1e-6, "degree {degree}, u {u}");
                assert!((dd - fdd).abs() < 1e-5, "degree {degree}, u {u}");
            }
        }
    }

    #[test]
    fn c2_at_plateau_edges_and_monotone() {
        let p = CutoffProfile::default();
        for edge in [0.5, 1.0] {
            let (a, da, dda) = p.eval(edge - 1e-9);
            let (b, db, ddb) = p.eval(edge + 1e-9);
            assert!((a - b).abs() < 1e-8);
            assert!((da - db).abs() < 1e-6);
            assert!((dda - ddb).abs() < 1e-4);
        }
        let mut prev = 1.0;
        for i in 0..=1000 {
            let v = p.value(0.4 + 0.7 * f64::from(i) / 1000.0);
            assert!(v <= prev && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }
}
