//! Exact arithmetic on the characteristic numbers of compact oriented
//! 4-manifolds.
//!
//! Everything here is integer arithmetic. Factors of π only appear when a
//! caller asks for [`SwBound::value`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Euler characteristic and signature of a compact oriented 4-manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharNumbers {
    pub chi: i64,
    pub tau: i64,
}

impl CharNumbers {
    pub const fn new(chi: i64, tau: i64) -> Self {
        Self { chi, tau }
    }

    /// `2χ + 3τ`, which is `c₁²` for an almost-complex manifold.
    pub const fn c1sq(&self) -> i64 {
        2 * self.chi + 3 * self.tau
    }

    /// Invariants of `self # k·CP̄²`.
    pub const fn blow_up(&self, k: u64) -> Self {
        blow_up_invariants(*self, k)
    }
}

/// Which side of the Hitchin–Thorpe inequality `2χ ≥ 3|τ|` a manifold is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HtVerdict {
    StrictlySatisfied,
    Equality,
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HtStatus {
    /// `2χ + 3τ`
    pub margin_plus: i64,
    /// `2χ − 3τ`
    pub margin_minus: i64,
    pub verdict: HtVerdict,
}

impl HtStatus {
    /// `2χ − 3|τ|`
    pub fn margin(&self) -> i64 {
        self.margin_plus.min(self.margin_minus)
    }
}

/// Lower bound `∫ s² dμ > 32π²·multiplier` for every metric on a blow-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwBound {
    /// `2χ_M + 3τ_M + k`, equal to `c₁²(X)` of the minimal model.
    pub multiplier: i64,
    /// The bound is never attained.
    pub strict: bool,
}

impl SwBound {
    pub fn value(&self) -> f64 {
        32.0 * PI * PI * self.multiplier as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    #[serde(rename = "c1sq_X")]
    pub c1sq_x: i64,
    pub k: i64,
    /// Multiplier of `32π²` in the scalar-curvature bound on the blow-up.
    pub sw_bound: i64,
    pub einstein_feasible: bool,
    pub reason: String,
}

impl ObstructionReport {
    pub fn obstructed(&self) -> bool {
        !self.einstein_feasible
    }
}

/// `χ → χ + k`, `τ → τ − k`.
pub const fn blow_up_invariants(x: CharNumbers, k: u64) -> CharNumbers {
    let k = k as i64;
    CharNumbers {
        chi: x.chi + k,
        tau: x.tau - k,
    }
}

pub fn hitchin_thorpe_status(x: CharNumbers) -> HtStatus {
    let margin_plus = 2 * x.chi + 3 * x.tau;
    let margin_minus = 2 * x.chi - 3 * x.tau;
    let verdict = match margin_plus.min(margin_minus) {
        m if m > 0 => HtVerdict::StrictlySatisfied,
        0 => HtVerdict::Equality,
        _ => HtVerdict::Violated,
    };
    HtStatus {
        margin_plus,
        margin_minus,
        verdict,
    }
}

/// `(b⁺, b⁻)` of a simply connected manifold, where `b₂ = χ − 2`.
pub fn betti_from_chi_tau(x: CharNumbers) -> Result<(i64, i64)> {
    betti_with_b1(x, 0)
}

/// `(b⁺, b⁻)` when the first Betti number is known: `b₂ = χ − 2 + 2b₁`.
pub fn betti_with_b1(x: CharNumbers, b1: i64) -> Result<(i64, i64)> {
    let non_realizable = |reason: String| Error::NonRealizable {
        chi: x.chi,
        tau: x.tau,
        reason,
    };
    if b1 < 0 {
        return Err(Error::InvalidInput(format!("b1 = {b1} is negative")));
    }
    let b2 = x.chi - 2 + 2 * b1;
    if b2 < 0 {
        return Err(non_realizable(format!("b2 = {b2} is negative")));
    }
    let (sum, diff) = (b2 + x.tau, b2 - x.tau);
    if sum.rem_euclid(2) != 0 {
        return Err(non_realizable(format!("b2 + tau = {sum} is odd")));
    }
    if sum < 0 || diff < 0 {
        return Err(non_realizable(format!(
            "|tau| = {} exceeds b2 = {b2}",
            x.tau.abs()
        )));
    }
    Ok((sum / 2, diff / 2))
}

/// Scalar-curvature bound for `M = X # k·CP̄²`, given M's invariants.
pub fn sw_lower_bound(m: CharNumbers, k: u64) -> Result<SwBound> {
    if k == 0 {
        return Err(Error::InvalidInput("the bound needs k > 0 blow-ups".into()));
    }
    let multiplier = m.c1sq() + k as i64;
    if multiplier <= 0 {
        return Err(Error::InvalidInput(format!(
            "2chi + 3tau + k = {multiplier} <= 0: minimal model is not of general type"
        )));
    }
    Ok(SwBound {
        multiplier,
        strict: true,
    })
}

/// Non-existence criterion `k ≥ (2/3)·c₁²(X)`, compared as `3k ≥ 2c₁²`.
pub fn einstein_obstructed(c1sq_x: i64, k: i64) -> Result<ObstructionReport> {
    if c1sq_x <= 0 {
        return Err(Error::InvalidInput(format!(
            "c1^2(X) = {c1sq_x} must be positive"
        )));
    }
    if k <= 0 {
        return Err(Error::InvalidInput(format!("k = {k} must be positive")));
    }
    let obstructed = 3 * k >= 2 * c1sq_x;
    let reason = if obstructed {
        format!(
            "3k = {} >= 2c1^2 = {}: an Einstein metric would force \
             c1^2(X) - k > (1/3) c1^2(X), i.e. 3k < 2c1^2",
            3 * k,
            2 * c1sq_x
        )
    } else {
        format!(
            "3k = {} < 2c1^2 = {}: criterion does not apply",
            3 * k,
            2 * c1sq_x
        )
    };
    Ok(ObstructionReport {
        c1sq_x,
        k,
        sw_bound: c1sq_x,
        einstein_feasible: !obstructed,
        reason,
    })
}

/// Integers `k` with `(2/3)c₁² ≤ k < c₁²`: obstructed blow-ups that still
/// satisfy the strict Hitchin–Thorpe inequality on the `2χ+3τ` side.
pub fn admissible_k_range(c1sq_x: i64) -> std::ops::Range<i64> {
    if c1sq_x <= 0 {
        return 0..0;
    }
    let k_min = ceil_div(2 * c1sq_x, 3);
    k_min..c1sq_x.max(k_min)
}

pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    const K3: CharNumbers = CharNumbers::new(24, -16);

    #[test]
    fn blow_up_examples() {
        assert_eq!(blow_up_invariants(K3, 0), K3);
        assert_eq!(
            blow_up_invariants(CharNumbers::new(55, -35), 4),
            CharNumbers::new(59, -39)
        );
        assert_eq!(CharNumbers::new(59, -39).c1sq(), 1);
        assert_eq!(
            blow_up_invariants(CharNumbers::new(108, -64), 16),
            CharNumbers::new(124, -80)
        );
    }

    #[test]
    fn ht_trichotomy() {
        assert_eq!(hitchin_thorpe_status(K3).verdict, HtVerdict::Equality);
        let m = hitchin_thorpe_status(CharNumbers::new(59, -39));
        assert_eq!(m.verdict, HtVerdict::StrictlySatisfied);
        assert_eq!(m.margin_plus, 1);
        assert_eq!(
            hitchin_thorpe_status(CharNumbers::new(2, 1)).verdict,
            HtVerdict::StrictlySatisfied
        );
        let v = hitchin_thorpe_status(CharNumbers::new(1, 2));
        assert_eq!((v.margin_plus, v.margin_minus), (8, -4));
        assert_eq!(v.verdict, HtVerdict::Violated);
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(betti_from_chi_tau(K3).unwrap(), (3, 19));
        assert_eq!(betti_from_chi_tau(CharNumbers::new(4, 0)).unwrap(), (1, 1));
        assert!(matches!(
            betti_from_chi_tau(CharNumbers::new(3, 1)),
            Ok((1, 0))
        ));
        assert!(matches!(
            betti_from_chi_tau(CharNumbers::new(3, 0)),
            Err(Error::NonRealizable { .. })
        ));
        assert!(matches!(
            betti_from_chi_tau(CharNumbers::new(1, 0)),
            Err(Error::NonRealizable { .. })
        ));
        assert!(matches!(
            betti_from_chi_tau(CharNumbers::new(4, 4)),
            Err(Error::NonRealizable { .. })
        ));
        // T⁴: χ = 0, b₁ = 4, b₂ = 6
        assert_eq!(betti_with_b1(CharNumbers::new(0, 0), 4).unwrap(), (3, 3));
    }

    #[test]
    fn sw_bound_examples() {
        let b = sw_lower_bound(CharNumbers::new(59, -39), 4).unwrap();
        assert_eq!(b.multiplier, 5);
        assert!(b.strict);
        assert!((b.value() - 160.0 * PI * PI).abs() < 1e-9);

        assert!(matches!(
            sw_lower_bound(CharNumbers::new(25, -17), 1),
            Err(Error::InvalidInput(_))
        ));

        let b = sw_lower_bound(CharNumbers::new(124, -80), 16).unwrap();
        assert_eq!(b.multiplier, 24);
        assert!((b.value() - 768.0 * PI * PI).abs() < 1e-9);
    }

    #[test]
    fn obstruction_examples() {
        let r = einstein_obstructed(5, 4).unwrap();
        assert!(r.obstructed());
        assert_eq!(r.sw_bound, 5);
        assert!(einstein_obstructed(3, 2).unwrap().obstructed());
        assert!(!einstein_obstructed(6, 3).unwrap().obstructed());
        assert!(einstein_obstructed(0, 1).is_err());
        assert!(einstein_obstructed(5, 0).is_err());
    }

    #[test]
    fn k_range_examples() {
        assert_eq!(admissible_k_range(3).collect::<Vec<_>>(), vec![2]);
        assert_eq!(admissible_k_range(5).collect::<Vec<_>>(), vec![4]);
        assert!(admissible_k_range(2).is_empty());
        assert!(admissible_k_range(1).is_empty());
        assert!(admissible_k_range(0).is_empty());
    }

    #[test]
    fn k_range_matches_brute_force() {
        for c in 1..200 {
            let brute: Vec<i64> = (1..=c).filter(|&k| 3 * k >= 2 * c && k < c).collect();
            assert_eq!(
                admissible_k_range(c).collect::<Vec<_>>(),
                brute,
                "c1^2 = {c}"
            );
            assert_eq!(brute.is_empty(), c < 3);
        }
    }
}
