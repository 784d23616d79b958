//! Example surfaces and the infinite family of obstructed blow-ups.
//!
//! Smooth degree-`m` surfaces in CP³ have
//!
//! ```text
//! χ = m(m² − 4m + 6),   τ = m(4 − m²)/3,   c₁² = 2χ + 3τ = m(m − 4)²
//! ```
//!
//! and are minimal of general type for `m ≥ 5`. With `m = j + 4` this gives
//! `c₁² = j³ + 4j²`, strictly increasing in `j`, and each such surface has at
//! least one `k` with `c₁² > k ≥ (2/3)c₁²`.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::char_numbers::{
    blow_up_invariants, ceil_div, einstein_obstructed, hitchin_thorpe_status, CharNumbers,
};
use crate::error::{Error, Result};
use crate::lattice::IntersectionForm;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub name: String,
    /// Degree, for hypersurfaces in CP³.
    pub degree_m: Option<u32>,
    pub chars: CharNumbers,
    pub c1sq: i64,
    /// Asserted, not checked.
    pub minimal: bool,
    pub simply_connected: bool,
}

impl SurfaceSpec {
    /// Free-form surface with caller-supplied invariants.
    pub fn custom(
        name: impl Into<String>,
        chars: CharNumbers,
        minimal: bool,
        simply_connected: bool,
    ) -> Self {
        Self {
            name: name.into(),
            degree_m: None,
            chars,
            c1sq: chars.c1sq(),
            minimal,
            simply_connected,
        }
    }

    /// Hypersurfaces are of general type iff `m ≥ 5`; free-form surfaces
    /// are trusted when minimal with `c₁² > 0`.
    pub fn general_type(&self) -> bool {
        match self.degree_m {
            Some(m) => m >= 5,
            None => self.minimal && self.c1sq > 0,
        }
    }

    /// `χ(O) = (χ + τ)/4`, when integral.
    pub fn holomorphic_euler_characteristic(&self) -> Option<i64> {
        let s = self.chars.chi + self.chars.tau;
        (s % 4 == 0).then_some(s / 4)
    }
}

/// Smooth hypersurface of degree `m` in CP³.
pub fn hypersurface_invariants(m: u32) -> Result<SurfaceSpec> {
    if m == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let mm = i64::from(m);
    let chi = mm * (mm * mm - 4 * mm + 6);
    let tau_num = mm * (4 - mm * mm);
    // m ≡ 0 mod 3 divides the first factor; otherwise m² ≡ 1, so 4 − m² ≡ 0.
    assert_eq!(tau_num % 3, 0, "m(4 - m^2) not divisible by 3 for m = {m}");
    let chars = CharNumbers::new(chi, tau_num / 3);
    let c1sq = mm * (mm - 4) * (mm - 4);
    debug_assert_eq!(c1sq, chars.c1sq());
    Ok(SurfaceSpec {
        name: format!("degree-{m} hypersurface"),
        degree_m: Some(m),
        chars,
        c1sq,
        // the cubic is CP² blown up at six points
        minimal: m != 3,
        simply_connected: true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRow {
    pub j: u32,
    pub m: u32,
    #[serde(rename = "chi_X")]
    pub chi_x: i64,
    #[serde(rename = "tau_X")]
    pub tau_x: i64,
    pub c1sq: i64,
    pub k_min: i64,
    pub k_max: i64,
    #[serde(rename = "chi_M")]
    pub chi_m: i64,
    #[serde(rename = "tau_M")]
    pub tau_m: i64,
    pub ht_margin: i64,
    pub obstructed: bool,
}

pub const CATALOG_FIELDS: [&str; 11] = [
    "j",
    "m",
    "chi_X",
    "tau_X",
    "c1sq",
    "k_min",
    "k_max",
    "chi_M",
    "tau_M",
    "ht_margin",
    "obstructed",
];

/// Which `k` in the admissible range a catalog row blows up.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum KPolicy {
    #[default]
    Min,
    Max,
}

pub fn catalog_row(j: u32, policy: KPolicy) -> Result<CatalogRow> {
    if j == 0 {
        return Err(Error::InvalidInput("j must be at least 1".into()));
    }
    let x = hypersurface_invariants(j + 4)?;
    let c1sq = x.c1sq;
    let k_min = ceil_div(2 * c1sq, 3);
    let k_max = c1sq - 1;
    let k = match policy {
        KPolicy::Min => k_min,
        KPolicy::Max => k_max,
    };
    let blown = blow_up_invariants(x.chars, k as u64);
    Ok(CatalogRow {
        j,
        m: j + 4,
        chi_x: x.chars.chi,
        tau_x: x.chars.tau,
        c1sq,
        k_min,
        k_max,
        chi_m: blown.chi,
        tau_m: blown.tau,
        ht_margin: hitchin_thorpe_status(blown).margin(),
        obstructed: einstein_obstructed(c1sq, k)?.obstructed(),
    })
}

/// Rows for `j = 1..=j_max`, using `k = k_min`.
pub fn fermat_family_catalog(j_max: u32) -> Result<Vec<CatalogRow>> {
    fermat_family_catalog_with(j_max, KPolicy::Min)
}

pub fn fermat_family_catalog_with(j_max: u32, policy: KPolicy) -> Result<Vec<CatalogRow>> {
    if j_max == 0 {
        return Err(Error::InvalidInput("j_max must be at least 1".into()));
    }
    (1..=j_max)
        .into_par_iter()
        .map(|j| catalog_row(j, policy))
        .collect()
}

pub fn catalog_to_csv(rows: &[CatalogRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn catalog_to_json(rows: &[CatalogRow]) -> String {
    serde_json::to_string_pretty(rows).expect("catalog rows serialize")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Screen {
    PositiveC1Squared,
    /// `χ + τ ≡ 0 (mod 4)`
    Integrality,
    /// `c₁² ≤ 9(χ + τ)/4`
    BogomolovMiyaokaYau,
    Minimal,
    /// Hypersurfaces of degree `< 5` are not of general type.
    HypersurfaceDegree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub failed: Vec<Screen>,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.failed.is_empty()
    }
}

/// Sanity screens for a minimal surface of general type. The integrality and
/// Bogomolov–Miyaoka–Yau screens are classical geography, used here only as
/// advisory checks.
pub fn validate_minimal_general_type(s: &SurfaceSpec) -> Validation {
    let mut failed = Vec::new();
    let c = s.chars;
    if s.c1sq <= 0 {
        failed.push(Screen::PositiveC1Squared);
    }
    if (c.chi + c.tau).rem_euclid(4) != 0 {
        failed.push(Screen::Integrality);
    }
    if 4 * s.c1sq > 9 * (c.chi + c.tau) {
        failed.push(Screen::BogomolovMiyaokaYau);
    }
    if !s.minimal {
        failed.push(Screen::Minimal);
    }
    if matches!(s.degree_m, Some(m) if m < 5) {
        failed.push(Screen::HypersurfaceDegree);
    }
    Validation { failed }
}

/// Classes of a symplectic 4-manifold inside a real intersection form.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpec {
    pub form: IntersectionForm,
    pub c1: DVector<f64>,
    pub omega: DVector<f64>,
}

impl SymplecticSpec {
    pub fn b_plus(&self) -> usize {
        self.form.b_plus()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymplecticVerdict {
    pub general_type: bool,
    pub c1_squared: f64,
    pub c1_dot_omega: f64,
    pub reasons: Vec<String>,
}

/// `c₁² > 0` and `c₁·[ω] < 0`.
pub fn symplectic_general_type(s: &SymplecticSpec) -> Result<SymplecticVerdict> {
    let n = s.form.dim();
    if s.c1.len() != n || s.omega.len() != n {
        return Err(Error::InvalidInput(
            "class length does not match the form".into(),
        ));
    }
    let omega_sq = s.form.square(&s.omega);
    if omega_sq <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "[omega]^2 = {omega_sq} must be positive"
        )));
    }
    let c1_squared = s.form.square(&s.c1);
    let c1_dot_omega = s.form.pair(&s.c1, &s.omega);
    let mut reasons = Vec::new();
    if c1_squared <= 0.0 {
        reasons.push(format!("(a) fails: c1^2 = {c1_squared} <= 0"));
    }
    if c1_dot_omega >= 0.0 {
        reasons.push(format!("(b) fails: c1.[omega] = {c1_dot_omega} >= 0"));
    } else if s.b_plus() > 1 {
        reasons.push("(b) holds; automatic when b+ > 1 (Taubes)".into());
    }
    Ok(SymplecticVerdict {
        general_type: c1_squared > 0.0 && c1_dot_omega < 0.0,
        c1_squared,
        c1_dot_omega,
        reasons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypersurface_examples() {
        let k3 = hypersurface_invariants(4).unwrap();
        assert_eq!(k3.chars, CharNumbers::new(24, -16));
        assert_eq!(k3.c1sq, 0);
        assert!(!k3.general_type());

        let q = hypersurface_invariants(5).unwrap();
        assert_eq!(q.chars, CharNumbers::new(55, -35));
        assert_eq!(q.c1sq, 5);
        assert!(q.general_type() && q.minimal);

        let s = hypersurface_invariants(6).unwrap();
        assert_eq!(s.chars, CharNumbers::new(108, -64));
        assert_eq!(s.c1sq, 24);

        // CP² and the quadric
        assert_eq!(
            hypersurface_invariants(1).unwrap().chars,
            CharNumbers::new(3, 1)
        );
        assert_eq!(
            hypersurface_invariants(2).unwrap().chars,
            CharNumbers::new(4, 0)
        );
        assert!(hypersurface_invariants(0).is_err());
    }

    #[test]
    fn closed_forms_agree() {
        for m in 1..=400u32 {
            let s = hypersurface_invariants(m).unwrap();
            let mm = i64::from(m);
            assert_eq!(2 * s.chars.chi + 3 * s.chars.tau, mm * (mm - 4).pow(2));
        }
    }

    #[test]
    fn catalog_first_row() {
        let rows = fermat_family_catalog(1).unwrap();
        assert_eq!(
            rows,
            vec![CatalogRow {
                j: 1,
                m: 5,
                chi_x: 55,
                tau_x: -35,
                c1sq: 5,
                k_min: 4,
                k_max: 4,
                chi_m: 59,
                tau_m: -39,
                ht_margin: 1,
                obstructed: true,
            }]
        );
        assert!(fermat_family_catalog(0).is_err());
    }

    #[test]
    fn catalog_c1sq_column() {
        let c: Vec<i64> = fermat_family_catalog(3)
            .unwrap()
            .iter()
            .map(|r| r.c1sq)
            .collect();
        assert_eq!(c, vec![5, 24, 63]);
    }

    #[test]
    fn max_policy_row() {
        let r = catalog_row(2, KPolicy::Max).unwrap();
        assert_eq!(r.k_max, 23);
        assert_eq!(r.chi_m, 108 + 23);
        assert_eq!(r.ht_margin, 1);
        assert!(r.obstructed);
    }

    #[test]
    fn csv_header_matches_fields() {
        let csv = catalog_to_csv(&fermat_family_catalog(2).unwrap()).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CATALOG_FIELDS.join(","));
        assert_eq!(lines.next().unwrap(), "1,5,55,-35,5,4,4,59,-39,1,true");
        assert_eq!(lines.count(), 1);
    }

    #[test]
    fn json_keys_match_fields() {
        let json = catalog_to_json(&fermat_family_catalog(1).unwrap());
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let obj = v[0].as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        let mut expected = CATALOG_FIELDS.to_vec();
        keys.sort_unstable();
        expected.sort_unstable();
        assert_eq!(keys, expected);
        let back: Vec<CatalogRow> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, fermat_family_catalog(1).unwrap());
    }

    #[test]
    fn validation_screens() {
        assert!(validate_minimal_general_type(&hypersurface_invariants(5).unwrap()).passed());
        let k3 = validate_minimal_general_type(&hypersurface_invariants(4).unwrap());
        assert!(k3.failed.contains(&Screen::PositiveC1Squared));

        let fake = SurfaceSpec::custom("fake", CharNumbers::new(2, 2), true, true);
        assert_eq!(fake.c1sq, 10);
        assert_eq!(
            validate_minimal_general_type(&fake).failed,
            vec![Screen::BogomolovMiyaokaYau]
        );

        // CP² passes the numeric screens but not the degree screen
        let p2 = validate_minimal_general_type(&hypersurface_invariants(1).unwrap());
        assert_eq!(p2.failed, vec![Screen::HypersurfaceDegree]);

        let odd = SurfaceSpec::custom("odd", CharNumbers::new(10, -3), false, true);
        let v = validate_minimal_general_type(&odd);
        assert!(v.failed.contains(&Screen::Integrality));
        assert!(v.failed.contains(&Screen::Minimal));
    }

    fn spec(c1: [f64; 2], omega: [f64; 2]) -> SymplecticSpec {
        SymplecticSpec {
            form: IntersectionForm::new(1, 1),
            c1: DVector::from_row_slice(&c1),
            omega: DVector::from_row_slice(&omega),
        }
    }

    #[test]
    fn symplectic_predicate() {
        let v = symplectic_general_type(&spec([3.0, 2.0], [-3.0, -1.0])).unwrap();
        assert_eq!((v.c1_squared, v.c1_dot_omega), (5.0, -7.0));
        assert!(v.general_type);

        let v = symplectic_general_type(&spec([3.0, 2.0], [3.0, 1.0])).unwrap();
        assert_eq!(v.c1_dot_omega, 7.0);
        assert!(!v.general_type);
        assert!(v.reasons[0].starts_with("(b)"));

        let v = symplectic_general_type(&spec([1.0, 1.0], [-2.0, -1.0])).unwrap();
        assert_eq!((v.c1_squared, v.c1_dot_omega), (0.0, -1.0));
        assert!(!v.general_type);
        assert!(v.reasons[0].starts_with("(a)"));

        assert!(symplectic_general_type(&spec([3.0, 2.0], [1.0, 1.0])).is_err());
    }

    #[test]
    fn symplectic_large_b_plus_is_annotated() {
        let s = SymplecticSpec {
            form: IntersectionForm::new(3, 1),
            c1: DVector::from_row_slice(&[-2.0, 0.0, 0.0, 1.0]),
            omega: DVector::from_row_slice(&[1.0, 0.0, 0.0, 0.0]),
        };
        let v = symplectic_general_type(&s).unwrap();
        assert!(v.general_type);
        assert!(v.reasons.iter().any(|r| r.contains("automatic")));
    }
}
