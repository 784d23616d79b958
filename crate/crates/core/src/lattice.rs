//! Real second cohomology of a blow-up `M = X # k·CP̄²`.
//!
//! `H²(M, R)` is modeled as `R^n` with a diagonal intersection form
//! `Q = diag(+1 × b⁺, −1 × (b⁻ + k))`. The last `k` coordinates carry the
//! exceptional classes `E_j`, and `c₁(X)` lives in the first `b⁺ + b⁻`
//! coordinates. A [`Polarization`] is a maximal subspace on which `Q` is
//! positive definite; it plays the role of `H⁺(g)` for a metric `g`.
//!
//! For every polarization, flipping the signs of the `E_j` so that
//! `c₁(X)⁺ · ε_j⁺ ≥ 0` yields
//!
//! ```text
//! (c_S⁺)² = (c₁(X)⁺)² + 2 Σ c₁(X)⁺·ε_j⁺ + (Σ ε_j⁺)²  ≥  (c₁(X)⁺)²  ≥  c₁²(X)
//! ```
//!
//! which [`inequality_chain`] evaluates term by term.
//!
//! Seiberg–Witten invariants are not computed. When `b⁺ = 1` the invariant
//! is taken to be nonzero exactly when the projected class is past-pointing;
//! the sign choice above is what makes this hold for `c_S`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Diagonal intersection form with entries ±1.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionForm {
    signs: Vec<f64>,
}

impl IntersectionForm {
    /// `diag(+1 × b_plus, −1 × b_minus)`
    pub fn new(b_plus: usize, b_minus: usize) -> Self {
        let mut signs = vec![1.0; b_plus];
        signs.extend(std::iter::repeat_n(-1.0, b_minus));
        Self { signs }
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn b_plus(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0.0).count()
    }

    pub fn b_minus(&self) -> usize {
        self.dim() - self.b_plus()
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn pair(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        debug_assert_eq!(a.len(), self.dim());
        debug_assert_eq!(b.len(), self.dim());
        self.signs
            .iter()
            .zip(a.iter().zip(b.iter()))
            .map(|(s, (x, y))| s * x * y)
            .sum()
    }

    pub fn square(&self, a: &DVector<f64>) -> f64 {
        self.pair(a, a)
    }

    /// `Q·v`
    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(v.len(), self.signs.iter().zip(v.iter()).map(|(s, x)| s * x))
    }

    /// `Q·M`, scaling row `i` by the `i`-th sign.
    pub fn apply_rows(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = m.clone();
        for (i, s) in self.signs.iter().enumerate() {
            out.row_mut(i).scale_mut(*s);
        }
        out
    }

    /// Gram matrix `BᵀQB` of the columns of `basis`.
    pub fn gram(&self, basis: &DMatrix<f64>) -> DMatrix<f64> {
        let g = basis.transpose() * self.apply_rows(basis);
        // symmetrize away rounding
        (&g + g.transpose()) * 0.5
    }
}

/// `H²(X # k·CP̄², R)` with distinguished classes `c₁(X)` and `E_1..E_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowupLattice {
    pub c1sq_x: i64,
    pub b_plus_x: usize,
    pub b_minus_x: usize,
    pub k: usize,
    form: IntersectionForm,
    c1x: DVector<f64>,
}

/// Lattice with `c₁(X) = (√c₁², 0, …, 0)`.
pub fn build_blowup_lattice(
    c1sq_x: i64,
    b_plus_x: usize,
    b_minus_x: usize,
    k: usize,
) -> Result<BlowupLattice> {
    if c1sq_x <= 0 {
        return Err(Error::InvalidInput(format!(
            "c1^2(X) = {c1sq_x} must be positive"
        )));
    }
    if b_plus_x == 0 {
        return Err(Error::InvalidInput("b+(X) must be at least 1".into()));
    }
    let form = IntersectionForm::new(b_plus_x, b_minus_x + k);
    let mut c1x = DVector::zeros(form.dim());
    c1x[0] = (c1sq_x as f64).sqrt();
    Ok(BlowupLattice {
        c1sq_x,
        b_plus_x,
        b_minus_x,
        k,
        form,
        c1x,
    })
}

impl BlowupLattice {
    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn x_dim(&self) -> usize {
        self.b_plus_x + self.b_minus_x
    }

    pub fn form(&self) -> &IntersectionForm {
        &self.form
    }

    pub fn c1x(&self) -> &DVector<f64> {
        &self.c1x
    }

    /// Exceptional class `E_j`, 1-based as in the usual notation.
    pub fn exceptional(&self, j: usize) -> DVector<f64> {
        assert!(
            (1..=self.k).contains(&j),
            "E_{j} out of range 1..={}",
            self.k
        );
        let mut e = DVector::zeros(self.dim());
        e[self.x_dim() + j - 1] = 1.0;
        e
    }

    /// Replace `c₁(X)` by an arbitrary vector of the X-block with the same
    /// square (to relative precision 1e-9).
    pub fn with_c1x(mut self, c1x: DVector<f64>) -> Result<Self> {
        if c1x.len() != self.dim() {
            return Err(Error::InvalidInput(format!(
                "c1(X) has length {}, lattice has dimension {}",
                c1x.len(),
                self.dim()
            )));
        }
        if c1x.iter().skip(self.x_dim()).any(|&x| x != 0.0) {
            return Err(Error::InvalidInput(
                "c1(X) must be orthogonal to the exceptional classes".into(),
            ));
        }
        let sq = self.form.square(&c1x);
        let target = self.c1sq_x as f64;
        if (sq - target).abs() > 1e-9 * target {
            return Err(Error::InvalidInput(format!(
                "c1(X)^2 = {sq} does not match c1^2(X) = {target}"
            )));
        }
        self.c1x = c1x;
        Ok(self)
    }

    /// Generic embedding of `c₁(X)`: the given components on the negative
    /// X-block, and the first coordinate fixed so that `c₁(X)² = c₁²(X)`.
    pub fn with_negative_part(self, negative: &[f64]) -> Result<Self> {
        if negative.len() > self.b_minus_x {
            return Err(Error::InvalidInput(format!(
                "{} negative components but b-(X) = {}",
                negative.len(),
                self.b_minus_x
            )));
        }
        let mut c1x = DVector::zeros(self.dim());
        let norm2: f64 = negative.iter().map(|x| x * x).sum();
        c1x[0] = (self.c1sq_x as f64 + norm2).sqrt();
        for (i, x) in negative.iter().enumerate() {
            c1x[self.b_plus_x + i] = *x;
        }
        self.with_c1x(c1x)
    }

    /// `c₁(M, J_S) = c₁(X) + Σ s_j E_j`.
    pub fn c1_with_signs(&self, pattern: &SignPattern) -> DVector<f64> {
        assert_eq!(pattern.len(), self.k);
        let mut c = self.c1x.clone();
        let offset = self.x_dim();
        for (j, s) in pattern.signs().iter().enumerate() {
            c[offset + j] += f64::from(*s);
        }
        c
    }

    /// The coordinate polarization spanned by the first `b⁺` basis vectors.
    pub fn standard_polarization(&self) -> Polarization {
        let basis = DMatrix::identity(self.dim(), self.b_plus_x);
        Polarization::new(&self.form, basis).expect("coordinate subspace is positive definite")
    }
}

/// Maximal positive-definite subspace, given by a basis (columns).
#[derive(Debug, Clone)]
pub struct Polarization {
    form: IntersectionForm,
    basis: DMatrix<f64>,
    gram: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl Polarization {
    pub fn new(form: &IntersectionForm, basis: DMatrix<f64>) -> Result<Self> {
        if basis.nrows() != form.dim() {
            return Err(Error::InvalidInput(format!(
                "basis vectors have length {}, form has dimension {}",
                basis.nrows(),
                form.dim()
            )));
        }
        if basis.ncols() != form.b_plus() {
            return Err(Error::DegeneratePolarization(format!(
                "{} basis vectors but a maximal positive subspace has dimension {}",
                basis.ncols(),
                form.b_plus()
            )));
        }
        if basis.iter().any(|x| !x.is_finite()) {
            return Err(Error::DegeneratePolarization(
                "non-finite basis entries".into(),
            ));
        }
        let gram = form.gram(&basis);
        let chol = Cholesky::new(gram.clone()).ok_or_else(|| {
            Error::DegeneratePolarization("Gram matrix is not positive definite".into())
        })?;
        let diag = chol.l_dirty().diagonal();
        let (lo, hi) = diag.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), d| {
            (lo.min(*d), hi.max(*d))
        });
        // cond(G) ≈ (max L_ii / min L_ii)²
        if !(lo > 0.0) || (hi / lo).powi(2) > 1e12 {
            return Err(Error::DegeneratePolarization(format!(
                "Gram matrix is numerically singular (Cholesky diagonal range {lo:e}..{hi:e})"
            )));
        }
        Ok(Self {
            form: form.clone(),
            basis,
            gram,
            chol,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn form(&self) -> &IntersectionForm {
        &self.form
    }

    /// `v⁺ = B (BᵀQB)⁻¹ BᵀQ v`
    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        let rhs = self.basis.transpose() * self.form.apply(v);
        let coeffs = self.chol.solve(&rhs);
        &self.basis * coeffs
    }

    /// Coordinates of `v⁺` in a Q-orthonormal frame of the subspace, so that
    /// `Q(v⁺, w⁺)` is the Euclidean dot product of coordinates. Pairing in
    /// this frame avoids the cancellation of an indefinite form evaluated on
    /// large entries.
    pub fn coordinates(&self, v: &DVector<f64>) -> DVector<f64> {
        let rhs = self.basis.transpose() * self.form.apply(v);
        self.chol
            .l_dirty()
            .solve_lower_triangular(&rhs)
            .expect("Cholesky factor has a positive diagonal")
    }
}

/// Q-orthogonal projection onto a polarization.
pub fn orthogonal_projection(v: &DVector<f64>, h: &Polarization) -> Result<DVector<f64>> {
    if v.len() != h.form.dim() {
        return Err(Error::InvalidInput(format!(
            "vector has length {}, form has dimension {}",
            v.len(),
            h.form.dim()
        )));
    }
    Ok(h.project(v))
}

/// Polarization obtained by moving the coordinate one with `exp(A)`, where
/// `A = Q·S` for a random antisymmetric `S` with entries uniform in
/// `[−boost_scale, boost_scale]`. Such `A` satisfy `AᵀQ + QA = 0`.
pub fn random_polarization(
    lat: &BlowupLattice,
    seed: u64,
    boost_scale: f64,
) -> Result<Polarization> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_polarization_with_rng(lat, &mut rng, boost_scale)
}

pub fn random_polarization_with_rng<R: Rng + ?Sized>(
    lat: &BlowupLattice,
    rng: &mut R,
    boost_scale: f64,
) -> Result<Polarization> {
    if !(boost_scale >= 0.0) || !boost_scale.is_finite() {
        return Err(Error::InvalidInput(format!(
            "boost_scale = {boost_scale} must be finite and non-negative"
        )));
    }
    let n = lat.dim();
    let mut skew = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let x = boost_scale * rng.random_range(-1.0..=1.0);
            skew[(i, j)] = x;
            skew[(j, i)] = -x;
        }
    }
    if boost_scale == 0.0 {
        return Ok(lat.standard_polarization());
    }
    let generator = lat.form.apply_rows(&skew);
    let motion = generator.exp();
    let basis = motion.columns(0, lat.b_plus_x).into_owned();
    let raw = Polarization::new(&lat.form, basis)?;
    // Q-orthonormalize: B L⁻ᵀ has identity Gram matrix.
    let l_inv_t =
        raw.chol.l().transpose().try_inverse().ok_or_else(|| {
            Error::DegeneratePolarization("triangular factor not invertible".into())
        })?;
    Polarization::new(&lat.form, raw.basis * l_inv_t)
}

/// Choice of `ε_j = s_j E_j`; `s_j = +1` encodes `j ∈ S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignPattern {
    signs: Vec<i8>,
}

impl SignPattern {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidInput("signs must be +1 or -1".into()));
        }
        Ok(Self { signs })
    }

    pub fn all_plus(k: usize) -> Self {
        Self { signs: vec![1; k] }
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Pattern of the complementary subset.
    pub fn complement(&self) -> Self {
        Self {
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }
}

/// Sign choice making every `c₁(X)⁺ · ε_j⁺` non-negative (ties go to `+1`).
pub fn choose_sign_pattern(lat: &BlowupLattice, h: &Polarization) -> SignPattern {
    let c1p = h.coordinates(&lat.c1x);
    let signs = (1..=lat.k)
        .map(|j| {
            let ep = h.coordinates(&lat.exceptional(j));
            if c1p.dot(&ep) < 0.0 {
                -1
            } else {
                1
            }
        })
        .collect();
    SignPattern { signs }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    /// `(c_S⁺)²`
    pub lhs: f64,
    /// `(c₁(X)⁺)²`
    pub mid: f64,
    /// `c₁²(X)`
    pub rhs: f64,
    /// `c₁(X)⁺ · ε_j⁺` for each `j`
    pub cross_terms: Vec<f64>,
    /// `(Σ ε_j⁺)²`
    pub defect: f64,
}

impl ChainReport {
    /// `lhs − (mid + 2Σcross + defect)`
    pub fn identity_residual(&self) -> f64 {
        self.lhs - (self.mid + 2.0 * self.cross_terms.iter().sum::<f64>() + self.defect)
    }

    /// Violations of `lhs ≥ mid ≥ rhs`, `cross ≥ 0`, `defect ≥ 0` and of the
    /// expansion identity, each at relative tolerance `rel_tol`.
    pub fn violations(&self, rel_tol: f64) -> Vec<String> {
        let scale = self.lhs.abs().max(self.rhs.abs()).max(1.0);
        let slack = rel_tol * scale;
        let mut out = Vec::new();
        if self.lhs < self.mid - slack {
            out.push(format!("lhs {} < mid {}", self.lhs, self.mid));
        }
        if self.mid < self.rhs - rel_tol * self.rhs.abs() {
            out.push(format!("mid {} < rhs {}", self.mid, self.rhs));
        }
        for (j, c) in self.cross_terms.iter().enumerate() {
            if *c < -slack {
                out.push(format!("cross term {} = {c} is negative", j + 1));
            }
        }
        if self.defect < -slack {
            out.push(format!("defect {} is negative", self.defect));
        }
        let r = self.identity_residual();
        if r.abs() > slack {
            out.push(format!("expansion identity residual {r:e}"));
        }
        out
    }
}

/// Evaluate the chain for the sign pattern chosen by [`choose_sign_pattern`].
pub fn inequality_chain(lat: &BlowupLattice, h: &Polarization) -> Result<ChainReport> {
    let pattern = choose_sign_pattern(lat, h);
    chain_for_pattern(lat, h, &pattern)
}

pub fn chain_for_pattern(
    lat: &BlowupLattice,
    h: &Polarization,
    pattern: &SignPattern,
) -> Result<ChainReport> {
    if h.form != lat.form {
        return Err(Error::InvalidInput(
            "polarization belongs to another lattice".into(),
        ));
    }
    if pattern.len() != lat.k {
        return Err(Error::InvalidInput(format!(
            "pattern has {} signs, lattice has k = {}",
            pattern.len(),
            lat.k
        )));
    }
    let c_s = h.coordinates(&lat.c1_with_signs(pattern));
    let c1p = h.coordinates(&lat.c1x);
    let mut eps_sum = DVector::zeros(c1p.len());
    let mut cross_terms = Vec::with_capacity(lat.k);
    for (j, s) in pattern.signs().iter().enumerate() {
        let eps = h.coordinates(&lat.exceptional(j + 1)) * f64::from(*s);
        cross_terms.push(c1p.dot(&eps));
        eps_sum += eps;
    }
    Ok(ChainReport {
        lhs: c_s.norm_squared(),
        mid: c1p.norm_squared(),
        rhs: lat.c1sq_x as f64,
        cross_terms,
        defect: eps_sum.norm_squared(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EqualityClass {
    Strict,
    EqualityCandidate,
}

/// Flags reports where the whole chain collapses. In that case every term
/// between the ends must vanish too.
pub fn equality_case_detect(report: &ChainReport, tol: f64) -> Result<EqualityClass> {
    if (report.lhs - report.rhs).abs() > tol {
        return Ok(EqualityClass::Strict);
    }
    if report.defect > tol || report.cross_terms.iter().any(|c| *c > tol) {
        return Err(Error::InternalInconsistency(format!(
            "lhs = rhs within {tol:e} but defect = {:e}, cross terms = {:?}",
            report.defect, report.cross_terms
        )));
    }
    Ok(EqualityClass::EqualityCandidate)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub trials: usize,
    pub boost_scale: f64,
    pub seed: u64,
    /// Minimum over trials of `lhs − rhs`.
    pub min_gap: f64,
    pub max_identity_residual: f64,
    pub equality_candidates: usize,
    pub violations: usize,
    pub inconsistencies: usize,
    pub degenerate: usize,
}

/// Seed for trial `i` of a sweep started from `seed` (splitmix64 step).
pub fn trial_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed.wrapping_add(i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Run [`inequality_chain`] over `trials` random polarizations. Trials run
/// in parallel; the summary is reduced in trial order.
pub fn lattice_sweep(
    lat: &BlowupLattice,
    trials: usize,
    boost_scale: f64,
    seed: u64,
    rel_tol: f64,
) -> Result<SweepSummary> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    if !(rel_tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let outcomes: Vec<Result<ChainReport>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let h = random_polarization(lat, trial_seed(seed, i), boost_scale)?;
            inequality_chain(lat, &h)
        })
        .collect();

    let mut summary = SweepSummary {
        trials,
        boost_scale,
        seed,
        min_gap: f64::INFINITY,
        max_identity_residual: 0.0,
        equality_candidates: 0,
        violations: 0,
        inconsistencies: 0,
        degenerate: 0,
    };
    for outcome in outcomes {
        let report = match outcome {
            Ok(r) => r,
            Err(Error::DegeneratePolarization(_)) => {
                summary.degenerate += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        summary.min_gap = summary.min_gap.min(report.lhs - report.rhs);
        let scale = report.lhs.abs().max(1.0);
        summary.max_identity_residual = summary
            .max_identity_residual
            .max(report.identity_residual().abs() / scale);
        if !report.violations(rel_tol).is_empty() {
            summary.violations += 1;
        }
        match equality_case_detect(&report, rel_tol * report.rhs.abs()) {
            Ok(EqualityClass::EqualityCandidate) => summary.equality_candidates += 1,
            Ok(EqualityClass::Strict) => {}
            Err(_) => summary.inconsistencies += 1,
        }
    }
    Ok(summary)
}
