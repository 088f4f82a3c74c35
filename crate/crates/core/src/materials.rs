//! Elastomer and fiber constitutive laws.
//!
//! The incompressible uniaxial stresses here are true (Cauchy) stresses.
//! For a hyperelastic energy `Ψ(λ₁, λ₂, λ₃)` in uniaxial tension the lateral
//! stretches are `λ^{-1/2}` and the true stress is `λ·dΨ/dλ` of the reduced
//! energy, which gives
//!
//! - Ogden (first order): `σ = (2μ/α)(λ^α − λ^{−α/2})`
//! - neo-Hookean: `σ = μ(λ² − λ^{−1})`
//!
//! The Ogden law with `α = 2` is the neo-Hookean law.

use thiserror::Error;

use crate::numerics::{grid_then_golden, rms};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MaterialError {
    #[error("stretch must be positive, got {0}")]
    NonPositiveStretch(f64),
    #[error("invalid material parameter: {0}")]
    InvalidParameter(String),
    #[error("Shore A hardness {0} outside (0, 100)")]
    OutOfRangeHardness(f64),
    #[error("insufficient data: need {needed} usable samples, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("no interior minimum for alpha in [{lo}, {hi}]")]
    NoMinimumInInterval { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OgdenParams {
    pub mu: f64,
    pub alpha: f64,
}

impl OgdenParams {
    pub fn new(mu: f64, alpha: f64) -> Result<Self, MaterialError> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(MaterialError::InvalidParameter(format!("Ogden mu must be positive, got {mu}")));
        }
        if !alpha.is_finite() || alpha == 0.0 {
            return Err(MaterialError::InvalidParameter(format!("Ogden alpha must be finite and nonzero, got {alpha}")));
        }
        Ok(Self { mu, alpha })
    }

    /// Calibrated latex: μ = 0.393 MPa, α = 1.2.
    pub fn latex() -> Self {
        Self { mu: 0.393e6, alpha: 1.2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeoHookeanParams {
    pub mu: f64,
}

impl NeoHookeanParams {
    pub fn new(mu: f64) -> Result<Self, MaterialError> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(MaterialError::InvalidParameter(format!("neo-Hookean mu must be positive, got {mu}")));
        }
        Ok(Self { mu })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearParams {
    pub youngs_modulus: f64,
}

impl LinearParams {
    pub fn new(youngs_modulus: f64) -> Result<Self, MaterialError> {
        if !(youngs_modulus.is_finite() && youngs_modulus > 0.0) {
            return Err(MaterialError::InvalidParameter(format!("Young's modulus must be positive, got {youngs_modulus}")));
        }
        Ok(Self { youngs_modulus })
    }

    /// Latex elastomer, E = 1.18 MPa.
    pub fn latex() -> Self {
        Self { youngs_modulus: 1.18e6 }
    }
}

/// Fiber structural stiffness `EA` in newtons per unit strain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberParams {
    pub ea: f64,
}

impl FiberParams {
    pub fn new(ea: f64) -> Result<Self, MaterialError> {
        if !(ea.is_finite() && ea > 0.0) {
            return Err(MaterialError::InvalidParameter(format!("fiber EA must be positive, got {ea}")));
        }
        Ok(Self { ea })
    }

    /// Cotton fiber, EA = 644 N per unit strain.
    pub fn cotton() -> Self {
        Self { ea: 644.0 }
    }
}

/// Elastomer law selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaterialModel {
    Linear(LinearParams),
    NeoHookean(NeoHookeanParams),
    Ogden(OgdenParams),
}

impl MaterialModel {
    /// Small-strain shear modulus. The linear law assumes ν = 0.5.
    pub fn shear_modulus(&self) -> f64 {
        match self {
            MaterialModel::Linear(p) => shear_from_youngs(p.youngs_modulus, 0.5),
            MaterialModel::NeoHookean(p) => p.mu,
            MaterialModel::Ogden(p) => p.mu,
        }
    }

    /// Small-strain Young's modulus (incompressible: E = 3μ).
    pub fn youngs_modulus(&self) -> f64 {
        match self {
            MaterialModel::Linear(p) => p.youngs_modulus,
            _ => 3.0 * self.shear_modulus(),
        }
    }

    /// True stress in uniaxial tension at stretch `λ`. The linear law is
    /// evaluated at engineering strain `λ − 1`.
    pub fn uniaxial_stress(&self, stretch: f64) -> Result<f64, MaterialError> {
        match self {
            MaterialModel::Linear(p) => {
                check_stretch(stretch)?;
                Ok(linear_uniaxial_stress(stretch - 1.0, p))
            }
            MaterialModel::NeoHookean(p) => neo_hookean_uniaxial_stress(stretch, p),
            MaterialModel::Ogden(p) => ogden_uniaxial_stress(stretch, p),
        }
    }
}

/// A point of a true stress–stretch curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressStrainSample {
    pub stretch: f64,
    pub true_stress: f64,
}

impl StressStrainSample {
    pub fn new(stretch: f64, true_stress: f64) -> Result<Self, MaterialError> {
        check_stretch(stretch)?;
        Ok(Self { stretch, true_stress })
    }

    /// From engineering strain and stress, assuming incompressibility
    /// (`σ_true = σ_eng·λ`).
    pub fn from_engineering(strain: f64, eng_stress: f64) -> Result<Self, MaterialError> {
        let stretch = 1.0 + strain;
        Self::new(stretch, eng_stress * stretch)
    }
}

fn check_stretch(stretch: f64) -> Result<(), MaterialError> {
    if stretch.is_finite() && stretch > 0.0 {
        Ok(())
    } else {
        Err(MaterialError::NonPositiveStretch(stretch))
    }
}

/// First-order Ogden strain energy density `(2μ/α²)(λ₁^α + λ₂^α + λ₃^α − 3)`.
pub fn ogden_energy(l1: f64, l2: f64, l3: f64, p: &OgdenParams) -> Result<f64, MaterialError> {
    for l in [l1, l2, l3] {
        check_stretch(l)?;
    }
    let a = p.alpha;
    Ok(2.0 * p.mu / (a * a) * (l1.powf(a) + l2.powf(a) + l3.powf(a) - 3.0))
}

pub fn neo_hookean_energy(l1: f64, l2: f64, l3: f64, p: &NeoHookeanParams) -> Result<f64, MaterialError> {
    for l in [l1, l2, l3] {
        check_stretch(l)?;
    }
    Ok(0.5 * p.mu * (l1 * l1 + l2 * l2 + l3 * l3 - 3.0))
}

pub fn ogden_uniaxial_stress(stretch: f64, p: &OgdenParams) -> Result<f64, MaterialError> {
    check_stretch(stretch)?;
    let a = p.alpha;
    Ok(2.0 * p.mu / a * (stretch.powf(a) - stretch.powf(-0.5 * a)))
}

pub fn neo_hookean_uniaxial_stress(stretch: f64, p: &NeoHookeanParams) -> Result<f64, MaterialError> {
    check_stretch(stretch)?;
    Ok(p.mu * (stretch * stretch - 1.0 / stretch))
}

pub fn linear_uniaxial_stress(strain: f64, p: &LinearParams) -> f64 {
    p.youngs_modulus * strain
}

/// `μ = E / (2(1 + ν))`.
pub fn shear_from_youngs(youngs_modulus: f64, poisson: f64) -> f64 {
    youngs_modulus / (2.0 * (1.0 + poisson))
}

// Gent's relation between Shore A hardness S and Young's modulus in MPa:
// E = 0.0981 (56 + 7.62336 S) / (0.137505 (254 − 2.54 S)).
const GENT_A: f64 = 0.0981;
const GENT_B: f64 = 56.0;
const GENT_C: f64 = 7.62336;
const GENT_D: f64 = 0.137505;
const GENT_E: f64 = 254.0;
const GENT_F: f64 = 2.54;

/// Young's modulus (Pa) for a Shore A hardness.
pub fn shore_to_modulus(shore: f64) -> Result<f64, MaterialError> {
    if !(shore > 0.0 && shore < 100.0) {
        return Err(MaterialError::OutOfRangeHardness(shore));
    }
    let e_mpa = GENT_A * (GENT_B + GENT_C * shore) / (GENT_D * (GENT_E - GENT_F * shore));
    Ok(e_mpa * 1e6)
}

/// Shore A hardness for a Young's modulus (Pa); inverse of [`shore_to_modulus`].
pub fn modulus_to_shore(youngs_modulus: f64) -> Result<f64, MaterialError> {
    let e = youngs_modulus * 1e-6;
    let shore = (e * GENT_D * GENT_E - GENT_A * GENT_B) / (GENT_A * GENT_C + e * GENT_D * GENT_F);
    if !(shore > 0.0 && shore < 100.0) {
        return Err(MaterialError::OutOfRangeHardness(shore));
    }
    Ok(shore)
}

/// Result of an Ogden calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OgdenFit {
    pub params: OgdenParams,
    /// Root-mean-square stress deviation (Pa) at the fitted α.
    pub rmsd: f64,
}

/// RMS deviation (Pa) between the Ogden law and the samples.
pub fn ogden_rmsd(samples: &[StressStrainSample], p: &OgdenParams) -> f64 {
    rms(samples.iter().map(|smp| {
        let a = p.alpha;
        2.0 * p.mu / a * (smp.stretch.powf(a) - smp.stretch.powf(-0.5 * a)) - smp.true_stress
    }))
}

/// Search interval for the Ogden exponent.
pub const ALPHA_SEARCH: (f64, f64) = (0.1, 4.0);

/// Fit α with the shear modulus held at `mu_fixed`, by a coarse scan of
/// [`ALPHA_SEARCH`] refined with golden-section search.
pub fn fit_ogden(samples: &[StressStrainSample], mu_fixed: f64) -> Result<OgdenFit, MaterialError> {
    let usable = samples.iter().filter(|s| s.stretch.is_finite() && s.true_stress.is_finite()).count();
    if samples.len() < 3 || usable < samples.len() {
        return Err(MaterialError::InsufficientData { needed: 3, got: usable.min(samples.len()) });
    }
    if !samples.iter().any(|s| s.stretch > 1.0) {
        return Err(MaterialError::InsufficientData { needed: 1, got: 0 });
    }
    OgdenParams::new(mu_fixed, 1.0)?;
    let (lo, hi) = ALPHA_SEARCH;
    let objective = |alpha: f64| ogden_rmsd(samples, &OgdenParams { mu: mu_fixed, alpha });
    let (alpha, rmsd, interior) = grid_then_golden(objective, lo, hi, 40, 1e-9);
    if !interior {
        return Err(MaterialError::NoMinimumInInterval { lo, hi });
    }
    Ok(OgdenFit { params: OgdenParams { mu: mu_fixed, alpha }, rmsd })
}

/// Least-squares slope through the origin of `(x, y)` pairs with
/// `|x| <= cap`. Returns `None` when no pair has a nonzero `x`.
fn slope_through_origin(points: impl Iterator<Item = (f64, f64)>, cap: f64) -> (Option<f64>, usize) {
    let (sxy, sxx, n) = points
        .filter(|(x, _)| x.abs() <= cap && *x != 0.0)
        .fold((0.0, 0.0, 0usize), |(sxy, sxx, n), (x, y)| (sxy + x * y, sxx + x * x, n + 1));
    if n == 0 {
        (None, 0)
    } else {
        (Some(sxy / sxx), n)
    }
}

/// Young's modulus from the linear region (engineering strain `λ − 1` up to
/// `strain_cap`) of a stress–strain curve.
pub fn fit_linear_modulus(samples: &[StressStrainSample], strain_cap: f64) -> Result<LinearParams, MaterialError> {
    match slope_through_origin(samples.iter().map(|s| (s.stretch - 1.0, s.true_stress)), strain_cap) {
        (Some(e), _) => LinearParams::new(e),
        (None, got) => Err(MaterialError::InsufficientData { needed: 1, got }),
    }
}

/// Fiber `EA` from `(strain, load)` pairs in the linear region.
pub fn fit_fiber_stiffness(strain_load: &[(f64, f64)], strain_cap: f64) -> Result<FiberParams, MaterialError> {
    match slope_through_origin(strain_load.iter().copied(), strain_cap) {
        (Some(ea), _) => FiberParams::new(ea),
        (None, got) => Err(MaterialError::InsufficientData { needed: 1, got }),
    }
}
