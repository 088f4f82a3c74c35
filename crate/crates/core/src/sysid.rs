//! Identification of lumped stiffness and damping from measured data.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SysidError {
    #[error("need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("all displacements are zero")]
    ZeroDisplacementRange,
    #[error("trace has no oscillation peaks above the noise floor")]
    NotUnderdamped,
    #[error("need at least two peaks above the noise floor, found {0}")]
    InsufficientPeaks(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Axial,
    Torsional,
}

/// Load (N or N·m) at a measured displacement (m or rad).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticLoadSample {
    pub load: f64,
    pub displacement: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StiffnessFit {
    pub stiffness: f64,
    /// RMS of `load − k·displacement`.
    pub residual_rms: f64,
}

/// Least-squares slope through the origin, `k = Σ F x / Σ x²`.
pub fn fit_stiffness(samples: &[StaticLoadSample]) -> Result<StiffnessFit, SysidError> {
    if samples.len() < 2 {
        return Err(SysidError::InsufficientData { needed: 2, got: samples.len() });
    }
    if samples.iter().any(|s| !s.load.is_finite() || !s.displacement.is_finite()) {
        return Err(SysidError::InvalidInput("non-finite sample".into()));
    }
    let sxx: f64 = samples.iter().map(|s| s.displacement * s.displacement).sum();
    if sxx == 0.0 {
        return Err(SysidError::ZeroDisplacementRange);
    }
    let sxy: f64 = samples.iter().map(|s| s.displacement * s.load).sum();
    let k = sxy / sxx;
    let residual_rms = crate::numerics::rms(samples.iter().map(|s| s.load - k * s.displacement));
    Ok(StiffnessFit { stiffness: k, residual_rms })
}

/// Uniformly sampled free-vibration record.
#[derive(Debug, Clone, PartialEq)]
pub struct VibrationTrace {
    pub dt: f64,
    pub values: Vec<f64>,
}

impl VibrationTrace {
    pub fn new(dt: f64, values: Vec<f64>) -> Result<Self, SysidError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(SysidError::InvalidInput(format!("sample period {dt}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SysidError::InvalidInput("non-finite displacement".into()));
        }
        Ok(Self { dt, values })
    }

    /// Build from `(t, x)` rows; the sample period must be constant to
    /// 1e-6 relative.
    pub fn from_samples(rows: &[(f64, f64)]) -> Result<Self, SysidError> {
        if rows.len() < 3 {
            return Err(SysidError::InsufficientData { needed: 3, got: rows.len() });
        }
        let dt = rows[1].0 - rows[0].0;
        for w in rows.windows(2) {
            if ((w[1].0 - w[0].0 - dt) / dt).abs() > 1e-6 {
                return Err(SysidError::InvalidInput(format!("non-uniform sampling near t = {} s", w[0].0)));
            }
        }
        Self::new(dt, rows.iter().map(|r| r.1).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingFit {
    /// Mean logarithmic decrement `δ`.
    pub decrement: f64,
    pub zeta: f64,
    /// `c = 2ζ√(k·inertia)`.
    pub damping: f64,
    pub peaks: usize,
}

/// Default noise floor as a fraction of the first peak.
pub const DEFAULT_NOISE_FLOOR: f64 = 0.01;

/// Positive local maxima, refined by a parabola through the three samples
/// around each one. Returns `(index position, value)`.
pub fn find_peaks(values: &[f64], noise_floor: f64) -> Vec<(f64, f64)> {
    let mut raw = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let (y0, y1, y2) = (values[i - 1], values[i], values[i + 1]);
        if y1 > 0.0 && y1 > y0 && y1 >= y2 {
            let curv = y0 - 2.0 * y1 + y2;
            let (off, val) = if curv < 0.0 {
                let off = 0.5 * (y0 - y2) / curv;
                (off, y1 - 0.125 * (y0 - y2) * (y0 - y2) / curv)
            } else {
                (0.0, y1)
            };
            raw.push((i as f64 + off, val));
        }
    }
    let Some(&(_, first)) = raw.first() else { return raw };
    raw.into_iter().filter(|p| p.1 >= noise_floor * first).collect()
}

/// Logarithmic-decrement damping estimate averaged over consecutive peak
/// pairs: `ζ = δ/√(4π² + δ²)`.
pub fn fit_damping(trace: &VibrationTrace, stiffness: f64, inertia: f64, noise_floor: f64) -> Result<DampingFit, SysidError> {
    if !(stiffness > 0.0 && inertia > 0.0) {
        return Err(SysidError::InvalidInput(format!("stiffness {stiffness} and inertia {inertia} must be positive")));
    }
    if !(0.0..1.0).contains(&noise_floor) {
        return Err(SysidError::InvalidInput(format!("noise floor {noise_floor} must be in [0, 1)")));
    }
    let peaks = find_peaks(&trace.values, noise_floor);
    match peaks.len() {
        0 => return Err(SysidError::NotUnderdamped),
        1 => return Err(SysidError::InsufficientPeaks(1)),
        _ => {}
    }
    let n = peaks.len() - 1;
    let decrement = peaks.windows(2).map(|w| (w[0].1 / w[1].1).ln()).sum::<f64>() / n as f64;
    if decrement < -1e-9 {
        return Err(SysidError::InvalidInput(format!("peaks grow (mean decrement {decrement})")));
    }
    let decrement = decrement.max(0.0);
    let zeta = decrement / (4.0 * PI * PI + decrement * decrement).sqrt();
    Ok(DampingFit { decrement, zeta, damping: 2.0 * zeta * (stiffness * inertia).sqrt(), peaks: peaks.len() })
}
