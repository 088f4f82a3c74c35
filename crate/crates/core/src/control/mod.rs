//! PID pressure control of FREE rotation.
//!
//! The controller of [`pid_pressure`] acts on the rotation error and on the
//! measured rate:
//!
//! ```text
//! P = K_p (φ_d − φ) − K_d φ̇ + K_i ∫(φ_d − φ) dt
//! ```
//!
//! Substituting into the linearized torsional equation and differentiating
//! once gives the characteristic cubic `B λ³ + C λ² + E λ + F = 0` with
//! `m = −h·2πR³ cot Γ` and
//! `B = I_l`, `C = m K_d + c_t`, `D = m K_p`, `E = D + k_t`, `F = m K_i`.

mod roots;
mod sim;
mod tune;

use thiserror::Error;

use crate::dynamics::{moment_arm, DynamicsError, LumpedParams};
use crate::kinematics::FreeGeometry;

pub use roots::{
    characteristic_roots, root_locus, routh_hurwitz_stable, stability_boundary, CharacteristicRoots, GainKind, LocusRow,
};
pub use sim::{
    closed_loop_sim, cubic_trajectory, rmsd, ClosedLoopRun, ClosedLoopSample, PidController, ReferenceSignal, SimSettings,
    TrajectorySpec,
};
pub use tune::{auto_tune, discretize_torsion, spectral_radius, AutoTune, SampledPlant};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ControlError {
    #[error("leading coefficient B is zero")]
    DegenerateLeadingCoefficient,
    #[error("time {t} s is outside [0, {t_f}] s")]
    TimeOutOfRange { t: f64, t_f: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("plant cannot be controlled with non-negative pressure: {0}")]
    InvalidPlant(String),
    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("closed-loop simulation failed at t = {time} s: {source}")]
    Simulation { time: f64, source: DynamicsError },
}

/// Gains in Pa/rad, Pa·s/rad and Pa/(rad·s).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PidGains {
    pub kp: f64,
    pub kd: f64,
    pub ki: f64,
}

impl PidGains {
    pub fn new(kp: f64, kd: f64, ki: f64) -> Result<Self, ControlError> {
        if !(kp.is_finite() && kd.is_finite() && ki.is_finite()) {
            return Err(ControlError::InvalidParameter(format!("gains must be finite: ({kp}, {kd}, {ki})")));
        }
        Ok(Self { kp, kd, ki })
    }
}

/// Coefficients of the closed-loop characteristic cubic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedLoopCoefficients {
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

/// `−h·2πR³ cot Γ`: torsional moment per pascal at the rest geometry.
pub fn pressure_gain(geom: &FreeGeometry) -> f64 {
    -geom.handedness().sign() * moment_arm(geom)
}

pub fn closed_loop_coefficients(gains: &PidGains, geom: &FreeGeometry, params: &LumpedParams) -> ClosedLoopCoefficients {
    let m = pressure_gain(geom);
    let d = m * gains.kp;
    ClosedLoopCoefficients {
        b: params.end_cap_inertia,
        c: m * gains.kd + params.torsional_damping,
        d,
        e: d + params.torsional_stiffness,
        f: m * gains.ki,
    }
}

/// Saturated PID law for given error integral.
pub fn pid_pressure(phi_d: f64, phi: f64, phi_dot: f64, error_integral: f64, gains: &PidGains, bounds: (f64, f64)) -> f64 {
    let raw = gains.kp * (phi_d - phi) - gains.kd * phi_dot + gains.ki * error_integral;
    raw.clamp(bounds.0, bounds.1)
}
