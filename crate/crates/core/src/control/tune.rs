//! Gain selection on the exactly discretised (zero-order hold) linear
//! torsional plant.
//!
//! With state `(φ, φ̇)` and input `P` the plant is `ẋ = A x + b P` with
//! `A = [[0, 1], [−k_t/I, −c_t/I]]` and `b = [0, m/I]`. Over one control
//! period `T` the hold gives `x⁺ = Φ x + Γ P`, where `Φ` and `Γ` are read
//! off `exp([[A, b], [0, 0]] T)`.
//!
//! The integral state advances before it is used, so the regulator is
//! `P_k = −(K_p + K_i T) φ_k − K_d φ̇_k + K_i I_k`, `I_{k+1} = I_k − T φ_k`.

use nalgebra::{DMatrix, Matrix2, Matrix3, Vector2};

use super::{pressure_gain, ControlError, PidGains};
use crate::dynamics::LumpedParams;
use crate::kinematics::FreeGeometry;
use crate::numerics::{bisect, grid_then_golden};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledPlant {
    pub phi: Matrix2<f64>,
    pub gamma: Vector2<f64>,
    pub period: f64,
}

pub fn discretize_torsion(geom: &FreeGeometry, params: &LumpedParams, period: f64) -> SampledPlant {
    let inertia = params.end_cap_inertia;
    let mut aug = Matrix3::zeros();
    aug[(0, 1)] = 1.0;
    aug[(1, 0)] = -params.torsional_stiffness / inertia;
    aug[(1, 1)] = -params.torsional_damping / inertia;
    aug[(1, 2)] = pressure_gain(geom) / inertia;
    let e = (aug * period).exp();
    SampledPlant { phi: e.fixed_view::<2, 2>(0, 0).into_owned(), gamma: e.fixed_view::<2, 1>(0, 2).into_owned(), period }
}

fn radius(m: DMatrix<f64>) -> f64 {
    m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Spectral radius of the sampled closed loop. With `K_i = 0` the integrator
/// state is dropped (its eigenvalue would be exactly 1).
pub fn spectral_radius(plant: &SampledPlant, gains: &PidGains) -> f64 {
    let (p, g, t) = (&plant.phi, &plant.gamma, plant.period);
    if gains.ki == 0.0 {
        let k = [-gains.kp, -gains.kd];
        let m = DMatrix::from_fn(2, 2, |i, j| p[(i, j)] + g[i] * k[j]);
        return radius(m);
    }
    let k = [-gains.kp - gains.ki * t, -gains.kd, gains.ki];
    let m = DMatrix::from_fn(3, 3, |i, j| {
        if i < 2 {
            let base = if j < 2 { p[(i, j)] } else { 0.0 };
            base + g[i] * k[j]
        } else {
            [-t, 0.0, 1.0][j]
        }
    });
    radius(m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutoTune {
    pub gains: PidGains,
    /// Proportional gain at which the sampled P-only loop loses stability.
    pub kp_boundary: f64,
    /// Spectral radius of the tuned sampled loop.
    pub spectral_radius: f64,
}

/// Stability boundary above `start` (which must be stable): doubling until
/// `unstable` holds, then bisection between the last stable and first
/// unstable values.
fn first_unstable(unstable: impl Fn(f64) -> bool, start: f64) -> Option<f64> {
    if unstable(start) {
        return None;
    }
    let mut lo = start;
    for _ in 0..200 {
        let hi = 2.0 * lo;
        if unstable(hi) {
            let f = |x: f64| if unstable(x) { 1.0 } else { -1.0 };
            return bisect(f, lo, hi, 1e-12 * hi);
        }
        lo = hi;
    }
    None
}

/// `K_p` at half the sampled P-only stability boundary, then `K_d` and `K_i`
/// each chosen to minimise the spectral radius of the sampled loop inside
/// its stable interval.
pub fn auto_tune(geom: &FreeGeometry, params: &LumpedParams, control_rate: f64) -> Result<AutoTune, ControlError> {
    if !(control_rate > 0.0 && control_rate.is_finite()) {
        return Err(ControlError::InvalidParameter(format!("control rate {control_rate}")));
    }
    params.validate().map_err(|e| ControlError::InvalidParameter(e.to_string()))?;
    let m = pressure_gain(geom);
    if m <= 0.0 {
        return Err(ControlError::InvalidPlant(
            "pressure must drive positive rotation (use a left-handed FREE for positive angles)".into(),
        ));
    }
    let plant = discretize_torsion(geom, params, 1.0 / control_rate);
    // Natural gain unit: pressure that doubles the static stiffness.
    let unit = params.torsional_stiffness / m;
    let rho = |g: PidGains| spectral_radius(&plant, &g);

    let kp_boundary = first_unstable(|kp| rho(PidGains { kp, kd: 0.0, ki: 0.0 }) >= 1.0, unit * 1e-3)
        .ok_or_else(|| ControlError::InvalidPlant("no proportional stability boundary".into()))?;
    let kp = 0.5 * kp_boundary;

    let kd_unit = unit / control_rate;
    let kd_hi = first_unstable(|kd| rho(PidGains { kp, kd, ki: 0.0 }) >= 1.0, kd_unit * 1e-3).unwrap_or(kd_unit * 1e3);
    let (kd, _, _) = grid_then_golden(|kd| rho(PidGains { kp, kd, ki: 0.0 }), 0.0, kd_hi, 200, 1e-10 * kd_hi);

    let ki_unit = unit * control_rate;
    // The search starts above zero: at K_i = 0 the integrator state is
    // absent and the PD radius would win trivially.
    let ki_lo = ki_unit * 1e-3;
    let ki_hi = first_unstable(|ki| rho(PidGains { kp, kd, ki }) >= 1.0, ki_lo)
        .ok_or_else(|| ControlError::InvalidPlant("no integral stability boundary".into()))?;
    let (ki, r, _) = grid_then_golden(|ki| rho(PidGains { kp, kd, ki }), ki_lo, ki_hi, 200, 1e-10 * ki_hi);

    Ok(AutoTune { gains: PidGains { kp, kd, ki }, kp_boundary, spectral_radius: r })
}
