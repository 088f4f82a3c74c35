use super::{pid_pressure, ControlError, PidGains};
use crate::dynamics::{rk4_step, DynamicState, DynamicsError, LoadCondition, LumpedParams, Model};
use crate::kinematics::FreeGeometry;
use crate::units::psi;

/// Rest-to-rest cubic from `phi_0` to `phi_f` in `t_f` seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySpec {
    pub phi_0: f64,
    pub phi_f: f64,
    pub t_f: f64,
}

impl TrajectorySpec {
    pub fn new(phi_0: f64, phi_f: f64, t_f: f64) -> Result<Self, ControlError> {
        if !(t_f > 0.0 && t_f.is_finite() && phi_0.is_finite() && phi_f.is_finite()) {
            return Err(ControlError::InvalidParameter(format!("trajectory needs finite angles and t_f > 0, got t_f = {t_f}")));
        }
        Ok(Self { phi_0, phi_f, t_f })
    }
}

/// `φ(t) = φ_0 + 3Δ(t/t_f)² − 2Δ(t/t_f)³` and its rate.
pub fn cubic_trajectory(spec: &TrajectorySpec, t: f64) -> Result<(f64, f64), ControlError> {
    if !(0.0..=spec.t_f).contains(&t) {
        return Err(ControlError::TimeOutOfRange { t, t_f: spec.t_f });
    }
    let u = t / spec.t_f;
    let delta = spec.phi_f - spec.phi_0;
    let phi = spec.phi_0 + delta * u * u * (3.0 - 2.0 * u);
    let rate = 6.0 * delta * u * (1.0 - u) / spec.t_f;
    Ok((phi, rate))
}

/// Desired rotation over time.
#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceSignal {
    /// Piecewise-constant targets, each held for its duration (s, rad).
    Steps(Vec<(f64, f64)>),
    /// Cubic segments played back to back.
    Trajectory(Vec<TrajectorySpec>),
}

impl ReferenceSignal {
    /// Holds of 3 s at 50°, 20° and 80°: increments of +50°, −30° and +60°
    /// from rest.
    pub fn step_scenario() -> Self {
        ReferenceSignal::Steps(vec![(3.0, 50f64.to_radians()), (3.0, 20f64.to_radians()), (3.0, 80f64.to_radians())])
    }

    /// 0 → 40° → 10° → 70°, 3 s per segment.
    pub fn trajectory_scenario() -> Self {
        let pts = [0.0, 40.0, 10.0, 70.0].map(|d: f64| d.to_radians());
        ReferenceSignal::Trajectory(pts.windows(2).map(|w| TrajectorySpec { phi_0: w[0], phi_f: w[1], t_f: 3.0 }).collect())
    }

    pub fn validate(&self) -> Result<(), ControlError> {
        let ok = match self {
            ReferenceSignal::Steps(s) => !s.is_empty() && s.iter().all(|(d, a)| *d > 0.0 && d.is_finite() && a.is_finite()),
            ReferenceSignal::Trajectory(s) => {
                !s.is_empty() && s.iter().all(|t| t.t_f > 0.0 && t.t_f.is_finite() && t.phi_0.is_finite() && t.phi_f.is_finite())
            }
        };
        if ok {
            Ok(())
        } else {
            Err(ControlError::InvalidParameter("reference needs at least one segment with positive finite duration".into()))
        }
    }

    pub fn duration(&self) -> f64 {
        match self {
            ReferenceSignal::Steps(s) => s.iter().map(|x| x.0).sum(),
            ReferenceSignal::Trajectory(s) => s.iter().map(|x| x.t_f).sum(),
        }
    }

    /// Times at which one segment ends and the next begins.
    pub fn switch_times(&self) -> Vec<f64> {
        let durations: Vec<f64> = match self {
            ReferenceSignal::Steps(s) => s.iter().map(|x| x.0).collect(),
            ReferenceSignal::Trajectory(s) => s.iter().map(|x| x.t_f).collect(),
        };
        durations
            .iter()
            .scan(0.0, |acc, d| {
                *acc += d;
                Some(*acc)
            })
            .collect()
    }

    /// `(φ_d, φ̇_d)` at time `t`. Before 0 the first segment applies, after
    /// the end the final target is held.
    pub fn at(&self, t: f64) -> (f64, f64) {
        match self {
            ReferenceSignal::Steps(s) => {
                let mut end = 0.0;
                for &(d, a) in s {
                    end += d;
                    if t < end {
                        return (a, 0.0);
                    }
                }
                (s[s.len() - 1].1, 0.0)
            }
            ReferenceSignal::Trajectory(s) => {
                let mut start = 0.0;
                for spec in s {
                    if t < start + spec.t_f {
                        let local = (t - start).max(0.0);
                        return cubic_trajectory(spec, local).expect("local time within segment");
                    }
                    start += spec.t_f;
                }
                (s[s.len() - 1].phi_f, 0.0)
            }
        }
    }
}

/// Discrete PID with conditional integration: the integral only advances
/// when the updated output stays inside the bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct PidController {
    pub gains: PidGains,
    pub bounds: (f64, f64),
    pub period: f64,
    integral: f64,
}

impl PidController {
    pub fn new(gains: PidGains, bounds: (f64, f64), period: f64) -> Result<Self, ControlError> {
        if !(period > 0.0 && period.is_finite())
            || bounds.0.is_nan()
            || bounds.1.is_nan()
            || bounds.0 > bounds.1
            || bounds.0 < 0.0
        {
            return Err(ControlError::InvalidParameter(format!(
                "controller needs period > 0 and 0 <= P_min <= P_max, got {period}, {bounds:?}"
            )));
        }
        Ok(Self { gains, bounds, period, integral: 0.0 })
    }

    pub fn integral(&self) -> f64 {
        self.integral
    }

    pub fn update(&mut self, phi_d: f64, phi: f64, phi_dot: f64) -> f64 {
        let candidate = self.integral + (phi_d - phi) * self.period;
        let raw = self.gains.kp * (phi_d - phi) - self.gains.kd * phi_dot + self.gains.ki * candidate;
        if raw >= self.bounds.0 && raw <= self.bounds.1 {
            self.integral = candidate;
            raw
        } else {
            pid_pressure(phi_d, phi, phi_dot, self.integral, &self.gains, self.bounds)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSettings {
    /// Plant integration step, s.
    pub dt: f64,
    /// Controller update rate, Hz.
    pub control_rate: f64,
    /// Spacing of recorded samples, s.
    pub output_interval: f64,
    pub p_min: f64,
    pub p_max: f64,
    /// Simulated time; the reference duration when `None`.
    pub t_end: Option<f64>,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self { dt: 1e-4, control_rate: 100.0, output_interval: 1e-3, p_min: 0.0, p_max: psi(1.0), t_end: None }
    }
}

fn steps_per(interval: f64, dt: f64, what: &str) -> Result<usize, ControlError> {
    let n = (interval / dt).round();
    if n < 1.0 || ((n * dt - interval) / interval).abs() > 1e-9 {
        return Err(ControlError::InvalidParameter(format!("{what} {interval} s is not a whole number of dt = {dt} s")));
    }
    Ok(n as usize)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedLoopSample {
    pub t: f64,
    pub phi_d: f64,
    pub phi: f64,
    pub s: f64,
    pub pressure: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClosedLoopRun {
    pub samples: Vec<ClosedLoopSample>,
}

impl ClosedLoopRun {
    /// RMS of `φ_d − φ` over the recorded samples, rad.
    pub fn tracking_rmsd(&self) -> f64 {
        crate::numerics::rms(self.samples.iter().map(|s| s.phi_d - s.phi))
    }

    /// Tracking RMSD restricted to `t ∈ [t0, t1)`.
    pub fn tracking_rmsd_window(&self, t0: f64, t1: f64) -> f64 {
        crate::numerics::rms(self.samples.iter().filter(|s| s.t >= t0 && s.t < t1).map(|s| s.phi_d - s.phi))
    }

    /// Last recorded `φ_d − φ` strictly before `t`.
    pub fn error_before(&self, t: f64) -> Option<f64> {
        self.samples.iter().rev().find(|s| s.t < t - 1e-12).map(|s| s.phi_d - s.phi)
    }
}

/// Sampled-data PID loop around the plant: the controller reads `(φ, φ̇)`
/// every `1/control_rate` seconds and the pressure is held in between while
/// the plant advances by RK4 steps of `dt`.
pub fn closed_loop_sim(
    model: Model,
    geom: &FreeGeometry,
    params: &LumpedParams,
    gains: &PidGains,
    reference: &ReferenceSignal,
    settings: &SimSettings,
) -> Result<ClosedLoopRun, ControlError> {
    reference.validate()?;
    params.validate().map_err(|e| ControlError::InvalidParameter(e.to_string()))?;
    if !(settings.dt > 0.0 && settings.control_rate > 0.0 && settings.output_interval > 0.0) {
        return Err(ControlError::InvalidParameter("dt, control_rate and output_interval must be positive".into()));
    }
    let per_control = steps_per(1.0 / settings.control_rate, settings.dt, "control period")?;
    let per_output = steps_per(settings.output_interval, settings.dt, "output interval")?;
    let t_end = settings.t_end.unwrap_or_else(|| reference.duration());
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(ControlError::InvalidParameter(format!("t_end = {t_end}")));
    }
    let n_steps = (t_end / settings.dt).round() as usize;
    let mut ctrl = PidController::new(*gains, (settings.p_min, settings.p_max), per_control as f64 * settings.dt)?;
    let load = LoadCondition::NONE;
    let mut state = DynamicState::REST;
    let mut pressure = 0.0;
    let mut run = ClosedLoopRun { samples: Vec::with_capacity(n_steps / per_output + 1) };
    for k in 0..=n_steps {
        let t = k as f64 * settings.dt;
        let (phi_d, _) = reference.at(t);
        if k % per_control == 0 {
            pressure = ctrl.update(phi_d, state.phi, state.phi_dot);
        }
        if k % per_output == 0 {
            run.samples.push(ClosedLoopSample { t, phi_d, phi: state.phi, s: state.s, pressure });
        }
        if k == n_steps {
            break;
        }
        state = rk4_step(model, &state, pressure, settings.dt, geom, params, &load).map_err(|e| {
            let source = match e {
                DynamicsError::StepFailure { .. } => DynamicsError::StepFailure { time: t + settings.dt },
                other => other,
            };
            ControlError::Simulation { time: t, source }
        })?;
    }
    Ok(run)
}

/// RMS difference of two series `(t, value)` after linear interpolation
/// onto `grid`. Every grid time must lie within both series.
pub fn rmsd(a: &[(f64, f64)], b: &[(f64, f64)], grid: &[f64]) -> Result<f64, ControlError> {
    let interp = |s: &[(f64, f64)], t: f64| -> Result<f64, ControlError> {
        if s.is_empty() || t < s[0].0 || t > s[s.len() - 1].0 {
            return Err(ControlError::TimeOutOfRange { t, t_f: s.last().map_or(0.0, |x| x.0) });
        }
        let i = s.partition_point(|x| x.0 < t);
        if s[i].0 == t || i == 0 {
            return Ok(s[i].1);
        }
        let (p, q) = (s[i - 1], s[i]);
        Ok(p.1 + (q.1 - p.1) * (t - p.0) / (q.0 - p.0))
    };
    if grid.is_empty() {
        return Err(ControlError::LengthMismatch(0, 0));
    }
    let mut acc = 0.0;
    for &t in grid {
        let d = interp(a, t)? - interp(b, t)?;
        acc += d * d;
    }
    Ok((acc / grid.len() as f64).sqrt())
}
