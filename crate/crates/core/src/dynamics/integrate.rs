use super::{DynamicState, DynamicsError, LoadCondition, LumpedParams, Model};
use crate::kinematics::FreeGeometry;

/// Time course of the supply pressure before clamping.
#[derive(Debug, Clone, PartialEq)]
pub enum PressureShape {
    Constant(f64),
    /// `C¹` ramp from 0 to `target` over `rise_time`, starting at `start`
    /// (cubic smoothstep).
    SmoothRamp {
        target: f64,
        start: f64,
        rise_time: f64,
    },
    /// Piecewise-linear table `(t, P)` with flat extrapolation.
    Table(Vec<(f64, f64)>),
}

/// Pressure input clamped to `[min, max]`. Supply pressure is gauge and
/// never negative, so `min` defaults to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureSignal {
    pub shape: PressureShape,
    pub min: f64,
    pub max: f64,
}

impl PressureSignal {
    pub fn new(shape: PressureShape) -> Self {
        Self { shape, min: 0.0, max: f64::INFINITY }
    }

    pub fn constant(p: f64) -> Self {
        Self::new(PressureShape::Constant(p))
    }

    pub fn with_bounds(mut self, min: f64, max: f64) -> Self {
        self.min = min;
        self.max = max;
        self
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.min >= 0.0) || self.max.is_nan() || self.min > self.max {
            return Err(DynamicsError::InvalidParameter(format!("pressure bounds [{}, {}]", self.min, self.max)));
        }
        match &self.shape {
            PressureShape::Constant(p) if !p.is_finite() => Err(DynamicsError::InvalidParameter("non-finite pressure".into())),
            PressureShape::SmoothRamp { rise_time, target, start }
                if !(*rise_time >= 0.0 && target.is_finite() && start.is_finite()) =>
            {
                Err(DynamicsError::InvalidParameter("ramp needs finite target and non-negative rise time".into()))
            }
            PressureShape::Table(rows) => {
                if rows.is_empty() {
                    return Err(DynamicsError::InvalidParameter("empty pressure table".into()));
                }
                if rows.windows(2).any(|w| w[1].0 <= w[0].0) || rows.iter().any(|r| !r.0.is_finite() || !r.1.is_finite()) {
                    return Err(DynamicsError::InvalidParameter("pressure table times must be finite and increasing".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        let raw = match &self.shape {
            PressureShape::Constant(p) => *p,
            PressureShape::SmoothRamp { target, start, rise_time } => {
                if *rise_time <= 0.0 {
                    if t >= *start {
                        *target
                    } else {
                        0.0
                    }
                } else {
                    let x = ((t - start) / rise_time).clamp(0.0, 1.0);
                    target * x * x * (3.0 - 2.0 * x)
                }
            }
            PressureShape::Table(rows) => interpolate(rows, t),
        };
        raw.clamp(self.min, self.max)
    }
}

fn interpolate(rows: &[(f64, f64)], t: f64) -> f64 {
    let first = rows[0];
    let last = rows[rows.len() - 1];
    if t <= first.0 {
        return first.1;
    }
    if t >= last.0 {
        return last.1;
    }
    let i = rows.partition_point(|r| r.0 <= t);
    let (a, b) = (rows[i - 1], rows[i]);
    a.1 + (b.1 - a.1) * (t - a.0) / (b.0 - a.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: DynamicState,
    pub pressure: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&TrajectorySample> {
        self.samples.last()
    }
}

type Vec4 = [f64; 4];

fn derivative(
    model: Model,
    y: &Vec4,
    pressure: f64,
    geom: &FreeGeometry,
    params: &LumpedParams,
    load: &LoadCondition,
) -> Result<Vec4, DynamicsError> {
    let st = DynamicState { s: y[0], s_dot: y[1], phi: y[2], phi_dot: y[3] };
    let a = model.rhs(&st, pressure, geom, params, load)?;
    Ok([y[1], a.s_ddot, y[3], a.phi_ddot])
}

fn axpy(y: &Vec4, h: f64, k: &Vec4) -> Vec4 {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]]
}

/// One classical RK4 step with the pressure taken from `pressure(t)` at the
/// stage times.
#[allow(clippy::too_many_arguments)]
fn rk4_general(
    model: Model,
    state: &DynamicState,
    t: f64,
    dt: f64,
    pressure: &dyn Fn(f64) -> f64,
    geom: &FreeGeometry,
    params: &LumpedParams,
    load: &LoadCondition,
) -> Result<DynamicState, DynamicsError> {
    let y = [state.s, state.s_dot, state.phi, state.phi_dot];
    let p_mid = pressure(t + 0.5 * dt);
    let k1 = derivative(model, &y, pressure(t), geom, params, load)?;
    let k2 = derivative(model, &axpy(&y, 0.5 * dt, &k1), p_mid, geom, params, load)?;
    let k3 = derivative(model, &axpy(&y, 0.5 * dt, &k2), p_mid, geom, params, load)?;
    let k4 = derivative(model, &axpy(&y, dt, &k3), pressure(t + dt), geom, params, load)?;
    let mut out = [0.0; 4];
    for i in 0..4 {
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    let next = DynamicState { s: out[0], s_dot: out[1], phi: out[2], phi_dot: out[3] };
    if next.is_finite() {
        Ok(next)
    } else {
        Err(DynamicsError::StepFailure { time: t + dt })
    }
}

/// RK4 step with the pressure held at `pressure` (zero-order hold). A
/// [`DynamicsError::StepFailure`] reports the step length as its time.
pub fn rk4_step(
    model: Model,
    state: &DynamicState,
    pressure: f64,
    dt: f64,
    geom: &FreeGeometry,
    params: &LumpedParams,
    load: &LoadCondition,
) -> Result<DynamicState, DynamicsError> {
    rk4_general(model, state, 0.0, dt, &|_| pressure, geom, params, load)
}

/// Fixed-step RK4 from `t = 0` to `t_end`. The final step is shortened to
/// land on `t_end`. Samples are recorded every `record_every` steps and at
/// the end.
#[allow(clippy::too_many_arguments)]
pub fn integrate(
    model: Model,
    initial: DynamicState,
    pressure: &PressureSignal,
    t_end: f64,
    dt: f64,
    record_every: usize,
    geom: &FreeGeometry,
    params: &LumpedParams,
    load: &LoadCondition,
) -> Result<Trajectory, DynamicsError> {
    if !(dt > 0.0 && dt.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) || record_every == 0 {
        return Err(DynamicsError::InvalidParameter(format!(
            "need dt > 0, t_end >= 0 and record_every >= 1 (dt = {dt}, t_end = {t_end}, record_every = {record_every})"
        )));
    }
    params.validate()?;
    pressure.validate()?;
    let n_steps = ((t_end / dt) - 1e-9).ceil().max(0.0) as usize;
    let mut traj = Trajectory { samples: Vec::with_capacity(n_steps / record_every + 2) };
    let mut state = initial;
    let p_at = |t: f64| pressure.at(t);
    traj.samples.push(TrajectorySample { t: 0.0, state, pressure: p_at(0.0) });
    for k in 0..n_steps {
        let t = k as f64 * dt;
        let h = if k + 1 == n_steps { t_end - t } else { dt };
        state = rk4_general(model, &state, t, h, &p_at, geom, params, load)?;
        let t_next = t + h;
        if (k + 1) % record_every == 0 || k + 1 == n_steps {
            traj.samples.push(TrajectorySample { t: t_next, state, pressure: p_at(t_next) });
        }
    }
    Ok(traj)
}
