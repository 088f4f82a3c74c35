use super::{
    integrate, required_pressure, DynamicState, DynamicsError, LoadCondition, LumpedParams, Model, PressureShape, PressureSignal,
    Trajectory,
};
use crate::kinematics::{self, FreeGeometry};

/// Open-loop response of the nonlinear and linearized models, each driven
/// to `target_phi` by its own steady-state pressure.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenLoopComparison {
    pub target_phi: f64,
    pub pressure_nonlinear: f64,
    pub pressure_linearized: f64,
    pub nonlinear: Trajectory,
    pub linearized: Trajectory,
    /// Largest `|r − R| / R` along the nonlinear run.
    pub radius_change: f64,
    /// Largest `|γ − Γ| / Γ` along the nonlinear run.
    pub angle_change: f64,
}

impl OpenLoopComparison {
    /// `P_lin / P_nl − 1`.
    pub fn pressure_excess(&self) -> f64 {
        self.pressure_linearized / self.pressure_nonlinear - 1.0
    }
}

/// Ramp each model to its required pressure over `rise_time` (smoothstep)
/// and integrate to `t_end` with step `dt`, recording every `record_every`
/// steps.
#[allow(clippy::too_many_arguments)]
pub fn compare_open_loop(
    geom: &FreeGeometry,
    params: &LumpedParams,
    target_phi: f64,
    rise_time: f64,
    t_end: f64,
    dt: f64,
    record_every: usize,
) -> Result<OpenLoopComparison, DynamicsError> {
    let load = LoadCondition::NONE;
    let nl = required_pressure(Model::Nonlinear, target_phi, geom, params, &load)?;
    let li = required_pressure(Model::Linearized, target_phi, geom, params, &load)?;
    let run = |model: Model, p: f64| {
        let sig = PressureSignal::new(PressureShape::SmoothRamp { target: p, start: 0.0, rise_time });
        integrate(model, DynamicState::REST, &sig, t_end, dt, record_every, geom, params, &load)
    };
    let nonlinear = run(Model::Nonlinear, nl.pressure)?;
    let linearized = run(Model::Linearized, li.pressure)?;
    let mut radius_change: f64 = 0.0;
    let mut angle_change: f64 = 0.0;
    for smp in &nonlinear.samples {
        let c = kinematics::configuration(geom, smp.state.s, smp.state.phi)?;
        radius_change = radius_change.max(((c.r - geom.radius()) / geom.radius()).abs());
        angle_change = angle_change.max(((c.gamma - geom.winding_angle()) / geom.winding_angle()).abs());
    }
    Ok(OpenLoopComparison {
        target_phi,
        pressure_nonlinear: nl.pressure,
        pressure_linearized: li.pressure,
        nonlinear,
        linearized,
        radius_change,
        angle_change,
    })
}
