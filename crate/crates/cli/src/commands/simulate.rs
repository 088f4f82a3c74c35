use std::path::PathBuf;

use clap::Args;

use freelab::dynamics::{
    integrate, required_pressure, DynamicState, LoadCondition, Model, PressureShape, PressureSignal, Trajectory,
};
use freelab::kinematics::{configuration, FreeGeometry};
use freelab::units::{psi, to_psi};

use super::{load, read_input, read_numeric_csv, record_every};
use crate::config::ParamsPreset;
use crate::output::{num, RunOutput, Table};
use crate::{Common, Failure};

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("drive").required(true).multiple(false)))]
pub struct SimulateArgs {
    /// Drive each model with its own steady-state pressure for this rotation.
    #[arg(long, allow_negative_numbers = true, group = "drive")]
    target_deg: Option<f64>,
    /// Drive both models with the same pressure.
    #[arg(long, group = "drive")]
    pressure_psi: Option<f64>,
    /// CSV pressure schedule with header `t_s,pressure_pa` (linear between rows).
    #[arg(long, group = "drive")]
    schedule: Option<PathBuf>,
    /// Smooth ramp duration for --target-deg and --pressure-psi.
    #[arg(long, default_value_t = 0.5)]
    rise_s: f64,
    #[arg(long, default_value_t = 3.0)]
    t_end_s: f64,
}

fn numeric(e: impl std::fmt::Display) -> Failure {
    Failure::Numeric(e.to_string())
}

pub fn run(common: &Common, args: &SimulateArgs) -> Result<RunOutput, Failure> {
    let (cfg, mut out) = load(common)?;
    let geom = cfg.geometry()?;
    let params = cfg.params(&geom, ParamsPreset::Canonical)?;
    let (p_min, p_max) = cfg.pressure_bounds()?;
    let every = record_every(&cfg)?;
    let dt = cfg.integration.dt_s;
    if !(args.t_end_s > 0.0 && args.t_end_s.is_finite()) {
        return Err(Failure::Config(format!("--t-end-s must be positive, got {}", args.t_end_s)));
    }
    if !(args.rise_s >= 0.0 && args.rise_s.is_finite()) {
        return Err(Failure::Config(format!("--rise-s must be non-negative, got {}", args.rise_s)));
    }
    let ramp = |p: f64| PressureShape::SmoothRamp { target: p, start: 0.0, rise_time: args.rise_s };
    let (shape_nl, shape_lin) = if let Some(target) = args.target_deg {
        let mut shapes = Vec::new();
        for model in [Model::Nonlinear, Model::Linearized] {
            let eq = required_pressure(model, target.to_radians(), &geom, &params, &LoadCondition::NONE).map_err(numeric)?;
            if eq.pressure < p_min || eq.pressure > p_max {
                return Err(Failure::Numeric(format!(
                    "{model:?} model needs {:.6} psi for {target} deg, outside the pressure bounds [{}, {}] psi",
                    to_psi(eq.pressure),
                    to_psi(p_min),
                    to_psi(p_max)
                )));
            }
            shapes.push(ramp(eq.pressure));
        }
        (shapes[0].clone(), shapes[1].clone())
    } else if let Some(p) = args.pressure_psi {
        if !p.is_finite() {
            return Err(Failure::Config("--pressure-psi must be finite".into()));
        }
        (ramp(psi(p)), ramp(psi(p)))
    } else {
        let path = args.schedule.as_ref().expect("clap enforces one drive");
        let bytes = read_input(path, &mut out)?;
        let (header, rows) = read_numeric_csv(&bytes, &path.display().to_string())?;
        if header != ["t_s", "pressure_pa"] {
            return Err(Failure::Config(format!("{}: header must be `t_s,pressure_pa`", path.display())));
        }
        let table = PressureShape::Table(rows.iter().map(|r| (r[0], r[1])).collect());
        (table.clone(), table)
    };
    let signal = |shape: PressureShape| {
        let s = PressureSignal::new(shape).with_bounds(p_min, p_max);
        s.validate().map_err(|e| Failure::Config(format!("pressure signal: {e}")))?;
        Ok::<_, Failure>(s)
    };
    let sig_nl = signal(shape_nl)?;
    let sig_lin = signal(shape_lin)?;
    let go = |model, sig: &PressureSignal| {
        integrate(model, DynamicState::REST, sig, args.t_end_s, dt, every, &geom, &params, &LoadCondition::NONE).map_err(numeric)
    };
    let nl = go(Model::Nonlinear, &sig_nl)?;
    let lin = go(Model::Linearized, &sig_lin)?;
    let (table, summary) = tabulate(&geom, &nl, &lin)?;
    out.table(table);
    out.table(summary);
    Ok(out)
}

fn tabulate(geom: &FreeGeometry, nl: &Trajectory, lin: &Trajectory) -> Result<(Table, Table), Failure> {
    let mut t = Table::new(
        "simulate",
        &[
            "t_s",
            "pressure_nl_pa",
            "s_nl_m",
            "phi_nl_rad",
            "r_nl_m",
            "gamma_nl_rad",
            "radius_change_pct",
            "angle_change_pct",
            "pressure_lin_pa",
            "s_lin_m",
            "phi_lin_rad",
        ],
    );
    let (r0, g0) = (geom.radius(), geom.winding_angle());
    let (mut dr, mut dg): (f64, f64) = (0.0, 0.0);
    for (a, b) in nl.samples.iter().zip(&lin.samples) {
        let c = configuration(geom, a.state.s, a.state.phi).map_err(numeric)?;
        let rc = 100.0 * (c.r - r0) / r0;
        let gc = 100.0 * (c.gamma - g0) / g0;
        dr = dr.max(rc.abs());
        dg = dg.max(gc.abs());
        t.push(vec![
            num(a.t),
            num(a.pressure),
            num(a.state.s),
            num(a.state.phi),
            num(c.r),
            num(c.gamma),
            num(rc),
            num(gc),
            num(b.pressure),
            num(b.state.s),
            num(b.state.phi),
        ]);
    }
    let last = |tr: &Trajectory| *tr.last().expect("at least the initial sample");
    let (a, b) = (last(nl), last(lin));
    let mut s = Table::new("simulate_summary", &["quantity", "nonlinear", "linearized"]);
    s.push(vec!["final_pressure_pa".into(), num(a.pressure), num(b.pressure)]);
    s.push(vec!["final_s_m".into(), num(a.state.s), num(b.state.s)]);
    s.push(vec!["final_phi_rad".into(), num(a.state.phi), num(b.state.phi)]);
    s.push(vec!["max_radius_change_pct".into(), num(dr), String::new()]);
    s.push(vec!["max_angle_change_pct".into(), num(dg), String::new()]);
    Ok((t, s))
}
