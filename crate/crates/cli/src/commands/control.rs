use std::path::PathBuf;

use clap::{Args, ValueEnum};

use freelab::control::{closed_loop_sim, ReferenceSignal, SimSettings};
use freelab::dynamics::Model;

use super::{gains, load, read_input};
use crate::config::{ModelName, ParamsPreset, Scenario};
use crate::output::{num, opt, RunOutput, Table};
use crate::{Common, Failure};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Builtin {
    /// 50°, 20°, 80° held 3 s each.
    Step,
    /// Cubic segments 0 → 40 → 10 → 70° of 3 s each.
    Trajectory,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("reference").required(true).multiple(false)))]
pub struct ControlArgs {
    /// Scenario file (TOML) with `[[steps]]` or `[trajectory]`.
    #[arg(long, group = "reference")]
    scenario: Option<PathBuf>,
    #[arg(long, value_enum, group = "reference")]
    builtin: Option<Builtin>,
    /// Plant model; overrides the scenario's `model`.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Nonlinear,
    Linearized,
}

pub fn run(common: &Common, args: &ControlArgs) -> Result<RunOutput, Failure> {
    let (cfg, mut out) = load(common)?;
    let geom = cfg.geometry()?;
    let params = cfg.params(&geom, ParamsPreset::Canonical)?;
    let (p_min, p_max) = cfg.pressure_bounds()?;
    let (reference, scenario_model, t_end) = match (&args.scenario, args.builtin) {
        (Some(path), _) => {
            let bytes = read_input(path, &mut out)?;
            let text = std::str::from_utf8(&bytes).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            let s = Scenario::parse(text).map_err(|e| match e {
                Failure::Config(m) => Failure::Config(format!("{}: {m}", path.display())),
                other => other,
            })?;
            (s.reference()?, s.model, s.t_end_s)
        }
        (None, Some(Builtin::Step)) => (ReferenceSignal::step_scenario(), ModelName::Nonlinear, None),
        (None, Some(Builtin::Trajectory)) => (ReferenceSignal::trajectory_scenario(), ModelName::Nonlinear, None),
        (None, None) => unreachable!("clap requires a reference"),
    };
    let model = match args.model {
        Some(ModelArg::Nonlinear) => Model::Nonlinear,
        Some(ModelArg::Linearized) => Model::Linearized,
        None => match scenario_model {
            ModelName::Nonlinear => Model::Nonlinear,
            ModelName::Linearized => Model::Linearized,
        },
    };
    let (g, radius) = gains(&cfg, &geom, &params)?;
    let i = &cfg.integration;
    let settings =
        SimSettings { dt: i.dt_s, control_rate: i.control_rate_hz, output_interval: i.output_interval_s, p_min, p_max, t_end };
    let run = closed_loop_sim(model, &geom, &params, &g, &reference, &settings).map_err(|e| match e {
        freelab::control::ControlError::InvalidParameter(m) => Failure::Config(m),
        other => Failure::Numeric(other.to_string()),
    })?;

    let mut t = Table::new("control", &["t_s", "phi_ref_rad", "phi_rad", "error_rad", "s_m", "pressure_pa"]);
    for s in &run.samples {
        t.push(vec![num(s.t), num(s.phi_d), num(s.phi), num(s.phi_d - s.phi), num(s.s), num(s.pressure)]);
    }
    out.table(t);

    let mut m = Table::new("control_metrics", &["quantity", "value"]);
    let max_p = run.samples.iter().map(|s| s.pressure).fold(0.0, f64::max);
    m.push(vec!["model".into(), format!("{model:?}").to_lowercase()]);
    m.push(vec!["kp_pa_per_rad".into(), num(g.kp)]);
    m.push(vec!["kd_pa_s_per_rad".into(), num(g.kd)]);
    m.push(vec!["ki_pa_per_rad_s".into(), num(g.ki)]);
    m.push(vec!["sampled_spectral_radius".into(), opt(radius)]);
    m.push(vec!["tracking_rmsd_rad".into(), num(run.tracking_rmsd())]);
    m.push(vec!["tracking_rmsd_deg".into(), num(run.tracking_rmsd().to_degrees())]);
    m.push(vec!["max_pressure_pa".into(), num(max_p)]);
    for (k, sw) in reference.switch_times().into_iter().enumerate() {
        m.push(vec![format!("error_before_switch_{}_rad", k + 1), opt(run.error_before(sw))]);
    }
    if let Some(last) = run.samples.last() {
        m.push(vec!["final_error_rad".into(), num(last.phi_d - last.phi)]);
    }
    out.table(m);
    Ok(out)
}
