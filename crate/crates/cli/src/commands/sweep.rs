use clap::Args;

use freelab::dynamics::{sweep_winding, DEFAULT_SWEEP_ANGLES_DEG};
use freelab::units::psi;

use super::load;
use crate::config::ParamsPreset;
use crate::output::{num, RunOutput, Table};
use crate::{Common, Failure};

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Winding angles in degrees (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SWEEP_ANGLES_DEG)]
    angles_deg: Vec<f64>,
    /// Highest pressure of the sweep.
    #[arg(long, default_value_t = 7.0)]
    max_psi: f64,
    /// Number of pressure levels from 0 to --max-psi inclusive.
    #[arg(long, default_value_t = 8)]
    levels: usize,
}

pub fn run(common: &Common, args: &SweepArgs) -> Result<RunOutput, Failure> {
    let (cfg, mut out) = load(common)?;
    let geom = cfg.geometry()?;
    let params = cfg.params(&geom, ParamsPreset::Surrogate)?;
    if args.levels < 2 || !(args.max_psi > 0.0 && args.max_psi.is_finite()) {
        return Err(Failure::Config("--levels must be at least 2 and --max-psi positive".into()));
    }
    if args.angles_deg.is_empty() {
        return Err(Failure::Config("--angles-deg is empty".into()));
    }
    let pressures: Vec<f64> = (0..args.levels).map(|i| psi(args.max_psi * i as f64 / (args.levels - 1) as f64)).collect();
    let angles: Vec<f64> = args.angles_deg.iter().map(|a| a.to_radians()).collect();
    let rows = sweep_winding(&geom, &params, &angles, &pressures).map_err(|e| Failure::Config(format!("--angles-deg: {e}")))?;
    let mut t = Table::new(
        "sweep",
        &[
            "winding_angle_deg",
            "pressure_pa",
            "status",
            "s_m",
            "phi_rad",
            "twist_per_length_rad_per_m",
            "extension_ratio",
            "blocked_force_n",
            "blocked_moment_nm",
        ],
    );
    let mut failed = 0;
    for r in &rows {
        let (status, free) = match &r.free {
            Ok(p) => ("ok", vec![num(p.s), num(p.phi), num(p.twist_per_length), num(p.extension_ratio)]),
            Err(e) => {
                failed += 1;
                log::warn!("no free equilibrium at {:.1} deg, {:.0} Pa: {e}", r.winding_angle.to_degrees(), r.pressure);
                ("no_equilibrium", vec![String::new(); 4])
            }
        };
        let mut row = vec![num(r.winding_angle.to_degrees()), num(r.pressure), status.into()];
        row.extend(free);
        row.push(num(r.blocked_force));
        row.push(num(r.blocked_moment));
        t.push(row);
    }
    if failed > 0 {
        log::warn!("{failed} of {} cells have no free equilibrium", rows.len());
    }
    out.table(t);
    Ok(out)
}
