use std::path::PathBuf;

use clap::Args;

use freelab::sysid::{fit_damping, fit_stiffness, StaticLoadSample, VibrationTrace, DEFAULT_NOISE_FLOOR};

use super::{read_input, read_numeric_csv};
use crate::output::{num, RunOutput, Table};
use crate::{AxisArg, Failure};

#[derive(Debug, Args)]
pub struct SysidArgs {
    #[arg(long, value_enum)]
    pub axis: AxisArg,
    /// `load,displacement` (static stiffness) or `t,displacement` (free
    /// vibration, needs --stiffness and --inertia).
    #[arg(long)]
    pub data: PathBuf,
    /// Known stiffness for the damping fit (N/m or N·m/rad).
    #[arg(long)]
    pub stiffness: Option<f64>,
    /// Moving mass or inertia for the damping fit (kg or kg·m²).
    #[arg(long)]
    pub inertia: Option<f64>,
    /// Peaks below this fraction of the first peak are ignored.
    #[arg(long, default_value_t = DEFAULT_NOISE_FLOOR)]
    pub noise_floor: f64,
    #[arg(long)]
    pub out: PathBuf,
}

fn axis_name(a: AxisArg) -> &'static str {
    match a {
        AxisArg::Axial => "axial",
        AxisArg::Torsional => "torsional",
    }
}

pub fn run(args: &SysidArgs) -> Result<RunOutput, Failure> {
    let mut out = RunOutput::default();
    let what = args.data.display().to_string();
    let bytes = read_input(&args.data, &mut out)?;
    let (header, rows) = read_numeric_csv(&bytes, &what)?;
    let numeric = |e: freelab::sysid::SysidError| Failure::Numeric(format!("{what}: {e}"));
    match header.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["load", "displacement"] => {
            let samples: Vec<StaticLoadSample> =
                rows.iter().map(|r| StaticLoadSample { load: r[0], displacement: r[1] }).collect();
            let fit = fit_stiffness(&samples).map_err(numeric)?;
            let mut t = Table::new("sysid_stiffness", &["axis", "stiffness", "residual_rms", "samples"]);
            t.push(vec![axis_name(args.axis).into(), num(fit.stiffness), num(fit.residual_rms), samples.len().to_string()]);
            out.table(t);
        }
        ["t", "displacement"] => {
            let (Some(k), Some(inertia)) = (args.stiffness, args.inertia) else {
                return Err(Failure::Config("a vibration trace needs --stiffness and --inertia".into()));
            };
            if !(k > 0.0 && inertia > 0.0) {
                return Err(Failure::Config("--stiffness and --inertia must be positive".into()));
            }
            let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
            let trace = VibrationTrace::from_samples(&pairs).map_err(|e| Failure::Config(format!("{what}: {e}")))?;
            let fit = fit_damping(&trace, k, inertia, args.noise_floor).map_err(numeric)?;
            let mut t = Table::new("sysid_damping", &["axis", "log_decrement", "damping_ratio", "damping", "peaks"]);
            t.push(vec![axis_name(args.axis).into(), num(fit.decrement), num(fit.zeta), num(fit.damping), fit.peaks.to_string()]);
            out.table(t);
        }
        _ => {
            return Err(Failure::Config(format!(
                "{what}: header must be `load,displacement` or `t,displacement`, got `{}`",
                header.join(",")
            )))
        }
    }
    Ok(out)
}
