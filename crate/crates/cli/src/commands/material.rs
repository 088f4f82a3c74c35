use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};

use freelab::materials::{
    fit_linear_modulus, fit_ogden, modulus_to_shore, shore_to_modulus, MaterialModel, OgdenParams, StressStrainSample,
};
use freelab::units::mpa;

use super::{read_input, read_numeric_csv};
use crate::config::WorkbenchConfig;
use crate::output::{num, RunOutput, Table};
use crate::Failure;

#[derive(Debug, Args)]
pub struct MaterialArgs {
    #[command(subcommand)]
    pub action: MaterialAction,
}

#[derive(Debug, Subcommand)]
pub enum MaterialAction {
    /// Fit the Ogden exponent (shear modulus fixed) and a small-strain modulus.
    Fit {
        /// CSV with header `stretch,true_stress_pa` or `strain,eng_stress_pa`.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 0.393)]
        mu_mpa: f64,
        /// Largest engineering strain used for the linear modulus.
        #[arg(long, default_value_t = 0.1)]
        strain_cap: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate the configured elastomer law in uniaxial tension.
    Eval {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        stretch_min: f64,
        #[arg(long, default_value_t = 3.0)]
        stretch_max: f64,
        #[arg(long, default_value_t = 51)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Convert Shore A hardness to Young's modulus or back.
    Shore {
        #[arg(long, conflicts_with = "modulus_mpa", required_unless_present = "modulus_mpa")]
        shore: Option<f64>,
        #[arg(long)]
        modulus_mpa: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
}

impl MaterialArgs {
    pub fn out(&self) -> &Path {
        match &self.action {
            MaterialAction::Fit { out, .. } | MaterialAction::Eval { out, .. } | MaterialAction::Shore { out, .. } => out,
        }
    }
}

fn numeric(op: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Numeric(format!("{op}: {e}"))
}

pub fn run(args: &MaterialArgs) -> Result<RunOutput, Failure> {
    let mut out = RunOutput::default();
    match &args.action {
        MaterialAction::Fit { data, mu_mpa, strain_cap, .. } => {
            let bytes = read_input(data, &mut out)?;
            let (header, rows) = read_numeric_csv(&bytes, &data.display().to_string())?;
            let engineering = match header.iter().map(String::as_str).collect::<Vec<_>>()[..] {
                ["stretch", "true_stress_pa"] => false,
                ["strain", "eng_stress_pa"] => true,
                _ => {
                    return Err(Failure::Config(format!(
                        "{}: header must be `stretch,true_stress_pa` or `strain,eng_stress_pa`, got `{}`",
                        data.display(),
                        header.join(",")
                    )))
                }
            };
            let samples = rows
                .iter()
                .map(|r| {
                    if engineering {
                        StressStrainSample::from_engineering(r[0], r[1])
                    } else {
                        StressStrainSample::new(r[0], r[1])
                    }
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Config(format!("{}: {e}", data.display())))?;
            let ogden = fit_ogden(&samples, mpa(*mu_mpa)).map_err(|e| numeric("fit_ogden", e))?;
            // The small-strain modulus needs samples below the strain cap;
            // without them only the Ogden row is reported.
            let linear = fit_linear_modulus(&samples, *strain_cap).map_err(|e| log::warn!("no linear modulus: {e}")).ok();
            let mut t = Table::new("material_fit", &["model", "mu_pa", "alpha", "youngs_modulus_pa", "rmsd_pa"]);
            let m = MaterialModel::Ogden(ogden.params);
            t.push(vec!["ogden".into(), num(ogden.params.mu), num(ogden.params.alpha), num(m.youngs_modulus()), num(ogden.rmsd)]);
            if let Some(linear) = linear {
                let l = MaterialModel::Linear(linear);
                t.push(vec!["linear".into(), num(l.shear_modulus()), String::new(), num(linear.youngs_modulus), String::new()]);
            }
            out.table(t);
        }
        MaterialAction::Eval { config, stretch_min, stretch_max, points, .. } => {
            let cfg = match config {
                Some(p) => {
                    let (cfg, bytes) = WorkbenchConfig::load(p)?;
                    out.config = Some(bytes);
                    cfg
                }
                None => WorkbenchConfig::default(),
            };
            if !(*stretch_min > 0.0 && stretch_max > stretch_min && *points >= 2) {
                return Err(Failure::Config("need 0 < stretch_min < stretch_max and points >= 2".into()));
            }
            let model = cfg.material()?.unwrap_or(MaterialModel::Ogden(OgdenParams::latex()));
            let mut t = Table::new("material_eval", &["stretch", "true_stress_pa"]);
            for i in 0..*points {
                let l = stretch_min + (stretch_max - stretch_min) * i as f64 / (*points - 1) as f64;
                let s = model.uniaxial_stress(l).map_err(|e| numeric("uniaxial_stress", e))?;
                t.push(vec![num(l), num(s)]);
            }
            out.table(t);
        }
        MaterialAction::Shore { shore, modulus_mpa, .. } => {
            let (s, e) = match (shore, modulus_mpa) {
                (Some(s), _) => (*s, shore_to_modulus(*s).map_err(|e| Failure::Config(format!("--shore: {e}")))?),
                (None, Some(m)) => {
                    (modulus_to_shore(mpa(*m)).map_err(|e| Failure::Config(format!("--modulus-mpa: {e}")))?, mpa(*m))
                }
                (None, None) => unreachable!("clap requires one of the two"),
            };
            let mut t = Table::new("shore", &["shore_a", "youngs_modulus_pa"]);
            t.push(vec![num(s), num(e)]);
            out.table(t);
        }
    }
    Ok(out)
}
