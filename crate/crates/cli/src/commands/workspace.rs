use clap::Args;

use freelab::module::{workspace, ModuleGeometry};
use freelab::units::{mm, psi};

use super::load;
use crate::config::ParamsPreset;
use crate::output::{num, RunOutput, Table};
use crate::{Common, Failure};

#[derive(Debug, Args)]
pub struct WorkspaceArgs {
    /// Actuation cases 1–5 (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = [1u8, 2, 3, 4, 5])]
    cases: Vec<u8>,
    /// Pressure levels above zero up to --max-psi.
    #[arg(long, default_value_t = 14)]
    steps: usize,
    #[arg(long, default_value_t = 7.0)]
    max_psi: f64,
}

pub fn run(common: &Common, args: &WorkspaceArgs) -> Result<RunOutput, Failure> {
    let (cfg, mut out) = load(common)?;
    let mut template = cfg.geometry()?;
    let mut half_diagonal = freelab::module::DEFAULT_HALF_DIAGONAL;
    if let Some(m) = &cfg.module {
        half_diagonal = mm(m.half_diagonal_mm);
        if let Some(a) = m.winding_angle_deg {
            template = template
                .with_winding_angle(a.to_radians())
                .map_err(|e| Failure::Config(format!("module.winding_angle_deg: {e}")))?;
        }
    }
    let params = cfg.params(&template, ParamsPreset::Surrogate)?;
    let module = ModuleGeometry::new(&template, half_diagonal, params).map_err(|e| Failure::Config(format!("module: {e}")))?;
    if args.steps < 1 || !(args.max_psi > 0.0 && args.max_psi.is_finite()) {
        return Err(Failure::Config("--steps must be at least 1 and --max-psi positive".into()));
    }
    if let Some(c) = args.cases.iter().find(|c| !(1..=5).contains(*c)) {
        return Err(Failure::Config(format!("--cases: no case {c}, expected 1-5")));
    }
    let pressures: Vec<f64> = (1..=args.steps).map(|i| psi(args.max_psi * i as f64 / args.steps as f64)).collect();
    let ws = workspace(&module, &args.cases, &pressures).map_err(|e| Failure::Numeric(e.to_string()))?;

    let mut t = Table::new(
        "workspace",
        &["point", "case", "variation", "pressure_pa", "x_m", "y_m", "z_m", "twist_rad", "azimuth_rad", "tilt_rad", "status"],
    );
    let mut failed = 0;
    for (i, p) in ws.points.iter().enumerate() {
        let mut row = vec![i.to_string(), p.case.to_string(), p.variation.to_string(), num(p.pressure)];
        match &p.pose {
            Ok(q) => {
                row.extend([q.x, q.y, q.z, q.twist, q.azimuth, q.tilt].map(num));
                row.push("ok".into());
            }
            Err(e) => {
                failed += 1;
                log::warn!("point {i} (case {}, variation {}, {:.0} Pa): {e}", p.case, p.variation, p.pressure);
                row.extend(std::iter::repeat_n(String::new(), 6));
                row.push("no_equilibrium".into());
            }
        }
        t.push(row);
    }
    if failed > 0 {
        log::warn!("{failed} of {} workspace points have no equilibrium", ws.points.len());
    }
    out.table(t);

    let mut paths = Table::new("workspace_paths", &["case", "variation", "order", "point"]);
    for p in &ws.paths {
        for (k, idx) in p.points.iter().enumerate() {
            paths.push(vec![p.case.to_string(), p.variation.to_string(), k.to_string(), idx.to_string()]);
        }
    }
    out.table(paths);

    let mut b = Table::new("workspace_boundary", &["a", "b", "c"]);
    for tri in &ws.boundary {
        b.push(tri.iter().map(|i| i.to_string()).collect());
    }
    out.table(b);
    Ok(out)
}
