use rayon::prelude::*;

use super::{blocked_reactions, static_equilibrium, DynamicsError, LoadCondition, LumpedParams, Model};
use crate::kinematics::FreeGeometry;

pub const DEFAULT_SWEEP_ANGLES_DEG: [f64; 8] = [10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub s: f64,
    pub phi: f64,
    /// `φ / l` at equilibrium, rad/m.
    pub twist_per_length: f64,
    /// `λ_ext = l / L`.
    pub extension_ratio: f64,
}

/// One `(Γ, P)` cell of a winding-angle sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub winding_angle: f64,
    pub pressure: f64,
    pub blocked_force: f64,
    pub blocked_moment: f64,
    /// Free-stroke equilibrium, or the reason it is unavailable.
    pub free: Result<SweepPoint, DynamicsError>,
}

/// Blocked reactions and free-stroke equilibria over `angles × pressures`,
/// row-major in `angles`. Each angle uses `template` with its winding
/// angle replaced. Cells are solved in parallel.
pub fn sweep_winding(
    template: &FreeGeometry,
    params: &LumpedParams,
    angles: &[f64],
    pressures: &[f64],
) -> Result<Vec<SweepRow>, DynamicsError> {
    params.validate()?;
    let geoms =
        angles.iter().map(|&a| template.with_winding_angle(a).map_err(DynamicsError::from)).collect::<Result<Vec<_>, _>>()?;
    let cells: Vec<(usize, f64)> = (0..geoms.len()).flat_map(|i| pressures.iter().map(move |&p| (i, p))).collect();
    cells
        .par_iter()
        .map(|&(i, p)| {
            let g = &geoms[i];
            let blocked = blocked_reactions(p, g)?;
            let free = static_equilibrium(Model::Nonlinear, p, g, params, &LoadCondition::NONE).map(|eq| SweepPoint {
                s: eq.s,
                phi: eq.phi,
                twist_per_length: eq.phi / (g.length() + eq.s),
                extension_ratio: (g.length() + eq.s) / g.length(),
            });
            Ok(SweepRow {
                winding_angle: g.winding_angle(),
                pressure: p,
                blocked_force: blocked.force,
                blocked_moment: blocked.moment,
                free,
            })
        })
        .collect()
}
