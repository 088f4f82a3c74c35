//! Four-FREE LR module on a rigid square plate, evaluated with a
//! constant-curvature surrogate.
//!
//! Actuator `i` sits at azimuth `45° + 90°·i` on a square of half-diagonal
//! `d`; handedness alternates R, L, R, L so that like-handed units face each
//! other across a diagonal. Each actuator is solved for its static free
//! length `l_i` and twist `φ_i`. A plane `l = l̄ + c_x x + c_y y` fitted to
//! the attachment points gives the plate tilt `ψ_t = atan |∇l|`; the
//! centerline is an arc of length `l̄` bent by `ψ_t` toward the shorter side.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use thiserror::Error;

use crate::dynamics::{static_equilibrium, DynamicsError, LoadCondition, LumpedParams, Model};
use crate::kinematics::{FreeGeometry, Handedness};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModuleError {
    #[error("actuator {index}: {source}")]
    Actuator { index: usize, source: DynamicsError },
    #[error("actuation case must be 1..=5, got {0}")]
    InvalidCase(u8),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Default attachment half-diagonal, m.
pub const DEFAULT_HALF_DIAGONAL: f64 = 0.015;

const HANDEDNESS: [Handedness; 4] = [Handedness::Right, Handedness::Left, Handedness::Right, Handedness::Left];
const CORNER_SIGNS: [(f64, f64); 4] = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)];

#[derive(Debug, Clone, PartialEq)]
pub struct ModuleGeometry {
    actuators: [FreeGeometry; 4],
    half_diagonal: f64,
    params: LumpedParams,
}

impl ModuleGeometry {
    /// Four copies of `template` with the alternating handedness pattern.
    pub fn new(template: &FreeGeometry, half_diagonal: f64, params: LumpedParams) -> Result<Self, ModuleError> {
        if !(half_diagonal > 0.0 && half_diagonal.is_finite()) {
            return Err(ModuleError::InvalidParameter(format!("half diagonal {half_diagonal}")));
        }
        params.validate().map_err(|e| ModuleError::InvalidParameter(e.to_string()))?;
        Ok(Self { actuators: HANDEDNESS.map(|h| template.with_handedness(h)), half_diagonal, params })
    }

    /// Canonical tube at `winding_angle`, default spacing and the
    /// quasi-static surrogate parameters.
    pub fn canonical(winding_angle: f64) -> Result<Self, ModuleError> {
        let g = FreeGeometry::canonical(winding_angle, Handedness::Right)
            .map_err(|e| ModuleError::InvalidParameter(e.to_string()))?;
        Self::new(&g, DEFAULT_HALF_DIAGONAL, LumpedParams::quasi_static_surrogate(&g))
    }

    pub fn actuator(&self, i: usize) -> &FreeGeometry {
        &self.actuators[i]
    }

    pub fn half_diagonal(&self) -> f64 {
        self.half_diagonal
    }

    pub fn params(&self) -> &LumpedParams {
        &self.params
    }

    pub fn length(&self) -> f64 {
        self.actuators[0].length()
    }

    /// Attachment point of actuator `i` in the plate frame.
    pub fn attachment(&self, i: usize) -> (f64, f64) {
        let a = self.half_diagonal / 2f64.sqrt();
        let (sx, sy) = CORNER_SIGNS[i];
        (sx * a, sy * a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuationPattern {
    pub case: u8,
    pub variation: usize,
    pub pressurized: [bool; 4],
    pub pressures: [f64; 4],
}

impl ActuationPattern {
    pub fn zero() -> Self {
        Self { case: 0, variation: 0, pressurized: [false; 4], pressures: [0.0; 4] }
    }

    /// Same pressures applied one position further round the plate
    /// (actuator `i` takes the pressure of `i − 1`).
    pub fn rotated(&self) -> Self {
        let mut out = *self;
        for i in 0..4 {
            out.pressurized[(i + 1) % 4] = self.pressurized[i];
            out.pressures[(i + 1) % 4] = self.pressures[i];
        }
        out
    }
}

/// Number of variations per case.
pub const VARIATION_COUNTS: [usize; 5] = [1, 2, 4, 4, 4];

fn active_set(case: u8, variation: usize) -> [bool; 4] {
    let v = variation;
    let mut on = [false; 4];
    let idx: Vec<usize> = match case {
        1 => vec![0, 1, 2, 3],
        2 => vec![v, v + 2],
        3 => vec![v],
        4 => vec![v, v + 1],
        _ => vec![v, v + 1, v + 2],
    };
    for i in idx {
        on[i % 4] = true;
    }
    on
}

/// Variations of `case` with every pressurized actuator at `pressure`:
/// case 1 all four, case 2 a like-handed diagonal pair, case 3 one
/// actuator, case 4 an adjacent pair, case 5 three actuators. Variation `v`
/// of cases 3–5 starts at actuator `v`.
pub fn enumerate_patterns(case: u8, pressure: f64) -> Result<Vec<ActuationPattern>, ModuleError> {
    if !(1..=5).contains(&case) {
        return Err(ModuleError::InvalidCase(case));
    }
    Ok((0..VARIATION_COUNTS[case as usize - 1])
        .map(|variation| {
            let pressurized = active_set(case, variation);
            let pressures = pressurized.map(|on| if on { pressure } else { 0.0 });
            ActuationPattern { case, variation, pressurized, pressures }
        })
        .collect())
}

/// Static free length and twist of one actuator.
pub fn actuator_response(geom: &FreeGeometry, params: &LumpedParams, pressure: f64) -> Result<(f64, f64), DynamicsError> {
    let eq = static_equilibrium(Model::Nonlinear, pressure, geom, params, &LoadCondition::NONE)?;
    Ok((geom.length() + eq.s, eq.phi))
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EndEffectorPose {
    pub x: f64,
    pub y: f64,
    /// Axial tip displacement, positive for elongation.
    pub z: f64,
    /// Plate rotation about the module axis.
    pub twist: f64,
    /// Direction of the lateral offset; 0 when the module does not bend.
    pub azimuth: f64,
    /// Plate tilt `ψ_t`.
    pub tilt: f64,
}

/// `sin ψ / ψ` and `(1 − cos ψ) / ψ`, the latter as `2 sin²(ψ/2) / ψ` to
/// avoid cancellation at small tilt.
fn arc_factors(psi: f64) -> (f64, f64) {
    if psi == 0.0 {
        (1.0, 0.0)
    } else {
        let h = (0.5 * psi).sin();
        (psi.sin() / psi, 2.0 * h * h / psi)
    }
}

pub fn module_pose(module: &ModuleGeometry, pattern: &ActuationPattern) -> Result<EndEffectorPose, ModuleError> {
    let mut lengths = [0.0; 4];
    let mut twists = [0.0; 4];
    for i in 0..4 {
        let (l, phi) = actuator_response(&module.actuators[i], &module.params, pattern.pressures[i])
            .map_err(|source| ModuleError::Actuator { index: i, source })?;
        lengths[i] = l;
        twists[i] = phi;
    }
    let mean = lengths.iter().sum::<f64>() / 4.0;
    let (mut sxl, mut syl, mut sxx, mut syy) = (0.0, 0.0, 0.0, 0.0);
    for (i, l) in lengths.iter().enumerate() {
        let (x, y) = module.attachment(i);
        sxl += x * (l - mean);
        syl += y * (l - mean);
        sxx += x * x;
        syy += y * y;
    }
    let (cx, cy) = (sxl / sxx, syl / syy);
    let grad = cx.hypot(cy);
    let tilt = grad.atan();
    let azimuth = if grad > 0.0 { (-cy).atan2(-cx) } else { 0.0 };
    let (axial, lateral) = arc_factors(tilt);
    let offset = mean * lateral;
    Ok(EndEffectorPose {
        x: offset * azimuth.cos(),
        y: offset * azimuth.sin(),
        z: mean * axial - module.length(),
        twist: twists.iter().sum::<f64>() / 4.0,
        azimuth,
        tilt,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkspacePoint {
    pub case: u8,
    pub variation: usize,
    pub pressure: f64,
    pub pose: Result<EndEffectorPose, ModuleError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkspacePath {
    pub case: u8,
    pub variation: usize,
    /// Indices into [`Workspace::points`], starting at the shared origin and
    /// stopping before the first failed point.
    pub points: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Workspace {
    /// Point 0 is the unpressurized origin.
    pub points: Vec<WorkspacePoint>,
    pub paths: Vec<WorkspacePath>,
    /// Triangles (point indices) joining neighbouring case 3–5 paths in
    /// azimuth order.
    pub boundary: Vec<[usize; 3]>,
}

/// Poses along each variation of `cases` as the active pressure steps
/// through the positive entries of `pressures`. Failed points are kept
/// with their error.
pub fn workspace(module: &ModuleGeometry, cases: &[u8], pressures: &[f64]) -> Result<Workspace, ModuleError> {
    if pressures.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(ModuleError::InvalidParameter("pressures must be finite and non-negative".into()));
    }
    let mut grid: Vec<f64> = pressures.iter().copied().filter(|p| *p > 0.0).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut jobs = Vec::new();
    for &case in cases {
        for pattern in enumerate_patterns(case, 0.0)? {
            for &p in &grid {
                jobs.push((case, pattern.variation, p));
            }
        }
    }
    let solved: Vec<WorkspacePoint> = jobs
        .par_iter()
        .map(|&(case, variation, pressure)| {
            let pattern = enumerate_patterns(case, pressure).expect("case validated")[variation];
            WorkspacePoint { case, variation, pressure, pose: module_pose(module, &pattern) }
        })
        .collect();
    let mut points = vec![WorkspacePoint { case: 0, variation: 0, pressure: 0.0, pose: Ok(EndEffectorPose::default()) }];
    points.extend(solved);
    let mut paths = Vec::new();
    let mut idx = 1;
    for &case in cases {
        for variation in 0..VARIATION_COUNTS[case as usize - 1] {
            let mut path = vec![0];
            let mut broken = false;
            for _ in &grid {
                if !broken && points[idx].pose.is_ok() {
                    path.push(idx);
                } else {
                    broken = true;
                }
                idx += 1;
            }
            paths.push(WorkspacePath { case, variation, points: path });
        }
    }
    let boundary = boundary_mesh(&points, &paths);
    Ok(Workspace { points, paths, boundary })
}

fn boundary_mesh(points: &[WorkspacePoint], paths: &[WorkspacePath]) -> Vec<[usize; 3]> {
    let mut rim: Vec<(f64, &WorkspacePath)> = paths
        .iter()
        .filter(|p| p.case >= 3 && p.points.len() > 1)
        .map(|p| {
            let last = points[*p.points.last().expect("non-empty")].pose.as_ref().expect("path points succeeded");
            (last.y.atan2(last.x), p)
        })
        .collect();
    rim.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.case.cmp(&b.1.case)).then(a.1.variation.cmp(&b.1.variation)));
    let mut tris = Vec::new();
    if rim.len() < 2 {
        return tris;
    }
    for k in 0..rim.len() {
        let a = &rim[k].1.points;
        let b = &rim[(k + 1) % rim.len()].1.points;
        for j in 0..a.len().min(b.len()) - 1 {
            for t in [[a[j], b[j], a[j + 1]], [b[j], b[j + 1], a[j + 1]]] {
                if t[0] != t[1] && t[1] != t[2] && t[0] != t[2] {
                    tris.push(t);
                }
            }
        }
    }
    tris
}

/// Phase-staggered sinusoids `p_i = mid + amplitude·cos(2πt/T + iπ/2)`: at
/// any instant the four actuators sit a quarter period apart, so at `t = 0`
/// one is at the maximum, one at the minimum and two at the midpoint.
pub fn stir_pattern(mid: f64, amplitude: f64, period: f64, t: f64) -> Result<ActuationPattern, ModuleError> {
    if !(period > 0.0) || !(amplitude >= 0.0) || mid - amplitude < 0.0 || !mid.is_finite() {
        return Err(ModuleError::InvalidParameter(format!(
            "stir needs period > 0 and 0 <= mid - amplitude (mid {mid}, amplitude {amplitude}, period {period})"
        )));
    }
    let mut pressures = [0.0; 4];
    for (i, p) in pressures.iter_mut().enumerate() {
        *p = mid + amplitude * (2.0 * PI * t / period + i as f64 * FRAC_PI_2).cos();
    }
    Ok(ActuationPattern { case: 0, variation: 0, pressurized: pressures.map(|p| p > 0.0), pressures })
}
