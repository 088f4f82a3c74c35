//! Workbench configuration files.
//!
//! Every dimensional key carries its unit in the name (`length_mm`,
//! `max_psi`, ...). Values are converted to SI on load and validated
//! against the library invariants before any command runs.

use std::path::Path;

use serde::Deserialize;

use freelab::control::{PidGains, ReferenceSignal, TrajectorySpec};
use freelab::dynamics::LumpedParams;
use freelab::kinematics::{FreeGeometry, Handedness};
use freelab::materials::{LinearParams, MaterialModel, NeoHookeanParams, OgdenParams};
use freelab::units::{mm, mpa, psi};

use crate::Failure;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkbenchConfig {
    #[serde(default)]
    pub geometry: GeometrySection,
    pub params: Option<ParamsSection>,
    pub material: Option<MaterialSection>,
    pub controller: Option<ControllerSection>,
    #[serde(default)]
    pub pressure: PressureSection,
    #[serde(default)]
    pub integration: IntegrationSection,
    pub module: Option<ModuleSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub length_mm: f64,
    pub inner_radius_mm: f64,
    pub wall_mm: f64,
    pub winding_angle_deg: f64,
    pub handedness: HandednessName,
    pub fibers: u32,
}

impl Default for GeometrySection {
    fn default() -> Self {
        Self {
            length_mm: 175.0,
            inner_radius_mm: 4.76,
            wall_mm: 0.8,
            winding_angle_deg: 40.0,
            handedness: HandednessName::Left,
            fibers: 6,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum HandednessName {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ParamsPreset {
    /// Bare-tube stiffness of the calibrated latex.
    Canonical,
    /// Canonical stiffness × 100 for 0–7 psi quasi-static studies.
    Surrogate,
    /// Stiffness derived from the `[material]` block.
    Material,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub preset: Option<ParamsPreset>,
    pub axial_stiffness_n_per_m: Option<f64>,
    pub torsional_stiffness_nm_per_rad: Option<f64>,
    pub axial_damping_ns_per_m: Option<f64>,
    pub torsional_damping_nms_per_rad: Option<f64>,
    pub end_cap_mass_g: Option<f64>,
    pub end_cap_inertia_kg_m2: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "model", rename_all = "snake_case")]
pub enum MaterialSection {
    Ogden { mu_mpa: f64, alpha: f64 },
    NeoHookean { mu_mpa: f64 },
    Linear { youngs_modulus_mpa: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerSection {
    #[serde(default)]
    pub auto_tune: bool,
    pub kp_pa_per_rad: Option<f64>,
    pub kd_pa_s_per_rad: Option<f64>,
    pub ki_pa_per_rad_s: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PressureSection {
    pub min_psi: f64,
    pub max_psi: f64,
}

impl Default for PressureSection {
    fn default() -> Self {
        Self { min_psi: 0.0, max_psi: 1.0 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrationSection {
    pub dt_s: f64,
    pub control_rate_hz: f64,
    pub output_interval_s: f64,
}

impl Default for IntegrationSection {
    fn default() -> Self {
        Self { dt_s: 1e-4, control_rate_hz: 100.0, output_interval_s: 1e-3 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSection {
    #[serde(default = "default_half_diagonal")]
    pub half_diagonal_mm: f64,
    pub winding_angle_deg: Option<f64>,
}

fn default_half_diagonal() -> f64 {
    15.0
}

fn config_error(key: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Config(format!("{key}: {msg}"))
}

fn positive(key: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(config_error(key, format!("must be positive, got {v}")))
    }
}

impl WorkbenchConfig {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let cfg: WorkbenchConfig = toml::from_str(text).map_err(|e| Failure::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<(Self, Vec<u8>), Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        let text = std::str::from_utf8(&bytes).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        let cfg = Self::parse(text).map_err(|e| match e {
            Failure::Config(m) => Failure::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        Ok((cfg, bytes))
    }

    /// Resolve every block once so that invalid values surface before work.
    pub fn validate(&self) -> Result<(), Failure> {
        let g = self.geometry()?;
        self.material()?;
        self.params(&g, ParamsPreset::Canonical)?;
        self.pressure_bounds()?;
        let i = &self.integration;
        positive("integration.dt_s", i.dt_s)?;
        positive("integration.control_rate_hz", i.control_rate_hz)?;
        positive("integration.output_interval_s", i.output_interval_s)?;
        if let Some(c) = &self.controller {
            let given = [c.kp_pa_per_rad, c.kd_pa_s_per_rad, c.ki_pa_per_rad_s];
            if !c.auto_tune && given.iter().all(Option::is_none) {
                return Err(config_error("controller", "set auto_tune = true or give at least one gain"));
            }
            if c.auto_tune && given.iter().any(Option::is_some) {
                return Err(config_error("controller", "auto_tune and explicit gains are exclusive"));
            }
            for (k, v) in
                ["controller.kp_pa_per_rad", "controller.kd_pa_s_per_rad", "controller.ki_pa_per_rad_s"].iter().zip(given)
            {
                if let Some(v) = v {
                    if !v.is_finite() {
                        return Err(config_error(k, "must be finite"));
                    }
                }
            }
        }
        if let Some(m) = &self.module {
            positive("module.half_diagonal_mm", m.half_diagonal_mm)?;
            if let Some(a) = m.winding_angle_deg {
                g.with_winding_angle(a.to_radians()).map_err(|e| config_error("module.winding_angle_deg", e))?;
            }
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<FreeGeometry, Failure> {
        let s = &self.geometry;
        let h = match s.handedness {
            HandednessName::Left => Handedness::Left,
            HandednessName::Right => Handedness::Right,
        };
        FreeGeometry::new(mm(s.length_mm), mm(s.inner_radius_mm), mm(s.wall_mm), s.winding_angle_deg.to_radians(), h, s.fibers)
            .map_err(|e| config_error("geometry", e))
    }

    pub fn material(&self) -> Result<Option<MaterialModel>, Failure> {
        let m = match &self.material {
            None => return Ok(None),
            Some(MaterialSection::Ogden { mu_mpa, alpha }) => OgdenParams::new(mpa(*mu_mpa), *alpha).map(MaterialModel::Ogden),
            Some(MaterialSection::NeoHookean { mu_mpa }) => NeoHookeanParams::new(mpa(*mu_mpa)).map(MaterialModel::NeoHookean),
            Some(MaterialSection::Linear { youngs_modulus_mpa }) => {
                LinearParams::new(mpa(*youngs_modulus_mpa)).map(MaterialModel::Linear)
            }
        };
        m.map(Some).map_err(|e| config_error("material", e))
    }

    /// Lumped parameters: the preset (or `default` when none is named), with
    /// any explicit values overriding it.
    pub fn params(&self, geom: &FreeGeometry, default: ParamsPreset) -> Result<LumpedParams, Failure> {
        let section = self.params.clone().unwrap_or_default();
        let preset = section.preset.unwrap_or(default);
        let mut p = match preset {
            ParamsPreset::Canonical => LumpedParams::canonical(geom),
            ParamsPreset::Surrogate => LumpedParams::quasi_static_surrogate(geom),
            ParamsPreset::Material => {
                let m = self.material()?.ok_or_else(|| config_error("params.preset", "\"material\" needs a [material] block"))?;
                LumpedParams::from_material(
                    geom,
                    &m,
                    freelab::dynamics::DEFAULT_DAMPING_RATIO,
                    freelab::dynamics::DEFAULT_END_CAP_MASS,
                )
                .map_err(|e| config_error("material", e))?
            }
        };
        if let Some(v) = section.axial_stiffness_n_per_m {
            p.axial_stiffness = v;
        }
        if let Some(v) = section.torsional_stiffness_nm_per_rad {
            p.torsional_stiffness = v;
        }
        if let Some(v) = section.axial_damping_ns_per_m {
            p.axial_damping = v;
        }
        if let Some(v) = section.torsional_damping_nms_per_rad {
            p.torsional_damping = v;
        }
        if let Some(v) = section.end_cap_mass_g {
            p.end_cap_mass = v * 1e-3;
        }
        if let Some(v) = section.end_cap_inertia_kg_m2 {
            p.end_cap_inertia = v;
        }
        p.validate().map_err(|e| config_error("params", e))?;
        Ok(p)
    }

    pub fn pressure_bounds(&self) -> Result<(f64, f64), Failure> {
        let s = &self.pressure;
        if !(s.min_psi >= 0.0 && s.max_psi.is_finite() && s.min_psi <= s.max_psi) {
            return Err(config_error("pressure", format!("need 0 <= min_psi <= max_psi, got [{}, {}]", s.min_psi, s.max_psi)));
        }
        Ok((psi(s.min_psi), psi(s.max_psi)))
    }

    pub fn explicit_gains(&self) -> Option<PidGains> {
        let c = self.controller.as_ref()?;
        if c.auto_tune {
            return None;
        }
        Some(PidGains {
            kp: c.kp_pa_per_rad.unwrap_or(0.0),
            kd: c.kd_pa_s_per_rad.unwrap_or(0.0),
            ki: c.ki_pa_per_rad_s.unwrap_or(0.0),
        })
    }
}

/// Reference schedule for `freelab control`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub model: ModelName,
    #[serde(default)]
    pub steps: Vec<StepEntry>,
    pub trajectory: Option<TrajectoryEntry>,
    pub t_end_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    #[default]
    Nonlinear,
    Linearized,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepEntry {
    pub hold_s: f64,
    pub target_deg: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryEntry {
    pub waypoints_deg: Vec<f64>,
    pub segment_s: f64,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let s: Scenario = toml::from_str(text).map_err(|e| Failure::Config(e.to_string()))?;
        s.reference()?;
        if let Some(t) = s.t_end_s {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(config_error("t_end_s", format!("must be non-negative, got {t}")));
            }
        }
        Ok(s)
    }

    pub fn reference(&self) -> Result<ReferenceSignal, Failure> {
        match (&self.trajectory, self.steps.is_empty()) {
            (Some(_), false) => Err(config_error("scenario", "give either [[steps]] or [trajectory], not both")),
            (None, true) => Err(config_error("scenario", "needs [[steps]] or [trajectory]")),
            (None, false) => {
                let r = ReferenceSignal::Steps(self.steps.iter().map(|s| (s.hold_s, s.target_deg.to_radians())).collect());
                r.validate().map_err(|e| config_error("steps", e))?;
                Ok(r)
            }
            (Some(t), true) => {
                if t.waypoints_deg.len() < 2 {
                    return Err(config_error("trajectory.waypoints_deg", "needs at least two waypoints"));
                }
                let segs = t
                    .waypoints_deg
                    .windows(2)
                    .map(|w| TrajectorySpec::new(w[0].to_radians(), w[1].to_radians(), t.segment_s))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| config_error("trajectory", e))?;
                Ok(ReferenceSignal::Trajectory(segs))
            }
        }
    }
}
