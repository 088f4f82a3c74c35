//! Static equilibria `k_e s = F_l + F_p(s, φ, P)`, `k_t φ = M_l + M_p(s, φ, P)`.
//!
//! The nonlinear branch is tracked by natural-parameter continuation from
//! the unloaded rest state: pressure and loads are scaled together by
//! `λ ∈ [0, 1]`, each step is solved by damped Newton with a central
//! finite-difference Jacobian, and the step is halved on failure. When the
//! step underflows, a residual grid around the last converged point seeds
//! one more Newton attempt before giving up. Past the fold of the branch
//! the solver reports [`DynamicsError::NoConvergence`] instead of jumping
//! to a distant root.

use super::{pressure_force, pressure_moment, DynamicsError, LoadCondition, LumpedParams, Model};
use crate::kinematics::{self, FreeGeometry};

/// Scaled residual reached by a converged solve.
pub const STATIC_TOLERANCE: f64 = 1e-12;
/// Largest scaled residual accepted when Newton stagnates.
const STAGNATION_TOLERANCE: f64 = 1e-10;
const MIN_STEP: f64 = 1e-6;
const MAX_STEP: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub s: f64,
    pub phi: f64,
    /// Pressure at which the equilibrium holds, Pa.
    pub pressure: f64,
    /// Current radius (equal to `R` for the linearized model).
    pub r: f64,
    /// Current fiber angle (equal to `Γ` for the linearized model).
    pub gamma: f64,
    /// Euclidean norm of `(R_s / (k_e L), R_φ / k_t)`.
    pub residual: f64,
}

type Residual<'a> = dyn Fn([f64; 2], f64) -> Option<[f64; 2]> + 'a;

fn norm(r: [f64; 2]) -> f64 {
    r[0].hypot(r[1])
}

/// Damped Newton on a two-variable residual. `scale` sets the finite
/// difference step and the neighbourhood searched by the grid fallback.
struct Solver<'a> {
    f: &'a Residual<'a>,
    scale: [f64; 2],
}

impl Solver<'_> {
    fn jacobian(&self, x: [f64; 2], lam: f64, fx: [f64; 2]) -> Option<[[f64; 2]; 2]> {
        let mut j = [[0.0; 2]; 2];
        for k in 0..2 {
            let h = 1e-7 * self.scale[k].max(x[k].abs());
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            let col = match ((self.f)(xp, lam), (self.f)(xm, lam)) {
                (Some(a), Some(b)) => [(a[0] - b[0]) / (2.0 * h), (a[1] - b[1]) / (2.0 * h)],
                (Some(a), None) => [(a[0] - fx[0]) / h, (a[1] - fx[1]) / h],
                (None, Some(b)) => [(fx[0] - b[0]) / h, (fx[1] - b[1]) / h],
                (None, None) => return None,
            };
            j[0][k] = col[0];
            j[1][k] = col[1];
        }
        Some(j)
    }

    /// Returns the root or the smallest residual norm seen.
    fn newton(&self, x0: [f64; 2], lam: f64) -> Result<([f64; 2], f64), f64> {
        let mut x = x0;
        let mut fx = (self.f)(x, lam).ok_or(f64::INFINITY)?;
        let mut n = norm(fx);
        for _ in 0..60 {
            if n < STATIC_TOLERANCE {
                return Ok((x, n));
            }
            let j = self.jacobian(x, lam, fx).ok_or(n)?;
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if !det.is_finite() || det == 0.0 {
                break;
            }
            let dx = [-(j[1][1] * fx[0] - j[0][1] * fx[1]) / det, -(-j[1][0] * fx[0] + j[0][0] * fx[1]) / det];
            let mut alpha = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let xt = [x[0] + alpha * dx[0], x[1] + alpha * dx[1]];
                if let Some(ft) = (self.f)(xt, lam) {
                    let nt = norm(ft);
                    if nt < (1.0 - 1e-4 * alpha) * n {
                        x = xt;
                        fx = ft;
                        n = nt;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if n < STAGNATION_TOLERANCE {
            Ok((x, n))
        } else {
            Err(n)
        }
    }

    /// Residual grid around `centre`, then Newton from the best node.
    fn grid_fallback(&self, centre: [f64; 2], lam: f64) -> Result<([f64; 2], f64), f64> {
        const N: i32 = 20;
        let mut best = (f64::INFINITY, centre);
        for i in -N..=N {
            for k in -N..=N {
                let x = [
                    centre[0] + 0.1 * self.scale[0] * f64::from(i) / f64::from(N),
                    centre[1] + 0.1 * self.scale[1] * f64::from(k) / f64::from(N),
                ];
                if let Some(r) = (self.f)(x, lam) {
                    let n = norm(r);
                    if n < best.0 {
                        best = (n, x);
                    }
                }
            }
        }
        if !best.0.is_finite() {
            return Err(f64::INFINITY);
        }
        self.newton(best.1, lam).map_err(|e| e.min(best.0))
    }

    /// Continuation in `λ` from the root `start` at `λ = 0`.
    fn continuation(&self, start: [f64; 2]) -> Result<([f64; 2], f64), f64> {
        let mut lam = 0.0;
        let mut x = start;
        let mut prev: Option<([f64; 2], f64)> = None;
        let mut step: f64 = 0.1;
        let mut best_failure = f64::INFINITY;
        let mut last_norm = 0.0;
        while lam < 1.0 {
            let target = (lam + step).min(1.0);
            let predicted = match prev {
                Some((xp, dl)) if dl > 0.0 => {
                    let ratio = (target - lam) / dl;
                    [x[0] + (x[0] - xp[0]) * ratio, x[1] + (x[1] - xp[1]) * ratio]
                }
                _ => x,
            };
            let attempt = self.newton(predicted, target).or_else(|_| self.newton(x, target));
            let attempt = match attempt {
                Err(e) if step * 0.5 < MIN_STEP => self.grid_fallback(x, target).map_err(|g| g.min(e)),
                other => other,
            };
            match attempt {
                Ok((xn, n)) => {
                    prev = Some((x, target - lam));
                    x = xn;
                    last_norm = n;
                    lam = target;
                    step = (step * 1.5).min(MAX_STEP);
                }
                Err(e) => {
                    best_failure = best_failure.min(e);
                    step *= 0.5;
                    if step < MIN_STEP {
                        return Err(best_failure);
                    }
                }
            }
        }
        Ok((x, last_norm))
    }
}

fn scaled_residual(
    model: Model,
    s: f64,
    phi: f64,
    pressure: f64,
    geom: &FreeGeometry,
    params: &LumpedParams,
    load: &LoadCondition,
) -> Option<([f64; 2], f64, f64)> {
    let (r, gamma) = match model {
        Model::Nonlinear => {
            let c = kinematics::configuration(geom, s, phi).ok()?;
            (c.r, c.gamma)
        }
        Model::Linearized => (geom.radius(), geom.winding_angle()),
    };
    let f = load.force - params.axial_stiffness * s + pressure_force(r, gamma, pressure).ok()?;
    let m = load.moment - params.torsional_stiffness * phi + pressure_moment(r, gamma, pressure, geom.handedness()).ok()?;
    Some(([f / (params.axial_stiffness * geom.length()), m / params.torsional_stiffness], r, gamma))
}

fn scaled_load(load: &LoadCondition, lam: f64) -> LoadCondition {
    LoadCondition { force: lam * load.force, moment: lam * load.moment }
}

/// Scaled residual of the static equations at `(s, φ)`, or `None` where the
/// kinematics are infeasible.
pub fn static_residual(
    model: Model,
    s: f64,
    phi: f64,
    pressure: f64,
    geom: &FreeGeometry,
    params: &LumpedParams,
    load: &LoadCondition,
) -> Option<f64> {
    scaled_residual(model, s, phi, pressure, geom, params, load).map(|(r, _, _)| norm(r))
}

fn finish(
    model: Model,
    s: f64,
    phi: f64,
    pressure: f64,
    geom: &FreeGeometry,
    params: &LumpedParams,
    load: &LoadCondition,
) -> Result<Equilibrium, DynamicsError> {
    let (res, r, gamma) = scaled_residual(model, s, phi, pressure, geom, params, load)
        .ok_or(DynamicsError::NoConvergence { pressure, residual: f64::INFINITY })?;
    Ok(Equilibrium { s, phi, pressure, r, gamma, residual: norm(res) })
}

/// Static equilibrium at pressure `pressure` under `load`.
///
/// The linearized model has the closed form
/// `s = (F_l + πR²P(1 − 2cot²Γ))/k_e`, `φ = (M_l − h·2πR³P cot Γ)/k_t`.
pub fn static_equilibrium(
    model: Model,
    pressure: f64,
    geom: &FreeGeometry,
    params: &LumpedParams,
    load: &LoadCondition,
) -> Result<Equilibrium, DynamicsError> {
    params.validate()?;
    if !pressure.is_finite() {
        return Err(DynamicsError::InvalidParameter(format!("pressure {pressure}")));
    }
    match model {
        Model::Linearized => {
            let (r, g) = (geom.radius(), geom.winding_angle());
            let s = (load.force + pressure_force(r, g, pressure)?) / params.axial_stiffness;
            let phi = (load.moment + pressure_moment(r, g, pressure, geom.handedness())?) / params.torsional_stiffness;
            finish(model, s, phi, pressure, geom, params, load)
        }
        Model::Nonlinear => {
            let f = |x: [f64; 2], lam: f64| {
                scaled_residual(model, x[0], x[1], lam * pressure, geom, params, &scaled_load(load, lam)).map(|r| r.0)
            };
            let solver = Solver { f: &f, scale: [geom.length(), 1.0] };
            match solver.continuation([0.0, 0.0]) {
                Ok((x, _)) => finish(model, x[0], x[1], pressure, geom, params, load),
                Err(residual) => Err(DynamicsError::NoConvergence { pressure, residual }),
            }
        }
    }
}

/// Pressure that holds the end cap at rotation `target_phi` under `load`,
/// with the matching equilibrium.
///
/// For the nonlinear model the unknowns `(s, P)` are continued from rest
/// with the target angle and loads scaled together.
pub fn required_pressure(
    model: Model,
    target_phi: f64,
    geom: &FreeGeometry,
    params: &LumpedParams,
    load: &LoadCondition,
) -> Result<Equilibrium, DynamicsError> {
    params.validate()?;
    if !target_phi.is_finite() {
        return Err(DynamicsError::InvalidParameter(format!("target angle {target_phi}")));
    }
    let arm = geom.handedness().sign() * super::moment_arm(geom);
    match model {
        Model::Linearized => {
            let p = (load.moment - params.torsional_stiffness * target_phi) / arm;
            let eq = static_equilibrium(model, p, geom, params, load)?;
            Ok(Equilibrium { phi: target_phi, ..eq })
        }
        Model::Nonlinear => {
            let p_scale = (params.torsional_stiffness * target_phi.abs().max(0.1) / arm.abs()).max(1.0);
            let f = |x: [f64; 2], lam: f64| {
                let p = x[1] * p_scale;
                scaled_residual(model, x[0], lam * target_phi, p, geom, params, &scaled_load(load, lam)).map(|r| r.0)
            };
            let solver = Solver { f: &f, scale: [geom.length(), 1.0] };
            match solver.continuation([0.0, 0.0]) {
                Ok((x, _)) => finish(model, x[0], target_phi, x[1] * p_scale, geom, params, load),
                Err(residual) => Err(DynamicsError::NoConvergence { pressure: f64::NAN, residual }),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::Handedness;
    use crate::units::psi;

    fn setup(deg: f64, hand: Handedness) -> (FreeGeometry, LumpedParams) {
        let g = FreeGeometry::canonical(deg.to_radians(), hand).unwrap();
        (g, LumpedParams::canonical(&g))
    }

    /// Brute-force oracle: residual grid over a box, zoomed around the
    /// best node until the box is below `1e-13` relative size.
    fn grid_oracle(
        pressure: f64,
        geom: &FreeGeometry,
        params: &LumpedParams,
        mut s_box: (f64, f64),
        mut phi_box: (f64, f64),
    ) -> (f64, f64, f64) {
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for _ in 0..120 {
            let n = 40;
            for i in 0..=n {
                for k in 0..=n {
                    let s = s_box.0 + (s_box.1 - s_box.0) * i as f64 / n as f64;
                    let phi = phi_box.0 + (phi_box.1 - phi_box.0) * k as f64 / n as f64;
                    if let Some(r) = static_residual(Model::Nonlinear, s, phi, pressure, geom, params, &LoadCondition::NONE) {
                        if r < best.0 {
                            best = (r, s, phi);
                        }
                    }
                }
            }
            let ds = (s_box.1 - s_box.0) * 0.3;
            let dp = (phi_box.1 - phi_box.0) * 0.3;
            s_box = (best.1 - ds, best.1 + ds);
            phi_box = (best.2 - dp, best.2 + dp);
        }
        (best.1, best.2, best.0)
    }

    #[test]
    fn zero_pressure_is_rest() {
        let (g, p) = setup(40.0, Handedness::Right);
        for model in [Model::Nonlinear, Model::Linearized] {
            let eq = static_equilibrium(model, 0.0, &g, &p, &LoadCondition::NONE).unwrap();
            assert_eq!((eq.s, eq.phi), (0.0, 0.0));
        }
    }

    #[test]
    fn linear_closed_form() {
        let (g, p) = setup(30.0, Handedness::Right);
        let eq = static_equilibrium(Model::Linearized, psi(1.0), &g, &p, &LoadCondition::NONE).unwrap();
        let b = super::super::blocked_reactions(psi(1.0), &g).unwrap();
        assert!((eq.s - b.force / p.axial_stiffness).abs() < 1e-15);
        assert!((eq.phi - b.moment / p.torsional_stiffness).abs() < 1e-15);
        assert!(eq.residual < 1e-13);
    }

    #[test]
    fn nonlinear_matches_grid_oracle() {
        for (deg, pr, hand) in
            [(40.0, psi(0.05), Handedness::Right), (30.0, psi(0.1), Handedness::Left), (60.0, psi(1.0), Handedness::Right)]
        {
            let (g, p) = setup(deg, hand);
            let eq = static_equilibrium(Model::Nonlinear, pr, &g, &p, &LoadCondition::NONE).unwrap();
            assert!(eq.residual < 1e-9, "residual {}", eq.residual);
            let lim = kinematics::extension_limit(&g);
            let theta = kinematics::wrap_angle(&g);
            let (s, phi, res) =
                grid_oracle(pr, &g, &p, (-0.3 * g.length(), 0.3 * lim.min(g.length())), (-0.5 * theta, 0.5 * theta));
            assert!(res < 1e-8, "{deg}: oracle residual {res} at ({s}, {phi}), solver ({}, {})", eq.s, eq.phi);
            assert!((eq.s - s).abs() < 1e-9 * g.length(), "{deg}: s {} vs {}", eq.s, s);
            assert!((eq.phi - phi).abs() < 1e-8, "{deg}: phi {} vs {}", eq.phi, phi);
        }
    }

    #[test]
    fn nonlinear_approaches_linear_at_low_pressure() {
        let (g, p) = setup(40.0, Handedness::Right);
        let rel = |pr: f64| {
            let a = static_equilibrium(Model::Nonlinear, pr, &g, &p, &LoadCondition::NONE).unwrap();
            let b = static_equilibrium(Model::Linearized, pr, &g, &p, &LoadCondition::NONE).unwrap();
            ((a.phi - b.phi) / b.phi).abs()
        };
        let (r1, r2) = (rel(1.0), rel(2.0));
        assert!(r1 < 1e-3);
        assert!((r2 / r1 - 2.0).abs() < 0.05, "{r1} {r2}");
    }

    #[test]
    fn past_the_fold_reports_no_convergence() {
        let (g, p) = setup(30.0, Handedness::Right);
        let err = static_equilibrium(Model::Nonlinear, psi(1.0), &g, &p, &LoadCondition::NONE).unwrap_err();
        match err {
            DynamicsError::NoConvergence { residual, .. } => assert!(residual > 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn loads_shift_equilibrium() {
        let (g, p) = setup(40.0, Handedness::Right);
        let load = LoadCondition { force: 0.5, moment: -1e-4 };
        let eq = static_equilibrium(Model::Nonlinear, 0.0, &g, &p, &load).unwrap();
        assert!((eq.s - 0.5 / p.axial_stiffness).abs() < 1e-12);
        assert!((eq.phi + 1e-4 / p.torsional_stiffness).abs() < 1e-10);
    }

    #[test]
    fn required_pressure_round_trip() {
        let (g, p) = setup(40.0, Handedness::Left);
        let target = 20f64.to_radians();
        for model in [Model::Nonlinear, Model::Linearized] {
            let req = required_pressure(model, target, &g, &p, &LoadCondition::NONE).unwrap();
            assert!(req.pressure > 0.0);
            let eq = static_equilibrium(model, req.pressure, &g, &p, &LoadCondition::NONE).unwrap();
            assert!((eq.phi - target).abs() < 1e-9, "{model:?}: {}", eq.phi);
            assert!((eq.s - req.s).abs() < 1e-10);
        }
        let nl = required_pressure(Model::Nonlinear, target, &g, &p, &LoadCondition::NONE).unwrap();
        let li = required_pressure(Model::Linearized, target, &g, &p, &LoadCondition::NONE).unwrap();
        assert!(li.pressure > nl.pressure);
    }
}
