//! Helical geometry of an inextensible fiber wound on the elastomer tube.
//!
//! A fiber of fixed length `b` wraps the tube `Θ` radians in the undeformed
//! state. After the free end moves by `s` axially and `φ` in rotation, the
//! fiber still has length `b`, now spanning length `l = L + s` and wrap angle
//! `ψ = Θ + h·φ`, so the current radius follows from `l² + (rψ)² = b²`.
//!
//! Radii are measured at the fiber layer (the outer surface of the tube).

use std::f64::consts::FRAC_PI_2;

use thiserror::Error;

use crate::units::mm;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KinematicsError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    /// The fiber is taut: the requested length is at or beyond the fiber length.
    #[error("infeasible extension s = {s:.6e} m (fiber admits s < {limit:.6e} m)")]
    InfeasibleExtension { s: f64, limit: f64 },
    #[error("fiber unwound: wrap angle {psi:.6e} rad is not positive (phi = {phi:.6e} rad)")]
    UnwoundSingularity { phi: f64, psi: f64 },
}

/// Winding direction of the fibers. `Right` (counterclockwise, "R") carries
/// the sign +1 and `Left` (clockwise, "L") carries -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Handedness {
    Left,
    Right,
}

impl Handedness {
    pub fn sign(self) -> f64 {
        match self {
            Handedness::Left => -1.0,
            Handedness::Right => 1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Handedness::Left => Handedness::Right,
            Handedness::Right => Handedness::Left,
        }
    }
}

/// Undeformed geometry of a single FREE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeGeometry {
    length: f64,
    inner_radius: f64,
    wall: f64,
    winding_angle: f64,
    handedness: Handedness,
    n_fibers: u32,
}

impl FreeGeometry {
    pub fn new(
        length: f64,
        inner_radius: f64,
        wall: f64,
        winding_angle: f64,
        handedness: Handedness,
        n_fibers: u32,
    ) -> Result<Self, KinematicsError> {
        let bad = |msg: String| Err(KinematicsError::InvalidGeometry(msg));
        if !(length.is_finite() && length > 0.0) {
            return bad(format!("length must be positive, got {length}"));
        }
        if !(inner_radius.is_finite() && inner_radius > 0.0) {
            return bad(format!("inner radius must be positive, got {inner_radius}"));
        }
        if !(wall.is_finite() && wall > 0.0) {
            return bad(format!("wall thickness must be positive, got {wall}"));
        }
        if !(winding_angle > 0.0 && winding_angle < FRAC_PI_2) {
            return bad(format!("winding angle must lie in (0, pi/2), got {winding_angle}"));
        }
        if n_fibers == 0 {
            return bad("at least one fiber is required".into());
        }
        Ok(Self { length, inner_radius, wall, winding_angle, handedness, n_fibers })
    }

    /// The 175 mm tube with a 9.52 mm bore, 0.8 mm wall and six fibers used
    /// for the single actuators and the modules.
    pub fn canonical(winding_angle: f64, handedness: Handedness) -> Result<Self, KinematicsError> {
        Self::new(mm(175.0), mm(4.76), mm(0.8), winding_angle, handedness, 6)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Fiber-layer radius `R = inner_radius + wall`.
    pub fn radius(&self) -> f64 {
        self.inner_radius + self.wall
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn wall(&self) -> f64 {
        self.wall
    }

    pub fn winding_angle(&self) -> f64 {
        self.winding_angle
    }

    pub fn handedness(&self) -> Handedness {
        self.handedness
    }

    pub fn n_fibers(&self) -> u32 {
        self.n_fibers
    }

    /// Same tube with a different winding angle.
    pub fn with_winding_angle(&self, winding_angle: f64) -> Result<Self, KinematicsError> {
        Self::new(self.length, self.inner_radius, self.wall, winding_angle, self.handedness, self.n_fibers)
    }

    pub fn with_handedness(&self, handedness: Handedness) -> Self {
        Self { handedness, ..*self }
    }

    /// Cross-sectional area of the elastomer wall.
    pub fn wall_area(&self) -> f64 {
        let r_out = self.radius();
        std::f64::consts::PI * (r_out * r_out - self.inner_radius * self.inner_radius)
    }

    /// Polar second moment of area of the wall.
    pub fn polar_moment(&self) -> f64 {
        let r_out = self.radius();
        std::f64::consts::FRAC_PI_2 * (r_out.powi(4) - self.inner_radius.powi(4))
    }
}

/// Deformed state of the tube for a given end displacement and rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeConfiguration {
    pub s: f64,
    pub phi: f64,
    pub l: f64,
    pub r: f64,
    pub gamma: f64,
    pub psi: f64,
}

/// Total wrap angle `Θ = L·tanΓ / R` of one fiber in the undeformed state.
pub fn wrap_angle(geom: &FreeGeometry) -> f64 {
    geom.length * geom.winding_angle.tan() / geom.radius()
}

/// Fiber length `b = L / cosΓ`.
pub fn fiber_length(geom: &FreeGeometry) -> f64 {
    geom.length / geom.winding_angle.cos()
}

/// Largest admissible axial displacement (exclusive): the fiber goes taut at
/// `s = b − L`.
pub fn extension_limit(geom: &FreeGeometry) -> f64 {
    fiber_length(geom) - geom.length
}

/// Deformed configuration reached by moving the free end by `s` and `phi`.
pub fn configuration(geom: &FreeGeometry, s: f64, phi: f64) -> Result<FreeConfiguration, KinematicsError> {
    let b = fiber_length(geom);
    let l = geom.length + s;
    if !(l < b) || !(l > 0.0) {
        return Err(KinematicsError::InfeasibleExtension { s, limit: b - geom.length });
    }
    let psi = wrap_angle(geom) + geom.handedness.sign() * phi;
    if !(psi > 0.0) {
        return Err(KinematicsError::UnwoundSingularity { phi, psi });
    }
    // (b - l)(b + l) keeps precision when l is close to b.
    let arc = ((b - l) * (b + l)).sqrt();
    let r = arc / psi;
    let gamma = arc.atan2(l);
    Ok(FreeConfiguration { s, phi, l, r, gamma, psi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn canonical40() -> FreeGeometry {
        FreeGeometry::canonical(40f64.to_radians(), Handedness::Right).unwrap()
    }

    /// Arc length of the helix (R cos(Θt), R sin(Θt), L t), t ∈ [0, 1], by
    /// composite Simpson quadrature of |dx/dt|.
    fn helix_arc_length(radius: f64, length: f64, theta: f64) -> f64 {
        let speed = |t: f64| {
            let dx = -radius * theta * (theta * t).sin();
            let dy = radius * theta * (theta * t).cos();
            (dx * dx + dy * dy + length * length).sqrt()
        };
        let n = 2000;
        let h = 1.0 / n as f64;
        let mut sum = speed(0.0) + speed(1.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * speed(i as f64 * h);
        }
        sum * h / 3.0
    }

    #[test]
    fn canonical_radius_is_fiber_layer() {
        let g = canonical40();
        assert!((g.radius() - 5.56e-3).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_geometry() {
        assert!(FreeGeometry::new(0.175, 4.76e-3, 0.8e-3, 0.0, Handedness::Right, 6).is_err());
        assert!(FreeGeometry::new(0.175, 4.76e-3, 0.8e-3, FRAC_PI_2, Handedness::Right, 6).is_err());
        assert!(FreeGeometry::new(-1.0, 4.76e-3, 0.8e-3, 0.5, Handedness::Right, 6).is_err());
        assert!(FreeGeometry::new(0.175, 4.76e-3, 0.8e-3, 0.5, Handedness::Right, 0).is_err());
    }

    #[test]
    fn wrap_angle_vanishes_for_straight_fiber() {
        let g = FreeGeometry::canonical(1e-9, Handedness::Right).unwrap();
        assert!(wrap_angle(&g) < 1e-6);
        assert!((fiber_length(&g) - g.length()).abs() < 1e-15);
    }

    #[test]
    fn wrap_angle_canonical_matches_helix_quadrature() {
        let g = canonical40();
        let theta = wrap_angle(&g);
        assert!((theta - 26.41).abs() < 0.01, "theta = {theta}");
        let b = fiber_length(&g);
        assert!((b - 0.2284).abs() < 1e-4, "b = {b}");
        let arc = helix_arc_length(g.radius(), g.length(), theta);
        assert!(((arc - b) / b).abs() < 1e-9);
    }

    #[test]
    fn one_turn_at_45_degrees() {
        let radius = 5e-3;
        let length = 2.0 * std::f64::consts::PI * radius;
        let g = FreeGeometry::new(length, 4e-3, 1e-3, std::f64::consts::FRAC_PI_4, Handedness::Right, 1).unwrap();
        assert!((wrap_angle(&g) - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn sixty_degree_fiber_is_twice_the_length() {
        let g = FreeGeometry::new(0.1, 4e-3, 1e-3, 60f64.to_radians(), Handedness::Left, 1).unwrap();
        assert!((fiber_length(&g) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn identity_configuration() {
        let g = canonical40();
        let c = configuration(&g, 0.0, 0.0).unwrap();
        assert!(((c.r - g.radius()) / g.radius()).abs() < 1e-14);
        assert!(((c.gamma - g.winding_angle()) / g.winding_angle()).abs() < 1e-14);
        assert_eq!(c.l, g.length());
    }

    #[test]
    fn configuration_matches_bisection_oracle() {
        // Residuals l² + (rψ)² − b² and tanγ·l − rψ solved independently:
        // first r by bisection on the inextensibility residual, then γ by
        // bisection on the tangent relation.
        let g = canonical40();
        let (s, phi) = (2e-3, 0.5);
        let b = g.length() / g.winding_angle().cos();
        let psi = g.length() * g.winding_angle().tan() / g.radius() + phi;
        let l = g.length() + s;
        let r = crate::numerics::bisect(|r| l * l + (r * psi).powi(2) - b * b, 0.0, 0.1, 1e-16).unwrap();
        let gamma = crate::numerics::bisect(|gm| gm.tan() * l - r * psi, 1e-6, FRAC_PI_2 - 1e-6, 1e-15).unwrap();
        let c = configuration(&g, s, phi).unwrap();
        assert!((c.r - r).abs() < 1e-12);
        assert!((c.gamma - gamma).abs() < 1e-12);
        assert!((c.r - 5.37e-3).abs() < 5e-6, "r = {}", c.r);
        assert!((c.gamma.to_degrees() - 39.2).abs() < 0.05, "gamma = {}", c.gamma.to_degrees());
    }

    #[test]
    fn taut_fiber_is_infeasible() {
        let g = canonical40();
        let limit = extension_limit(&g);
        assert!(matches!(configuration(&g, limit, 0.0), Err(KinematicsError::InfeasibleExtension { .. })));
    }

    #[test]
    fn unwinding_past_zero_wrap_is_singular() {
        let g = canonical40();
        let theta = wrap_angle(&g);
        assert!(matches!(configuration(&g, 0.0, -theta), Err(KinematicsError::UnwoundSingularity { .. })));
        let left = g.with_handedness(Handedness::Left);
        assert!(configuration(&left, 0.0, -theta * 0.5).is_ok());
        assert!(configuration(&left, 0.0, theta * 1.01).is_err());
    }

    #[test]
    fn inextensibility_and_monotonicity_on_grid() {
        let g = canonical40();
        let b = fiber_length(&g);
        let limit = extension_limit(&g);
        let theta = wrap_angle(&g);
        let n = 50;
        for j in 0..n {
            let phi = -0.9 * theta + 1.8 * theta * j as f64 / (n - 1) as f64;
            let mut prev_r = f64::INFINITY;
            for i in 0..n {
                let s = -0.5 * g.length() + (limit * 0.999 + 0.5 * g.length()) * i as f64 / (n - 1) as f64;
                let c = configuration(&g, s, phi).unwrap();
                let res = (c.l * c.l + (c.r * c.psi).powi(2) - b * b).abs() / (b * b);
                assert!(res < 1e-10);
                assert!(c.r < prev_r, "r must decrease with s");
                prev_r = c.r;
            }
        }
    }

    proptest! {
        #[test]
        fn handedness_mirror(gamma_deg in 5.0f64..85.0, s_frac in -0.3f64..0.9, phi_frac in -0.9f64..0.9) {
            let g = FreeGeometry::canonical(gamma_deg.to_radians(), Handedness::Right).unwrap();
            let s = s_frac * extension_limit(&g).min(g.length());
            let phi = phi_frac * wrap_angle(&g);
            let a = configuration(&g, s, phi).unwrap();
            let m = configuration(&g.with_handedness(Handedness::Left), s, -phi).unwrap();
            prop_assert_eq!(a.r, m.r);
            prop_assert_eq!(a.gamma, m.gamma);
            prop_assert_eq!(a.l, m.l);
        }
    }
}
