use nalgebra::Complex;

use super::{closed_loop_coefficients, ClosedLoopCoefficients, ControlError, PidGains};
use crate::dynamics::LumpedParams;
use crate::kinematics::FreeGeometry;
use crate::numerics::bisect;

type C64 = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicRoots {
    /// Sorted by real part, then imaginary part.
    pub roots: [C64; 3],
    /// All real parts strictly negative.
    pub stable: bool,
}

impl CharacteristicRoots {
    pub fn max_real_part(&self) -> f64 {
        self.roots.iter().map(|r| r.re).fold(f64::NEG_INFINITY, f64::max)
    }
}

fn poly(co: &[f64; 4], x: C64) -> C64 {
    ((x * co[0] + co[1]) * x + co[2]) * x + co[3]
}

fn dpoly(co: &[f64; 4], x: C64) -> C64 {
    (x * (3.0 * co[0]) + 2.0 * co[1]) * x + co[2]
}

fn polish(co: &[f64; 4], mut x: C64) -> C64 {
    for _ in 0..8 {
        let d = dpoly(co, x);
        if d.norm() == 0.0 {
            break;
        }
        let step = poly(co, x) / d;
        let next = x - step;
        if poly(co, next).norm() >= poly(co, x).norm() {
            break;
        }
        x = next;
    }
    x
}

/// Roots of `x³ + a x² + b x + c` by the trigonometric / Cardano forms.
fn monic_cubic(a: f64, b: f64, c: f64) -> [C64; 3] {
    let q = (a * a - 3.0 * b) / 9.0;
    let r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
    let shift = a / 3.0;
    if r * r < q * q * q {
        let theta = (r / (q * q * q).sqrt()).clamp(-1.0, 1.0).acos();
        let k = -2.0 * q.sqrt();
        let tau = std::f64::consts::TAU;
        [
            C64::new(k * (theta / 3.0).cos() - shift, 0.0),
            C64::new(k * ((theta + tau) / 3.0).cos() - shift, 0.0),
            C64::new(k * ((theta - tau) / 3.0).cos() - shift, 0.0),
        ]
    } else {
        let big_a = -r.signum() * (r.abs() + (r * r - q * q * q).sqrt()).cbrt();
        let big_b = if big_a == 0.0 { 0.0 } else { q / big_a };
        let re = -0.5 * (big_a + big_b) - shift;
        let im = 0.5 * 3f64.sqrt() * (big_a - big_b);
        [C64::new(big_a + big_b - shift, 0.0), C64::new(re, im), C64::new(re, -im)]
    }
}

/// Roots of `B λ³ + C λ² + E λ + F`.
pub fn characteristic_roots(co: &ClosedLoopCoefficients) -> Result<CharacteristicRoots, ControlError> {
    if co.b == 0.0 || !co.b.is_finite() {
        return Err(ControlError::DegenerateLeadingCoefficient);
    }
    let p = [co.b, co.c, co.e, co.f];
    if p.iter().any(|v| !v.is_finite()) {
        return Err(ControlError::InvalidParameter("non-finite characteristic coefficient".into()));
    }
    let mut roots = if co.f == 0.0 {
        // λ (B λ² + C λ + E): keep the zero root exact.
        let disc = co.c * co.c - 4.0 * co.b * co.e;
        let pair = if disc >= 0.0 {
            let q = -0.5 * (co.c + co.c.signum() * disc.sqrt());
            let r1 = if q != 0.0 { q / co.b } else { 0.0 };
            let r2 = if q != 0.0 { co.e / q } else { 0.0 };
            [C64::new(r1, 0.0), C64::new(r2, 0.0)]
        } else {
            let re = -co.c / (2.0 * co.b);
            let im = (-disc).sqrt() / (2.0 * co.b);
            [C64::new(re, im), C64::new(re, -im)]
        };
        [C64::new(0.0, 0.0), pair[0], pair[1]]
    } else {
        monic_cubic(co.c / co.b, co.e / co.b, co.f / co.b).map(|x| polish(&p, x))
    };
    roots.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(CharacteristicRoots { roots, stable: roots.iter().all(|r| r.re < 0.0) })
}

/// Routh–Hurwitz test for a cubic with `B > 0`: `C, E, F > 0` and `C E > B F`.
pub fn routh_hurwitz_stable(co: &ClosedLoopCoefficients) -> bool {
    let s = co.b.signum();
    let (b, c, e, f) = (co.b * s, co.c * s, co.e * s, co.f * s);
    b > 0.0 && c > 0.0 && e > 0.0 && f > 0.0 && c * e > b * f
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GainKind {
    Kp,
    Kd,
    Ki,
}

impl GainKind {
    pub fn set(self, gains: &PidGains, value: f64) -> PidGains {
        let mut g = *gains;
        match self {
            GainKind::Kp => g.kp = value,
            GainKind::Kd => g.kd = value,
            GainKind::Ki => g.ki = value,
        }
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocusRow {
    pub gain: f64,
    pub roots: CharacteristicRoots,
}

/// Closed-loop roots as one gain sweeps `grid`, the others fixed at `base`.
pub fn root_locus(
    geom: &FreeGeometry,
    params: &LumpedParams,
    base: &PidGains,
    kind: GainKind,
    grid: &[f64],
) -> Result<Vec<LocusRow>, ControlError> {
    grid.iter()
        .map(|&g| {
            let co = closed_loop_coefficients(&kind.set(base, g), geom, params);
            Ok(LocusRow { gain: g, roots: characteristic_roots(&co)? })
        })
        .collect()
}

/// First gain in `[lo, hi]` at which the largest real part crosses zero,
/// located by bisection. `None` if the stability verdict is the same at both
/// ends.
pub fn stability_boundary(
    geom: &FreeGeometry,
    params: &LumpedParams,
    base: &PidGains,
    kind: GainKind,
    lo: f64,
    hi: f64,
) -> Option<f64> {
    let f = |g: f64| {
        characteristic_roots(&closed_loop_coefficients(&kind.set(base, g), geom, params))
            .map(|r| r.max_real_part())
            .unwrap_or(f64::NAN)
    };
    if f(lo).is_nan() || f(hi).is_nan() {
        return None;
    }
    bisect(f, lo, hi, 1e-12 * hi.abs().max(1.0))
}
