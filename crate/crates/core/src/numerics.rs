//! Small scalar routines shared by the solvers: bracketing, golden-section
//! minimisation and root-mean-square helpers.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Returns `(x_min, f_min)`. Stops once the bracket is narrower than `tol`.
pub fn golden_section_minimize(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Coarse grid scan followed by golden-section refinement around the best
/// grid node. Returns the minimiser, the minimum and whether the best grid
/// node was interior (an edge minimum means no interior minimum was found).
pub fn grid_then_golden(f: impl Fn(f64) -> f64, a: f64, b: f64, nodes: usize, tol: f64) -> (f64, f64, bool) {
    let nodes = nodes.max(3);
    let h = (b - a) / (nodes - 1) as f64;
    let (best, _) =
        (0..nodes).map(|i| (i, f(a + h * i as f64))).fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    let interior = best > 0 && best < nodes - 1;
    let lo = a + h * best.saturating_sub(1) as f64;
    let hi = (a + h * (best + 1) as f64).min(b);
    let (x, v) = golden_section_minimize(&f, lo, hi, tol);
    (x, v, interior)
}

/// Bisection on a sign change of `f` inside `[a, b]`.
///
/// Returns `None` if `f(a)` and `f(b)` share a sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 || (b - a).abs() < tol {
            return Some(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

/// Root-mean-square of a sequence. Empty input gives zero.
pub fn rms(values: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = values.into_iter().fold((0.0, 0usize), |(s, n), v| (s + v * v, n + 1));
    if n == 0 {
        0.0
    } else {
        (sum / n as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, v) = golden_section_minimize(|x| (x - 1.3).powi(2) + 2.0, -4.0, 5.0, 1e-10);
        // A smooth minimum is only located to about sqrt(eps) in x.
        assert!((x - 1.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn grid_flags_edge_minimum() {
        let (_, _, interior) = grid_then_golden(|x| x, 0.0, 1.0, 11, 1e-9);
        assert!(!interior);
        let (x, _, interior) = grid_then_golden(|x| (x - 0.42).abs(), 0.0, 1.0, 11, 1e-12);
        assert!(interior);
        assert!((x - 0.42).abs() < 1e-9);
    }

    #[test]
    fn bisect_square_root_of_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-14);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-9).is_none());
    }

    #[test]
    fn rms_of_constant_is_constant() {
        assert_eq!(rms([3.0, -3.0, 3.0]), 3.0);
        assert_eq!(rms(std::iter::empty()), 0.0);
    }
}
