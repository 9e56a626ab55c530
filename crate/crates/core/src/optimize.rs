//! One-dimensional maximization on a closed interval: a uniform coarse grid
//! locates the best bracket, golden-section search refines inside it.

/// Coarse grid size used by the capacity maximizations.
pub const COARSE_POINTS: usize = 1025;

/// Refinement stops once the bracket is narrower than this.
pub const REFINE_TOL: f64 = 1e-10;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

/// Golden-section search for a maximum of `f` on `[a, b]`, assuming a single
/// peak inside the bracket.
pub fn golden_section_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Maximum
where
    F: Fn(f64) -> f64,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    Maximum { x, value: f(x) }
}

/// Maximum of `f` over `[lo, hi]` from a `points`-sample grid followed by
/// golden-section refinement between the neighbours of the best sample.
/// Never returns less than the best grid value.
pub fn grid_then_golden<F>(f: F, lo: f64, hi: f64, points: usize) -> Maximum
where
    F: Fn(f64) -> f64,
{
    assert!(points >= 2, "grid needs at least two points");
    let step = (hi - lo) / (points - 1) as f64;
    let at = |i: usize| if i == points - 1 { hi } else { lo + i as f64 * step };
    let mut best = Maximum { x: lo, value: f(lo) };
    let mut best_i = 0;
    for i in 1..points {
        let x = at(i);
        let v = f(x);
        if v > best.value {
            best = Maximum { x, value: v };
            best_i = i;
        }
    }
    let a = at(best_i.saturating_sub(1));
    let b = at((best_i + 1).min(points - 1));
    let refined = golden_section_max(&f, a, b, REFINE_TOL);
    if refined.value > best.value {
        refined
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let m = golden_section_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, 0.0, 1.0, 1e-10);
        // a quadratic peak only locates x to about sqrt(machine epsilon)
        assert!((m.x - 0.3).abs() < 1e-7);
        assert!((m.value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn grid_handles_boundary_maximum() {
        let m = grid_then_golden(|x| x, 0.0, 1.0, 1025);
        assert_eq!(m.value, 1.0);
        let m = grid_then_golden(|x| -x, 0.0, 1.0, 1025);
        assert_eq!(m.value, 0.0);
    }

    #[test]
    fn grid_picks_global_of_two_peaks() {
        let f = |x: f64| (-(x - 0.2f64).powi(2) * 400.0).exp() + 1.2 * (-(x - 0.8f64).powi(2) * 400.0).exp();
        let m = grid_then_golden(f, 0.0, 1.0, 1025);
        assert!((m.x - 0.8).abs() < 1e-3);
    }
}
