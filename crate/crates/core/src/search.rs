//! One-dimensional bracketed searches.

/// `(√5 − 1) / 2`
const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchResult {
    pub x: f64,
    pub value: f64,
    /// Final bracket `[lo, hi]` around `x`.
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `tol`.
///
/// Near a smooth maximum `f` is flat to second order, so comparisons stop
/// resolving `x` below about `√ε` relative; tighten with [`bisect_sign`] on
/// the derivative when that matters.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, tol: f64) -> SearchResult
where
    F: Fn(f64) -> f64,
{
    assert!(lo < hi, "empty bracket [{lo}, {hi}]");
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while b - a > tol {
        iterations += 1;
        if f1 >= f2 {
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
        // Interior points can stop moving once the bracket reaches ulp scale.
        if x1 >= x2 {
            break;
        }
    }
    let (x, value) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    SearchResult {
        x,
        value,
        bracket: (a, b),
        iterations,
    }
}

/// Bisection for a sign change of `g` on `[lo, hi]`, where `g(lo) > 0 > g(hi)`.
/// Returns `None` when the endpoint signs do not bracket a root.
pub fn bisect_sign<G>(g: G, lo: f64, hi: f64) -> Option<f64>
where
    G: Fn(f64) -> f64,
{
    if !(g(lo) > 0.0 && g(hi) < 0.0) {
        return None;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let v = g(mid);
        if v > 0.0 {
            a = mid;
        } else if v < 0.0 {
            b = mid;
        } else {
            return Some(mid);
        }
    }
    Some(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let r = golden_section_max(|x| -(x - 1.3).powi(2) + 2.0, 0.0, 5.0, 1e-10);
        assert!((r.x - 1.3).abs() < 1e-7);
        assert!((r.value - 2.0).abs() < 1e-14);
        assert!(r.bracket.1 - r.bracket.0 <= 1e-10 || r.iterations > 40);
    }

    #[test]
    fn peak_at_edge() {
        let r = golden_section_max(|x| x, 0.0, 1.0, 1e-9);
        assert!((r.x - 1.0).abs() < 1e-8);
    }

    #[test]
    fn bisection_brackets() {
        let root = bisect_sign(|x| 2.0 - x * x, 0.0, 3.0).unwrap();
        assert!((root - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(bisect_sign(|x| x, -1.0, 1.0), None);
    }
}
