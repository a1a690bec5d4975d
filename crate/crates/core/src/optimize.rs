//! Derivative-free one-dimensional maximization.

/// `(3 - sqrt(5)) / 2`, the golden-section interior fraction.
const INV_PHI2: f64 = 0.381_966_011_250_105_1;

/// Result of a bracketed maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// Stops when the bracket is no wider than `xtol`. The returned point is the
/// better of the two interior probes, so endpoints are never returned exactly
/// unless the bracket collapses onto them.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, xtol: f64) -> Maximum
where
    F: Fn(f64) -> f64,
{
    assert!(lo <= hi, "empty bracket [{lo}, {hi}]");
    let (mut a, mut b) = (lo, hi);
    let mut x1 = a + INV_PHI2 * (b - a);
    let mut x2 = b - INV_PHI2 * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evaluations = 2;
    while b - a > xtol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + INV_PHI2 * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - INV_PHI2 * (b - a);
            f2 = f(x2);
        }
        evaluations += 1;
    }
    if f1 >= f2 {
        Maximum {
            x: x1,
            value: f1,
            evaluations,
        }
    } else {
        Maximum {
            x: x2,
            value: f2,
            evaluations,
        }
    }
}

/// Scans `f` on `points` equally spaced nodes of `[lo, hi]`, then refines the
/// best node's neighbouring cell pair with golden-section search.
///
/// Guards against non-unimodal functions on wide intervals as long as the
/// scan resolves the peak.
pub fn scan_then_golden<F>(f: F, lo: f64, hi: f64, points: usize, xtol: f64) -> Maximum
where
    F: Fn(f64) -> f64,
{
    assert!(points >= 3, "scan needs at least 3 points");
    let step = (hi - lo) / (points - 1) as f64;
    let node = |k: usize| {
        if k == points - 1 {
            hi
        } else {
            lo + step * k as f64
        }
    };
    let mut best = (0, f64::NEG_INFINITY);
    for k in 0..points {
        let v = f(node(k));
        if v > best.1 {
            best = (k, v);
        }
    }
    let a = node(best.0.saturating_sub(1));
    let b = node((best.0 + 1).min(points - 1));
    let mut m = golden_section_max(&f, a, b, xtol);
    if best.1 > m.value {
        m.x = node(best.0);
        m.value = best.1;
    }
    m.evaluations += points;
    m
}
