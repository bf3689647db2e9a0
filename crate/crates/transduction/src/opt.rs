//! One-dimensional maximization: coarse scan plus golden-section refinement.

/// Golden-section search for the maximum of `f` on `[a, b]`, refined until
/// the bracket is shorter than `tol`. Returns `(x_max, f_max)`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 > f2 {
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
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximize over a coarse point list, then golden-refine inside the bracket
/// around the best coarse point.
pub(crate) fn scan_then_golden(
    f: impl Fn(f64) -> f64 + Copy,
    points: &[f64],
    tol: f64,
) -> (f64, f64) {
    assert!(points.len() >= 3);
    let mut best = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    for (i, &x) in points.iter().enumerate() {
        let v = f(x);
        if v > best_v {
            best_v = v;
            best = i;
        }
    }
    let lo = points[best.saturating_sub(1)];
    let hi = points[(best + 1).min(points.len() - 1)];
    let (x, v) = golden_max(f, lo, hi, tol);
    if v > best_v {
        (x, v)
    } else {
        (points[best], best_v)
    }
}

/// Log-spaced points on [lo, hi] (both positive), endpoints included.
pub(crate) fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (la, lb) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp())
        .collect()
}
