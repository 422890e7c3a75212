//! Central finite differences of arbitrary order with three-level Richardson
//! extrapolation and an error estimate.

/// Binomial coefficient as f64; fine for the small orders used here.
fn binom(n: usize, k: usize) -> f64 {
    let mut v = 1.0;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

/// Raw central difference estimate of the k-th derivative with step h.
fn central_stencil(f: &impl Fn(f64) -> f64, k: usize, x: f64, h: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..=k {
        let offset = (k as f64 / 2.0 - i as f64) * h;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom(k, i) * f(x + offset);
    }
    acc / h.powi(k as i32)
}

/// Estimate the k-th derivative of `f` at `x` by central differences with
/// three-level Richardson extrapolation.
///
/// `bounds` restricts the sample points: the step is shrunk so the full
/// stencil stays strictly inside `(lo, hi)`. Returns `(value, error_bound)`;
/// the bound combines the Richardson defect with a rounding-noise floor.
pub fn central_derivative(
    f: impl Fn(f64) -> f64,
    k: usize,
    x: f64,
    bounds: (f64, f64),
) -> (f64, f64) {
    assert!(k >= 1, "derivative order must be at least 1");
    let (lo, hi) = bounds;
    let eps = f64::EPSILON;
    // Base step balancing the post-extrapolation truncation O(h^6) against
    // the rounding noise eps/(h/4)^k of the finest stencil.
    let mut h = x.abs().max(1.0) * (eps * 4f64.powi(k as i32)).powf(1.0 / (k as f64 + 6.0));
    let half_span = k as f64 / 2.0;
    if x - half_span * h <= lo {
        h = (x - lo) * 0.9 / half_span;
    }
    if x + half_span * h >= hi {
        h = h.min((hi - x) * 0.9 / half_span);
    }
    if !(h > 0.0) || !h.is_finite() {
        return (f64::NAN, f64::INFINITY);
    }

    let d0 = central_stencil(&f, k, x, h);
    let d1 = central_stencil(&f, k, x, h / 2.0);
    let d2 = central_stencil(&f, k, x, h / 4.0);
    // Leading error is O(h^2), so the Richardson ratio is 4.
    let r0 = (4.0 * d1 - d0) / 3.0;
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (16.0 * r1 - r0) / 15.0;
    // Rounding noise of a k-th difference at step h/4.
    let scale = f(x).abs().max(1e-300);
    let noise = scale * eps * 2f64.powi(k as i32) / (h / 4.0).powi(k as i32);
    let err = (r2 - r1).abs() + (r1 - r0).abs() * 0.0625 + noise;
    (r2, err)
}
