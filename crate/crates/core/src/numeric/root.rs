//! Bracketed root finding on monotone functions.
//!
//! Both routines run bisection to floating-point exhaustion (the midpoint
//! stops separating the bracket), which is at most ~60 iterations and gives
//! the best representable answer for monotone inputs.

/// Solve `f(x) = target` for non-increasing `f` on `[lo, hi]`.
///
/// Requires `f(lo) >= target >= f(hi)` up to rounding; out-of-bracket targets
/// clamp to the nearer endpoint.
pub fn bisect_decreasing(f: impl Fn(f64) -> f64, lo: f64, hi: f64, target: f64) -> f64 {
    let mut lo = lo;
    let mut hi = hi;
    if f(lo) <= target {
        return lo;
    }
    if f(hi) >= target {
        return hi;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid.clamp(lo, hi);
        }
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Solve `f(x) = target` for non-decreasing `f` on `[lo, hi]`.
pub fn bisect_increasing(f: impl Fn(f64) -> f64, lo: f64, hi: f64, target: f64) -> f64 {
    bisect_decreasing(|x| -f(x), lo, hi, -target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverts_exponential() {
        let x = bisect_decreasing(|x| (-x).exp(), 0.0, 100.0, 0.25);
        assert!((x - 4.0f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn step_function_lands_on_jump() {
        // CDF of a point mass at 1.
        let f = |x: f64| if x < 1.0 { 0.0 } else { 1.0 };
        let x = bisect_increasing(f, 0.0, 2.0, 0.5);
        assert!((x - 1.0).abs() < 1e-12, "got {x}");
    }
}
