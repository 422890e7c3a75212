//! Extrapolation of slowly converging dyadic-limit sequences.
//!
//! The log-scale tail coefficients produce sequences of the form
//! `v_j = A + B/(j + γ) + o(1/j)` in the step index: a ratio of two affine
//! functions of j. Fitting the shifted hyperbola through three strided
//! points recovers A exactly for that family (constants included), while
//! iterated Richardson would leave an O(1/j³) residue that never settles
//! within the f64 scale range.

/// Extrapolate `v` (indexed by `j = j0, j0+1, …`) with a three-point
/// shifted-hyperbola fit at stride `s`. Entries with `i < 2s` are copied
/// unchanged.
pub fn hyperbola_extrapolate(v: &[f64], j0: usize, stride: usize) -> Vec<f64> {
    let s = stride.max(1);
    let mut out = v.to_vec();
    for i in (2 * s)..v.len() {
        let (v1, v2, v3) = (v[i - 2 * s], v[i - s], v[i]);
        let (j1, j3) = ((j0 + i - 2 * s) as f64, (j0 + i) as f64);
        let d1 = v2 - v1;
        let d2 = v3 - v2;
        let scale = v3.abs().max(1.0);
        if d1.abs() <= 1e-13 * scale && d2.abs() <= 1e-13 * scale {
            // Constant within noise.
            out[i] = v3;
            continue;
        }
        let denom = d1 - d2;
        if denom.abs() <= 1e-8 * d1.abs().max(d2.abs()) {
            // Nearly linear in j: no hyperbola to fit; keep the raw value
            // and let the convergence gate reject it.
            out[i] = v3;
            continue;
        }
        // v_j = A + B/(j+γ): differences give γ, then A.
        let gamma = (d2 * j3 - d1 * j1) / denom;
        let p3 = j3 + gamma;
        if !gamma.is_finite() || p3 <= 2.0 * s as f64 + 0.5 {
            // Pole inside or too close to the window; fit is meaningless.
            out[i] = v3;
            continue;
        }
        let b = -d2 * (p3 - s as f64) * p3 / s as f64;
        out[i] = v3 - b / p3;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sequence_is_fixed_point() {
        let v = vec![0.41421356; 40];
        let r = hyperbola_extrapolate(&v, 1, 8);
        for x in &r {
            assert!((x - 0.41421356).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_on_shifted_hyperbolas() {
        let v: Vec<f64> = (1..=60).map(|j| 1.0 - 2.0 / (j as f64 + 1.0)).collect();
        let r = hyperbola_extrapolate(&v, 1, 8);
        let last = *r.last().unwrap();
        assert!((last - 1.0).abs() < 1e-10, "got {last}");
        let tail_var = (r[59] - r[55]).abs();
        assert!(tail_var < 1e-10, "tail variation {tail_var}");
    }

    #[test]
    fn tolerates_small_noise() {
        let v: Vec<f64> = (1..=60)
            .map(|j| {
                let wobble = 1e-10 * ((j as f64) * 0.7).sin();
                0.3 + 5.0 / (j as f64 + 2.5) + wobble
            })
            .collect();
        let r = hyperbola_extrapolate(&v, 1, 8);
        let last = *r.last().unwrap();
        assert!((last - 0.3).abs() < 1e-6, "got {last}");
    }
}
