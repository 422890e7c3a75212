//! Shared numerical machinery: adaptive quadrature, high-order finite
//! differences with Richardson extrapolation, bracketed root finding,
//! sequence extrapolation and simple sample statistics.

pub mod diff;
pub mod extrapolate;
pub mod quad;
pub mod root;
pub mod stats;

pub use diff::central_derivative;
pub use quad::{adaptive_quad, QuadResult};
pub use root::{bisect_decreasing, bisect_increasing};

/// Serialize possibly non-finite floats as JSON-friendly values: finite
/// numbers pass through, infinities and NaN become the strings "inf",
/// "-inf", "nan".
pub fn serialize_f64<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}
