//! Archimedean generators: the function ψ with its derivatives, pseudo-inverse
//! and validity checks.
//!
//! A generator is a continuous survival function on `[0, ∞)`: `ψ(0) = 1`,
//! strictly decreasing on `{ψ > 0}` and vanishing at infinity. Its
//! pseudo-inverse is `φ(u) = inf{x > 0 | ψ(x) = u}`, always a right inverse.
//! A generator builds a d-dimensional copula exactly when it is d-monotone.

mod check;
mod families;

pub use check::{check_d_monotone, CheckMethod, GeneratorReport, Verdict, Violation};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric;

/// Maximum dimension for which d-monotonicity is claimed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DMax {
    Finite(usize),
    /// Completely monotone families work in any dimension.
    Unbounded,
}

impl DMax {
    pub fn allows(&self, d: usize) -> bool {
        match self {
            DMax::Finite(m) => d <= *m,
            DMax::Unbounded => true,
        }
    }
}

/// Internal evaluation surface each family implements. Wrapper generators
/// (powers, rescalings, threshold conditionals) compose through it.
pub(crate) trait GeneratorKernel: Send + Sync {
    fn eval(&self, x: f64) -> f64;
    fn log_eval(&self, x: f64) -> f64;
    /// `log ψ(x + v) - log ψ(v)`: the conditional-exceedance log ratio.
    /// Families override this with a cancellation-free form; the default
    /// loses absolute precision once `v` dwarfs `x`.
    fn log_eval_shifted(&self, x: f64, v: f64) -> f64 {
        self.log_eval(x + v) - self.log_eval(v)
    }
    /// Analytic k-th derivative at `x > 0`, when the family provides one.
    fn derivative(&self, k: usize, x: f64) -> Option<f64>;
    /// Analytic pseudo-inverse, when the family provides one.
    fn pseudo_inverse(&self, u: f64) -> Option<f64>;
    fn right_endpoint(&self) -> f64;
    fn d_max(&self) -> DMax;
    fn family_tag(&self) -> &'static str;
    fn parameters(&self) -> Vec<(&'static str, f64)>;
}

/// An Archimedean generator. Immutable after construction; cheap to clone.
#[derive(Clone)]
pub struct Generator {
    kernel: Arc<dyn GeneratorKernel>,
}

impl std::fmt::Debug for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Generator({})", self.label())
    }
}

/// Built-in parametric families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySpec {
    /// `ψ(x) = (1 + θx)^{-1/θ}`, `θ ≥ -1/(d-1)`; `θ = 0` degenerates to
    /// `e^{-x}`. Strict iff `θ ≥ 0`.
    Clayton { theta: f64 },
    /// `ψ(x) = exp(-x^{1/θ})`, `θ ≥ 1`. Completely monotone.
    Gumbel { theta: f64 },
    /// `ψ(x) = e^{-x}`.
    Independence,
    /// `ψ(x) = (1 - x)₊`. Bivariate only.
    Countermonotone,
    /// `ψ(x) = θ / log(e^θ + x)`, `θ > 0`. Bivariate; slowly varying at
    /// infinity.
    Log19 { theta: f64 },
    /// `ψ(x) = (1 + a·sin(log(1+x)))/(1+x)` with the amplitude tuned to the
    /// requested dimension. `ψ(cx)/ψ(x)` has no limit at infinity.
    Oscillating,
}

/// Coefficients describing the oscillating family at dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorParams {
    pub d: usize,
    /// Amplitude `a = (d-1)!/c_{d-1}`.
    pub a: f64,
    /// `c_0..c_{d-1}` with `c_0 = 1`, `c_{k+1} = c_k √(k²+2k+2)`.
    pub c: Vec<f64>,
    /// Phases `φ_0..φ_{d-1}` with `φ_0 = 0`, `φ_{k+1} = φ_k - arctan(1/(k+1))`.
    pub phi: Vec<f64>,
}

/// Amplitude and phase recurrences for the oscillating family.
///
/// The phase step is `-arctan(1/(k+1))`: differentiating
/// `(k! + a·c_k·sin(φ_k + log(1+x)))/(1+x)^{k+1}` produces
/// `(k+1)·sin(z) - cos(z) = c·sin(z - arctan(1/(k+1)))`.
pub fn compute_oscillator_params(d: usize) -> OscillatorParams {
    assert!(d >= 2, "oscillating family needs d >= 2");
    let (c, phi) = oscillator_coefficients(d - 1);
    let factorial: f64 = (1..d).map(|k| k as f64).product();
    OscillatorParams {
        d,
        a: factorial / c[d - 1],
        c,
        phi,
    }
}

/// `c_0..c_kmax` and `φ_0..φ_kmax`.
pub(crate) fn oscillator_coefficients(kmax: usize) -> (Vec<f64>, Vec<f64>) {
    let mut c = vec![1.0];
    let mut phi = vec![0.0];
    for k in 0..kmax {
        let kf = k as f64;
        c.push(c[k] * (kf * kf + 2.0 * kf + 2.0).sqrt());
        phi.push(phi[k] - (1.0 / (kf + 1.0)).atan());
    }
    (c, phi)
}

/// Construct a built-in generator, validating parameters against the target
/// dimension `d`.
pub fn make_family(spec: FamilySpec, d: usize) -> Result<Generator> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension must be >= 2, got {d}")));
    }
    let kernel: Arc<dyn GeneratorKernel> = match spec {
        FamilySpec::Clayton { theta } => {
            let bound = -1.0 / (d as f64 - 1.0);
            if theta < bound {
                return Err(Error::Domain(format!(
                    "clayton requires theta >= -1/(d-1) = {bound} at d = {d}, got {theta}"
                )));
            }
            Arc::new(families::Clayton::new(theta))
        }
        FamilySpec::Gumbel { theta } => {
            if theta < 1.0 {
                return Err(Error::Domain(format!(
                    "gumbel requires theta >= 1, got {theta}"
                )));
            }
            Arc::new(families::Gumbel::new(theta))
        }
        FamilySpec::Independence => Arc::new(families::Independence),
        FamilySpec::Countermonotone => {
            if d != 2 {
                return Err(Error::Domain(format!(
                    "countermonotone generator is 2-monotone only; requested d = {d}"
                )));
            }
            Arc::new(families::Countermonotone)
        }
        FamilySpec::Log19 { theta } => {
            if theta <= 0.0 {
                return Err(Error::Domain(format!(
                    "log19 requires theta > 0, got {theta}"
                )));
            }
            if d != 2 {
                return Err(Error::Domain(format!(
                    "log19 is used as a bivariate family only; requested d = {d}"
                )));
            }
            Arc::new(families::Log19::new(theta))
        }
        FamilySpec::Oscillating => Arc::new(families::Oscillating::new(d)),
    };
    Ok(Generator { kernel })
}

impl Generator {
    pub(crate) fn from_kernel(kernel: Arc<dyn GeneratorKernel>) -> Self {
        Generator { kernel }
    }

    /// ψ(x) for x ≥ 0.
    pub fn eval(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0, "generator argument must be non-negative");
        self.kernel.eval(x)
    }

    /// log ψ(x); `-inf` where ψ vanishes.
    pub fn log_eval(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        self.kernel.log_eval(x)
    }

    /// k-th derivative at `x > 0`: analytic when the family provides one,
    /// Richardson-extrapolated central differences otherwise.
    pub fn derivative(&self, k: usize, x: f64) -> Result<f64> {
        self.derivative_with_error(k, x).map(|(v, _)| v)
    }

    /// As [`Self::derivative`], also returning the estimated error bound
    /// (zero for analytic values).
    pub fn derivative_with_error(&self, k: usize, x: f64) -> Result<(f64, f64)> {
        assert!(k >= 1, "derivative order must be >= 1");
        if let Some(v) = self.kernel.derivative(k, x) {
            return Ok((v, 0.0));
        }
        let (v, err) = numeric::central_derivative(
            |t| self.kernel.eval(t),
            k,
            x,
            (0.0, self.right_endpoint()),
        );
        if !v.is_finite() || err > v.abs().max(self.eval(x)).max(1e-12) {
            return Err(Error::Precision {
                msg: format!(
                    "finite differences cannot resolve derivative of order {k} at x = {x:.6e}"
                ),
                bound: err,
            });
        }
        Ok((v, err))
    }

    /// Whether the k-th derivative has an analytic path at this order.
    pub fn has_analytic_derivative(&self, k: usize) -> bool {
        self.kernel.derivative(k, self.probe_point()).is_some()
    }

    fn probe_point(&self) -> f64 {
        let hi = self.right_endpoint();
        if hi.is_finite() {
            hi * 0.5
        } else {
            1.0
        }
    }

    /// Pseudo-inverse `φ(u) = inf{x > 0 | ψ(x) = u}`, total on `[0, 1]`.
    pub fn pseudo_inverse(&self, u: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&u), "pseudo-inverse needs u in [0,1]");
        if u >= 1.0 {
            return 0.0;
        }
        if u <= 0.0 {
            return self.right_endpoint();
        }
        if let Some(x) = self.kernel.pseudo_inverse(u) {
            return x.max(0.0);
        }
        // Bracket by doubling, then bisect to floating-point exhaustion.
        let mut hi = 1.0f64;
        let mut lo = 0.0f64;
        while self.kernel.eval(hi) > u {
            lo = hi;
            hi *= 2.0;
            if hi > 1e300 {
                break;
            }
        }
        numeric::bisect_decreasing(|x| self.kernel.eval(x), lo, hi, u)
    }

    /// `x* = φ(0)`, infinite for strict generators.
    pub fn right_endpoint(&self) -> f64 {
        self.kernel.right_endpoint()
    }

    /// Strict means ψ > 0 everywhere, equivalently `x* = ∞`.
    pub fn is_strict(&self) -> bool {
        self.kernel.right_endpoint().is_infinite()
    }

    pub fn d_max(&self) -> DMax {
        self.kernel.d_max()
    }

    pub fn family(&self) -> &'static str {
        self.kernel.family_tag()
    }

    pub fn parameters(&self) -> Vec<(&'static str, f64)> {
        self.kernel.parameters()
    }

    /// Human-readable provenance tag, e.g. `clayton(theta=1)`.
    pub fn label(&self) -> String {
        let params = self.kernel.parameters();
        if params.is_empty() {
            self.kernel.family_tag().to_string()
        } else {
            let inner: Vec<String> = params
                .iter()
                .map(|(name, v)| format!("{name}={v}"))
                .collect();
            format!("{}({})", self.kernel.family_tag(), inner.join(","))
        }
    }

    /// The generator `x ↦ ψ(x)ⁿ` of the copula of componentwise n-block
    /// minima. `d_max` is inherited.
    pub fn power(&self, n: u32) -> Generator {
        assert!(n >= 1, "power exponent must be >= 1");
        if n == 1 {
            return self.clone();
        }
        Generator {
            kernel: Arc::new(families::Power {
                inner: Arc::clone(&self.kernel),
                n,
            }),
        }
    }

    /// The generator `x ↦ ψ(cx)`; generates the same copula for every c > 0.
    pub fn rescale(&self, c: f64) -> Result<Generator> {
        if !(c > 0.0) {
            return Err(Error::Domain(format!("rescale needs c > 0, got {c}")));
        }
        if c == 1.0 {
            return Ok(self.clone());
        }
        Ok(Generator {
            kernel: Arc::new(families::Rescale {
                inner: Arc::clone(&self.kernel),
                c,
            }),
        })
    }

    pub(crate) fn kernel(&self) -> &Arc<dyn GeneratorKernel> {
        &self.kernel
    }
}

#[cfg(test)]
mod tests;
