//! Threshold copula limits.
//!
//! Conditioning an Archimedean copula on joint lower exceedances leaves the
//! dependence Archimedean with generator `ψ_v(x) = ψ(x + ‖v‖₁)/ψ(‖v‖₁)`,
//! which depends on the thresholds only through `‖v‖₁`. As `‖v‖₁` climbs
//! toward `φ(0)`, the conditional copula converges to a Clayton copula whose
//! parameter is pinned by the domain of attraction of ψ. Upper exceedances
//! have no Archimedean structure; the bivariate limit distribution has the
//! explicit form `H₀`.

use std::sync::Arc;

use serde::Serialize;

use crate::copula::eval_copula;
use crate::error::{Error, Result};
use crate::gen::{DMax, Generator, GeneratorKernel};
use crate::numeric::{bisect_decreasing, serialize_f64};
use crate::regvar::{auxiliary_function, generator_rv_index, RvEstimate, RvIndex, RvLocation};

/// Domain of attraction of the generator, driving the limit parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TailDomain {
    Frechet,
    Gumbel,
    Weibull,
    Undetermined,
}

/// The exceedance normalization `β(‖v‖₁)` attached to each domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BetaNormalization {
    /// Fréchet domain: `β(v) = v`.
    Identity,
    /// Gumbel domain: `β(v) = a(v)`, the auxiliary function.
    Auxiliary,
    /// Weibull domain: `β(v) = x* - v`.
    EndpointGap {
        #[serde(serialize_with = "serialize_f64")]
        endpoint: f64,
    },
    Undetermined,
}

impl BetaNormalization {
    /// Evaluate the normalization at `v_norm`.
    pub fn beta_at(&self, gen: &Generator, v_norm: f64) -> Result<f64> {
        match self {
            BetaNormalization::Identity => Ok(v_norm),
            BetaNormalization::Auxiliary => auxiliary_function(gen, v_norm),
            BetaNormalization::EndpointGap { endpoint } => Ok(endpoint - v_norm),
            BetaNormalization::Undetermined => Err(Error::Domain(
                "no normalization: domain of attraction undetermined".into(),
            )),
        }
    }
}

/// Limiting lower threshold copula report.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub domain: TailDomain,
    /// Clayton parameter of the limit: `1/α` (Fréchet), 0 (Gumbel),
    /// `-1/α` (Weibull); absent when undetermined.
    pub theta_star: Option<f64>,
    pub beta: BetaNormalization,
    /// `(‖v‖₁, sup |C_{ψ_v}(u) - C^{Cl}_{θ*}(u)|)` over a bivariate grid.
    pub convergence_trace: Vec<(f64, f64)>,
    pub index_estimate: RvEstimate,
}

/// The conditional-exceedance generator `ψ_v(x) = ψ(x + v)/ψ(v)`.
///
/// Evaluation runs as a log-space ratio so `ψ(v)` may underflow; the
/// pseudo-inverse takes the analytic product form `φ(u·ψ(v)) - v` when the
/// inner inverse is analytic and `ψ(v)` is representable.
pub fn lower_threshold_generator(gen: &Generator, v_norm: f64) -> Result<Generator> {
    if v_norm == 0.0 {
        return Ok(gen.clone());
    }
    if !(v_norm > 0.0) {
        return Err(Error::Domain(format!("threshold must be >= 0, got {v_norm}")));
    }
    let endpoint = gen.right_endpoint();
    if v_norm >= endpoint || gen.log_eval(v_norm) == f64::NEG_INFINITY {
        return Err(Error::Domain(format!(
            "threshold {v_norm} reaches the zero set (right endpoint {endpoint})"
        )));
    }
    Ok(Generator::from_kernel(Arc::new(ThresholdKernel {
        inner: Arc::clone(gen.kernel()),
        v: v_norm,
        log_psi_v: gen.log_eval(v_norm),
    })))
}

struct ThresholdKernel {
    inner: Arc<dyn GeneratorKernel>,
    v: f64,
    log_psi_v: f64,
}

impl GeneratorKernel for ThresholdKernel {
    fn eval(&self, x: f64) -> f64 {
        self.log_eval(x).exp()
    }

    fn log_eval(&self, x: f64) -> f64 {
        self.inner.log_eval_shifted(x, self.v)
    }

    fn derivative(&self, k: usize, x: f64) -> Option<f64> {
        let psi_v = self.log_psi_v.exp();
        if psi_v < f64::MIN_POSITIVE {
            return None;
        }
        self.inner.derivative(k, x + self.v).map(|d| d / psi_v)
    }

    fn pseudo_inverse(&self, u: f64) -> Option<f64> {
        // Solve log ψ(x+v) - log ψ(v) = log u by bisection on a dyadic
        // bracket grown from 1: relative precision in x regardless of how
        // small ψ(v) or the root are. (The analytic product form
        // φ(u·ψ(v)) - v cancels catastrophically near a finite endpoint.)
        let log_u = u.ln();
        let ratio = |x: f64| self.inner.log_eval_shifted(x, self.v);
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        while ratio(hi) > log_u {
            lo = hi;
            hi *= 2.0;
            if hi > 1e300 {
                break;
            }
        }
        Some(bisect_decreasing(ratio, lo, hi, log_u))
    }

    fn right_endpoint(&self) -> f64 {
        self.inner.right_endpoint() - self.v
    }

    fn d_max(&self) -> DMax {
        self.inner.d_max()
    }

    fn family_tag(&self) -> &'static str {
        "threshold"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        let mut p = self.inner.parameters();
        p.push(("v", self.v));
        p
    }
}

/// Bivariate Clayton copula value for any admissible θ (θ = 0 is the
/// product copula, θ < 0 has a zero set).
fn clayton_copula(theta: f64, u1: f64, u2: f64) -> f64 {
    if u1 <= 0.0 || u2 <= 0.0 {
        return 0.0;
    }
    if theta == 0.0 {
        return u1 * u2;
    }
    let s = (-theta * u1.ln()).exp_m1() + (-theta * u2.ln()).exp_m1() + 1.0;
    if s <= 0.0 {
        return 0.0;
    }
    (-s.ln() / theta).exp()
}

/// Classify the generator's domain of attraction, derive the Clayton limit
/// parameter and the exceedance normalization, and trace the convergence of
/// `C_{ψ_v}` toward that Clayton copula as `‖v‖₁` climbs toward `φ(0)`.
pub fn lltc_parameters(gen: &Generator, _d: usize) -> ThresholdReport {
    let strict = gen.is_strict();
    let est = if strict {
        generator_rv_index(gen, RvLocation::Infinity)
    } else {
        generator_rv_index(gen, RvLocation::Endpoint)
    };
    let (domain, theta_star, beta) = match (strict, est.index) {
        (true, RvIndex::Finite(alpha)) if alpha > 0.0 => {
            (TailDomain::Frechet, Some(1.0 / alpha), BetaNormalization::Identity)
        }
        (true, RvIndex::Infinite) => (TailDomain::Gumbel, Some(0.0), BetaNormalization::Auxiliary),
        (false, RvIndex::Finite(alpha)) if alpha > 0.0 => (
            TailDomain::Weibull,
            Some(-1.0 / alpha),
            BetaNormalization::EndpointGap {
                endpoint: gen.right_endpoint(),
            },
        ),
        (false, RvIndex::Infinite) => {
            (TailDomain::Gumbel, Some(0.0), BetaNormalization::Auxiliary)
        }
        _ => (TailDomain::Undetermined, None, BetaNormalization::Undetermined),
    };

    let mut trace = Vec::new();
    if let Some(theta) = theta_star {
        let endpoint = gen.right_endpoint();
        let grid: Vec<f64> = (1..=5).map(|i| i as f64 / 6.0).collect();
        for j in 1..=40 {
            let v = if endpoint.is_finite() {
                endpoint * (1.0 - 2f64.powi(-j))
            } else {
                2f64.powi(j)
            };
            let Ok(cond) = lower_threshold_generator(gen, v) else {
                break;
            };
            let mut sup: f64 = 0.0;
            for &u1 in &grid {
                for &u2 in &grid {
                    let a = eval_copula(&cond, &[u1, u2]);
                    let b = clayton_copula(theta, u1, u2);
                    sup = sup.max((a - b).abs());
                }
            }
            trace.push((v, sup));
        }
    }
    ThresholdReport {
        domain,
        theta_star,
        beta,
        convergence_trace: trace,
        index_estimate: est,
    }
}

/// Explicit bivariate upper-threshold limit
/// `H₀(x₁, x₂) = (x₁^α + x₂^α - (x₁+x₂)^α)/(2 - 2^α)` for `α ∈ (0, 1)`.
pub fn upper_threshold_limit(x1: f64, x2: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "upper threshold limit needs alpha in (0,1); alpha = {alpha} (the boundary case \
             alpha = 1 is out of scope)"
        )));
    }
    if !(0.0..=1.0).contains(&x1) || !(0.0..=1.0).contains(&x2) {
        return Err(Error::Domain("coordinates must lie in [0,1]".into()));
    }
    if x1 == 0.0 || x2 == 0.0 {
        return Ok(0.0);
    }
    Ok((x1.powf(alpha) + x2.powf(alpha) - (x1 + x2).powf(alpha)) / (2.0 - 2f64.powf(alpha)))
}

/// Finite-threshold upper exceedance distribution
/// `H_v(x₁v, x₂v) = [G(x₁v) + G(x₂v) - G((x₁+x₂)v)] / [2G(v) - G(2v)]`
/// with `G = 1 - ψ`, evaluated cancellation-free via expm1.
pub fn upper_threshold_finite(gen: &Generator, v: f64, x1: f64, x2: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::Domain(format!("threshold must be positive, got {v}")));
    }
    if !(0.0..=1.0).contains(&x1) || !(0.0..=1.0).contains(&x2) {
        return Err(Error::Domain("scaled coordinates must lie in [0,1]".into()));
    }
    let g = |s: f64| -gen.log_eval(s).exp_m1();
    let denom = 2.0 * g(v) - g(2.0 * v);
    if !(denom > 0.0) {
        return Err(Error::Domain(format!(
            "normalization 2G(v) - G(2v) vanishes at v = {v}"
        )));
    }
    Ok((g(x1 * v) + g(x2 * v) - g((x1 + x2) * v)) / denom)
}
