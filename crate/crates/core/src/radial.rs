//! Radial distributions and the Williamson d-transform.
//!
//! The forward transform of a radial law `F` on `(0, ∞)` is
//! `W_d F(x) = E[(1 - x/R)₊^{d-1}]`, the survival function of `R·S₁` with
//! `S₁ ~ Beta(1, d-1)` independent of `R ~ F`. It is invertible:
//! `F(x) = 1 - Σ_{k=0}^{d-1} (-1)^k x^k ψ⁽ᵏ⁾(x)/k!`.

use std::io::BufRead;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gen::{DMax, Generator, GeneratorKernel};
use crate::numeric::{self, adaptive_quad};
use crate::sampler::streams;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RadialKind {
    Discrete,
    Parametric,
    FromGenerator,
    Empirical,
}

/// A distribution of the radial part `R > 0`: CDF, generalized inverse and
/// inverse-CDF sampler, plus optional log-survival evaluators for
/// tail-accurate work (the gap form takes `δ = x* - x` directly, which is
/// the only way to keep relative accuracy as δ shrinks past √ε).
#[derive(Clone)]
pub struct RadialDistribution {
    cdf: RealFn,
    quantile: RealFn,
    log_survival: Option<RealFn>,
    log_survival_gap: Option<RealFn>,
    support_right_endpoint: f64,
    kind: RadialKind,
    tag: String,
    atoms: Option<DiscreteRadial>,
}

impl std::fmt::Debug for RadialDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RadialDistribution({})", self.tag)
    }
}

/// Finitely many atoms `(location > 0, probability)`, locations strictly
/// increasing, probabilities summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteRadial {
    atoms: Vec<(f64, f64)>,
}

impl DiscreteRadial {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Domain("discrete radial needs at least one atom".into()));
        }
        let mut total = 0.0;
        for (i, &(loc, p)) in atoms.iter().enumerate() {
            if !(loc > 0.0) {
                return Err(Error::Domain(format!(
                    "atom locations must be positive, got {loc}"
                )));
            }
            if i > 0 && loc <= atoms[i - 1].0 {
                return Err(Error::Domain(
                    "atom locations must be strictly increasing".into(),
                ));
            }
            if p < 0.0 {
                return Err(Error::Domain(format!(
                    "atom probabilities must be non-negative, got {p}"
                )));
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "atom probabilities must sum to 1 within 1e-12, got {total}"
            )));
        }
        Ok(DiscreteRadial { atoms })
    }

    /// Parse the radial spec file format: a `location,probability` header
    /// followed by one atom per line.
    pub fn from_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty radial spec file".into()))?
            .map_err(|e| Error::Parse(e.to_string()))?;
        if header.trim() != "location,probability" {
            return Err(Error::Parse(format!(
                "expected header 'location,probability', got '{}'",
                header.trim()
            )));
        }
        let mut atoms = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let parse = |s: Option<&str>| -> Result<f64> {
                s.ok_or_else(|| Error::Parse(format!("line {}: missing field", lineno + 2)))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 2)))
            };
            let loc = parse(parts.next())?;
            let p = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(Error::Parse(format!("line {}: too many fields", lineno + 2)));
            }
            atoms.push((loc, p));
        }
        DiscreteRadial::new(atoms)
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .take_while(|&&(loc, _)| loc <= x)
            .map(|&(_, p)| p)
            .sum()
    }

    pub fn quantile(&self, p: f64) -> f64 {
        let mut acc = 0.0;
        for &(loc, mass) in &self.atoms {
            acc += mass;
            if acc >= p {
                return loc;
            }
        }
        self.atoms.last().unwrap().0
    }
}

impl RadialDistribution {
    fn new(
        cdf: RealFn,
        quantile: RealFn,
        log_survival: Option<RealFn>,
        endpoint: f64,
        kind: RadialKind,
        tag: impl Into<String>,
        atoms: Option<DiscreteRadial>,
    ) -> Self {
        RadialDistribution {
            cdf,
            quantile,
            log_survival,
            log_survival_gap: None,
            support_right_endpoint: endpoint,
            kind,
            tag: tag.into(),
            atoms,
        }
    }

    fn with_log_survival_gap(mut self, f: RealFn) -> Self {
        self.log_survival_gap = Some(f);
        self
    }

    pub fn discrete(atoms: DiscreteRadial) -> Self {
        let endpoint = atoms.atoms.last().unwrap().0;
        let a1 = atoms.clone();
        let a2 = atoms.clone();
        let a3 = atoms.clone();
        RadialDistribution::new(
            Arc::new(move |x| a1.cdf(x)),
            Arc::new(move |p| a2.quantile(p)),
            Some(Arc::new(move |x| {
                let s: f64 = a3
                    .atoms
                    .iter()
                    .filter(|&&(loc, _)| loc > x)
                    .map(|&(_, p)| p)
                    .sum();
                s.ln()
            })),
            endpoint,
            RadialKind::Discrete,
            format!("discrete({} atoms)", atoms.atoms.len()),
            Some(atoms),
        )
    }

    pub fn point_mass(c: f64) -> Self {
        let atoms = DiscreteRadial::new(vec![(c, 1.0)]).expect("point mass is a valid radial");
        let mut r = RadialDistribution::discrete(atoms);
        r.tag = format!("point-mass({c})");
        r
    }

    pub fn uniform01() -> Self {
        RadialDistribution::new(
            Arc::new(|x: f64| x.clamp(0.0, 1.0)),
            Arc::new(|p: f64| p.clamp(0.0, 1.0)),
            Some(Arc::new(|x: f64| {
                if x >= 1.0 {
                    f64::NEG_INFINITY
                } else {
                    (-x).ln_1p()
                }
            })),
            1.0,
            RadialKind::Parametric,
            "uniform01",
            None,
        )
        .with_log_survival_gap(Arc::new(|delta: f64| delta.ln()))
    }

    /// Pareto with survival `x^{-alpha}` on `[1, ∞)`.
    pub fn pareto(alpha: f64) -> Self {
        assert!(alpha > 0.0, "pareto index must be positive");
        RadialDistribution::new(
            Arc::new(move |x: f64| {
                if x <= 1.0 {
                    0.0
                } else {
                    -(-alpha * x.ln()).exp_m1()
                }
            }),
            Arc::new(move |p: f64| (1.0 - p).powf(-1.0 / alpha)),
            Some(Arc::new(move |x: f64| {
                if x <= 1.0 {
                    0.0
                } else {
                    -alpha * x.ln()
                }
            })),
            f64::INFINITY,
            RadialKind::Parametric,
            format!("pareto({alpha})"),
            None,
        )
    }

    /// Standard exponential.
    pub fn exponential() -> Self {
        RadialDistribution::new(
            Arc::new(|x: f64| -(-x).exp_m1()),
            Arc::new(|p: f64| -(-p).ln_1p()),
            Some(Arc::new(|x: f64| -x)),
            f64::INFINITY,
            RadialKind::Parametric,
            "exponential",
            None,
        )
    }

    /// |Z| for standard normal Z. Survival integrates the density locally so
    /// the far tail keeps relative accuracy.
    pub fn half_normal() -> Self {
        fn survival(x: f64) -> f64 {
            if x <= 0.0 {
                return 1.0;
            }
            let density = |t: f64| (2.0 / std::f64::consts::PI).sqrt() * (-0.5 * t * t).exp();
            let window = 50.0 / x.max(1.0) + 5.0;
            adaptive_quad(density, x, x + window, 0.0, 1e-12).value
        }
        RadialDistribution::new(
            Arc::new(|x: f64| 1.0 - survival(x)),
            Arc::new(|p: f64| {
                numeric::bisect_increasing(|x| 1.0 - survival(x), 0.0, 45.0, p.clamp(0.0, 1.0))
            }),
            Some(Arc::new(|x: f64| survival(x).ln())),
            f64::INFINITY,
            RadialKind::Parametric,
            "half-normal",
            None,
        )
    }

    /// R with 1/R Pareto(a): `F(x) = x^a` on `(0, 1]`.
    pub fn inverse_pareto(a: f64) -> Self {
        assert!(a > 0.0);
        RadialDistribution::new(
            Arc::new(move |x: f64| x.clamp(0.0, 1.0).powf(a)),
            Arc::new(move |p: f64| p.clamp(0.0, 1.0).powf(1.0 / a)),
            Some(Arc::new(move |x: f64| {
                if x >= 1.0 {
                    f64::NEG_INFINITY
                } else {
                    (-x.clamp(0.0, 1.0).powf(a)).ln_1p()
                }
            })),
            1.0,
            RadialKind::Parametric,
            format!("inverse-pareto({a})"),
            None,
        )
        .with_log_survival_gap(Arc::new(move |delta: f64| {
            (-(a * (-delta).ln_1p()).exp_m1()).ln()
        }))
    }

    /// Step CDF of a sample; diagnostics only.
    pub fn empirical(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() || samples.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::Domain(
                "empirical radial needs a non-empty, strictly positive sample".into(),
            ));
        }
        samples.sort_by(|a, b| a.total_cmp(b));
        let endpoint = *samples.last().unwrap();
        let n = samples.len();
        let s1 = samples.clone();
        let s2 = samples;
        RadialDistribution::new(
            Arc::new(move |x: f64| s1.partition_point(|&v| v <= x) as f64 / n as f64),
            Arc::new(move |p: f64| {
                let k = ((p * n as f64).ceil() as usize).clamp(1, n);
                s2[k - 1]
            }),
            None,
            endpoint,
            RadialKind::Empirical,
            format!("empirical(n={n})"),
            None,
        )
        .pipe_ok()
    }

    fn pipe_ok(self) -> Result<Self> {
        Ok(self)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        (self.cdf)(x)
    }

    pub fn quantile(&self, p: f64) -> f64 {
        (self.quantile)(p)
    }

    pub fn log_survival(&self, x: f64) -> Option<f64> {
        self.log_survival.as_ref().map(|f| f(x))
    }

    pub fn support_right_endpoint(&self) -> f64 {
        self.support_right_endpoint
    }

    pub fn kind(&self) -> RadialKind {
        self.kind
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub(crate) fn discrete_atoms(&self) -> Option<&DiscreteRadial> {
        self.atoms.as_ref()
    }

    /// Inverse-CDF sampling from a named substream; deterministic in
    /// `(count, seed)`.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<f64> {
        let q = Arc::clone(&self.quantile);
        streams::fill_stream(seed, streams::RADIAL_STREAM, count, move |u| q(u))
    }
}

/// `W_d F(x) = E[(1 - x/R)₊^{d-1}]`; exact sum for discrete radials,
/// adaptive quadrature on the probability scale otherwise.
pub fn forward_transform(radial: &RadialDistribution, d: usize, x: f64) -> Result<f64> {
    assert!(d >= 2, "transform order must be >= 2");
    assert!(x >= 0.0, "transform argument must be >= 0");
    if x == 0.0 {
        return Ok(1.0);
    }
    if let Some(discrete) = radial.discrete_atoms() {
        let v = discrete
            .atoms()
            .iter()
            .map(|&(t, p)| {
                let base = (1.0 - x / t).max(0.0);
                p * base.powi(d as i32 - 1)
            })
            .sum();
        return Ok(v);
    }
    if x >= radial.support_right_endpoint() {
        return Ok(0.0);
    }
    let p0 = radial.cdf(x).clamp(0.0, 1.0);
    let integrand = |p: f64| {
        let q = radial.quantile(p);
        if q <= x {
            0.0
        } else {
            (1.0 - x / q).powi(d as i32 - 1)
        }
    };
    let r = adaptive_quad(integrand, p0, 1.0, 1e-10, 1e-12);
    if !r.converged {
        return Err(Error::Numeric {
            msg: format!("forward transform quadrature did not converge at x = {x:.6e}"),
            achieved: r.abs_error,
        });
    }
    Ok(r.value.clamp(0.0, 1.0))
}

/// `1 - W_d F(x) = E[1 - (1 - x/R)₊^{d-1}]`, accurate relative to its own
/// (possibly tiny) size. Used for origin asymptotics.
pub fn forward_transform_complement(
    radial: &RadialDistribution,
    d: usize,
    x: f64,
) -> Result<f64> {
    assert!(d >= 2 && x >= 0.0);
    if x == 0.0 {
        return Ok(0.0);
    }
    if let Some(discrete) = radial.discrete_atoms() {
        let v = discrete
            .atoms()
            .iter()
            .map(|&(t, p)| {
                let base = (1.0 - x / t).max(0.0);
                p * (1.0 - base.powi(d as i32 - 1))
            })
            .sum();
        return Ok(v);
    }
    // The integrand is identically 1 below p₀ = F(x); add that plateau mass
    // exactly and integrate the decaying part piecewise between the
    // probability levels of x, 2x, 4x, …, so each piece sees a bounded
    // quantile range no matter how steep F^← is.
    let p0 = radial.cdf(x).clamp(0.0, 1.0);
    let integrand = |p: f64| {
        let q = radial.quantile(p);
        if q <= x {
            1.0
        } else {
            let base = 1.0 - x / q;
            -((d as f64 - 1.0) * base.ln()).exp_m1()
        }
    };
    let mut total = p0;
    let mut err = 0.0;
    let mut lo = p0;
    let mut level = 2.0 * x;
    loop {
        let hi = if level >= radial.support_right_endpoint() {
            1.0
        } else {
            radial.cdf(level).clamp(0.0, 1.0)
        };
        if hi > lo {
            let r = adaptive_quad(&integrand, lo, hi, 1e-300, 1e-11);
            total += r.value;
            err += r.abs_error;
            lo = hi;
        }
        if hi >= 1.0 {
            break;
        }
        level *= 2.0;
    }
    // The summed Gauss/Kronrod gaps are a conservative bound that bottoms
    // out near the rounding floor of the many tiny pieces; only flag a
    // genuinely broken integral.
    if err > 1e-4 * total.abs() + 1e-300 {
        return Err(Error::Numeric {
            msg: format!("complement transform quadrature did not converge at x = {x:.6e}"),
            achieved: err,
        });
    }
    Ok(total.max(0.0))
}

/// `log W_d F(x)` through the survival-function form
/// `W_d F(x) = (d-1) ∫₀¹ F̄(x/s) (1-s)^{d-2} ds`, which stays accurate
/// relative to `F̄(x)` arbitrarily far into the tail. Needs `log_survival`.
pub fn log_forward_transform(radial: &RadialDistribution, d: usize, x: f64) -> Result<f64> {
    assert!(d >= 2 && x >= 0.0);
    if x == 0.0 {
        return Ok(0.0);
    }
    let log_sf = radial
        .log_survival
        .as_ref()
        .ok_or_else(|| Error::Unsupported("radial has no log-survival evaluator".into()))?;
    let endpoint = radial.support_right_endpoint();
    if x >= endpoint {
        return Ok(f64::NEG_INFINITY);
    }
    let anchor = log_sf(x);
    let lo = if endpoint.is_finite() {
        (x / endpoint).min(1.0)
    } else {
        0.0
    };
    let integrand = |s: f64| {
        if s <= lo {
            return 0.0;
        }
        let ratio = (log_sf(x / s) - anchor).exp();
        ratio * (1.0 - s).powi(d as i32 - 2)
    };
    let r = adaptive_quad(integrand, lo, 1.0, 1e-300, 1e-11);
    if !r.converged {
        return Err(Error::Numeric {
            msg: format!("log forward transform quadrature did not converge at x = {x:.6e}"),
            achieved: r.abs_error,
        });
    }
    Ok(anchor + ((d as f64 - 1.0) * r.value).ln())
}

/// `log W_d F(x* - δ)` for radials with a finite right endpoint, written
/// entirely in gap coordinates so δ may shrink to ulp scale:
/// `W_d F(x*-δ) = (d-1)(x*-δ) ∫₀^δ F̄(x*-τ) (δ-τ)^{d-2}/(x*-τ)^d dτ`.
/// Needs the gap-form survival evaluator.
pub fn log_forward_transform_at_gap(
    radial: &RadialDistribution,
    d: usize,
    delta: f64,
) -> Result<f64> {
    assert!(d >= 2 && delta >= 0.0);
    let xstar = radial.support_right_endpoint();
    if !xstar.is_finite() {
        return Err(Error::Domain(
            "gap-form transform needs a finite right endpoint".into(),
        ));
    }
    let log_gap = radial
        .log_survival_gap
        .as_ref()
        .ok_or_else(|| Error::Unsupported("radial has no gap-form survival evaluator".into()))?;
    if delta == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let anchor = log_gap(delta);
    // τ = δ·w keeps the domain fixed at [0, 1].
    let integrand = |w: f64| {
        let tau = delta * w;
        let ratio = (log_gap(tau) - anchor).exp();
        ratio * (1.0 - w).powi(d as i32 - 2) / (xstar - tau).powi(d as i32)
    };
    let r = adaptive_quad(integrand, 0.0, 1.0, 1e-300, 1e-11);
    if !r.converged {
        return Err(Error::Numeric {
            msg: format!("gap-form transform quadrature did not converge at delta = {delta:.6e}"),
            achieved: r.abs_error,
        });
    }
    let coeff = (d as f64 - 1.0) * (xstar - delta) * delta.powi(d as i32 - 1);
    Ok(anchor + (coeff * r.value).ln())
}

/// Survival `Σ_{k=0}^{d-1} (-1)^k x^k ψ⁽ᵏ⁾(x) / k!` of the radial law
/// recovered from a generator. All terms are non-negative for d-monotone ψ,
/// so the sum keeps relative accuracy. Also returns the accumulated
/// finite-difference error bound.
pub(crate) fn survival_from_derivatives(
    gen: &Generator,
    d: usize,
    x: f64,
) -> Result<(f64, f64)> {
    if x == 0.0 {
        return Ok((1.0, 0.0));
    }
    let mut total = gen.eval(x);
    let mut err = 0.0;
    let mut factorial = 1.0;
    for k in 1..d {
        factorial *= k as f64;
        let (v, e) = gen.derivative_with_error(k, x)?;
        let signed = if k % 2 == 0 { v } else { -v };
        let weight = x.powi(k as i32) / factorial;
        total += weight * signed;
        err += weight * e;
    }
    Ok((total, err))
}

/// Unclamped inverse Williamson transform value and its error bound.
pub(crate) fn inverse_transform_raw(gen: &Generator, d: usize, x: f64) -> Result<(f64, f64)> {
    let (survival, err) = survival_from_derivatives(gen, d, x)?;
    Ok((1.0 - survival, err))
}

/// `F(x) = 1 - Σ_{k=0}^{d-1} (-1)^k x^k ψ⁽ᵏ⁾(x)/k!`, clamped into `[0, 1]`
/// when the excursion is below 1e-8; larger excursions are returned raw so
/// d-monotonicity checks can see them.
pub fn inverse_transform(gen: &Generator, d: usize, x: f64) -> Result<f64> {
    assert!(d >= 2 && x >= 0.0);
    let (f, _) = inverse_transform_raw(gen, d, x)?;
    if (-1e-8..0.0).contains(&f) {
        return Ok(0.0);
    }
    if (1.0..=1.0 + 1e-8).contains(&f) {
        return Ok(1.0);
    }
    Ok(f)
}

/// Monte Carlo estimate of `P[R·S₁ > x]` with `S₁ = 1 - V^{1/(d-1)}`,
/// `V` uniform. Returns the estimate and its binomial standard error;
/// deterministic given the seed.
pub fn mixture_survival_mc(
    radial: &RadialDistribution,
    d: usize,
    x: f64,
    n: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if n < 100 {
        return Err(Error::Domain(format!("need n >= 100 draws, got {n}")));
    }
    let r_draws = radial.sample(n, seed);
    let exponent = 1.0 / (d as f64 - 1.0);
    let v_draws = streams::fill_stream(seed, streams::MIXTURE_STREAM, n, move |u| {
        1.0 - u.powf(exponent)
    });
    let hits = r_draws
        .iter()
        .zip(&v_draws)
        .filter(|&(&r, &s)| r * s > x)
        .count();
    let p = hits as f64 / n as f64;
    let stderr = (p * (1.0 - p) / n as f64).sqrt();
    Ok((p, stderr))
}

/// Raw moment `E[S₁^α] = Π_{k=1}^{d-1} (1 + α/k)^{-1}` of the Beta(1, d-1)
/// first simplex coordinate.
pub fn beta_moment(d: usize, alpha: f64) -> f64 {
    assert!(d >= 2, "dimension must be >= 2");
    assert!(alpha >= 0.0, "moment order must be >= 0");
    (1..d).map(|k| 1.0 / (1.0 + alpha / k as f64)).product()
}

/// The exactly d-monotone generator `W_d F` of a discrete radial law, with
/// analytic piecewise-polynomial derivatives.
pub fn williamson_generator(atoms: &DiscreteRadial, d: usize) -> Generator {
    assert!(d >= 2);
    Generator::from_kernel(Arc::new(DiscreteWd {
        atoms: atoms.clone(),
        d,
    }))
}

struct DiscreteWd {
    atoms: DiscreteRadial,
    d: usize,
}

impl GeneratorKernel for DiscreteWd {
    fn eval(&self, x: f64) -> f64 {
        self.atoms
            .atoms()
            .iter()
            .map(|&(t, p)| {
                let base = (1.0 - x / t).max(0.0);
                p * base.powi(self.d as i32 - 1)
            })
            .sum()
    }

    fn log_eval(&self, x: f64) -> f64 {
        self.eval(x).ln()
    }

    fn derivative(&self, k: usize, x: f64) -> Option<f64> {
        if k > self.d - 1 {
            return Some(0.0);
        }
        // ψ⁽ᵏ⁾(x) = Σ p (d-1)…(d-k) (-1/t)^k (1 - x/t)₊^{d-1-k}
        let mut falling = 1.0;
        for j in 0..k {
            falling *= (self.d - 1 - j) as f64;
        }
        let v: f64 = self
            .atoms
            .atoms()
            .iter()
            .map(|&(t, p)| {
                if x >= t {
                    return 0.0;
                }
                let base = 1.0 - x / t;
                p * falling * t.powi(-(k as i32)) * base.powi((self.d - 1 - k) as i32)
            })
            .sum();
        Some(if k % 2 == 0 { v } else { -v })
    }

    fn pseudo_inverse(&self, _u: f64) -> Option<f64> {
        None
    }

    fn right_endpoint(&self) -> f64 {
        self.atoms.atoms().last().unwrap().0
    }

    fn d_max(&self) -> DMax {
        DMax::Finite(self.d)
    }

    fn family_tag(&self) -> &'static str {
        "williamson-discrete"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("d", self.d as f64)]
    }
}

/// The radial distribution recovered from a generator at dimension `d`:
/// CDF by the inversion formula, quantile and sampler by bisection over a
/// memoized monotone cache.
pub fn radial_from_generator(gen: &Generator, d: usize) -> Result<RadialDistribution> {
    let endpoint = gen.right_endpoint();
    // Probe the derivative path once so closure failures are impossible.
    let probe_x = if endpoint.is_finite() { endpoint * 0.5 } else { 1.0 };
    survival_from_derivatives(gen, d, probe_x)?;

    let g1 = gen.clone();
    let cdf: RealFn = Arc::new(move |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= g1.right_endpoint() {
            return 1.0;
        }
        let (f, _) = inverse_transform_raw(&g1, d, x).expect("probed derivative path failed");
        f.clamp(0.0, 1.0)
    });

    // Monotone cache of (x, F(x)) bracketing the useful quantile range.
    let mut x_hi = if endpoint.is_finite() { endpoint } else { 1.0 };
    if !endpoint.is_finite() {
        while cdf(x_hi) < 1.0 - 1e-13 && x_hi < 1e300 {
            x_hi *= 2.0;
        }
    }
    let mut x_lo = x_hi;
    while cdf(x_lo) > 1e-13 && x_lo > 1e-100 {
        x_lo /= 2.0;
    }
    const CACHE: usize = 1024;
    let ratio = (x_hi / x_lo).powf(1.0 / CACHE as f64);
    let mut cache = Vec::with_capacity(CACHE + 2);
    cache.push((0.0, 0.0));
    let mut running_max = 0.0f64;
    let mut x = x_lo;
    for _ in 0..=CACHE {
        running_max = running_max.max(cdf(x));
        cache.push((x, running_max));
        x *= ratio;
    }

    let g2 = gen.clone();
    let cdf_for_quantile = cdf.clone();
    let quantile: RealFn = Arc::new(move |p: f64| {
        let p = p.clamp(0.0, 1.0);
        if p <= 0.0 {
            return 0.0;
        }
        if p >= 1.0 {
            return g2.right_endpoint();
        }
        let idx = cache.partition_point(|&(_, f)| f < p);
        let (lo, hi) = if idx == 0 {
            (0.0, cache[0].0.max(1e-300))
        } else if idx >= cache.len() {
            let mut hi = cache.last().unwrap().0;
            let lo = hi;
            while cdf_for_quantile(hi) < p && hi < 1e300 {
                hi *= 2.0;
            }
            (lo, hi)
        } else {
            (cache[idx - 1].0, cache[idx].0)
        };
        numeric::bisect_increasing(|x| cdf_for_quantile(x), lo, hi, p)
    });

    let g3 = gen.clone();
    let log_survival: RealFn = Arc::new(move |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        match survival_from_derivatives(&g3, d, x) {
            Ok((s, _)) => s.max(0.0).ln(),
            Err(_) => f64::NEG_INFINITY,
        }
    });

    Ok(RadialDistribution::new(
        cdf,
        quantile,
        Some(log_survival),
        endpoint,
        RadialKind::FromGenerator,
        format!("radial[{} d={d}]", gen.label()),
        None,
    ))
}
