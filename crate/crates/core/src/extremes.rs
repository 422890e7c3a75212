//! Extreme-value limit machinery: rescaled copula iterates, the Gumbel-limit
//! parameter, the Galambos copula, exponent-measure integrals and the
//! Weibull-domain normalizing constants.

use serde::Serialize;

use crate::copula::{log_eval_copula, EmpiricalCopula};
use crate::error::{Error, Result};
use crate::gen::Generator;
use crate::numeric::serialize_f64;
use crate::radial::RadialDistribution;
use crate::regvar::{rv_index_log, RvEstimate, RvIndex, RvLocation};
use crate::sampler::{sample_l1ns, SampleMatrix, SampleSpace};

/// `C^n(u^{1/n})`, the copula of componentwise n-block extremes, computed in
/// log space. Extreme-value copulas are exactly its fixed points.
pub fn ev_rescaled_copula(gen: &Generator, n: u64, u: &[f64]) -> f64 {
    assert!(n >= 1);
    if u.iter().any(|&ui| ui <= 0.0) {
        return 0.0;
    }
    let root: Vec<f64> = u.iter().map(|&ui| (ui.ln() / n as f64).exp()).collect();
    (n as f64 * log_eval_copula(gen, &root)).exp()
}

/// Bivariate Gumbel copula value; tolerates the sub-1 estimates that a
/// numeric θ can carry.
fn gumbel_copula(theta: f64, u: &[f64]) -> f64 {
    let s: f64 = u.iter().map(|&ui| (-ui.ln()).powf(theta)).sum();
    (-s.powf(1.0 / theta)).exp()
}

/// Extreme-value limit report: the Gumbel parameter recovered from the
/// origin behavior of the generator plus the observed convergence of the
/// rescaled iterates toward that limit.
#[derive(Debug, Clone, Serialize)]
pub struct EvReport {
    /// `θ = 1/α` for the origin index α of `1-ψ(1/x)`; `None` when the
    /// index does not converge.
    pub theta: Option<f64>,
    pub converged: bool,
    /// `(n, sup |C^n(u^{1/n}) - C^Gu_θ(u)|)` over the evaluation grid.
    pub sup_deviation_by_n: Vec<(u64, f64)>,
    /// Marginal grid replicated on both axes.
    pub grid: Vec<f64>,
    pub index_estimate: RvEstimate,
}

/// Estimate the Gumbel-copula limit of `C^n(u^{1/n})` as n grows.
pub fn gumbel_limit_theta(gen: &Generator) -> EvReport {
    let est = rv_index_log(
        |x| (-gen.log_eval(1.0 / x).exp_m1()).ln(),
        RvLocation::Infinity,
        None,
    );
    let grid: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    match est.index {
        RvIndex::Finite(alpha) if alpha > 0.0 => {
            let theta = 1.0 / alpha;
            let sup_deviation_by_n = [1u64, 10, 100, 1000, 10_000]
                .iter()
                .map(|&n| {
                    let mut sup: f64 = 0.0;
                    for &u1 in &grid {
                        for &u2 in &grid {
                            let a = ev_rescaled_copula(gen, n, &[u1, u2]);
                            let b = gumbel_copula(theta, &[u1, u2]);
                            sup = sup.max((a - b).abs());
                        }
                    }
                    (n, sup)
                })
                .collect();
            EvReport {
                theta: Some(theta),
                converged: true,
                sup_deviation_by_n,
                grid,
                index_estimate: est,
            }
        }
        _ => EvReport {
            theta: None,
            converged: false,
            sup_deviation_by_n: Vec::new(),
            grid,
            index_estimate: est,
        },
    }
}

/// Galambos copula
/// `u₁u₂·exp{((-log u₁)^{-1/α} + (-log u₂)^{-1/α})^{-α}}`, the EV limit of
/// componentwise maxima of heavy-tailed ℓ1-norm symmetric vectors.
pub fn galambos_eval(u1: f64, u2: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("galambos needs alpha > 0, got {alpha}")));
    }
    if !(0.0..=1.0).contains(&u1) || !(0.0..=1.0).contains(&u2) {
        return Err(Error::Domain("galambos arguments must lie in [0,1]".into()));
    }
    if u1 == 0.0 || u2 == 0.0 {
        return Ok(0.0);
    }
    if u1 == 1.0 {
        return Ok(u2);
    }
    if u2 == 1.0 {
        return Ok(u1);
    }
    let a = (-u1.ln()).powf(-1.0 / alpha);
    let b = (-u2.ln()).powf(-1.0 / alpha);
    Ok(u1 * u2 * ((a + b).powf(-alpha)).exp())
}

/// Spectral data of the multivariate regular-variation limit: tail index α
/// with the spectral measure fixed to uniform on the simplex.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExponentMeasureSpec {
    pub alpha: f64,
    pub d: usize,
}

impl ExponentMeasureSpec {
    pub fn new(alpha: f64, d: usize) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::Domain(format!("tail index must be positive, got {alpha}")));
        }
        if d < 2 {
            return Err(Error::Domain(format!("dimension must be >= 2, got {d}")));
        }
        Ok(ExponentMeasureSpec { alpha, d })
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExponentMeasureValue {
    #[serde(serialize_with = "serialize_f64")]
    pub value: f64,
    /// Present for the Monte Carlo path (d ≥ 3).
    pub stderr: Option<f64>,
}

/// Marginal coefficient `c_α = ∫ w₁^α σ(dw) = (1+α)^{-1}`: the limit
/// marginal is `G₁(x) = exp(-c_α x^{-α})`.
pub fn exponent_marginal_coefficient(alpha: f64) -> f64 {
    1.0 / (1.0 + alpha)
}

/// Exponent-measure mass `μ([0, x]^c) = ∫ max_i (w_i/x_i)^α σ(dw)`:
/// closed form for d = 2, stratified Monte Carlo over the simplex for
/// d ≥ 3 (fixed point count, deterministic internal seed).
pub fn exponent_measure(spec: &ExponentMeasureSpec, x: &[f64]) -> Result<ExponentMeasureValue> {
    if x.len() != spec.d {
        return Err(Error::Domain(format!(
            "expected {} coordinates, got {}",
            spec.d,
            x.len()
        )));
    }
    if x.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Domain("coordinates must be positive".into()));
    }
    let alpha = spec.alpha;
    if spec.d == 2 {
        // V-form of the bivariate integral evaluated at (x₁^{-α}, x₂^{-α}).
        let value =
            (x[0].powf(-alpha) + x[1].powf(-alpha) - (x[0] + x[1]).powf(-alpha)) / (1.0 + alpha);
        return Ok(ExponentMeasureValue { value, stderr: None });
    }
    const MC_POINTS: usize = 1_000_000;
    const MC_SEED: u64 = 0x5EC7_0A11;
    let d = spec.d;
    let m = crate::sampler::sample_simplex(d, MC_POINTS, MC_SEED);
    // Average the integrand over coordinate permutations of each draw; the
    // spectral measure is exchangeable, so this is unbiased and cuts the
    // argmax-driven variance.
    let perms = permutations(d.min(4));
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut w = vec![0.0f64; d];
    for i in 0..MC_POINTS {
        let row = m.row(i);
        let mut avg = 0.0;
        if d <= 4 {
            for perm in &perms {
                for (slot, &src) in perm.iter().enumerate() {
                    w[slot] = row[src];
                }
                avg += integrand_max(&w, x, alpha);
            }
            avg /= perms.len() as f64;
        } else {
            avg = integrand_max(row, x, alpha);
        }
        sum += avg;
        sum_sq += avg * avg;
    }
    let n = MC_POINTS as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(ExponentMeasureValue {
        value: mean,
        stderr: Some((var / n).sqrt()),
    })
}

fn integrand_max(w: &[f64], x: &[f64], alpha: f64) -> f64 {
    w.iter()
        .zip(x)
        .map(|(&wi, &xi)| (wi / xi).powf(alpha))
        .fold(0.0, f64::max)
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..d).collect(), &mut out);
    out
}

/// Weibull-domain normalizing constant `c_n = x* - (1/F̄)^←(n)`, i.e.
/// `x* - F^←(1 - 1/n)`, for radial laws with a finite right endpoint.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormalizingConstant {
    pub n: u64,
    pub value: f64,
    /// A zero constant signals a degenerate (atom-at-endpoint) radial law.
    pub degenerate: bool,
}

pub fn normalizing_constants(radial: &RadialDistribution, n: u64) -> Result<NormalizingConstant> {
    let endpoint = radial.support_right_endpoint();
    if !endpoint.is_finite() {
        return Err(Error::Domain(format!(
            "radial '{}' has an infinite right endpoint; Weibull normalization undefined",
            radial.tag()
        )));
    }
    if n == 0 {
        return Err(Error::Domain("block count must be at least 1".into()));
    }
    let q = radial.quantile(1.0 - 1.0 / n as f64);
    let value = endpoint - q;
    Ok(NormalizingConstant {
        n,
        value,
        degenerate: value == 0.0,
    })
}

/// One grid point of the block-maxima comparison.
#[derive(Debug, Clone, Serialize)]
pub struct MaximaEvPoint {
    pub u1: f64,
    pub u2: f64,
    pub empirical: f64,
    pub reference: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximaEvReport {
    pub alpha: f64,
    pub block: usize,
    pub n_blocks: usize,
    pub points: Vec<MaximaEvPoint>,
    pub max_abs_deviation: f64,
}

/// Sample bivariate ℓ1-norm symmetric data with the given radial law, form
/// componentwise block maxima, and compare their empirical copula against
/// the Galambos copula with tail index `alpha` at the grid points.
pub fn maxima_ev_check(
    radial: &RadialDistribution,
    alpha: f64,
    block: usize,
    n_blocks: usize,
    seed: u64,
    grid: &[(f64, f64)],
) -> Result<MaximaEvReport> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("tail index must be positive, got {alpha}")));
    }
    if block == 0 || n_blocks == 0 {
        return Err(Error::Domain("block and n_blocks must be positive".into()));
    }
    let raw = sample_l1ns(radial, 2, block * n_blocks, seed);
    let mut maxima = vec![0.0f64; n_blocks * 2];
    for b in 0..n_blocks {
        let mut m1 = f64::NEG_INFINITY;
        let mut m2 = f64::NEG_INFINITY;
        for i in 0..block {
            let row = raw.row(b * block + i);
            m1 = m1.max(row[0]);
            m2 = m2.max(row[1]);
        }
        maxima[b * 2] = m1;
        maxima[b * 2 + 1] = m2;
    }
    let matrix = SampleMatrix::from_raw(
        maxima,
        n_blocks,
        2,
        SampleSpace::L1ns,
        seed,
        format!("block-maxima[{}] block={block}", radial.tag()),
    );
    let ecop = EmpiricalCopula::from_matrix(&matrix);
    let mut max_dev = 0.0f64;
    let points = grid
        .iter()
        .map(|&(u1, u2)| {
            let empirical = ecop.eval(&[u1, u2]);
            let reference = galambos_eval(u1, u2, alpha)?;
            let stderr = (reference * (1.0 - reference) / n_blocks as f64).sqrt();
            max_dev = max_dev.max((empirical - reference).abs());
            Ok(MaximaEvPoint {
                u1,
                u2,
                empirical,
                reference,
                stderr,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MaximaEvReport {
        alpha,
        block,
        n_blocks,
        points,
        max_abs_deviation: max_dev,
    })
}
