//! Pointwise copula and survival evaluation, rectangle masses and the
//! rank-based empirical copula.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gen::Generator;
use crate::sampler::{SampleMatrix, SampleSpace};

/// `C(u) = ψ(φ(u₁) + … + φ(u_d))`, exactly zero on the zero set
/// `Σφ(u_i) ≥ x*` of non-strict generators.
pub fn eval_copula(gen: &Generator, u: &[f64]) -> f64 {
    debug_assert!(u.len() >= 2, "copula needs at least two coordinates");
    let mut s = 0.0;
    for &ui in u {
        if ui <= 0.0 {
            return 0.0;
        }
        s += gen.pseudo_inverse(ui.min(1.0));
    }
    let endpoint = gen.right_endpoint();
    // Absolute slack keeps non-strict generators from evaluating ψ just
    // past the boundary where rounding could produce a negative value.
    if s >= endpoint - 1e-14 {
        return 0.0;
    }
    gen.eval(s)
}

/// log C(u); `-inf` on the zero set.
pub(crate) fn log_eval_copula(gen: &Generator, u: &[f64]) -> f64 {
    let mut s = 0.0;
    for &ui in u {
        if ui <= 0.0 {
            return f64::NEG_INFINITY;
        }
        s += gen.pseudo_inverse(ui.min(1.0));
    }
    if s >= gen.right_endpoint() - 1e-14 {
        return f64::NEG_INFINITY;
    }
    gen.log_eval(s)
}

/// Joint survival `H̄(x) = ψ(x₁ + … + x_d)` of the ℓ1-norm symmetric vector.
pub fn eval_survival(gen: &Generator, x: &[f64]) -> f64 {
    debug_assert!(x.iter().all(|&v| v >= 0.0));
    gen.eval(x.iter().sum())
}

/// C-volume of the rectangle `(lower, upper]` by inclusion–exclusion over
/// its 2^d corners. Non-negative (up to rounding) exactly when the
/// generator is d-monotone at this dimension.
pub fn rectangle_mass(gen: &Generator, lower: &[f64], upper: &[f64]) -> Result<f64> {
    let d = lower.len();
    if upper.len() != d {
        return Err(Error::Domain("lower/upper dimension mismatch".into()));
    }
    if d > 12 {
        return Err(Error::Unsupported(format!(
            "rectangle mass uses 2^d corner evaluations; d = {d} exceeds the cap of 12"
        )));
    }
    for j in 0..d {
        if !(0.0..=1.0).contains(&lower[j]) || !(0.0..=1.0).contains(&upper[j]) {
            return Err(Error::Domain("rectangle corners must lie in [0,1]".into()));
        }
        if lower[j] > upper[j] {
            return Err(Error::Domain(format!(
                "lower[{j}] = {} exceeds upper[{j}] = {}",
                lower[j], upper[j]
            )));
        }
    }
    let mut corner = vec![0.0; d];
    let mut mass = 0.0;
    for bits in 0..(1usize << d) {
        let mut lows = 0u32;
        for j in 0..d {
            if bits & (1 << j) != 0 {
                corner[j] = lower[j];
                lows += 1;
            } else {
                corner[j] = upper[j];
            }
        }
        let sign = if lows % 2 == 0 { 1.0 } else { -1.0 };
        mass += sign * eval_copula(gen, &corner);
    }
    Ok(mass)
}

/// Rank matrix of a sample: each column holds the ranks `1..n` of the
/// corresponding margin, ties broken by input order.
#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalCopula {
    ranks: Vec<u32>,
    pub n: usize,
    pub d: usize,
    /// Number of tied adjacent pairs encountered while ranking. Continuous
    /// models should produce none; a positive count flags degenerate input.
    pub tie_count: usize,
}

impl EmpiricalCopula {
    pub fn from_matrix(m: &SampleMatrix) -> Self {
        let columns: Vec<Vec<f64>> = (0..m.d).map(|j| m.column(j)).collect();
        EmpiricalCopula::from_columns(&columns)
    }

    /// Rank a sample given one vector per margin (all the same length).
    pub fn from_columns(columns: &[Vec<f64>]) -> Self {
        let d = columns.len();
        assert!(d >= 1, "need at least one margin");
        let n = columns[0].len();
        assert!(columns.iter().all(|c| c.len() == n));
        let mut ranks = vec![0u32; n * d];
        let mut tie_count = 0usize;
        for (j, col) in columns.iter().enumerate() {
            let mut order: Vec<usize> = (0..n).collect();
            // Stable sort keeps first-occurrence order on ties.
            order.sort_by(|&a, &b| col[a].total_cmp(&col[b]));
            for (pos, &i) in order.iter().enumerate() {
                ranks[i * d + j] = pos as u32 + 1;
                if pos > 0 && col[i] == col[order[pos - 1]] {
                    tie_count += 1;
                }
            }
        }
        EmpiricalCopula { ranks, n, d, tie_count }
    }

    /// `(1/n) Σ_i 1{rank_{ij}/n ≤ u_j for every j}`.
    pub fn eval(&self, u: &[f64]) -> f64 {
        assert_eq!(u.len(), self.d);
        let n = self.n as f64;
        let mut hits = 0usize;
        'rows: for i in 0..self.n {
            for j in 0..self.d {
                if self.ranks[i * self.d + j] as f64 / n > u[j] {
                    continue 'rows;
                }
            }
            hits += 1;
        }
        hits as f64 / n
    }
}

/// Map a copula sample to its survival-copula sample: `u ↦ 1 - u` per entry.
pub fn survival_copula_transform(m: &SampleMatrix) -> SampleMatrix {
    assert_eq!(m.space, SampleSpace::Copula, "expected a copula-space sample");
    let flipped: Vec<f64> = m.data().iter().map(|&u| 1.0 - u).collect();
    SampleMatrix::from_raw(
        flipped,
        m.n,
        m.d,
        SampleSpace::Copula,
        m.seed,
        format!("{} (survival)", m.provenance),
    )
}
