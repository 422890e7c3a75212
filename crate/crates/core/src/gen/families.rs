//! Kernel implementations of the built-in families and the power/rescale
//! wrappers.

use std::sync::Arc;

use super::{oscillator_coefficients, DMax, GeneratorKernel};

/// `ψ(x) = (1 + θx)^{-1/θ}`; `θ = 0` means `e^{-x}`. Non-strict for θ < 0
/// with right endpoint `-1/θ`.
pub(crate) struct Clayton {
    theta: f64,
    endpoint: f64,
}

impl Clayton {
    pub fn new(theta: f64) -> Self {
        let endpoint = if theta < 0.0 { -1.0 / theta } else { f64::INFINITY };
        Clayton { theta, endpoint }
    }

    /// `1 + θx`, evaluated as `(x* - x)/x*` near a finite endpoint where the
    /// direct form cancels.
    fn base(&self, x: f64) -> f64 {
        if self.theta < 0.0 && x > 0.5 * self.endpoint {
            (self.endpoint - x) / self.endpoint
        } else {
            1.0 + self.theta * x
        }
    }
}

impl GeneratorKernel for Clayton {
    fn eval(&self, x: f64) -> f64 {
        self.log_eval(x).exp()
    }

    fn log_eval(&self, x: f64) -> f64 {
        let t = self.theta;
        if t == 0.0 {
            return -x;
        }
        if x >= self.endpoint {
            return f64::NEG_INFINITY;
        }
        if t < 0.0 && x > 0.5 * self.endpoint {
            return -t.recip() * self.base(x).ln();
        }
        -t.recip() * (t * x).ln_1p()
    }

    fn log_eval_shifted(&self, x: f64, v: f64) -> f64 {
        let t = self.theta;
        if t == 0.0 {
            return -x;
        }
        if x + v >= self.endpoint {
            return f64::NEG_INFINITY;
        }
        // log ψ(x+v) - log ψ(v) = -(1/θ) log(1 + θx/(1+θv))
        -t.recip() * (t * x / (1.0 + t * v)).ln_1p()
    }

    fn derivative(&self, k: usize, x: f64) -> Option<f64> {
        let t = self.theta;
        if t == 0.0 {
            let v = (-x).exp();
            return Some(if k % 2 == 0 { v } else { -v });
        }
        if x >= self.endpoint {
            return Some(0.0);
        }
        // ψ⁽ᵏ⁾(x) = (-1)^k (1+θx)^{-1/θ-k} Π_{j=0}^{k-1} (1 + jθ)
        let mut coeff = 1.0;
        for j in 0..k {
            coeff *= 1.0 + j as f64 * t;
        }
        let v = self.base(x).powf(-t.recip() - k as f64) * coeff;
        Some(if k % 2 == 0 { v } else { -v })
    }

    fn pseudo_inverse(&self, u: f64) -> Option<f64> {
        let t = self.theta;
        if t == 0.0 {
            return Some(-u.ln());
        }
        // (u^{-θ} - 1)/θ, with expm1 keeping u near 1 accurate.
        Some((-t * u.ln()).exp_m1() / t)
    }

    fn right_endpoint(&self) -> f64 {
        self.endpoint
    }

    fn d_max(&self) -> DMax {
        if self.theta >= 0.0 {
            DMax::Unbounded
        } else {
            // d-monotone exactly for θ >= -1/(d-1), i.e. d <= 1 + 1/|θ|.
            DMax::Finite((1.0 - 1.0 / self.theta).floor() as usize)
        }
    }

    fn family_tag(&self) -> &'static str {
        "clayton"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("theta", self.theta)]
    }
}

/// `ψ(x) = exp(-x^{1/θ})`, θ ≥ 1.
pub(crate) struct Gumbel {
    theta: f64,
}

impl Gumbel {
    pub fn new(theta: f64) -> Self {
        Gumbel { theta }
    }

    /// Coefficients of Q_k in ψ⁽ᵏ⁾(x) = e^{-t} x^{-k} Q_k(t), t = x^{1/θ},
    /// from Q_{k+1} = (t/θ)(Q_k' - Q_k) - k Q_k, Q_0 = 1.
    fn q_polynomial(&self, k: usize) -> Vec<f64> {
        let a = 1.0 / self.theta;
        let mut q = vec![1.0];
        for step in 0..k {
            let mut next = vec![0.0; q.len() + 1];
            for (m, &c) in q.iter().enumerate() {
                // a·t·Q' contributes a·m·c at power m; -a·t·Q contributes
                // -a·c at power m+1; -k·Q contributes -k·c at power m.
                next[m] += a * m as f64 * c - step as f64 * c;
                next[m + 1] -= a * c;
            }
            q = next;
        }
        q
    }
}

impl GeneratorKernel for Gumbel {
    fn eval(&self, x: f64) -> f64 {
        self.log_eval(x).exp()
    }

    fn log_eval(&self, x: f64) -> f64 {
        -x.powf(1.0 / self.theta)
    }

    fn log_eval_shifted(&self, x: f64, v: f64) -> f64 {
        if v == 0.0 {
            return self.log_eval(x);
        }
        // v^{1/θ}((1 + x/v)^{1/θ} - 1), stable for x ≪ v.
        let a = 1.0 / self.theta;
        -v.powf(a) * (a * (x / v).ln_1p()).exp_m1()
    }

    fn derivative(&self, k: usize, x: f64) -> Option<f64> {
        if x <= 0.0 {
            return None;
        }
        let t = x.powf(1.0 / self.theta);
        let q = self.q_polynomial(k);
        let mut poly = 0.0;
        for &c in q.iter().rev() {
            poly = poly * t + c;
        }
        Some((-t).exp() * x.powi(-(k as i32)) * poly)
    }

    fn pseudo_inverse(&self, u: f64) -> Option<f64> {
        Some((-u.ln()).powf(self.theta))
    }

    fn right_endpoint(&self) -> f64 {
        f64::INFINITY
    }

    fn d_max(&self) -> DMax {
        DMax::Unbounded
    }

    fn family_tag(&self) -> &'static str {
        "gumbel"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("theta", self.theta)]
    }
}

/// `ψ(x) = e^{-x}`.
pub(crate) struct Independence;

impl GeneratorKernel for Independence {
    fn eval(&self, x: f64) -> f64 {
        (-x).exp()
    }

    fn log_eval(&self, x: f64) -> f64 {
        -x
    }

    fn log_eval_shifted(&self, x: f64, _v: f64) -> f64 {
        -x
    }

    fn derivative(&self, k: usize, x: f64) -> Option<f64> {
        let v = (-x).exp();
        Some(if k % 2 == 0 { v } else { -v })
    }

    fn pseudo_inverse(&self, u: f64) -> Option<f64> {
        Some(-u.ln())
    }

    fn right_endpoint(&self) -> f64 {
        f64::INFINITY
    }

    fn d_max(&self) -> DMax {
        DMax::Unbounded
    }

    fn family_tag(&self) -> &'static str {
        "independence"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        Vec::new()
    }
}

/// `ψ(x) = (1 - x)₊`. 2-monotone only.
pub(crate) struct Countermonotone;

impl GeneratorKernel for Countermonotone {
    fn eval(&self, x: f64) -> f64 {
        (1.0 - x).max(0.0)
    }

    fn log_eval(&self, x: f64) -> f64 {
        if x >= 1.0 {
            f64::NEG_INFINITY
        } else {
            (-x).ln_1p()
        }
    }

    fn log_eval_shifted(&self, x: f64, v: f64) -> f64 {
        let gap = 1.0 - v;
        if x >= gap {
            f64::NEG_INFINITY
        } else {
            (-x / gap).ln_1p()
        }
    }

    fn derivative(&self, k: usize, x: f64) -> Option<f64> {
        // Right-continuous version beyond the kink.
        if k == 1 && x < 1.0 {
            Some(-1.0)
        } else {
            Some(0.0)
        }
    }

    fn pseudo_inverse(&self, u: f64) -> Option<f64> {
        Some(1.0 - u)
    }

    fn right_endpoint(&self) -> f64 {
        1.0
    }

    fn d_max(&self) -> DMax {
        DMax::Finite(2)
    }

    fn family_tag(&self) -> &'static str {
        "countermonotone"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        Vec::new()
    }
}

/// `ψ(x) = θ / log(e^θ + x)`, θ > 0: slowly varying at infinity.
/// Derivatives are finite-difference only.
pub(crate) struct Log19 {
    theta: f64,
    exp_theta: f64,
}

impl Log19 {
    pub fn new(theta: f64) -> Self {
        Log19 {
            theta,
            exp_theta: theta.exp(),
        }
    }
}

impl GeneratorKernel for Log19 {
    fn eval(&self, x: f64) -> f64 {
        // log(e^θ + x) = θ + log1p(x e^{-θ}) keeps tiny x from washing out.
        self.theta / (self.theta + (x / self.exp_theta).ln_1p())
    }

    fn log_eval(&self, x: f64) -> f64 {
        // -log1p(log1p(x e^{-θ})/θ): exact even when x e^{-θ} is sub-ulp.
        -((x / self.exp_theta).ln_1p() / self.theta).ln_1p()
    }

    fn log_eval_shifted(&self, x: f64, v: f64) -> f64 {
        // log(e^θ+v+x) - log(e^θ+v) = log1p(x/(e^θ+v))
        let denom = self.theta + (v / self.exp_theta).ln_1p();
        -((x / (self.exp_theta + v)).ln_1p() / denom).ln_1p()
    }

    fn derivative(&self, _k: usize, _x: f64) -> Option<f64> {
        None
    }

    fn pseudo_inverse(&self, u: f64) -> Option<f64> {
        Some(((self.theta / u).exp() - self.exp_theta).max(0.0))
    }

    fn right_endpoint(&self) -> f64 {
        f64::INFINITY
    }

    fn d_max(&self) -> DMax {
        DMax::Finite(2)
    }

    fn family_tag(&self) -> &'static str {
        "log19"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("theta", self.theta)]
    }
}

/// `ψ(x) = (1 + a sin(log(1+x)))/(1+x)` with `a = (d-1)!/c_{d-1}`.
/// `ψ(cx)/ψ(x)` oscillates forever at infinity.
pub(crate) struct Oscillating {
    d: usize,
    a: f64,
    c: Vec<f64>,
    phi: Vec<f64>,
}

impl Oscillating {
    pub fn new(d: usize) -> Self {
        let params = super::compute_oscillator_params(d);
        Oscillating {
            d,
            a: params.a,
            c: params.c,
            phi: params.phi,
        }
    }

    fn coefficients_up_to(&self, k: usize) -> (Vec<f64>, Vec<f64>) {
        if k < self.c.len() {
            (self.c.clone(), self.phi.clone())
        } else {
            oscillator_coefficients(k)
        }
    }
}

impl GeneratorKernel for Oscillating {
    fn eval(&self, x: f64) -> f64 {
        (1.0 + self.a * x.ln_1p().sin()) / (1.0 + x)
    }

    fn log_eval(&self, x: f64) -> f64 {
        (self.a * x.ln_1p().sin()).ln_1p() - x.ln_1p()
    }

    fn derivative(&self, k: usize, x: f64) -> Option<f64> {
        // ψ⁽ᵏ⁾(x) = (-1)^k (k! + a c_k sin(φ_k + log(1+x)))/(1+x)^{k+1}
        let (c, phi) = self.coefficients_up_to(k);
        let factorial: f64 = (1..=k).map(|j| j as f64).product();
        let y = x.ln_1p();
        let v = (factorial + self.a * c[k] * (phi[k] + y).sin()) / (1.0 + x).powi(k as i32 + 1);
        Some(if k % 2 == 0 { v } else { -v })
    }

    fn pseudo_inverse(&self, _u: f64) -> Option<f64> {
        None
    }

    fn right_endpoint(&self) -> f64 {
        f64::INFINITY
    }

    fn d_max(&self) -> DMax {
        DMax::Finite(self.d)
    }

    fn family_tag(&self) -> &'static str {
        "oscillating"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("d", self.d as f64), ("a", self.a)]
    }
}

/// `x ↦ ψ(x)ⁿ`: the survival-copula generator of componentwise n-block
/// minima.
pub(crate) struct Power {
    pub inner: Arc<dyn GeneratorKernel>,
    pub n: u32,
}

impl GeneratorKernel for Power {
    fn eval(&self, x: f64) -> f64 {
        self.log_eval(x).exp()
    }

    fn log_eval(&self, x: f64) -> f64 {
        self.n as f64 * self.inner.log_eval(x)
    }

    fn log_eval_shifted(&self, x: f64, v: f64) -> f64 {
        self.n as f64 * self.inner.log_eval_shifted(x, v)
    }

    fn derivative(&self, k: usize, x: f64) -> Option<f64> {
        if k == 1 {
            let d1 = self.inner.derivative(1, x)?;
            let n = self.n as f64;
            Some(n * ((n - 1.0) * self.inner.log_eval(x)).exp() * d1)
        } else {
            None
        }
    }

    fn pseudo_inverse(&self, u: f64) -> Option<f64> {
        self.inner.pseudo_inverse((u.ln() / self.n as f64).exp())
    }

    fn right_endpoint(&self) -> f64 {
        self.inner.right_endpoint()
    }

    fn d_max(&self) -> DMax {
        self.inner.d_max()
    }

    fn family_tag(&self) -> &'static str {
        "power"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        let mut p = self.inner.parameters();
        p.push(("n", self.n as f64));
        p
    }
}

/// `x ↦ ψ(cx)`, c > 0. Same copula, radial part scaled by 1/c.
pub(crate) struct Rescale {
    pub inner: Arc<dyn GeneratorKernel>,
    pub c: f64,
}

impl GeneratorKernel for Rescale {
    fn eval(&self, x: f64) -> f64 {
        self.inner.eval(self.c * x)
    }

    fn log_eval(&self, x: f64) -> f64 {
        self.inner.log_eval(self.c * x)
    }

    fn log_eval_shifted(&self, x: f64, v: f64) -> f64 {
        self.inner.log_eval_shifted(self.c * x, self.c * v)
    }

    fn derivative(&self, k: usize, x: f64) -> Option<f64> {
        self.inner
            .derivative(k, self.c * x)
            .map(|v| v * self.c.powi(k as i32))
    }

    fn pseudo_inverse(&self, u: f64) -> Option<f64> {
        self.inner.pseudo_inverse(u).map(|x| x / self.c)
    }

    fn right_endpoint(&self) -> f64 {
        self.inner.right_endpoint() / self.c
    }

    fn d_max(&self) -> DMax {
        self.inner.d_max()
    }

    fn family_tag(&self) -> &'static str {
        "rescale"
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        let mut p = self.inner.parameters();
        p.push(("c", self.c));
        p
    }
}
