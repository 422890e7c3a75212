//! Small sample statistics used by the test suites and diagnostics.

/// Two-sided Kolmogorov–Smirnov statistic of a sample against the uniform(0,1)
/// distribution: `sup_x |F_n(x) - x|`.
pub fn ks_uniform(sample: &[f64]) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &u) in sorted.iter().enumerate() {
        let hi = (i as f64 + 1.0) / n - u;
        let lo = u - i as f64 / n;
        d = d.max(hi).max(lo);
    }
    d
}

/// Two-sided KS statistic against an arbitrary CDF.
pub fn ks_cdf(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let u = cdf(x);
        d = d.max((i as f64 + 1.0) / n - u).max(u - i as f64 / n);
    }
    d
}

/// Mean and standard error of the mean.
pub fn mean_stderr(sample: &[f64]) -> (f64, f64) {
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let var = sample.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Pearson correlation coefficient.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    cov / (va.sqrt() * vb.sqrt())
}
