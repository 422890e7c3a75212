use archimax::gen::{make_family, FamilySpec};
use archimax::radial::{forward_transform_complement, RadialDistribution};
use archimax::regvar::{generator_rv_index, RvLocation};
use archimax::numeric::adaptive_quad;

fn main() {
    let r = RadialDistribution::inverse_pareto(0.3);
    for j in [20, 30, 40, 44, 50] {
        let x = 2f64.powi(-j);
        match forward_transform_complement(&r, 3, x) {
            Ok(v) => println!("j={j} x={x:.3e}: complement {v:.6e}"),
            Err(e) => println!("j={j} x={x:.3e}: ERR {e}"),
        }
    }
    let x = 2f64.powi(-44);
    let d = 3usize;
    let p0: f64 = r.cdf(x);
    println!("p0 = F(x) = {p0:.6e}");
    let integrand = |p: f64| {
        let q = r.quantile(p);
        if q <= x { 1.0 } else {
            let base: f64 = 1.0 - x / q;
            -((d as f64 - 1.0) * base.ln()).exp_m1()
        }
    };
    for p in [p0*1.01, p0*2.0, p0*10.0, 1e-2, 0.1, 0.5] {
        println!("  integrand({p:.3e}) = {:.6e}", integrand(p));
    }
    let q = adaptive_quad(integrand, p0, 1.0, 1e-300, 1e-9);
    println!("quad: value {:.6e} err {:.3e} converged {}", q.value, q.abs_error, q.converged);

    for (theta, d) in [(-0.4f64, 3usize), (-0.2, 5)] {
        let gen = make_family(FamilySpec::Clayton { theta }, d).unwrap();
        let est = generator_rv_index(&gen, RvLocation::Endpoint);
        println!("clayton({theta}) endpoint: {:?} osc {:.3e}", est.index, est.oscillation);
        for &(s, l) in est.trace.iter().rev().take(8) {
            println!("   delta={s:.3e} local={l:.8}");
        }
    }
}
