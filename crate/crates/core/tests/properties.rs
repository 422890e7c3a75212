//! Cross-module invariants: copula axioms and scale invariance, tail
//! transfer between radial laws and their transforms, minima closure, and
//! sampling consistency.

use archimax::copula::{eval_copula, rectangle_mass, EmpiricalCopula};
use archimax::gen::{make_family, FamilySpec, Generator};
use archimax::numeric::stats;
use archimax::radial::{
    beta_moment, forward_transform, forward_transform_complement, log_forward_transform,
    log_forward_transform_at_gap, radial_from_generator, RadialDistribution,
};
use archimax::regvar::{generator_rv_index, rv_index_log, RvLocation};
use archimax::sampler::{sample_copula, sample_l1ns};

fn built_in_pairs() -> Vec<(Generator, usize)> {
    vec![
        (make_family(FamilySpec::Clayton { theta: 0.5 }, 3).unwrap(), 3),
        (make_family(FamilySpec::Clayton { theta: 2.0 }, 2).unwrap(), 2),
        (make_family(FamilySpec::Clayton { theta: -0.25 }, 4).unwrap(), 4),
        (make_family(FamilySpec::Gumbel { theta: 2.0 }, 3).unwrap(), 3),
        (make_family(FamilySpec::Independence, 4).unwrap(), 4),
        (make_family(FamilySpec::Countermonotone, 2).unwrap(), 2),
    ]
}

#[test]
fn copula_scale_invariance_on_grids() {
    for (gen, d) in built_in_pairs() {
        for c in [0.5, 2.0, 10.0] {
            let scaled = gen.rescale(c).unwrap();
            let steps = [0.1, 0.3, 0.5, 0.7, 0.9];
            let mut index = vec![0usize; d];
            loop {
                let u: Vec<f64> = index.iter().map(|&i| steps[i]).collect();
                let a = eval_copula(&gen, &u);
                let b = eval_copula(&scaled, &u);
                assert!(
                    (a - b).abs() <= 1e-12,
                    "{} c={c} u={u:?}: {a} vs {b}",
                    gen.label()
                );
                // Odometer over the 5^d grid.
                let mut k = 0;
                while k < d {
                    index[k] += 1;
                    if index[k] < steps.len() {
                        break;
                    }
                    index[k] = 0;
                    k += 1;
                }
                if k == d {
                    break;
                }
            }
        }
    }
}

#[test]
fn frechet_bounds_hold_on_grids() {
    for (gen, d) in built_in_pairs() {
        let steps = [0.15, 0.4, 0.65, 0.9];
        let mut index = vec![0usize; d];
        loop {
            let u: Vec<f64> = index.iter().map(|&i| steps[i]).collect();
            let c = eval_copula(&gen, &u);
            let lower = (u.iter().sum::<f64>() - d as f64 + 1.0).max(0.0);
            let upper = u.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(
                c >= lower - 1e-12 && c <= upper + 1e-12,
                "{} u={u:?}: {c} not in [{lower}, {upper}]",
                gen.label()
            );
            let mut k = 0;
            while k < d {
                index[k] += 1;
                if index[k] < steps.len() {
                    break;
                }
                index[k] = 0;
                k += 1;
            }
            if k == d {
                break;
            }
        }
    }
}

#[test]
fn rectangle_masses_are_nonnegative_for_valid_generators() {
    // Deterministic pseudo-random rectangles from a simple counter hash.
    let mut state = 0x1234_5678_9abc_def0u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for (gen, d) in built_in_pairs() {
        for _ in 0..50 {
            let mut lower = Vec::with_capacity(d);
            let mut upper = Vec::with_capacity(d);
            for _ in 0..d {
                let a = next();
                let b = next();
                lower.push(a.min(b));
                upper.push(a.max(b));
            }
            let mass = rectangle_mass(&gen, &lower, &upper).unwrap();
            assert!(
                mass >= -1e-10,
                "{} rectangle {lower:?}..{upper:?}: mass {mass}",
                gen.label()
            );
        }
    }
}

#[test]
fn sampler_consistency_with_pointwise_copula() {
    // sup over a 9-point diagonal-ish grid of |empirical - C| at n = 10^6.
    let cases = [
        FamilySpec::Clayton { theta: 0.5 },
        FamilySpec::Clayton { theta: 2.0 },
        FamilySpec::Gumbel { theta: 2.0 },
    ];
    for (i, spec) in cases.iter().enumerate() {
        let gen = make_family(*spec, 2).unwrap();
        let m = sample_copula(&gen, 2, 1_000_000, 1000 + i as u64).unwrap();
        let ecop = EmpiricalCopula::from_matrix(&m);
        let grid = [
            (0.1, 0.1),
            (0.25, 0.25),
            (0.5, 0.5),
            (0.75, 0.75),
            (0.9, 0.9),
            (0.2, 0.7),
            (0.7, 0.2),
            (0.4, 0.85),
            (0.85, 0.4),
        ];
        let mut sup = 0.0f64;
        for &(u1, u2) in &grid {
            let diff = (ecop.eval(&[u1, u2]) - eval_copula(&gen, &[u1, u2])).abs();
            sup = sup.max(diff);
        }
        assert!(sup <= 0.004, "{spec:?}: sup deviation {sup}");
    }
}

#[test]
fn radial_recovery_from_l1ns_row_sums() {
    // ‖X‖₁ of an ℓ1-norm symmetric sample recovers the radial law.
    let radial = RadialDistribution::pareto(3.0);
    let n = 100_000;
    let m = sample_l1ns(&radial, 3, n, 55);
    let sums: Vec<f64> = (0..n).map(|i| m.row(i).iter().sum()).collect();
    let d = stats::ks_cdf(&sums, |x| radial.cdf(x));
    assert!(d <= 1.63 / (n as f64).sqrt(), "KS statistic {d}");
}

#[test]
fn rv_transfer_at_infinity_for_pareto_radials() {
    // F̄ ∈ RV_{-α} makes ψ ∈ RV_{-α} with ψ/F̄ → E[S₁^α].
    let d = 2;
    for alpha in [0.5, 1.0, 2.0] {
        let radial = RadialDistribution::pareto(alpha);
        let est = rv_index_log(
            |x| log_forward_transform(&radial, d, x).unwrap(),
            RvLocation::Infinity,
            None,
        );
        let got = est.index.value().expect("converged");
        assert!((got - alpha).abs() <= 0.05, "alpha={alpha}: index {got}");

        let x = 1e5;
        let ratio =
            (log_forward_transform(&radial, d, x).unwrap() - radial.log_survival(x).unwrap()).exp();
        let expected = beta_moment(d, alpha);
        assert!(
            (ratio / expected - 1.0).abs() <= 0.02,
            "alpha={alpha}: psi/Fbar = {ratio}, want {expected}"
        );
    }
}

#[test]
fn endpoint_transfer_for_uniform_radial() {
    // F̄(1 - 1/x) ∈ RV_{-1} and ψ(1 - 1/x) ∈ RV_{-d}: the gap is d-1.
    // Both sides evaluate through gap coordinates (δ = 1 - x is exact for
    // the dyadic endpoint grid), which is what keeps the deep-δ probes
    // meaningful.
    let radial = RadialDistribution::uniform01();
    for d in [2usize, 3] {
        let f_est = rv_index_log(
            |x| radial.log_survival(x).unwrap(),
            RvLocation::Endpoint,
            Some(1.0),
        );
        let psi_est = rv_index_log(
            |x| log_forward_transform_at_gap(&radial, d, 1.0 - x).unwrap(),
            RvLocation::Endpoint,
            Some(1.0),
        );
        let f_idx = f_est.index.value().expect("radial side converged");
        let p_idx = psi_est.index.value().expect("transform side converged");
        assert!(
            ((p_idx - f_idx) - (d as f64 - 1.0)).abs() <= 0.05,
            "d={d}: gap {} (indices {f_idx}, {p_idx})",
            p_idx - f_idx
        );
    }
}

#[test]
fn origin_transfer_for_inverse_pareto_radials() {
    // 1/R ∈ RV_{-a}: the origin index of 1-ψ(1/x) is a for a < 1 and
    // saturates at 1 for a > 1.
    let d = 3;
    for (a, expected) in [(0.3, 0.3), (0.7, 0.7), (1.5, 1.0), (3.0, 1.0)] {
        let radial = RadialDistribution::inverse_pareto(a);
        let est = rv_index_log(
            |x| {
                forward_transform_complement(&radial, d, 1.0 / x)
                    .unwrap()
                    .ln()
            },
            RvLocation::Infinity,
            None,
        );
        let got = est.index.value().expect("converged");
        assert!(
            (got - expected).abs() <= 0.05,
            "a={a}: origin index {got}, want {expected}"
        );
    }
}

#[test]
fn endpoint_derivative_indices_exceed_d_minus_one() {
    // Non-strict generators: the endpoint index of ψ is at least d-1.
    let cases = [
        (make_family(FamilySpec::Clayton { theta: -0.4 }, 3).unwrap(), 3usize),
        (make_family(FamilySpec::Clayton { theta: -0.2 }, 5).unwrap(), 5),
        (make_family(FamilySpec::Countermonotone, 2).unwrap(), 2),
    ];
    for (gen, d) in &cases {
        let est = generator_rv_index(gen, RvLocation::Endpoint);
        let idx = est.index.value().expect("converged");
        assert!(
            idx >= *d as f64 - 1.0 - 0.05,
            "{}: endpoint index {idx} below d-1 = {}",
            gen.label(),
            d - 1
        );
    }
}

#[test]
fn minima_closure_matches_power_generator() {
    // Componentwise 5-block minima of an ℓ1-norm symmetric sample have
    // survival copula generated by ψ⁵.
    let gen = make_family(FamilySpec::Clayton { theta: 1.0 }, 2).unwrap();
    let radial = radial_from_generator(&gen, 2).unwrap();
    let block = 5usize;
    let n_blocks = 200_000usize;
    let m = sample_l1ns(&radial, 2, block * n_blocks, 77);
    let mut neg_min1 = Vec::with_capacity(n_blocks);
    let mut neg_min2 = Vec::with_capacity(n_blocks);
    for b in 0..n_blocks {
        let mut w1 = f64::INFINITY;
        let mut w2 = f64::INFINITY;
        for i in 0..block {
            let row = m.row(b * block + i);
            w1 = w1.min(row[0]);
            w2 = w2.min(row[1]);
        }
        // The ordinary copula of -W is the survival copula of W.
        neg_min1.push(-w1);
        neg_min2.push(-w2);
    }
    let ecop = EmpiricalCopula::from_columns(&[neg_min1, neg_min2]);
    let powered = gen.power(block as u32);
    for &(u1, u2) in &[(0.2, 0.2), (0.5, 0.5), (0.8, 0.8), (0.3, 0.7)] {
        let emp = ecop.eval(&[u1, u2]);
        let theory = eval_copula(&powered, &[u1, u2]);
        assert!(
            (emp - theory).abs() <= 0.01,
            "({u1},{u2}): empirical {emp} vs {theory}"
        );
    }
}

#[test]
fn forward_transform_agrees_with_mc_across_radials() {
    use archimax::radial::mixture_survival_mc;
    let radials = [
        RadialDistribution::uniform01(),
        RadialDistribution::exponential(),
        RadialDistribution::pareto(2.0),
    ];
    for (i, radial) in radials.iter().enumerate() {
        for &(d, x) in &[(2usize, 0.4f64), (3, 1.1)] {
            let exact = forward_transform(radial, d, x).unwrap();
            let (mc, se) = mixture_survival_mc(radial, d, x, 200_000, 900 + i as u64).unwrap();
            assert!(
                (exact - mc).abs() <= 4.0 * se.max(1e-9),
                "{} d={d} x={x}: {exact} vs {mc} ± {se}",
                radial.tag()
            );
        }
    }
}

mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn right_inverse_holds_for_random_parameters(
            theta in 0.05f64..8.0,
            u in 0.001f64..1.0,
        ) {
            let clayton = make_family(FamilySpec::Clayton { theta }, 2).unwrap();
            prop_assert!((clayton.eval(clayton.pseudo_inverse(u)) - u).abs() <= 1e-10);
            let gumbel = make_family(FamilySpec::Gumbel { theta: 1.0 + theta }, 2).unwrap();
            prop_assert!((gumbel.eval(gumbel.pseudo_inverse(u)) - u).abs() <= 1e-10);
        }

        #[test]
        fn rescaled_copulas_agree_pointwise(
            theta in 0.2f64..5.0,
            c in 0.01f64..100.0,
            u1 in 0.01f64..1.0,
            u2 in 0.01f64..1.0,
        ) {
            let gen = make_family(FamilySpec::Clayton { theta }, 2).unwrap();
            let scaled = gen.rescale(c).unwrap();
            let a = eval_copula(&gen, &[u1, u2]);
            let b = eval_copula(&scaled, &[u1, u2]);
            prop_assert!((a - b).abs() <= 1e-11, "{a} vs {b}");
        }

        #[test]
        fn simplex_rows_stay_normalized(d in 2usize..7, seed in 0u64..1000) {
            let m = archimax::sampler::sample_simplex(d, 64, seed);
            for i in 0..m.n {
                let s: f64 = m.row(i).iter().sum();
                prop_assert!((s - 1.0).abs() <= 1e-12);
            }
        }
    }
}
