//! Randomized invariant checks over the public surface, one seeded suite per
//! test plus a few structural properties that sit outside the shared suites.

mod property_suites;

use property_suites as suites;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rilab_core::fit::fit_rates;
use rilab_core::kernels::KernelSpec;
use rilab_core::nikolskii::{nf_witness_value, NfParams, SigmaRule};
use rilab_core::spaces::{fundamental_function, SpaceSpec};

#[test]
fn norm_homogeneity_holds() {
    assert_eq!(suites::homogeneity(100, 11), 100);
}

#[test]
fn triangle_inequality_holds() {
    assert_eq!(suites::triangle(100, 22), 100);
}

#[test]
fn fundamental_matches_indicators() {
    assert_eq!(suites::fundamental_indicator(100, 33), 100);
}

#[test]
fn luxemburg_constraint_saturates() {
    assert_eq!(suites::luxemburg_residual(100, 44), 100);
}

#[test]
fn nf_evaluations_recompose() {
    assert_eq!(suites::nf_recomposition(100, 55), 100);
}

/// With X = Y = L_p the norms and sigma powers cancel, leaving the exact
/// constant (K2/K1)^(1/p) for any witness and degree.
#[test]
fn k_scaling_is_witness_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    for i in 0..100 {
        let p = rng.gen_range(1.0..5.0);
        let x = SpaceSpec::lp(p).unwrap();
        let params = NfParams {
            k1: rng.gen_range(0.2..4.0),
            k2: rng.gen_range(0.2..4.0),
            sigma_rule: SigmaRule::Degree,
        };
        let spec = if rng.gen_bool(0.5) {
            KernelSpec::FejerContinuous { n: rng.gen_range(4..=64) }
        } else {
            KernelSpec::Power { n: rng.gen_range(4..=16), m: rng.gen_range(1..=3) }
        };
        let e = nf_witness_value(&x, &x, &spec, &params, 1e-9).unwrap();
        let expect = (params.k2 / params.k1).powf(1.0 / p);
        assert!(
            (e.value - expect).abs() <= 1e-9 * expect,
            "case {i}: {} vs {expect} for p = {p}",
            e.value
        );
    }
}

/// Fundamental functions are nondecreasing with nonincreasing slope ratio
/// (quasi-concavity) on every family.
#[test]
fn fundamental_functions_are_quasi_concave() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..100 {
        let space = sample(&mut rng, i);
        let d1 = 10f64.powf(rng.gen_range(-6.0..0.0));
        let d2 = d1 * 10f64.powf(rng.gen_range(0.1..2.0));
        let d2 = d2.min(1.0);
        if d2 <= d1 {
            continue;
        }
        let f1 = fundamental_function(&space, d1).unwrap();
        let f2 = fundamental_function(&space, d2).unwrap();
        assert!(f1 <= f2 * (1.0 + 1e-9), "case {i}: {space} decreasing: {f1} > {f2}");
        assert!(
            f1 / d1 >= (f2 / d2) * (1.0 - 1e-9),
            "case {i}: {space} not quasi-concave: {f1}/{d1} < {f2}/{d2}"
        );
    }
}

/// The log-log model refit on half the grid predicts the held-out half.
#[test]
fn rate_fit_survives_holdout() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for i in 0..100 {
        let e1 = rng.gen_range(-1.0..1.0);
        let e2 = rng.gen_range(-1.5..1.5);
        let c0 = rng.gen_range(-1.0..1.0);
        let n_grid: Vec<u32> = (4..=14).map(|k| 1u32 << k).collect();
        let sigma: Vec<f64> = n_grid.iter().map(|&n| n as f64).collect();
        let ratios: Vec<f64> = sigma
            .iter()
            .map(|&s| {
                let noise = 1.0 + 1e-6 * rng.gen_range(-1.0..1.0);
                (c0 + e1 * s.ln() + e2 * s.ln().ln()).exp() * noise
            })
            .collect();
        let fit = fit_rates(&n_grid, &sigma, &ratios).unwrap();
        assert!((fit.e1 - e1).abs() < 1e-3, "case {i}: e1 {} vs {e1}", fit.e1);
        assert!((fit.e2 - e2).abs() < 5e-3, "case {i}: e2 {} vs {e2}", fit.e2);
        let half = fit.even_half().unwrap();
        for (k, (&s, &r)) in sigma.iter().zip(&ratios).enumerate() {
            if k % 2 == 1 {
                let predicted = (half.c0 + half.e1 * s.ln() + half.e2 * s.ln().ln()).exp();
                assert!(
                    (predicted - r).abs() <= 1e-4 * r,
                    "case {i}: held-out point {k} missed: {predicted} vs {r}"
                );
            }
        }
    }
}

fn sample(rng: &mut ChaCha8Rng, i: usize) -> SpaceSpec {
    use rilab_core::grand::GrandSpec;
    use rilab_core::lorentz::LorentzPhi;
    use rilab_core::orlicz::OrliczPhi;
    match i % 5 {
        0 => SpaceSpec::lp(rng.gen_range(1.0..6.0)).unwrap(),
        1 => {
            let a = rng.gen_range(1.0..3.0);
            let b = a + rng.gen_range(0.5..3.0);
            SpaceSpec::Grand(
                GrandSpec::zeta(a, b, rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0)).unwrap(),
            )
        }
        2 => SpaceSpec::Orlicz(OrliczPhi::power(rng.gen_range(1.2..4.0)).unwrap()),
        3 => SpaceSpec::zygmund(rng.gen_range(1.5..3.0), rng.gen_range(0.3..2.0)).unwrap(),
        _ => SpaceSpec::Lorentz(LorentzPhi::pow(rng.gen_range(1.0..4.0)).unwrap()),
    }
}
