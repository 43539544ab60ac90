//! Acceptance gate: one test per numbered criterion. Each test prints its
//! verdict line; a failing assert carries the measured numbers so the red
//! criteria document themselves.

use rilab_core::grand::GrandSpec;
use rilab_core::kernels::{KernelSpec, Witness};
use rilab_core::lorentz::LorentzPhi;
use rilab_core::moments::{fejer_moment_closed_form, lp_norm, sinc_power_integral, Domain};
use rilab_core::nikolskii::{
    default_c_search, default_eps_grid, default_g_pair, default_v_grid, lorentz_lower_bound_check,
    nf_witness_value, optimize_kernel_params, orlicz_condition11_check, q_condition_check,
    regular_space_check, zygmund_rate_check, zygmund_z, zygmund_z_min, zygmund_r0_s0, NfParams,
    OptBounds, OptBudget,
};
use rilab_core::orlicz::OrliczPhi;
use rilab_core::spaces::SpaceSpec;
use std::f64::consts::PI;
use std::time::Instant;

fn fejer(n: u32) -> KernelSpec {
    KernelSpec::FejerContinuous { n }
}

fn octaves(lo: u32, hi: u32) -> Vec<u32> {
    let mut n = lo;
    let mut grid = Vec::new();
    while n <= hi {
        grid.push(n);
        n *= 2;
    }
    grid
}

#[test]
fn criterion_01_fejer_moment_oracle() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &n in &[4u32, 64] {
        for &p in &[1.0, 1.5, 2.0, 3.0, 5.0] {
            let direct = lp_norm(&Witness::kernel(fejer(n)), p, Domain::RealLine, 1e-9).unwrap();
            let closed = fejer_moment_closed_form(n, p, 1e-10).unwrap();
            worst = worst.max((direct - closed).abs() / closed);
        }
    }
    let i2 = sinc_power_integral(2.0, 1e-10).unwrap();
    let i4 = sinc_power_integral(4.0, 1e-10).unwrap();
    let e2 = (i2 - PI).abs() / PI;
    let e4 = (i4 - 2.0 * PI / 3.0).abs() / (2.0 * PI / 3.0);
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 01 moment oracle: PASS? worst quad-vs-closed {worst:.2e}, I(2) err {e2:.2e}, I(4) err {e4:.2e}, {elapsed:.1}s"
    );
    assert!(worst < 1e-6, "quadrature vs closed form drifted to {worst:.3e}");
    assert!(e2 < 1e-8 && e4 < 1e-8, "I(2)/I(4) errors {e2:.3e}/{e4:.3e}");
    assert!(elapsed < 10.0, "moment oracle took {elapsed:.1}s");
}

#[test]
fn criterion_02_n_scaling() {
    let mut worst = 0.0f64;
    for &p in &[1.0, 1.5, 2.0, 3.0, 5.0] {
        let scaled: Vec<f64> = [4u32, 16, 64, 256]
            .iter()
            .map(|&n| {
                let v =
                    lp_norm(&Witness::kernel(fejer(n)), p, Domain::RealLine, 1e-10).unwrap();
                v * (n as f64).powf(1.0 / p)
            })
            .collect();
        let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = scaled.iter().cloned().fold(0.0f64, f64::max);
        worst = worst.max(hi / lo - 1.0);
    }
    println!("criterion 02 n-scaling: PASS? profile spread {worst:.2e}");
    assert!(worst < 1e-8, "n^(1/p)-scaled moments spread {worst:.3e}");
}

#[test]
fn criterion_03_laplace_asymptotic() {
    let i = sinc_power_integral(200.0, 1e-10).unwrap();
    let rel = (200.0f64.sqrt() * i / (6.0 * PI).sqrt() - 1.0).abs();
    println!("criterion 03 Laplace tail: PASS? relative gap {rel:.4} at s=200");
    assert!(rel < 0.05, "sqrt(s) I(s)/sqrt(6 pi) off by {rel:.4}");
}

#[test]
fn criterion_04_fejer_witness_floor() {
    let (x, y) = default_g_pair();
    let params = NfParams::default();
    let mut min = f64::INFINITY;
    for n in octaves(8, 1024) {
        let e = nf_witness_value(&x, &y, &fejer(n), &params, 1e-7).unwrap();
        min = min.min(e.value);
    }
    println!("criterion 04 witness floor: PASS? min {min:.4} vs 1/9");
    assert!(min >= 1.0 / 9.0, "witness floor {min:.4} under 1/9");
}

#[test]
fn criterion_05_kernel_optimization_band() {
    let (x, y) = default_g_pair();
    let start = Instant::now();
    let rep = optimize_kernel_params(
        &x,
        &y,
        256,
        &NfParams::default(),
        &OptBounds::default(),
        &OptBudget::default(),
        1e-5,
    )
    .unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let best = rep.best.value;
    let in_band = (1.40..=2.02).contains(&best);
    println!(
        "criterion 05 optimization band: {} best {best:.4} at shape ({:.3}, {:.3}), {elapsed:.0}s",
        if in_band { "PASS" } else { "FAIL" },
        rep.alpha,
        rep.beta
    );
    assert!(elapsed < 300.0, "optimizer took {elapsed:.0}s");
    assert!(
        in_band,
        "best {best:.4} outside [1.40, 2.02]: with the house orientation (numerator support \
         right of denominator) the witness sup over the whole shape box stays near 0.5, while \
         the reverse orientation starts above 2 and diverges along the flat-kernel edge; no \
         zeta-weight pair lands inside the quoted band"
    );
}

#[test]
fn criterion_06_classical_rate() {
    let rep = zygmund_rate_check(
        2.0,
        4.0,
        0.0,
        0.0,
        &octaves(16, 4096),
        &NfParams::default(),
        1e-8,
    )
    .unwrap();
    println!("criterion 06 classical rate: PASS? e1 {:.4}, e2 {:.4}", rep.fit.e1, rep.fit.e2);
    assert!((rep.fit.e1 - 0.25).abs() < 0.02, "e1 = {} vs 1/4", rep.fit.e1);
    assert!(rep.fit.e2.abs() < 0.1, "e2 = {} vs 0", rep.fit.e2);
}

#[test]
fn criterion_07_log_rate_direction() {
    let grid = octaves(16, 4096);
    let params = NfParams::default();
    let a = zygmund_rate_check(2.0, 4.0, 1.0, 0.0, &grid, &params, 1e-7).unwrap();
    let b = zygmund_rate_check(2.0, 4.0, 0.0, 1.0, &grid, &params, 1e-7).unwrap();
    let a_ok = a.fit.e2 > 0.0 && (a.fit.e2 - 0.25).abs() <= 0.2;
    let b_ok = b.fit.e2 < 0.0 && (b.fit.e2 + 0.5).abs() <= 0.2;
    println!(
        "criterion 07 log-rate direction: {} (2,4,1,0) e2 {:.4} vs +0.25; {} (2,4,0,1) e2 {:.4} vs -0.5",
        if a_ok { "PASS" } else { "FAIL" },
        a.fit.e2,
        if b_ok { "PASS" } else { "FAIL" },
        b.fit.e2
    );
    assert!(a_ok, "(2,4,1,0): fitted e2 = {:.4}, wanted +0.25 +- 0.2", a.fit.e2);
    assert!(
        b_ok,
        "(2,4,0,1): fitted e2 = {:.4}, wanted -0.5 +- 0.2. The denominator norm in \
         L_2(Log L)^(-1) shrinks like n^(-1/2) (log n)^(-1/2) because the witness argument \
         inside the log grows like n^(1/2), so the quotient gains (log n)^(+1/2); the quoted \
         negative direction never appears",
        b.fit.e2
    );
}

#[test]
fn criterion_08_zygmund_z_near_optimality() {
    let mut lines = Vec::new();
    let mut all_ok = true;
    for (p, q, gamma, beta, sigma) in
        [(2.0, 4.0, 1.0, 1.0, 100.0), (2.0, 8.0, 2.0, 1.0, 1000.0)]
    {
        let (r0, s0) = zygmund_r0_s0(p, q, gamma, beta, sigma).unwrap();
        let z0 = zygmund_z(p, q, gamma, beta, sigma, r0, s0).unwrap();
        let (zmin, _) = zygmund_z_min(p, q, gamma, beta, sigma).unwrap();
        let ratio = z0 / zmin;
        all_ok &= ratio <= 1.05;
        lines.push(format!("({p},{q},{gamma},{beta},{sigma}): Z(r0,s0)/Zmin = {ratio:.3}"));
    }
    println!(
        "criterion 08 Z near-optimality: {} {}",
        if all_ok { "PASS" } else { "FAIL" },
        lines.join("; ")
    );
    assert!(
        all_ok,
        "{}. The quoted offsets gamma/(q log sigma), beta/(p log sigma) drop the 1/r^2 \
         Jacobian of d(1/r); stationarity gives offsets gamma*q/log sigma, beta*p/log sigma, \
         which do land within 5% of the constrained minimum",
        lines.join("; ")
    );
}

#[test]
fn criterion_09_condition11_closed_form() {
    let grid = default_v_grid();
    let mut worst = 0.0f64;
    for p in [1.0, 2.0, 3.0] {
        for m in [1u32, 2] {
            let rep =
                orlicz_condition11_check(&OrliczPhi::power(p).unwrap(), m, &grid, 1e-8).unwrap();
            let expect = (2.0 * m as f64 * p - 1.0).powf(-1.0 / p);
            worst = worst.max((rep.measured_c - expect).abs() / expect);
            assert!(rep.holds, "power integrand must satisfy the tail condition at p={p} m={m}");
        }
    }
    println!("criterion 09 condition-11 constants: PASS? worst error {worst:.2e}");
    assert!(worst < 1e-6, "C_m vs (2mp-1)^(-1/p) drifted to {worst:.3e}");
}

#[test]
fn criterion_10_lorentz_q_and_lower_bound() {
    let eps = default_eps_grid();
    for q in [1.0, 2.0, 4.0] {
        let rep = q_condition_check(&LorentzPhi::pow(q).unwrap(), &eps, 1e-6).unwrap();
        assert!(rep.holds, "generator d^(1/{q}) failed the admissibility integral");
    }
    let rep = lorentz_lower_bound_check(
        &LorentzPhi::pow(2.0).unwrap(),
        &LorentzPhi::pow(1.0).unwrap(),
        &octaves(16, 1024),
        &NfParams::default(),
        1e-5,
    )
    .unwrap();
    println!(
        "criterion 10 Lorentz pair: PASS? min quotient {:.4}, stable {}",
        rep.min_value, rep.stable
    );
    assert!(rep.positive && rep.min_value > 0.0, "min quotient {}", rep.min_value);
    assert!(rep.stable, "quotient drifted across the last octave: {:?}", rep.values);
}

#[test]
fn criterion_11_regularity() {
    let spaces = [
        SpaceSpec::lp(2.0).unwrap(),
        SpaceSpec::Grand(GrandSpec::zeta(1.0, 2.0, 1.0, 1.0).unwrap()),
        SpaceSpec::zygmund(2.0, 1.0).unwrap(),
        SpaceSpec::Lorentz(LorentzPhi::pow(2.0).unwrap()),
    ];
    let grid = octaves(8, 256);
    let c_grid = default_c_search(8);
    let mut lines = Vec::new();
    for space in &spaces {
        let rep = regular_space_check(space, &grid, &c_grid, 1e-7).unwrap();
        lines.push(format!("{space}: ratio {:.2}", rep.ratio));
        assert!(
            rep.regular && rep.ratio < 20.0,
            "{space}: bracket ratio {:.2} at C = {:.3}",
            rep.ratio,
            rep.best_c
        );
    }
    println!("criterion 11 regularity: PASS? {}", lines.join("; "));
}

mod property_suites;

#[test]
fn criterion_12_property_suites() {
    let counts = property_suites::run_all(100);
    println!(
        "criterion 12 property suites: PASS? {} cases green across {} suites",
        counts.iter().sum::<usize>(),
        counts.len()
    );
    for (i, &c) in counts.iter().enumerate() {
        assert_eq!(c, 100, "suite {i} ran {c} cases instead of 100");
    }
}
