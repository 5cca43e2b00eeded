//! Independent oracles for derived reference values.

use hecke_density::dirichlet::{ratio_profile, subset_power_sum, SGrid, ThresholdSet};
use hecke_density::optimizer::{lemma_bound, solve_constants, MomentBounds};
use hecke_density::sources::{
    sample_dihedral, sample_sato_tate, sieve_primes, tau_coefficients, tau_sequence,
    EigenvalueSequence, Source,
};
use hecke_density::Error;

/// Composite Simpson rule with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

/// Semicircle moments by quadrature in the angle: a = 2 cos θ,
/// density (2/π) sin²θ on [0, π].
fn semicircle_moment(k: i32) -> f64 {
    simpson(
        |t: f64| (2.0 * t.cos()).powi(k) * 2.0 / std::f64::consts::PI * t.sin().powi(2),
        0.0,
        std::f64::consts::PI,
        20_000,
    )
}

#[test]
fn semicircle_tail_matches_reference() {
    let c: f64 = 0.7785;
    // Tail mass of (1/2π) sqrt(4 - x^2) on (c, 2), in the angle variable to
    // avoid the square-root endpoint.
    let theta_c = (c / 2.0).acos();
    let quad = simpson(
        |t: f64| 2.0 / std::f64::consts::PI * t.sin().powi(2),
        0.0,
        theta_c,
        20_000,
    );
    let closed = (theta_c - theta_c.sin() * theta_c.cos()) / std::f64::consts::PI;
    assert!((quad - closed).abs() < 1e-12);
    assert!((quad - 0.2586).abs() < 5e-5, "{quad}");
}

#[test]
fn catalan_moments_by_quadrature() {
    let catalan = [1.0, 1.0, 2.0, 5.0, 14.0];
    for (n, &cn) in catalan.iter().enumerate() {
        assert!((semicircle_moment(2 * n as i32) - cn).abs() < 1e-10);
        if n > 0 {
            assert!(semicircle_moment(2 * n as i32 - 1).abs() < 1e-10);
        }
    }
}

#[test]
fn sato_tate_moments_within_five_sigma() {
    let n = 1_000_000;
    let seq = sample_sato_tate(n, 2024).unwrap();
    for k in 1..=8 {
        let mean = semicircle_moment(k);
        let sigma = ((semicircle_moment(2 * k) - mean * mean) / n as f64).sqrt();
        let got = seq.entries().iter().map(|e| e.a.powi(k)).sum::<f64>() / n as f64;
        assert!(
            (got - mean).abs() < 5.0 * sigma,
            "k = {k}: {got} vs {mean} (sigma {sigma})"
        );
    }
}

#[test]
fn sato_tate_tail_fraction_within_five_sigma() {
    let n = 1_000_000;
    let seq = sample_sato_tate(n, 99).unwrap();
    let theta_c = (0.7785f64 / 2.0).acos();
    let q = (theta_c - theta_c.sin() * theta_c.cos()) / std::f64::consts::PI;
    let got = seq.entries().iter().filter(|e| e.a > 0.7785).count() as f64 / n as f64;
    let sigma = (q * (1.0 - q) / n as f64).sqrt();
    assert!((got - q).abs() < 5.0 * sigma, "{got} vs {q}");
}

#[test]
fn dihedral_moments_within_five_sigma() {
    // Half the mass at 0, half distributed as 2 cos θ with θ uniform:
    // E[a^2k] = C(2k, k) / 2.
    let n = 1_000_000;
    let seq = sample_dihedral(n, 11).unwrap();
    let moment = |k: i32| -> f64 {
        if k % 2 == 1 {
            0.0
        } else {
            let k = k as u64 / 2;
            let binom = (1..=k).fold(1.0, |acc, i| acc * (k + i) as f64 / i as f64);
            binom / 2.0
        }
    };
    assert_eq!(moment(4), 3.0);
    for k in 1..=8 {
        let mean = moment(k);
        let sigma = ((moment(2 * k) - mean * mean) / n as f64).sqrt();
        let got = seq.entries().iter().map(|e| e.a.powi(k)).sum::<f64>() / n as f64;
        assert!((got - mean).abs() < 5.0 * sigma, "k = {k}: {got} vs {mean}");
    }
}

/// `q ∏ (1 - q^n)^24` from the pentagonal series, by repeated squaring.
fn tau_by_eta_power(limit: usize) -> Vec<i128> {
    let n = limit;
    let mut euler = vec![0i128; n];
    for k in 0i64.. {
        let g1 = (k * (3 * k - 1) / 2) as usize;
        if g1 >= n {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        euler[g1] += sign;
        let g2 = (k * (3 * k + 1) / 2) as usize;
        if k > 0 && g2 < n {
            euler[g2] += sign;
        }
    }
    let mul = |a: &[i128], b: &[i128]| {
        let mut c = vec![0i128; n];
        for (i, &x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, &y) in b.iter().enumerate().take(n - i) {
                c[i + j] += x * y;
            }
        }
        c
    };
    let p2 = mul(&euler, &euler);
    let p4 = mul(&p2, &p2);
    let p8 = mul(&p4, &p4);
    let p16 = mul(&p8, &p8);
    let p24 = mul(&p8, &p16);
    let mut tau = vec![0i128; limit + 1];
    tau[1..].copy_from_slice(&p24[..limit]);
    tau
}

#[test]
fn tau_recurrence_matches_eta_product() {
    assert_eq!(tau_coefficients(1000), tau_by_eta_power(1000));
}

#[test]
fn tau_hecke_relations_at_large_primes() {
    let tau = tau_coefficients(100_000);
    // τ(p^2) = τ(p)^2 − p^11 and multiplicativity, on indices near the top.
    for p in [307i128, 313] {
        assert_eq!(tau[(p * p) as usize], tau[p as usize].pow(2) - p.pow(11));
    }
    assert_eq!(tau[97 * 1021], tau[97] * tau[1021]);
    assert_eq!(tau[2 * 49_999], tau[2] * tau[49_999]);
}

#[test]
fn power_sum_matches_brute_force_loop() {
    let seq = tau_sequence(10_000).unwrap();
    let fast = subset_power_sum(&seq, &ThresholdSet::All, 3, true, 1.1).unwrap();
    let mut naive = 0.0f64;
    for e in seq.entries().iter().rev() {
        naive += e.a * e.a * e.a / (e.p as f64).powf(1.1);
    }
    assert!(((fast - naive) / naive).abs() < 1e-12, "{fast} vs {naive}");
}

#[test]
fn prime_harmonic_ratio_near_one() {
    let primes = sieve_primes(1_000_000).unwrap().into_primes();
    let seq = EigenvalueSequence::from_pairs(primes.into_iter().map(|p| (p, 1.0)), Source::Csv).unwrap();
    // 0.2 ln(999983) = 2.76: the default coupling rejects s = 1.2 here.
    assert!(matches!(
        SGrid::new(vec![1.2], seq.truncation(), 3.0),
        Err(Error::CouplingViolated { .. })
    ));
    let grid = SGrid::new(vec![1.2], seq.truncation(), 2.5).unwrap();
    let ratio = ratio_profile(&seq, &ThresholdSet::All, 0, false, &grid).unwrap()[0].ratio;
    assert!((ratio - 1.0).abs() < 0.25, "{ratio}");
}

/// The constant system solved from scratch: bisection on
/// r(d) = ((M4 − d) β)^{1/4} − (g(d) α)^{1/3}.
fn oracle_solution(delta: f64) -> (f64, f64, f64, f64) {
    let (m4, m6, m8) = (2.0f64, 5.0f64, 14.0f64);
    let beta = |d: f64| 1.0 - (m8 * delta).sqrt() / (m4 - d);
    let g = |d: f64| d.powf(1.25) / (m8 - (m4 - d).powi(2)).powf(0.25);
    let alpha = |d: f64| 1.0 - (m6 * delta).sqrt() / g(d);
    let r = |d: f64| ((m4 - d) * beta(d)).powf(0.25) - (g(d) * alpha(d)).cbrt();
    let (mut lo, mut hi) = (1.0, 1.5);
    assert!(r(lo) > 0.0 && r(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if r(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let d = 0.5 * (lo + hi);
    (d, beta(d), alpha(d), ((m4 - d) * beta(d)).powf(0.25))
}

#[test]
fn solver_matches_independent_bisection() {
    let (d, beta, alpha, c) = oracle_solution(0.01);
    let sol = solve_constants(&MomentBounds::default(), 0.01).unwrap();
    assert!((sol.d - d).abs() < 1e-10);
    assert!((sol.beta - beta).abs() < 1e-10);
    assert!((sol.alpha - alpha).abs() < 1e-10);
    assert!((sol.threshold_c - c).abs() < 1e-10);
    // Frozen from the oracle.
    assert!((d - 1.258_137_8).abs() < 1e-7);
    assert!((beta - 0.495_639_8).abs() < 1e-7);
    assert!((alpha - 0.678_632_2).abs() < 1e-7);
    assert!((c - 0.778_703_9).abs() < 1e-7);
}

#[test]
fn reference_check_values() {
    let sol = solve_constants(&MomentBounds::default(), 0.01).unwrap();
    let g = sol.d.powf(1.25) / (14.0 - (2.0 - sol.d).powi(2)).powf(0.25);
    assert!(((2.0 - sol.d) * (1.0 - sol.beta) - 14f64.sqrt() / 10.0).abs() < 1e-3);
    assert!((g * (1.0 - sol.alpha) - 5f64.sqrt() / 10.0).abs() < 1e-3);
    // The product (2 − d) β, exact and at the four-digit reference inputs.
    assert!(((2.0 - sol.d) * sol.beta - 0.367_696_4).abs() < 1e-7);
    assert!(((2.0f64 - 1.2581) * 0.4957 - 0.367_759_8).abs() < 1e-7);
    assert!((0.36729f64.powf(0.25) - sol.threshold_c).abs() < 5e-4);
}

#[test]
fn lemma_bound_direct_evaluation() {
    let m = MomentBounds::default();
    for d in [0.5f64, 1.0, 1.2581, 1.9, 2.0] {
        let want = d.powf(1.25) / (14.0 - (2.0 - d) * (2.0 - d)).powf(0.25);
        assert!((lemma_bound(d, &m).unwrap() - want).abs() < 1e-14);
    }
    assert!((lemma_bound(1.2581, &m).unwrap() - 0.695_772).abs() < 1e-6);
    assert!((lemma_bound(2.0, &m).unwrap() - 1.229_576).abs() < 1e-6);
}
