use hecke_density::dirichlet::{
    subset_power_sum, upper_density_estimate, SGrid, ThresholdSet,
};
use hecke_density::optimizer::{feasible_interval, solve_constants, MomentBounds};
use hecke_density::satake::{
    cg_decomposition, component_eigenvalues, local_factor, tensor_power_eigenvalues,
    trace_moment_residual, verify_cg_identity, Piece, SatakeParams,
};
use hecke_density::sources::{sample_dihedral, sample_sato_tate, EigenvalueSequence, Source};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::TAU;

fn unit(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

fn sequence() -> impl Strategy<Value = EigenvalueSequence> {
    prop::collection::vec(-2.0f64..2.0, 1..200).prop_map(|values| {
        let primes = hecke_density::sources::first_primes(values.len()).unwrap();
        EigenvalueSequence::from_pairs(primes.into_iter().zip(values), Source::Csv).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5000))]

    #[test]
    fn cg_identities_on_the_unit_circle(t in 0.0..TAU, u in 0.0..TAU) {
        for sp in [SatakeParams::from_angle(t), SatakeParams::new(unit(t), unit(u)).unwrap()] {
            for k in [3, 4, 6, 8] {
                prop_assert!(verify_cg_identity(&sp, k).unwrap() < 1e-12);
                prop_assert!(trace_moment_residual(&sp, k).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn tensor_trace_is_power_of_trace(t in 0.0..TAU, u in 0.0..TAU, k in 1u32..=8) {
        let sp = SatakeParams::new(unit(t), unit(u)).unwrap();
        let tr = tensor_power_eigenvalues(&sp, k).unwrap().trace();
        let want = sp.trace().powu(k);
        prop_assert!((tr - want).norm() <= 1e-10 * want.norm().max(1.0));
    }

    #[test]
    fn conjugate_pair_factors_are_real(a in -2.0f64..2.0, p in prop::sample::select(vec![2u64, 3, 5, 7, 101]), s in 1.01f64..3.0, m in 1u32..=4) {
        let sp = SatakeParams::from_eigenvalue(a, Complex64::new(1.0, 0.0)).unwrap();
        let ev = component_eigenvalues(&sp, &Piece::sym(m)).unwrap();
        let f = local_factor(&ev, p, s).unwrap();
        prop_assert!(f.im.abs() <= 1e-12 * f.re.abs().max(1.0));
    }

    #[test]
    fn root_ordering_is_reproducible(a in -3.0f64..3.0) {
        let one = Complex64::new(1.0, 0.0);
        let x = SatakeParams::from_eigenvalue(a, one).unwrap();
        let y = SatakeParams::from_eigenvalue(a, one).unwrap();
        prop_assert_eq!(x.alpha().re.to_bits(), y.alpha().re.to_bits());
        prop_assert_eq!(x.alpha().im.to_bits(), y.alpha().im.to_bits());
        prop_assert_eq!(x.beta().re.to_bits(), y.beta().re.to_bits());
        prop_assert!(((x.alpha() + x.beta()) - a).norm() < 1e-12);
    }
}

#[test]
fn decomposition_dimensions_are_powers_of_two() {
    for k in [3u32, 4, 6, 8] {
        assert_eq!(cg_decomposition(k).unwrap().total_dim(), 1 << k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn additivity_over_disjoint_sets(seq in sequence(), c in -2.0f64..2.0, k in 0u32..=8, s in 1.05f64..2.0) {
        let above = ThresholdSet::Above(c);
        let below = ThresholdSet::custom("a <= c", move |_, a| a <= c);
        let a = subset_power_sum(&seq, &above, k, true, s).unwrap();
        let b = subset_power_sum(&seq, &below, k, true, s).unwrap();
        let all = subset_power_sum(&seq, &ThresholdSet::All, k, true, s).unwrap();
        let scale = subset_power_sum(&seq, &ThresholdSet::All, k, false, s).unwrap().max(1e-300);
        prop_assert!((a + b - all).abs() <= 1e-12 * scale);
    }

    #[test]
    fn density_estimate_is_antitone(seq in sequence(), c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
        let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        let grid = SGrid::new(vec![1.8, 1.5, 1.3], seq.truncation().max(3), 0.0).unwrap();
        let e_lo = upper_density_estimate(&seq, &ThresholdSet::Above(lo), &grid).unwrap().value;
        let e_hi = upper_density_estimate(&seq, &ThresholdSet::Above(hi), &grid).unwrap().value;
        prop_assert!(e_lo >= e_hi);
    }

    #[test]
    fn solver_equations_hold_read_both_ways(
        delta in 0.001f64..0.05,
        m4 in 1.8f64..2.2,
        m6 in 4.5f64..5.5,
        m8 in 13.0f64..15.0,
    ) {
        let m = MomentBounds { m4, m6, m8, ..MomentBounds::default() };
        prop_assume!(feasible_interval(&m, delta).is_ok());
        let sol = match solve_constants(&m, delta) {
            Ok(sol) => sol,
            Err(_) => return Ok(()),
        };
        // Re-evaluated independently of the solver.
        let g = sol.d.powf(1.25) / (m8 - (m4 - sol.d).powi(2)).powf(0.25);
        let beta = 1.0 - (m8 * delta).sqrt() / (m4 - sol.d);
        let alpha = 1.0 - (m6 * delta).sqrt() / g;
        prop_assert!((sol.beta - beta).abs() < 1e-9);
        prop_assert!((sol.alpha - alpha).abs() < 1e-9);
        prop_assert!((sol.threshold_c - ((m4 - sol.d) * beta).powf(0.25)).abs() < 1e-9);
        prop_assert!((sol.threshold_c - (g * alpha).cbrt()).abs() < 1e-9);
        prop_assert!(sol.residual < 1e-9);
        let again = solve_constants(&m, delta).unwrap();
        prop_assert_eq!(sol.d.to_bits(), again.d.to_bits());
    }
}

#[test]
fn samplers_are_seed_deterministic() {
    for sampler in [sample_sato_tate, sample_dihedral] {
        let a = sampler(50_000, 17).unwrap();
        let b = sampler(50_000, 17).unwrap();
        let c = sampler(50_000, 18).unwrap();
        assert!(a.entries().iter().zip(b.entries()).all(|(x, y)| x.a.to_bits() == y.a.to_bits()));
        assert!(a.entries().iter().zip(c.entries()).any(|(x, y)| x.a != y.a));
    }
}
