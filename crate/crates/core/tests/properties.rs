use proptest::prelude::*;

use tpdicke_core::fss::{
    analytic_finite_size, collapse_spread, power_law_fit, scaling_variable, singular_part,
    universal_point, CollapseCurve, Quantity, QuarticWellSpec,
};
use tpdicke_core::linalg::{dense_lowest, krylov_lowest, KrylovOptions};
use tpdicke_core::{
    assemble_hamiltonian, jz_thermo, normal_phase, parity_operator, phase_result, ModelParams,
    TruncationSpec,
};

fn params() -> impl Strategy<Value = ModelParams> {
    (0.5f64..2.0, 0.05f64..1.0, 0.0f64..0.95, 1usize..12).prop_map(|(omega, ratio, gfrac, n)| {
        ModelParams::new(omega, ratio * omega, gfrac * omega / 2.0, n).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hamiltonian_is_symmetric(p in params(), n_max in 2usize..30) {
        let h = assemble_hamiltonian(&p, &TruncationSpec::fixed(n_max).unwrap()).unwrap();
        prop_assert!(h.is_hermitian());
        prop_assert_eq!(h.dim(), (p.n_atoms() + 1) * (n_max + 1));
    }

    #[test]
    fn parity_commutes_with_hamiltonian(p in params(), n_max in 2usize..30) {
        let h = assemble_hamiltonian(&p, &TruncationSpec::fixed(n_max).unwrap()).unwrap().to_complex();
        let pi = parity_operator(p.n_atoms(), n_max).unwrap();
        prop_assert!(h.commutator(&pi).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn krylov_agrees_with_dense(p in params(), n_max in 4usize..24) {
        let h = assemble_hamiltonian(&p, &TruncationSpec::fixed(n_max).unwrap()).unwrap();
        let a = krylov_lowest(&h, 3, &KrylovOptions::default()).unwrap();
        let b = dense_lowest(&h, 3).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!((x - y).abs() <= 1e-10 * x.abs().max(1.0), "{} vs {}", x, y);
        }
    }

    #[test]
    fn eta_sign_tracks_phase(p in params()) {
        let eta = scaling_variable(&p);
        if p.g() < p.g_c() {
            prop_assert!(eta > 0.0);
        } else if p.g() > p.g_c() {
            prop_assert!(eta < 0.0);
        }
    }

    #[test]
    fn normal_phase_is_physical(p in params()) {
        prop_assume!(p.g() < 0.999 * p.g_c());
        let r = normal_phase(&p).unwrap();
        prop_assert!(r.epsilon1 > 0.0 && r.epsilon1 <= p.omega1() / p.n() + 1e-15);
        prop_assert!(r.zeta >= 0.0);
        prop_assert_eq!(jz_thermo(&p).unwrap(), -0.5);
    }

    #[test]
    fn polarisation_grows_above_gc(p in params()) {
        prop_assume!(p.omega1() < p.omega() && p.g() > 1.001 * p.g_c());
        let jz = jz_thermo(&p).unwrap();
        prop_assert!(jz > -0.5 && jz <= 0.5);
        // the 1/N-corrected closed form has its own validity window at small N
        match phase_result(&p) {
            Ok(r) => prop_assert!(r.excitation_energy().is_finite()),
            Err(e) => prop_assert!(e.is_usage(), "{}", e),
        }
    }

    #[test]
    fn harmonic_well_is_exact(eta in 0.2f64..5.0) {
        let pt = universal_point(&QuarticWellSpec::harmonic(), eta).unwrap();
        let w = (2.0 * eta).sqrt();
        prop_assert!(((pt.e0 - w / 2.0) / (w / 2.0)).abs() <= 1e-6);
        prop_assert!(((pt.x2 * 2.0 * w) - 1.0).abs() <= 1e-6);
        prop_assert!(((pt.p2 / (w / 2.0)) - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn power_law_exponent_is_recovered(slope in -3.0f64..3.0, a in 0.1f64..10.0) {
        let xs = [5.0, 10.0, 30.0, 50.0, 100.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| a * x.powf(slope)).collect();
        let fit = power_law_fit(&xs, &ys).unwrap();
        prop_assert!((fit.slope - slope).abs() <= 1e-10);
    }

    #[test]
    fn spread_ignores_curve_order(shift in 0.0f64..1.0) {
        let mk = |n: usize, s: f64| CollapseCurve {
            n_atoms: n,
            quantity: Quantity::Jz,
            exponent_used: 2.0 / 3.0,
            points: (0..21).map(|i| { let x = -1.0 + 0.1 * i as f64; (x, x * x + s) }).collect(),
        };
        let a = [mk(10, 0.0), mk(20, shift), mk(40, 0.5 * shift)];
        let b = [a[2].clone(), a[0].clone(), a[1].clone()];
        let ra = collapse_spread(&a, (-1.0, 1.0), 41).unwrap();
        let rb = collapse_spread(&b, (-1.0, 1.0), 41).unwrap();
        prop_assert_eq!(ra, rb);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn analytic_rescaling_recovers_universal_energy(n in 50usize..2000, gfrac in 0.0f64..0.5) {
        let p = ModelParams::new(1.0, 0.5, 0.0, n).unwrap();
        let p = p.with_g(gfrac * p.g_c()).unwrap();
        let eta = scaling_variable(&p);
        prop_assume!(eta >= 1.0);
        let pt = universal_point(&QuarticWellSpec::for_params(&p).unwrap(), eta).unwrap();
        prop_assume!(pt.resolved);
        let pred = analytic_finite_size(&p, &pt).unwrap();
        let nf = n as f64;
        // only the g^2/N^2 regular term separates the two
        let expected = pt.e0 + nf.powf(4.0 / 3.0) * p.omega1() * p.g().powi(2) / (2.0 * nf * nf);
        prop_assert!((singular_part(Quantity::Energy, pred.eg, &p) - expected).abs() <= 1e-9 * pt.e0.abs().max(1.0));
    }
}
