use tpdicke_core::linalg::{dense_lowest, krylov_lowest, KrylovOptions};
use tpdicke_core::model::{build_photon_operators, sector_indices};
use tpdicke_core::{
    assemble_hamiltonian, converge_cutoff, HilbertSpace, ModelParams, PhotonParity,
    SpinPhotonOperator, TruncationSpec,
};

/// Element-by-element construction for N = 2 (j = 1), n_max = 4.
fn hand_built(delta: f64, omega: f64, g: f64) -> Vec<Vec<f64>> {
    let fock = 5;
    let mut h = vec![vec![0.0; 15]; 15];
    let r = 0.5f64.sqrt();
    let jx = [[0.0, r, 0.0], [r, 0.0, r], [0.0, r, 0.0]];
    for s in 0..3 {
        let m = s as f64 - 1.0;
        for n in 0..fock {
            h[s * fock + n][s * fock + n] = delta * m + omega * n as f64;
        }
    }
    for s in 0..3 {
        for t in 0..3 {
            for n in 0..fock - 2 {
                let a2 = (((n + 1) * (n + 2)) as f64).sqrt();
                let v = g * jx[s][t] * a2;
                h[s * fock + n + 2][t * fock + n] += v;
                h[s * fock + n][t * fock + n + 2] += v;
            }
        }
    }
    h
}

#[test]
fn two_atoms_match_hand_built_matrix() {
    let p = ModelParams::from_delta(1.3, 0.4, 0.21, 2).unwrap();
    let h = assemble_hamiltonian(&p, &TruncationSpec::fixed(4).unwrap()).unwrap();
    // 2g/N = g for N = 2
    let expected = hand_built(0.4, 1.3, 0.21);
    let got = h.to_dense();
    for i in 0..15 {
        for j in 0..15 {
            assert!((got[i][j] - expected[i][j]).abs() < 1e-14, "({i},{j})");
        }
    }
}

#[test]
fn one_atom_without_splitting_is_pure_coupling() {
    // H - omega n = g sigma_x (x) (a+^2 + a^2): spectrum is +-g times that of the pair operator
    let (g, n_max) = (0.3, 40);
    let p = ModelParams::new(1.0, 0.0, g, 1).unwrap();
    let photons = build_photon_operators(n_max).unwrap();
    let h = assemble_hamiltonian(&p, &TruncationSpec::fixed(n_max).unwrap())
        .unwrap()
        .try_sub(&SpinPhotonOperator::identity(2).kron(&photons.number))
        .unwrap();
    let low = dense_lowest(&photons.two_photon, 1).unwrap().values[0];
    let high = -dense_lowest(&photons.two_photon.scale(-1.0), 1)
        .unwrap()
        .values[0];
    let expected = -g * low.abs().max(high.abs());
    let lowest = krylov_lowest(&h, 1, &KrylovOptions::default()).unwrap();
    assert!(
        (lowest.values[0] - expected).abs() < 1e-10,
        "{} vs {expected}",
        lowest.values[0]
    );
}

#[test]
fn ground_state_lives_in_even_photon_block() {
    for g in [0.05, 0.2, 0.3] {
        let p = ModelParams::new(1.0, 0.5, g, 6).unwrap();
        let sol = converge_cutoff(&p, &TruncationSpec::default()).unwrap();
        assert_eq!(sol.ground_parity, PhotonParity::Even);
        let space = HilbertSpace::new(6, sol.n_max_used);
        let odd = sector_indices(&space, PhotonParity::Odd);
        let leak: f64 = odd.iter().map(|&i| sol.ground_vector[i].powi(2)).sum();
        assert!(leak < 1e-20, "g = {g}: {leak}");
    }
}

#[test]
fn collapse_coupling_is_rejected() {
    let p = ModelParams::new(1.0, 0.5, 0.6, 10).unwrap();
    let err = converge_cutoff(&p, &TruncationSpec::default()).unwrap_err();
    assert!(err.is_usage());
    assert!(err.to_string().contains("g_collapse"));
}
