//! Free-fermion results against dense diagonalization of small chains.

use ising_fidelity::oracle::parity_commutator_norm;
use ising_fidelity::quench::mode_hamiltonian;
use ising_fidelity::*;

fn gap(g: f64, n: usize) -> f64 {
    parity_gap(g, n, 1e-12).unwrap().value
}

#[test]
fn parity_gap_matches_sector_diagonalization() {
    for n in 2..=10 {
        for g in [-1.5, -1.0, -0.9, -0.3, 0.3, 0.9, 1.0, 1.5] {
            let exact = oracle_parity_gap(g, n).unwrap();
            let fermion = gap(g, n);
            assert!(
                (exact - fermion).abs() < 1e-6,
                "n = {n}, g = {g}: {fermion} vs {exact}"
            );
        }
    }
}

#[test]
fn odd_chains_follow_sign_of_g_to_the_n() {
    for n in [3, 5, 7, 9] {
        for g in [-1.5, -1.0, -0.5] {
            assert!(oracle_parity_gap(g, n).unwrap() < 0.0);
            assert!(gap(g, n) < 0.0);
        }
    }
    let half = oracle_parity_gap(0.5, 10).unwrap();
    assert!((half - gap(0.5, 10)).abs() < 1e-6);
}

#[test]
fn sector_energies_match_free_fermions() {
    for n in 2..=10 {
        for g in [0.3, 1.0, 1.7] {
            for sector in [ParitySector::Positive, ParitySector::Negative] {
                let dense = oracle_sector_energy(g, n, sector).unwrap();
                let fermion = sector_ground_energy(g, n, sector).unwrap();
                assert!(
                    (dense - fermion).abs() < 1e-10,
                    "n = {n}, g = {g}, {sector:?}: {fermion} vs {dense}"
                );
            }
        }
    }
}

#[test]
fn parity_rule_matches_lowest_sector() {
    // 50 fields away from g = 0, where the ferromagnetic splitting is still
    // resolvable in double precision for n <= 11
    let fields: Vec<f64> = (0..50)
        .map(|j| {
            let u = -2.0 + 4.0 * j as f64 / 49.0;
            u.signum() * (0.2 + 1.8 * (u.abs() / 2.0))
        })
        .collect();
    for n in 2..=11 {
        for &g in &fields {
            let pos = oracle_sector_energy(g, n, ParitySector::Positive).unwrap();
            let neg = oracle_sector_energy(g, n, ParitySector::Negative).unwrap();
            let lowest = if neg < pos {
                ParitySector::Negative
            } else {
                ParitySector::Positive
            };
            assert_eq!(
                ground_state_parity(g, n).unwrap(),
                lowest,
                "n = {n}, g = {g}"
            );
        }
    }
}

#[test]
fn hamiltonian_conserves_parity() {
    let mut g = 0.123;
    for n in 2..=8 {
        // deterministic spread of fields
        g = (g * 7.31 + 0.37) % 3.0;
        assert!(parity_commutator_norm(g, n).unwrap() < 1e-12);
        assert!(parity_commutator_norm(-g, n).unwrap() < 1e-12);
    }
}

#[test]
fn fidelity_product_matches_dense_overlap() {
    for (g, delta, n) in [(1.2, 0.05, 8), (1.0, 0.1, 10), (0.7, 0.02, 6)] {
        let product = fidelity(g, delta, n).unwrap().value;
        let dense = oracle_fidelity(g, delta, n).unwrap();
        assert!((product - dense).abs() < 1e-8, "{product} vs {dense}");
    }
    assert!((oracle_fidelity(0.8, 0.0, 8).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn mode_hamiltonians_rebuild_the_ground_energy() {
    let (g, n) = (1.3, 8);
    let grid = momentum_grid(n, ParitySector::Positive).unwrap();
    let total: f64 = grid
        .momenta()
        .iter()
        .map(|&k| {
            let h = mode_hamiltonian(g, k);
            let tr = h[0][0] + h[1][1];
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            0.5 * tr - (0.25 * tr * tr - det).sqrt()
        })
        .sum();
    let dense = dense_ground_state(g, n, None).unwrap().energy;
    assert!((total - dense).abs() < 1e-10, "{total} vs {dense}");
}

#[test]
fn critical_mode_energy_appears_in_dense_spectrum() {
    // k = π/2 belongs to the negative sector of N = 4; filling the pair ±π/2
    // costs 2·2√2 above that sector's lowest state
    let angle = bogoliubov_angle(1.0, std::f64::consts::FRAC_PI_2).unwrap();
    assert!((angle.energy - 2.0 * 2f64.sqrt()).abs() < 1e-14);
    let h = oracle::dense_hamiltonian(1.0, 4).unwrap();
    let spectrum = h.symmetric_eigenvalues();
    let e0 = oracle_sector_energy(1.0, 4, ParitySector::Negative).unwrap();
    let target = e0 + 2.0 * angle.energy;
    assert!(spectrum.iter().any(|e| (e - target).abs() < 1e-10));
}
