mod common;

use common::{density_from, hermitian_from, pure_state_from, unitary2};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reset_ness::cmatrix::{kron, mat_mul, trace, ComplexMatrix};
use reset_ness::mc::{evolve_trajectory, sample_reset_times};
use reset_ness::observables::{concurrence, concurrence_pure, fidelity, fidelity_pure, purity, von_neumann_entropy};
use reset_ness::system::{partial_trace, Keep, QuantumSystem, ResetSpec, SubsystemSplit};
use reset_ness::twospin::{reduced_vw, reduced_vw_reset, TwoSpinParams};

fn reals(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
}

fn angles() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..std::f64::consts::TAU, 4)
}

/// (dim, entries) for a dim x dim complex matrix.
fn sized(max_dim: usize) -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1..=max_dim).prop_flat_map(|d| (Just(d), reals(2 * d * d)))
}

fn density_state(dim: usize, rank: usize) -> impl Strategy<Value = ComplexMatrix> {
    reals(2 * dim * rank).prop_map(move |xs| density_from(dim, rank, &xs))
}

fn any_two_qubit_state() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..=4).prop_flat_map(|rank| density_state(4, rank))
}

fn assert_density(rho: &ComplexMatrix, tol: f64) -> Result<(), TestCaseError> {
    prop_assert!((rho.trace().re - 1.0).abs() <= tol && rho.trace().im.abs() <= tol);
    prop_assert!(rho.hermiticity_defect() <= tol);
    let min = rho.hermitian_eig().unwrap().eigenvalues[0];
    prop_assert!(min >= -tol, "min eigenvalue {min}");
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eigendecomposition_reconstructs((dim, xs) in sized(6), exp in -3i32..4) {
        let a = hermitian_from(dim, &xs).scale_real(10f64.powi(exp));
        let eig = a.hermitian_eig().unwrap();
        let scale = a.frobenius_norm();
        prop_assert!((&eig.reconstruct() - &a).frobenius_norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE));
        let v = &eig.eigenvectors;
        prop_assert!((&(&v.adjoint() * v) - &ComplexMatrix::identity(dim)).frobenius_norm() <= 1e-12);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn degenerate_spectra_reconstruct((dim, xs) in (2usize..=6).prop_flat_map(|d| (Just(d), reals(2 * d * d))), split in 1usize..6) {
        // Spectrum {1,...,1,-1,...,-1} rotated by a random unitary.
        let u = hermitian_from(dim, &xs).hermitian_eig().unwrap().eigenvectors;
        let k = split.min(dim - 1);
        let d: Vec<f64> = (0..dim).map(|i| if i < k { 1.0 } else { -1.0 }).collect();
        let a = &(&u * &ComplexMatrix::from_real_diag(&d)) * &u.adjoint();
        let eig = a.hermitian_eig().unwrap();
        prop_assert!((&eig.reconstruct() - &a).frobenius_norm() <= 1e-12 * a.frobenius_norm());
        let v = &eig.eigenvectors;
        prop_assert!((&(&v.adjoint() * v) - &ComplexMatrix::identity(dim)).frobenius_norm() <= 1e-12);
    }

    #[test]
    fn psd_sqrt_squares_back(dim in 1usize..=6, rank_frac in 0.0f64..1.0, xs in reals(72), exp in -2i32..3) {
        let rank = 1 + ((dim - 1) as f64 * rank_frac) as usize;
        let a = density_from(dim, rank, &xs).scale_real(10f64.powi(exp));
        let s = a.psd_sqrt().unwrap();
        prop_assert!((&(&s * &s) - &a).frobenius_norm() <= 1e-11 * a.frobenius_norm().max(1.0));
        prop_assert!(s.hermiticity_defect() <= 1e-15 * s.frobenius_norm().max(1.0));
        prop_assert!(s.hermitian_eig().unwrap().eigenvalues[0] >= -1e-12);
    }

    #[test]
    fn kron_is_associative(a in reals(8), b in reals(18), c in reals(8)) {
        let a = ComplexMatrix::from_vec(2, common::complex_from(&a)).unwrap();
        let b = ComplexMatrix::from_vec(3, common::complex_from(&b)).unwrap();
        let c = ComplexMatrix::from_vec(2, common::complex_from(&c)).unwrap();
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert_eq!(left.dim(), 12);
        prop_assert!(left.max_abs_diff(&right) <= 1e-15);
    }

    #[test]
    fn trace_is_cyclic(a in reals(32), b in reals(32)) {
        let a = ComplexMatrix::from_vec(4, common::complex_from(&a)).unwrap();
        let b = ComplexMatrix::from_vec(4, common::complex_from(&b)).unwrap();
        let ab = trace(&mat_mul(&a, &b).unwrap());
        let ba = trace(&mat_mul(&b, &a).unwrap());
        prop_assert!((ab - ba).norm() <= 1e-13);
    }

    #[test]
    fn producers_preserve_density_properties(
        (dim, hx) in (2usize..=5).prop_flat_map(|d| (Just(d), reals(2 * d * d))),
        rx in reals(50),
        rate in 0.01f64..10.0,
        t in 0.0f64..20.0,
    ) {
        let h = hermitian_from(dim, &hx);
        let rho0 = density_from(dim, dim, &rx);
        let sys = QuantumSystem::new(h, rho0).unwrap();
        let reset = ResetSpec::new(rate).unwrap();
        assert_density(&sys.unitary_evolve(t), 1e-12)?;
        assert_density(&sys.reset_density(reset, t), 1e-12)?;
        assert_density(&sys.ness_density(reset).unwrap(), 1e-12)?;
    }

    #[test]
    fn unitary_dynamics_keeps_coherence_moduli(
        (dim, hx) in (2usize..=5).prop_flat_map(|d| (Just(d), reals(2 * d * d))),
        rx in reals(50),
        t in 0.0f64..50.0,
    ) {
        let sys = QuantumSystem::new(hermitian_from(dim, &hx), density_from(dim, 2, &rx)).unwrap();
        let start = sys.rho0_energy_basis().clone();
        let now = sys.eigensystem().to_eigenbasis(&sys.unitary_evolve(t));
        for i in 0..dim {
            for j in 0..dim {
                prop_assert!((now[(i, j)].norm() - start[(i, j)].norm()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_of_product(da in 1usize..=3, db in 1usize..=3, xa in reals(18), xb in reals(18), sb in 0.1f64..3.0) {
        let rho_a = density_from(da, da, &xa);
        let rho_b = density_from(db, db, &xb).scale_real(sb);
        let split = SubsystemSplit::new(da, db).unwrap();
        let prod = kron(&rho_a, &rho_b);
        let tr_b = rho_b.trace();
        let kept_a = partial_trace(&prod, split, Keep::A).unwrap();
        prop_assert!(kept_a.max_abs_diff(&rho_a.scale(tr_b)) <= 1e-14);
        let kept_b = partial_trace(&prod, split, Keep::B).unwrap();
        prop_assert!(kept_b.max_abs_diff(&rho_b.scale(rho_a.trace())) <= 1e-14);
    }

    #[test]
    fn pure_state_concurrence_matches_reduced_formula(xs in reals(8)) {
        let rho = ComplexMatrix::projector(&pure_state_from(4, &xs));
        let c = concurrence(&rho).unwrap().value;
        let cp = concurrence_pure(&rho, SubsystemSplit::TWO_QUBITS).unwrap();
        prop_assert!((c - cp).abs() <= 1e-9, "{} vs {}", c, cp);
    }

    #[test]
    fn fidelity_is_symmetric(rho in any_two_qubit_state(), sigma in any_two_qubit_state()) {
        let f1 = fidelity(&rho, &sigma).unwrap();
        let f2 = fidelity(&sigma, &rho).unwrap();
        prop_assert!((f1 - f2).abs() <= 1e-11);
        prop_assert!((0.0..=1.0).contains(&f1));
    }

    #[test]
    fn fidelity_with_pure_state(rho in any_two_qubit_state(), xs in reals(8)) {
        let psi = pure_state_from(4, &xs);
        let sigma = ComplexMatrix::projector(&psi);
        let f = fidelity(&rho, &sigma).unwrap();
        prop_assert!((f - fidelity_pure(&rho, &psi).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn entropy_bounds(dim in 1usize..=5, rank_frac in 0.0f64..1.0, xs in reals(50)) {
        let rank = 1 + ((dim - 1) as f64 * rank_frac) as usize;
        let rho = density_from(dim, rank, &xs);
        let s = von_neumann_entropy(&rho).unwrap().nats;
        prop_assert!(s >= 0.0 && s <= (dim as f64).ln() + 1e-12);
        let pure = (purity(&rho).unwrap() - 1.0).abs() <= 1e-10;
        prop_assert_eq!(s <= 1e-8, pure);
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(rho in any_two_qubit_state(), a in angles(), b in angles()) {
        let u = kron(&unitary2(&a), &unitary2(&b));
        let rotated = &(&u * &rho) * &u.adjoint();
        let c0 = concurrence(&rho).unwrap().value;
        let c1 = concurrence(&rotated).unwrap().value;
        prop_assert!((c0 - c1).abs() <= 1e-9, "{} vs {}", c0, c1);
    }

    #[test]
    fn separable_mixtures_have_zero_concurrence(
        parts in prop::collection::vec((reals(8), reals(8), 0.01f64..1.0), 1..5),
    ) {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let mut mix = ComplexMatrix::zeros(4);
        for (xa, xb, w) in &parts {
            let term = kron(&density_from(2, 2, xa), &density_from(2, 2, xb));
            mix = &mix + &term.scale_real(w / total);
        }
        prop_assert!(concurrence(&mix).unwrap().value <= 1e-9);
    }

    #[test]
    fn reduced_states_are_psd(big_r in 0.0f64..20.0, alpha in 0.0f64..20.0, t in 0.0f64..50.0) {
        let p = TwoSpinParams::dimensionless(big_r, alpha).unwrap();
        prop_assert!(reduced_vw_reset(t, &p).det() >= -1e-12);
        prop_assert!(reduced_vw(t, &p).det() >= -1e-12);
        let y = reduced_vw_reset(t, &p).y();
        prop_assert!((0.0..=1.0).contains(&y));
    }

    #[test]
    fn sampled_states_are_rank_one_projectors(
        (dim, hx) in (2usize..=5).prop_flat_map(|d| (Just(d), reals(2 * d * d))),
        px in reals(10),
        rate in 0.0f64..5.0,
        t in 0.0f64..10.0,
        seed in any::<u64>(),
    ) {
        let sys = QuantumSystem::with_pure_state(hermitian_from(dim, &hx), &pure_state_from(dim, &px)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let resets = sample_reset_times(rate, t, &mut rng);
        prop_assert!(resets.windows(2).all(|w| w[0] <= w[1]) && resets.iter().all(|&s| s >= 0.0 && s <= t));
        let psi = evolve_trajectory(&sys, &resets, t).unwrap();
        let proj = ComplexMatrix::projector(&psi);
        prop_assert!((proj.trace().re - 1.0).abs() <= 1e-12);
        prop_assert!((purity(&proj).unwrap() - 1.0).abs() <= 1e-12);
    }
}
