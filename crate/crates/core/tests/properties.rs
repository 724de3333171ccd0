//! Property tests for the protocol invariants: closure, path agreement,
//! closed-form equivalence, receiver symmetry, and sampling behavior on
//! randomized inputs.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;

use qteleport::analysis::{oracle, SphereQuadrature};
use qteleport::protocols::{
    run_p0, run_p0_pure, run_p1_w_with_table, sample_fidelity, CorrectionTable,
};
use qteleport::states::{ghz_state, ghz_vector, input_state, noisy_state, w_state, w_vector};
use qteleport::statevector::StateVector;
use qteleport::{
    tol, BlochAngles, ComplexMatrix, MeasurementAngle, Visibility,
};

use rand_chacha::ChaCha12Rng;
use rand_core::SeedableRng;

fn angles(theta: f64, phi: f64) -> BlochAngles {
    BlochAngles::new(theta, phi).unwrap()
}

proptest! {
    #[test]
    fn p0_probabilities_close_and_bound_fidelity(
        theta in 0.0..PI,
        phi in 0.0..TAU,
        nu in 0.0..FRAC_PI_2,
        visibility in 0.0f64..=1.0,
        use_w in any::<bool>(),
    ) {
        let pure = if use_w {
            w_state(3).unwrap().relabel(vec![2, 3, 4]).unwrap()
        } else {
            ghz_state()
        };
        let table = if use_w { CorrectionTable::w_p0() } else { CorrectionTable::ghz_p0() };
        let resource = noisy_state(&pure, Visibility::new(visibility).unwrap()).unwrap();
        let records = run_p0(
            &resource,
            angles(theta, phi),
            MeasurementAngle::new(nu).unwrap(),
            &table,
        ).unwrap();
        let total: f64 = records.iter().map(|r| r.branch_probability).sum();
        prop_assert!((total - 1.0).abs() <= tol::PROB_CLOSURE);
        for r in &records {
            prop_assert!(r.branch_probability >= 0.0);
            prop_assert!(r.weighted_fidelity >= -tol::EQUALITY);
            prop_assert!(r.weighted_fidelity <= r.branch_probability + tol::EQUALITY);
            if let Some(f) = r.fidelity {
                prop_assert!((-tol::EQUALITY..=1.0 + tol::PSD_SLACK).contains(&f));
            }
        }
    }

    #[test]
    fn pure_path_matches_dense_path(
        theta in 0.0..PI,
        phi in 0.0..TAU,
        nu in 0.0..FRAC_PI_2,
        use_w in any::<bool>(),
    ) {
        let (dense_res, vec_res, table) = if use_w {
            (
                w_state(3).unwrap().relabel(vec![2, 3, 4]).unwrap(),
                w_vector(3).unwrap(),
                CorrectionTable::w_p0(),
            )
        } else {
            (ghz_state(), ghz_vector(), CorrectionTable::ghz_p0())
        };
        let a = angles(theta, phi);
        let m = MeasurementAngle::new(nu).unwrap();
        let dense = run_p0(&dense_res, a, m, &table).unwrap();
        let pure = run_p0_pure(&vec_res, a, m, &table).unwrap();
        prop_assert_eq!(dense.len(), pure.len());
        for (d, v) in dense.iter().zip(&pure) {
            prop_assert_eq!((d.j, d.k), (v.j, v.k));
            prop_assert!((d.branch_probability - v.branch_probability).abs() <= tol::EQUALITY);
            prop_assert!((d.weighted_fidelity - v.weighted_fidelity).abs() <= tol::EQUALITY);
            if let (Some(a), Some(b)) = (d.fidelity, v.fidelity) {
                prop_assert!((a - b).abs() <= tol::EQUALITY);
            }
        }
    }

    #[test]
    fn split_protocol_closure_and_receiver_symmetry(
        theta in 0.0..PI,
        phi in 0.0..TAU,
        n in 3usize..=6,
        receiver_pick in 0u32..4,
    ) {
        let table = CorrectionTable::w_p1();
        let a = angles(theta, phi);
        let receiver = 3 + receiver_pick % (n as u32 - 1);
        let records = run_p1_w_with_table(n, a, receiver, &table).unwrap();
        let total: f64 = records.iter().map(|r| r.branch_probability).sum();
        prop_assert!((total - 1.0).abs() <= tol::PROB_CLOSURE);
        let base = run_p1_w_with_table(n, a, 3, &table).unwrap();
        for (r, b) in records.iter().zip(&base) {
            prop_assert!((r.branch_probability - b.branch_probability).abs() <= tol::EQUALITY);
            prop_assert!((r.weighted_fidelity - b.weighted_fidelity).abs() <= tol::EQUALITY);
        }
    }

    #[test]
    fn ghz_branches_match_closed_forms(
        theta in 0.05..(PI - 0.05),
        phi in 0.0..TAU,
        nu in 0.05..(FRAC_PI_2 - 0.05),
    ) {
        let records = run_p0(
            &ghz_state(),
            angles(theta, phi),
            MeasurementAngle::new(nu).unwrap(),
            &CorrectionTable::ghz_p0(),
        ).unwrap();
        for r in &records {
            let k = r.k.unwrap();
            let p = oracle::ghz_bell_probability(r.j).unwrap()
                * oracle::ghz_conditional_probability(r.j, k, theta, nu).unwrap();
            prop_assert!((r.branch_probability - p).abs() <= tol::EQUALITY);
            let f = oracle::ghz_branch_fidelity(r.j, k, theta, nu).unwrap();
            prop_assert!((r.fidelity.unwrap() - f).abs() <= tol::EQUALITY);
        }
    }

    #[test]
    fn w_branches_match_closed_forms(
        theta in 0.05..(PI - 0.05),
        phi in 0.0..TAU,
        nu in 0.05..(FRAC_PI_2 - 0.05),
    ) {
        let resource = w_state(3).unwrap().relabel(vec![2, 3, 4]).unwrap();
        let records = run_p0(
            &resource,
            angles(theta, phi),
            MeasurementAngle::new(nu).unwrap(),
            &CorrectionTable::w_p0(),
        ).unwrap();
        for r in &records {
            let k = r.k.unwrap();
            let p = oracle::w_bell_probability(r.j, theta).unwrap()
                * oracle::w_conditional_probability(r.j, k, theta, phi, nu).unwrap();
            prop_assert!((r.branch_probability - p).abs() <= tol::EQUALITY);
            if let Some(f) = r.fidelity {
                let expect = oracle::w_branch_fidelity(r.j, k, theta, phi, nu).unwrap();
                prop_assert!((f - expect).abs() <= tol::EQUALITY);
            }
        }
    }

    #[test]
    fn split_branches_match_closed_forms(
        theta in 0.05..(PI - 0.05),
        phi in 0.0..TAU,
        n in 3usize..=6,
    ) {
        let records =
            run_p1_w_with_table(n, angles(theta, phi), 3, &CorrectionTable::w_p1()).unwrap();
        for r in &records {
            let p = oracle::party_bell_probability(r.j, theta, n).unwrap();
            prop_assert!((r.branch_probability - p).abs() <= tol::EQUALITY);
            let f = oracle::party_split_fidelity(r.j, theta, n).unwrap();
            prop_assert!((r.fidelity.unwrap() - f).abs() <= tol::EQUALITY);
        }
    }

    #[test]
    fn sampled_fidelity_is_one_of_the_live_branches(
        theta in 0.0..PI,
        phi in 0.0..TAU,
        nu in 0.0..FRAC_PI_2,
        seed in any::<u64>(),
    ) {
        let records = run_p0(
            &ghz_state(),
            angles(theta, phi),
            MeasurementAngle::new(nu).unwrap(),
            &CorrectionTable::ghz_p0(),
        ).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let f = sample_fidelity(&records, &mut rng).unwrap();
        prop_assert!(records.iter().any(|r| r.fidelity == Some(f)));
    }

    #[test]
    fn quadrature_is_normalized(n_theta in 2usize..=12, n_phi in 2usize..=12) {
        let quad = SphereQuadrature::new(n_theta, n_phi).unwrap();
        let one = quad.average(|_| Ok(1.0)).unwrap();
        prop_assert!((one - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn random_statevector_bell_weights_close(raw in prop::collection::vec(-1.0f64..1.0, 16)) {
        let amps: Vec<Complex64> = raw
            .chunks(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let amps: Vec<Complex64> = amps.iter().map(|a| a / norm).collect();
        let psi = StateVector::new(amps, vec![1, 2, 3]).unwrap();
        let bells = qteleport::states::bell_projectors();
        let rho = psi.to_density().unwrap();
        let branches = qteleport::measurement::measure(&rho, &bells, &[1, 2]).unwrap();
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        prop_assert!((total - 1.0).abs() <= tol::PROB_CLOSURE);
        let reduced = psi.reduced_matrix(&[3]).unwrap();
        prop_assert!((reduced.trace().unwrap().re - 1.0).abs() <= tol::TRACE);
    }

    #[test]
    fn kron_trace_is_multiplicative(raw in prop::collection::vec(-1.0f64..1.0, 40)) {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| {
            Complex64::new(raw[2 * (2 * i + j)], raw[2 * (2 * i + j) + 1])
        });
        let b = ComplexMatrix::from_fn(2, 2, |i, j| {
            Complex64::new(raw[8 + 2 * (2 * i + j)], raw[8 + 2 * (2 * i + j) + 1])
        });
        let lhs = a.kron(&b).trace().unwrap();
        let rhs = a.trace().unwrap() * b.trace().unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12);
        prop_assert_eq!(a.dagger().dagger().max_abs_diff(&a), 0.0);
    }

    #[test]
    fn noisy_resources_stay_valid(visibility in 0.0f64..=1.0) {
        let rho = noisy_state(&ghz_state(), Visibility::new(visibility).unwrap()).unwrap();
        prop_assert!((rho.matrix().trace().unwrap().re - 1.0).abs() <= tol::TRACE);
        prop_assert!(rho.matrix().min_eigenvalue().unwrap() >= -tol::PSD_SLACK);
        let pure = input_state(angles(0.3, 0.4));
        prop_assert!((pure.purity() - 1.0).abs() <= tol::EQUALITY);
    }
}
