use num_complex::Complex;
use proptest::prelude::*;
use purekit::analysis::{chain, chain_partial, FidelityName};
use purekit::kraus::{
    apply, dilation_unitary, kraus_from_unitary, kraus_pair_from_target, TargetAmplitudes,
};
use purekit::linalg::Mat2;
use purekit::measurement::{
    dephase, msmt_state_complete, msmt_state_partial, probabilities_complete,
    protocol_a_candidates_partial, Mode, PartialRecord,
};
use purekit::purify_a::{purify_a_general, purify_a_z, OrthogonalMixture, ProjectionChoice};
use purekit::purify_b::{purify_b, stationarity_residual};
use purekit::qubit::{
    bloch_from_density, density_from_bloch, fidelity, hs_distance, Axis, BlochVector,
    DensityMatrix, PureState,
};
use purekit::Error;

fn pure() -> impl Strategy<Value = PureState<f64>> {
    (-1.0f64..=1.0, 0.0..std::f64::consts::TAU)
        .prop_map(|(z, phi)| PureState::from_angles(z.acos(), phi))
}

fn bloch_in_ball() -> impl Strategy<Value = BlochVector<f64>> {
    (0.0f64..=1.0, -1.0f64..=1.0, 0.0..std::f64::consts::TAU).prop_map(|(r, z, phi)| {
        let s = (1.0 - z * z).sqrt();
        BlochVector::new(r * s * phi.cos(), r * s * phi.sin(), r * z)
    })
}

fn mixed() -> impl Strategy<Value = DensityMatrix<f64>> {
    bloch_in_ball().prop_map(|v| density_from_bloch(&v).unwrap())
}

fn target() -> impl Strategy<Value = TargetAmplitudes<f64>> {
    (pure(), 0.0..std::f64::consts::TAU).prop_map(|(v, g)| {
        let g = Complex::from_polar(1.0, g);
        TargetAmplitudes::new(v.a0() * g, v.a1() * g).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn top_eigenvector_of_a_pure_state_is_the_state(psi in pure()) {
        let spectrum = psi.to_density().eigen();
        prop_assert!((spectrum.vec_large.overlap(&psi) - 1.0).abs() < 1e-10);
        prop_assert!((spectrum.lambda_large - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fidelity_and_distance_in_bloch_form(a in mixed(), b in mixed()) {
        let (va, vb) = (a.bloch(), b.bloch());
        prop_assert!((fidelity(&a, &b) - 0.5 * (1.0 + va.dot(&vb))).abs() < 1e-12);
        prop_assert!((hs_distance(&a, &b) - 0.5 * va.sub(&vb).norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn channel_output_is_the_target(t in target(), rhos in proptest::collection::vec(mixed(), 20)) {
        let k = kraus_pair_from_target(&t);
        let first = apply(&k, &rhos[0]);
        for rho in &rhos {
            let out = apply(&k, rho);
            prop_assert!((out.purity() - 1.0).abs() < 1e-12);
            prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
            prop_assert!(out.max_abs_diff(&first) < 1e-12);
        }
        let v = PureState::new(t.alpha(), t.beta()).unwrap();
        prop_assert!(first.max_abs_diff(&v.to_density()) < 1e-12);
    }

    #[test]
    fn dilation_round_trip(t in target()) {
        let u = dilation_unitary(&t);
        prop_assert!(u.unitarity_residual() < 1e-12);
        let k = kraus_from_unitary(&u).unwrap();
        prop_assert!(k.max_abs_diff(&kraus_pair_from_target(&t)) < 1e-12);
    }

    #[test]
    fn protocol_a_family(p1 in 0.0f64..=1.0, phi in -10.0f64..10.0, phi2 in -10.0f64..10.0) {
        let a = purify_a_z(p1, phi).unwrap();
        let b = purify_a_z(p1, phi2).unwrap();
        prop_assert!((a.m00() - p1).abs() < 1e-12);
        prop_assert!((a.m00() - b.m00()).abs() < 1e-12);
        prop_assert!((a.m01().norm() - b.m01().norm()).abs() < 1e-12);
        prop_assert!((a.purity() - 1.0).abs() < 1e-12);
        let zero = DensityMatrix::diag(1.0).unwrap();
        prop_assert!((fidelity(&a, &zero) - fidelity(&b, &zero)).abs() < 1e-12);
    }

    #[test]
    fn general_protocol_a_matches_computational_form(
        p1 in 0.0f64..=1.0,
        split in 0.05f64..(std::f64::consts::FRAC_PI_2 - 0.05),
        arg_mu in 0.0..std::f64::consts::TAU,
        arg_nu in 0.0..std::f64::consts::TAU,
    ) {
        let mu = Complex::from_polar(split.cos(), arg_mu);
        let nu = Complex::from_polar(split.sin(), arg_nu);
        let choice = ProjectionChoice::new(mu, nu).unwrap();
        let mix = OrthogonalMixture::computational(p1).unwrap();
        let general = purify_a_general(&mix, &choice.projection()).unwrap();
        let z = purify_a_z(p1, choice.phase()).unwrap();
        prop_assert!(general.max_abs_diff(&z) < 1e-12);
    }

    #[test]
    fn protocol_b_is_the_closest_pure_state(rho in mixed(), other in pure()) {
        match purify_b(&rho) {
            Ok(b) => {
                let top = rho.eigen();
                prop_assert!(b.state.max_abs_diff(&top.vec_large.to_density()) < 1e-10);
                prop_assert!(b.f_achieved >= rho.m00().max(rho.m11()) - 1e-12);
                let sigma = other.to_density();
                prop_assert!(b.f_achieved >= fidelity(&sigma, &rho) - 1e-12);
                prop_assert!(hs_distance(&b.state, &rho) <= hs_distance(&sigma, &rho) + 1e-12);
                if rho.m01().norm() >= 1e-12 && b.p_tilde > 0.0 && b.p_tilde < 1.0 {
                    prop_assert!(stationarity_residual(&rho, b.p_tilde).abs() < 1e-8);
                }
            }
            Err(e) => prop_assert_eq!(e, Error::DegenerateState),
        }
    }

    #[test]
    fn complete_mixture_identity(psi in pure()) {
        let expected = (Mat2::identity() + psi.to_density().matrix()).scale(Complex::new(1.0 / 3.0, 0.0));
        prop_assert!(msmt_state_complete(&psi).matrix().max_abs_diff(&expected) < 1e-12);
        prop_assert!(probabilities_complete(&psi).sphere_residual().abs() < 1e-12);
    }

    #[test]
    fn partial_mixture_is_the_mean_of_two_dephasings(psi in pure()) {
        let full = probabilities_complete(&psi);
        let rec = PartialRecord::new(full.p1, full.p2).unwrap();
        let mean = (dephase(&psi, Axis::Z).matrix() + dephase(&psi, Axis::Y).matrix())
            .scale(Complex::new(0.5, 0.0));
        prop_assert!(msmt_state_partial(&rec).matrix().max_abs_diff(&mean) < 1e-12);
        let (plus, minus) = protocol_a_candidates_partial(&rec).unwrap();
        let best = plus.overlap(&psi).max(minus.overlap(&psi));
        prop_assert!((best - 1.0).abs() < 1e-10);
    }

    #[test]
    fn partial_gain_closed_form(psi in pure()) {
        if let Ok(r) = chain_partial(&psi) {
            let full = probabilities_complete(&psi);
            let (a1, a2) = (2.0 * full.p1 - 1.0, 2.0 * full.p2 - 1.0);
            let s = (a1 * a1 + a2 * a2).sqrt();
            let gain = r.get(FidelityName::F3).unwrap() - r.get(FidelityName::F1).unwrap();
            prop_assert!((gain - 0.25 * (2.0 * s - s * s)).abs() < 1e-10);
            prop_assert!(gain >= -1e-10);
        }
    }

    #[test]
    fn every_route_agrees(psi in pure()) {
        for mode in [Mode::Complete, Mode::Partial, Mode::Single] {
            match chain(mode, &psi) {
                Ok(r) => {
                    prop_assert!(r.route_gap() < 1e-10, "{:?} gap {}", mode, r.route_gap());
                    prop_assert!(r.verdicts().iter().all(|v| v.holds));
                }
                Err(e) => prop_assert_eq!(e, Error::DegenerateState),
            }
        }
    }

    #[test]
    fn single_precision_chain(theta in 0.0f32..std::f32::consts::PI, phi in 0.0f32..std::f32::consts::TAU) {
        let psi = PureState::<f32>::from_angles(theta, phi);
        let r = chain(Mode::Complete, &psi).unwrap();
        prop_assert!((r.get(FidelityName::FMsmt).unwrap() - 2.0 / 3.0).abs() < 1e-5);
        prop_assert!((r.get(FidelityName::FB).unwrap() - 1.0).abs() < 1e-4);
    }
}

#[test]
fn bloch_round_trip_on_a_grid() {
    let n = 20;
    let mut checked = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let g = |m: usize| -1.0 + 2.0 * m as f64 / (n - 1) as f64;
                let v = BlochVector::new(g(i), g(j), g(k));
                if v.norm() > 1.0 {
                    continue;
                }
                let back = bloch_from_density(&density_from_bloch(&v).unwrap());
                assert!(back.sub(&v).norm() < 1e-12);
                checked += 1;
            }
        }
    }
    assert!(checked > 3000);
}

#[test]
fn complete_chain_is_constant_over_haar_states() {
    use purekit::analysis::chain_complete;
    use purekit::random::haar_random_pure_seeded;
    let names = [FidelityName::FMsmt, FidelityName::FA, FidelityName::FB];
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for seed in 0..10_000 {
        let r = chain_complete(&haar_random_pure_seeded::<f64>(seed)).unwrap();
        for (k, n) in names.iter().enumerate() {
            let v = r.get(*n).unwrap();
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
    }
    for k in 0..3 {
        assert!(
            hi[k] - lo[k] < 1e-10,
            "{:?} spread {}",
            names[k],
            hi[k] - lo[k]
        );
    }
}
