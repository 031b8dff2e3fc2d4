mod common;

use approx::assert_abs_diff_eq;
use cohcool::bloch::{epsilon_star, RotationSpec};
use cohcool::hbac::{
    analytic_phi_n, analytic_rho1_n, apply_noisy_rotation, extract_virtual_qubit, hbac_channel, hbac_iterate,
    GateNoise, HbacConfig, PropagatorForm,
};
use cohcool::quantum::fixed_point;
use cohcool::stats::polyfit;
use cohcool::Complex64;
use common::{config, cycles, max_gap_m2, max_gap_m4, propagator, Params};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn closed_forms_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let p = Params::random(&mut rng);
        let phi = analytic_phi_n(p.cycles, p.eps2, p.eps3, p.xi, p.alpha_prime, PropagatorForm::Derived);
        assert!(
            max_gap_m4(&propagator(&p.reset_pair(), p.cycles), &phi) < 1e-10,
            "{p:?}"
        );

        let want = cycles(&p.target(), &p.reset_pair(), p.cycles);
        let got = analytic_rho1_n(p.cycles, &config(&p)).unwrap();
        assert!(max_gap_m2(&want, got.entries()) < 1e-10, "{p:?}");
    }
}

#[test]
fn channel_iteration_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let p = Params::random(&mut rng);
        let run = hbac_iterate(&config(&p)).unwrap();
        for (n, state) in run.states.iter().enumerate() {
            let want = cycles(&p.target(), &p.reset_pair(), n);
            assert!(max_gap_m2(&want, state.entries()) < 1e-12);
        }
        let channel = hbac_channel(&config(&p)).unwrap();
        assert!(max_gap_m4(&propagator(&p.reset_pair(), p.cycles), &channel.natural_power(p.cycles)) < 1e-10);
    }
}

#[test]
fn fixed_point_is_the_coherent_virtual_qubit() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let p = Params::random(&mut rng);
        let cfg = config(&p);
        let fp = fixed_point(&hbac_channel(&cfg).unwrap()).unwrap();
        let long = cycles(&p.target(), &p.reset_pair(), 400);
        assert!(max_gap_m2(&long, fp.entries()) < 1e-8);
        let spec = extract_virtual_qubit(&cfg).unwrap();
        assert!(max_gap_m2(&long, spec.state().unwrap().entries()) < 1e-8);
        assert_abs_diff_eq!(spec.gamma, p.xi, epsilon = 0.0);
    }
}

#[test]
fn convergence_is_geometric_with_the_contraction_rate() {
    let cfg = HbacConfig::new(-0.3, 0.5, 0.4, 0.9, 0.7, 25).unwrap();
    let run = hbac_iterate(&cfg).unwrap();
    let limit = extract_virtual_qubit(&cfg).unwrap().state().unwrap();
    let n: Vec<f64> = (0..=25).map(f64::from).collect();
    let log_dist: Vec<f64> = run.states.iter().map(|s| s.trace_distance(&limit).ln()).collect();
    let fit = polyfit(&n, &log_dist, 1).unwrap();
    assert!(fit.r_squared > 0.999);
    let rate = (1.0 - cfg.eps2 * cfg.eps3) / 2.0;
    assert_abs_diff_eq!(fit.coefficients[1], rate.ln(), epsilon = 1e-6);
}

#[test]
fn initial_coherence_decays_with_the_contraction_rate() {
    let base = HbacConfig::new(0.2, 0.6, 0.3, 0.5, 2.0, 0).unwrap();
    let chi = Complex64::from_polar(0.8, 1.3);
    let with = base.with_target_coherence(chi).unwrap();
    let s1 = (1.0 - 0.04f64).sqrt();
    let rate = (1.0 - 0.18) / 2.0;
    for n in 0..20 {
        let a = analytic_rho1_n(n, &with).unwrap();
        let b = analytic_rho1_n(n, &base).unwrap();
        let diff = a.get(1, 0) - b.get(1, 0);
        let want = chi * (0.5 * s1 * f64::powi(rate, n as i32));
        assert!((diff - want).norm() < 1e-15);
    }
}

#[test]
fn protocol_then_matched_rotation_reaches_the_coherent_bound() {
    for (e2, e3, xi) in [(0.5, 0.5, 1.0), (0.3, 0.6, 0.7), (0.8, 0.1, 0.4)] {
        let cfg = HbacConfig::new(0.0, e2, e3, xi, 0.9, 200).unwrap();
        let run = hbac_iterate(&cfg).unwrap();
        let spec = extract_virtual_qubit(&cfg).unwrap();
        let rot = RotationSpec::new(spec.pol_v, spec.gamma, spec.alpha).unwrap();
        let out = apply_noisy_rotation(run.last(), &rot, &GateNoise::ideal()).unwrap();
        assert_abs_diff_eq!(
            out.polarization(),
            epsilon_star(spec.pol_v, xi).unwrap(),
            epsilon = 1e-6
        );
    }
}

#[test]
fn fixed_points_are_found_for_many_random_channels() {
    // Includes channels on which an unbounded complex Schur iteration never converges.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let p = Params::random(&mut rng);
        let channel = hbac_channel(&config(&p)).unwrap();
        let fp = fixed_point(&channel).unwrap();
        assert!(max_gap_m2(&cycles(&fp_array(&fp), &p.reset_pair(), 1), fp.entries()) < 1e-10);
    }
}

fn fp_array(rho: &cohcool::DensityMatrix) -> common::M2 {
    let m = rho.entries();
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}
