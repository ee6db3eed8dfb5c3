//! Property tests for free drift, automatic grid sizing, and regime
//! classification across the supported parameter space.

use proptest::prelude::*;
use qew::analysis::momentum_spectrum;
use qew::kinematics::PhotonScale;
use qew::regimes::{classify, RegimeLabel, REGIME_THRESHOLD};
use qew::wavepacket::{
    analytic_sigma_z, drift, gaussian_waist, moments, BeamParams, GridSpec, DEFAULT_N,
};

fn beam_strategy() -> impl Strategy<Value = BeamParams> {
    (0.03e-6..0.5e-6f64, -0.5..0.5f64, 0.5..0.9f64).prop_map(|(sigma_z0, drift_length, beta)| {
        BeamParams {
            sigma_z0,
            drift_length,
            beta,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn drift_preserves_norm_and_center(beam in beam_strategy()) {
        let kin = beam.kinematics().unwrap();
        let grid = GridSpec::auto(&beam, None).unwrap();
        let waist = gaussian_waist(&beam, &grid).unwrap();
        let out = drift(&waist, beam.drift_time(&kin), &kin).unwrap();
        prop_assert!((out.norm_sq() - 1.0).abs() < 1e-10);
        let m = moments(&out);
        prop_assert!(m.mean_z.abs() < 1e-10 * grid.z_span());
        prop_assert_eq!(out.p0, waist.p0);
    }

    #[test]
    fn drift_spread_matches_the_analytic_law(beam in beam_strategy()) {
        let kin = beam.kinematics().unwrap();
        let t_d = beam.drift_time(&kin);
        let grid = GridSpec::auto(&beam, None).unwrap();
        let waist = gaussian_waist(&beam, &grid).unwrap();
        let out = drift(&waist, t_d, &kin).unwrap();
        let sigma = moments(&out).sigma_z;
        let predicted = analytic_sigma_z(beam.sigma_z0, t_d, &kin);
        prop_assert!((sigma / predicted - 1.0).abs() < 1e-8);
    }

    #[test]
    fn drift_reverses_exactly(beam in beam_strategy()) {
        let kin = beam.kinematics().unwrap();
        let t_d = beam.drift_time(&kin);
        let grid = GridSpec::auto(&beam, None).unwrap();
        let waist = gaussian_waist(&beam, &grid).unwrap();
        let there = drift(&waist, t_d, &kin).unwrap();
        let back = drift(&there, -t_d, &kin).unwrap();
        let peak = waist.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let worst = waist
            .values
            .iter()
            .zip(&back.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        prop_assert!(worst < 1e-10 * peak);
    }

    #[test]
    fn drift_leaves_the_momentum_distribution_alone(beam in beam_strategy()) {
        let kin = beam.kinematics().unwrap();
        let grid = GridSpec::auto(&beam, None).unwrap();
        let waist = gaussian_waist(&beam, &grid).unwrap();
        let before = momentum_spectrum(&waist).unwrap();
        let out = drift(&waist, beam.drift_time(&kin), &kin).unwrap();
        let after = momentum_spectrum(&out).unwrap();
        before.check_same_axis(&after).unwrap();
        let l1: f64 = before
            .rho
            .iter()
            .zip(&after.rho)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * before.dp();
        prop_assert!(l1 < 1e-10);
    }

    #[test]
    fn auto_grid_resolves_waist_and_spread(beam in beam_strategy()) {
        let kin = beam.kinematics().unwrap();
        let grid = GridSpec::auto(&beam, None).unwrap();
        let sigma_zt = analytic_sigma_z(beam.sigma_z0, beam.drift_time(&kin), &kin);
        prop_assert!(grid.dz() <= beam.sigma_z0 / 8.0 * (1.0 + 1e-12));
        prop_assert!(grid.z_span() >= 32.0 * sigma_zt * (1.0 - 1e-12));
        prop_assert!(grid.n() >= DEFAULT_N);
        prop_assert_eq!(grid.n() & (grid.n() - 1), 0);
    }

    #[test]
    fn classification_is_total_and_threshold_consistent(
        beam in beam_strategy(),
        beta_lambda in 0.6e-6..2.0e-6f64,
    ) {
        let kin = beam.kinematics().unwrap();
        let photon = PhotonScale::from_beta_lambda(beta_lambda, &kin).unwrap();
        let report = classify(&beam, &photon).unwrap();

        let tau = std::f64::consts::TAU;
        let sigma_zt = analytic_sigma_z(beam.sigma_z0, beam.drift_time(&kin), &kin);
        let gamma0 = tau * beam.sigma_z0 / beta_lambda;
        let gamma = tau * sigma_zt / beta_lambda;
        prop_assert!((report.gamma0 / gamma0 - 1.0).abs() < 1e-12);
        prop_assert!((report.gamma / gamma - 1.0).abs() < 1e-12);
        // Drift never shrinks the packet, so gamma >= gamma0.
        prop_assert!(gamma >= gamma0 * (1.0 - 1e-12));

        let expected = if gamma0 >= REGIME_THRESHOLD {
            RegimeLabel::Pinem
        } else if gamma >= REGIME_THRESHOLD {
            RegimeLabel::Apinem
        } else {
            RegimeLabel::Acceleration
        };
        prop_assert_eq!(report.label, expected);

        match report.label {
            RegimeLabel::Pinem => {
                let recoil = tau * qew::constants::HBAR / beta_lambda;
                let predicted = report.predicted_period.unwrap();
                prop_assert!((predicted / recoil - 1.0).abs() < 1e-12);
            }
            RegimeLabel::Apinem => {
                let delta = beam.sigma_p0() * beta_lambda / sigma_zt;
                let predicted = report.predicted_period.unwrap();
                prop_assert!((predicted / delta - 1.0).abs() < 1e-12);
            }
            RegimeLabel::Acceleration => prop_assert!(report.predicted_period.is_none()),
        }
    }
}
