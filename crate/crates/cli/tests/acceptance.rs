//! Acceptance suite: one test per release criterion, each printing a single
//! PASS line with the measured numbers (visible with `--nocapture`) and
//! failing loudly otherwise. Criteria that propagate states use the shipped
//! configuration files, so this suite also pins the packaged examples.

use std::f64::consts::{PI, TAU};
use std::path::Path;
use std::time::Instant;

use qew::analysis::{
    ensemble_average, mean_shift, momentum_spectrum, peak_spacing_estimate, sideband_weights,
    sweep_fringe_vs_wavelength, visibility, EnsembleParams, PhaseJitter,
};
use qew::constants::{E_CHARGE, HBAR};
use qew::kinematics::{Kinematics, PhotonScale};
use qew::propagator::{run_interaction, LaserField, Scenario};
use qew::regimes::{classify, phase_diagram, DiagramSpec, RegimeLabel};
use qew::wavepacket::{
    analytic_sigma_z, drift, gaussian_waist, moments, BeamParams, GridSpec, Wavefunction,
};
use qew::wigner::wigner_map;
use qew_cli::config::{self, Config};

fn criterion(n: u32, title: &str, budget_s: f64, body: impl FnOnce() -> Result<String, String>) {
    let t0 = Instant::now();
    let outcome = body();
    let dt = t0.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            assert!(
                dt <= budget_s,
                "criterion {n} ({title}): FAIL - {dt:.1}s exceeds the {budget_s:.0}s budget"
            );
            println!("criterion {n} ({title}): PASS - {detail} [{dt:.1}s]");
        }
        Err(why) => panic!("criterion {n} ({title}): FAIL - {why} [{dt:.1}s]"),
    }
}

fn shipped(name: &str) -> Config {
    let path = format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"));
    config::load(Path::new(&path)).unwrap_or_else(|e| panic!("loading {name}: {e}"))
}

fn rel_dev(measured: f64, reference: f64) -> f64 {
    (measured - reference).abs() / reference.abs()
}

#[test]
fn criterion_1_free_drift_law() {
    criterion(1, "free drift law", 10.0, || {
        let kin = Kinematics::from_beta(0.7).unwrap();

        // Closed form at the reference point: a 0.04 um waist grows to
        // 1.50 um over 60 cm of drift.
        let sigma_ref = analytic_sigma_z(0.04e-6, 0.6 / kin.v0, &kin);
        if rel_dev(sigma_ref, 1.50e-6) > 0.02 {
            return Err(format!("sigma(0.04 um, 60 cm) = {sigma_ref:e}, not 1.50 um +- 2%"));
        }

        // Grid-propagated spread against the closed form across the plane.
        let mut worst = 0.0f64;
        for &sigma_z0 in &[0.02e-6, 0.2e-6, 1.0e-6] {
            for &drift_length in &[0.0, 0.3, 1.0] {
                let beam = BeamParams {
                    sigma_z0,
                    drift_length,
                    beta: 0.7,
                };
                let grid = GridSpec::auto(&beam, None).unwrap();
                let waist = gaussian_waist(&beam, &grid).unwrap();
                let t_d = beam.drift_time(&kin);
                let drifted = drift(&waist, t_d, &kin).unwrap();
                let measured = moments(&drifted).sigma_z;
                let analytic = analytic_sigma_z(sigma_z0, t_d, &kin);
                worst = worst.max(rel_dev(measured, analytic));
            }
        }
        if worst > 0.005 {
            return Err(format!("numerical spread off by {worst:.2e} rel, limit 5e-3"));
        }
        Ok(format!(
            "sigma(0.04 um, 60 cm) = {sigma_ref:.4e} m; numeric vs analytic within {worst:.1e}"
        ))
    });
}

#[test]
fn criterion_2_regime_configs_classify() {
    criterion(2, "regime configurations classify", 1.0, || {
        let cases = [
            ("pinem.conf", RegimeLabel::Pinem),
            ("acceleration.conf", RegimeLabel::Acceleration),
            ("apinem.conf", RegimeLabel::Apinem),
        ];
        let mut seen = Vec::new();
        for (name, expected) in cases {
            let cfg = shipped(name);
            let beam = cfg.beam.to_core();
            let kin = beam.kinematics().map_err(|e| e.to_string())?;
            let photon = cfg
                .laser
                .as_ref()
                .ok_or("config lacks [laser]")?
                .photon(&kin)
                .map_err(|e| e.to_string())?;
            let report = classify(&beam, &photon).map_err(|e| e.to_string())?;
            if report.label != expected {
                return Err(format!(
                    "{name}: classified {} (gamma0 = {:.3}, gamma = {:.3})",
                    report.label.as_str(),
                    report.gamma0,
                    report.gamma
                ));
            }
            seen.push(format!("{name} -> {}", report.label.as_str()));
        }
        Ok(seen.join(", "))
    });
}

#[test]
fn criterion_3_coherent_acceleration_kick() {
    criterion(3, "coherent acceleration kick", 120.0, || {
        let cfg = shipped("acceleration.conf");
        let beam = cfg.beam.to_core();
        let kin = beam.kinematics().unwrap();
        let laser_cfg = cfg.laser.as_ref().unwrap();
        let photon = laser_cfg.photon(&kin).unwrap();
        let length = laser_cfg.length.unwrap();
        let damping = classify(&beam, &photon).unwrap().damping;

        let mut worst = 0.0f64;
        for &upsilon in &[0.05, 0.1, 0.2] {
            for &phi0 in &[0.0, PI / 4.0, PI / 2.0] {
                let laser = LaserField::from_upsilon(upsilon, length, phi0, photon, &kin)
                    .map_err(|e| e.to_string())?;
                let scenario = Scenario::auto(beam, laser).map_err(|e| e.to_string())?;
                let run = run_interaction(&scenario, &[]).map_err(|e| e.to_string())?;
                let before = momentum_spectrum(&run.entrance).unwrap();
                let after = momentum_spectrum(&run.final_state).unwrap();
                let measured = mean_shift(&before, &after).unwrap();

                let kick = E_CHARGE * laser.e0 * length / kin.v0;
                let predicted = -kick * damping * phi0.cos();
                let dev = (measured - predicted).abs() / kick;
                if dev > 0.03 {
                    return Err(format!(
                        "Upsilon = {upsilon}, phi0 = {phi0:.3}: shift {measured:e} vs \
                         {predicted:e}, off by {dev:.2e} of the kick scale"
                    ));
                }
                worst = worst.max(dev);
            }
        }
        Ok(format!(
            "9 drive settings, worst deviation {worst:.1e} of e E0 L / v0 (limit 3e-2)"
        ))
    });
}

#[test]
fn criterion_4_sideband_ladder() {
    criterion(4, "sideband ladder", 60.0, || {
        let cfg = shipped("pinem.conf");
        let beam = cfg.beam.to_core();
        let kin = beam.kinematics().unwrap();
        let laser = cfg.laser.as_ref().unwrap().build(&kin).unwrap();
        let upsilon = laser.upsilon();
        let scenario = Scenario::auto(beam, laser).map_err(|e| e.to_string())?;
        let run = run_interaction(&scenario, &[]).map_err(|e| e.to_string())?;
        let spec = momentum_spectrum(&run.final_state).unwrap();

        let recoil = laser.photon.recoil;
        let spacing = peak_spacing_estimate(&spec, 1e-3).ok_or("no comb detected")?;
        if rel_dev(spacing, recoil) > 0.01 {
            return Err(format!(
                "comb spacing {spacing:e} vs photon recoil {recoil:e}, off by {:.2e}",
                rel_dev(spacing, recoil)
            ));
        }

        let bands = sideband_weights(&spec, recoil, 2, beam.sigma_p0()).map_err(|e| e.to_string())?;
        let expect_w1 = upsilon * upsilon;
        let mut worst = 0.0f64;
        for (&order, &weight) in bands.orders.iter().zip(&bands.weights) {
            let dev = match order {
                0 => rel_dev(weight, 1.0 - 2.0 * expect_w1),
                1 | -1 => rel_dev(weight, expect_w1),
                _ => continue,
            };
            if dev > 0.05 {
                return Err(format!("order {order} weight {weight:e}, off by {dev:.2e} rel"));
            }
            worst = worst.max(dev);
        }
        Ok(format!(
            "spacing {spacing:.4e} = recoil within {:.1e}; weights within {worst:.1e} rel",
            rel_dev(spacing, recoil)
        ))
    });
}

#[test]
fn criterion_5_fringes_track_wavelength() {
    criterion(5, "fringes track wavelength", 600.0, || {
        let cfg = shipped("fringe_sweep.conf");
        let beam = cfg.beam.to_core();
        let sw = cfg.sweep.as_ref().unwrap();
        let result = sweep_fringe_vs_wavelength(&beam, &sw.beta_lambdas, sw.upsilon, sw.length)
            .map_err(|e| e.to_string())?;

        let mut worst = 0.0f64;
        for point in &result.points {
            if point.label != RegimeLabel::Apinem {
                return Err(format!(
                    "beta*lambda = {:e} classified {}",
                    point.beta_lambda,
                    point.label.as_str()
                ));
            }
            let predicted = point.predicted.unwrap();
            let measured = point.measured.ok_or_else(|| {
                format!("no fringes resolved at beta*lambda = {:e}", point.beta_lambda)
            })?;
            let dev = rel_dev(measured, predicted);
            if dev > 0.10 {
                return Err(format!(
                    "beta*lambda = {:e}: spacing {measured:e} vs {predicted:e} ({dev:.2e} rel)"
                , point.beta_lambda));
            }
            worst = worst.max(dev);
            // Pin the reference point against the frozen closed form.
            if (point.beta_lambda - 1.2e-6).abs() < 1e-12 {
                let frozen = 1.573_365_929_394_532_3e-27;
                if rel_dev(predicted, frozen) > 1e-9 {
                    return Err(format!("prediction drifted: {predicted:e} vs {frozen:e}"));
                }
                if rel_dev(measured, frozen) > 0.10 {
                    return Err(format!("reference fringe {measured:e} vs {frozen:e}"));
                }
            }
        }
        let slope = result.measured_slope.ok_or("no fitted slope")?;
        let slope_dev = rel_dev(slope, result.predicted_slope);
        if slope_dev > 0.10 {
            return Err(format!(
                "slope {slope:e} vs chirp {:.6e} ({slope_dev:.2e} rel)",
                result.predicted_slope
            ));
        }

        // Long-packet control: comb spacing is the photon recoil, no chirp.
        let ctrl_cfg = shipped("fringe_sweep_pinem_control.conf");
        let ctrl_beam = ctrl_cfg.beam.to_core();
        let ctrl_sw = ctrl_cfg.sweep.as_ref().unwrap();
        let control = sweep_fringe_vs_wavelength(
            &ctrl_beam,
            &ctrl_sw.beta_lambdas,
            ctrl_sw.upsilon,
            ctrl_sw.length,
        )
        .map_err(|e| e.to_string())?;
        let mut worst_ctrl = 0.0f64;
        for point in &control.points {
            if point.label != RegimeLabel::Pinem {
                return Err(format!(
                    "control at beta*lambda = {:e} classified {}",
                    point.beta_lambda,
                    point.label.as_str()
                ));
            }
            let recoil = TAU * HBAR / point.beta_lambda;
            let measured = point.measured.ok_or("control comb unresolved")?;
            let dev = rel_dev(measured, recoil);
            if dev > 0.01 {
                return Err(format!(
                    "control at beta*lambda = {:e}: {measured:e} vs recoil {recoil:e}"
                , point.beta_lambda));
            }
            worst_ctrl = worst_ctrl.max(dev);
        }
        Ok(format!(
            "fringe spacing within {worst:.1e} of the chirp form, slope within {slope_dev:.1e}; \
             control comb within {worst_ctrl:.1e} of the recoil"
        ))
    });
}

#[test]
fn criterion_6_regime_map_boundary() {
    criterion(6, "regime map boundary", 30.0, || {
        let cfg = shipped("regime_map.conf");
        let beam = cfg.beam.to_core();
        let kin = beam.kinematics().unwrap();
        let photon = cfg.laser.as_ref().unwrap().photon(&kin).unwrap();
        let d = cfg.diagram.unwrap();
        let spec = DiagramSpec {
            sigma_range: (d.sigma_min, d.sigma_max),
            n_sigma: d.n_sigma,
            drift_range: (d.drift_min, d.drift_max),
            n_drift: d.n_drift,
        };
        let map = phase_diagram(beam.beta, &photon, &spec).map_err(|e| e.to_string())?;

        let measured = map.boundary_max_sigma().ok_or("no boundary found")?;
        let predicted = beam.beta * photon.lambda / (2.0f64.sqrt() * PI);
        let cell = ((d.sigma_max / d.sigma_min).ln()) / (d.n_sigma as f64 - 1.0);
        let off = (measured / predicted).ln().abs();
        if off > cell {
            return Err(format!(
                "boundary peak at {measured:e} vs {predicted:e}: off {off:.3} log units, \
                 cell {cell:.3}"
            ));
        }

        for (i, &sigma_z0) in map.sigma_z0.iter().enumerate() {
            for (j, &drift_length) in map.drift_length.iter().enumerate() {
                let cell_beam = BeamParams {
                    sigma_z0,
                    drift_length,
                    beta: beam.beta,
                };
                let report = classify(&cell_beam, &photon).unwrap();
                if report.label != map.labels[[i, j]] {
                    return Err(format!(
                        "label mismatch at sigma = {sigma_z0:e}, drift = {drift_length:e}"
                    ));
                }
            }
        }
        Ok(format!(
            "largest fringing waist {measured:.4e} m vs {predicted:.4e} m \
             ({off:.3} of a {cell:.3} log-unit cell); all {} labels consistent",
            map.labels.len()
        ))
    });
}

#[test]
fn criterion_7_numerical_hygiene() {
    criterion(7, "numerical hygiene", 120.0, || {
        let kin = Kinematics::from_beta(0.7).unwrap();
        let photon = PhotonScale::from_beta_lambda(1.2e-6, &kin).unwrap();
        let beam = BeamParams {
            sigma_z0: 0.1e-6,
            drift_length: 0.0,
            beta: 0.7,
        };
        let grid = GridSpec::new(2048, 19.2e-6).unwrap();

        // Norm conservation and exact marginals after a kicked run.
        let laser = LaserField::from_upsilon(0.1, 5e-6, 0.4, photon, &kin).unwrap();
        let scenario = Scenario::with_default_timestep(beam, laser, grid).unwrap();
        let run = run_interaction(&scenario, &[]).map_err(|e| e.to_string())?;
        let norm_err = (run.final_state.norm_sq() - 1.0).abs();
        if norm_err > 1e-8 {
            return Err(format!("norm drift {norm_err:e} after the run"));
        }

        let map = wigner_map(&run.final_state, 1, 1).map_err(|e| e.to_string())?;
        let dz = grid.dz();
        let l1_z: f64 = map
            .marginal_z()
            .iter()
            .zip(&run.final_state.density())
            .map(|(m, d)| (m - d).abs() * dz)
            .sum();
        if l1_z > 1e-8 {
            return Err(format!("position marginal L1 deviation {l1_z:e}"));
        }
        let spec = momentum_spectrum(&run.final_state).unwrap();
        let (_, rho) = map.marginal_p().map_err(|e| e.to_string())?;
        let n = grid.n();
        let l1_p: f64 = rho
            .iter()
            .enumerate()
            .map(|(m, r)| (r - spec.rho[m + n / 4]).abs() * spec.dp())
            .sum();
        if l1_p > 1e-8 {
            return Err(format!("momentum marginal L1 deviation {l1_p:e}"));
        }

        // A minimum-uncertainty Gaussian occupies exactly half a Planck cell
        // and stays pointwise non-negative away from the circular image.
        let waist = gaussian_waist(&beam, &grid).unwrap();
        let gauss_map = wigner_map(&waist, 1, 1).map_err(|e| e.to_string())?;
        let area = gauss_map.central_moments().area;
        if rel_dev(area, PI * HBAR) > 1e-6 {
            return Err(format!("Gaussian area {area:e} vs {:e}", PI * HBAR));
        }
        if gauss_map.central_min() < -1e-12 * gauss_map.central_max() {
            return Err(format!(
                "Gaussian Wigner negative: {:e}",
                gauss_map.central_min()
            ));
        }

        // Second-order splitting: halving dt divides the state error by
        // four. Strong coupling keeps the splitting error far above the
        // accumulated FFT roundoff floor.
        let strong = LaserField::from_upsilon(4.0, 5e-6, 0.5, photon, &kin).unwrap();
        let t_int = 5e-6 / kin.v0;
        let state_at = |steps: u32| -> Wavefunction {
            let sc = Scenario::new(beam, strong, grid, t_int / steps as f64).unwrap();
            run_interaction(&sc, &[]).unwrap().final_state
        };
        let reference = state_at(4608);
        let l2 = |a: &Wavefunction| -> f64 {
            a.values
                .iter()
                .zip(&reference.values)
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt()
        };
        let ratio = l2(&state_at(288)) / l2(&state_at(576));
        if !(3.5..=4.5).contains(&ratio) {
            return Err(format!("dt-halving error ratio {ratio:.3}, expected 4 +- 0.5"));
        }

        // Chirp-interference states carry genuinely negative Wigner weight.
        let fringed_beam = BeamParams {
            sigma_z0: 0.06e-6,
            drift_length: 0.5,
            beta: 0.7,
        };
        let fringed_laser = LaserField::from_upsilon(0.1, 5e-6, 0.0, photon, &kin).unwrap();
        let fringed_scenario = Scenario::auto(fringed_beam, fringed_laser).unwrap();
        let fringed = run_interaction(&fringed_scenario, &[]).map_err(|e| e.to_string())?;
        let fringed_map = wigner_map(&fringed.final_state, 8, 1).map_err(|e| e.to_string())?;
        let depth = fringed_map.central_min() / fringed_map.central_max();
        if depth >= -1e-4 {
            return Err(format!("no interference negativity: min/max = {depth:e}"));
        }

        Ok(format!(
            "norm drift {norm_err:.1e}; marginal L1 {l1_z:.1e}/{l1_p:.1e}; Gaussian area \
             within {:.1e}; dt ratio {ratio:.2}; fringe Wigner min/max {depth:.1e}",
            rel_dev(area, PI * HBAR)
        ))
    });
}

#[test]
fn criterion_8_ensemble_averaging() {
    criterion(8, "ensemble averaging", 120.0, || {
        let kin = Kinematics::from_beta(0.7).unwrap();
        let photon = PhotonScale::from_beta_lambda(1.2e-6, &kin).unwrap();

        // Incoherent energy spread adds to the intrinsic width in
        // quadrature; check on a drive-free window.
        let beam = BeamParams {
            sigma_z0: 0.04e-6,
            drift_length: 0.0,
            beta: 0.7,
        };
        let idle = LaserField::from_upsilon(0.0, 0.5e-6, 0.0, photon, &kin).unwrap();
        let scenario = Scenario::auto(beam, idle).unwrap();
        let sigma_e = 2.0 * E_CHARGE;
        let ens = ensemble_average(
            &scenario,
            &EnsembleParams {
                sigma_e_part: sigma_e,
                phase: PhaseJitter::None,
                draws: 1,
                seed: 0,
            },
        )
        .map_err(|e| e.to_string())?;
        let sigma_e0 = kin.v0 * beam.sigma_p0();
        let predicted_width = 2.0 * (sigma_e0.hypot(sigma_e));
        let width_dev = rel_dev(ens.energy_width, predicted_width);
        if width_dev > 0.01 {
            return Err(format!(
                "energy width {:e} vs {predicted_width:e} ({width_dev:.2e} rel)",
                ens.energy_width
            ));
        }

        // Per-shot energy spread at twice the fringe period erases the
        // interference contrast.
        let fringed_beam = BeamParams {
            sigma_z0: 0.04e-6,
            drift_length: 0.4,
            beta: 0.7,
        };
        let fringed_laser = LaserField::from_upsilon(0.1, 30e-6, 0.0, photon, &kin).unwrap();
        let fringed_scenario = Scenario::auto(fringed_beam, fringed_laser).unwrap();
        let sigma_zt = analytic_sigma_z(0.04e-6, fringed_beam.drift_time(&kin), &kin);
        let delta_p = fringed_beam.sigma_p0() * 1.2e-6 / sigma_zt;

        let sharp = run_interaction(&fringed_scenario, &[]).map_err(|e| e.to_string())?;
        let sharp_vis = visibility(&momentum_spectrum(&sharp.final_state).unwrap(), delta_p);
        if sharp_vis < 0.2 {
            return Err(format!("fringe contrast only {sharp_vis:.3} before averaging"));
        }
        let washed = ensemble_average(
            &fringed_scenario,
            &EnsembleParams {
                sigma_e_part: 2.0 * kin.v0 * delta_p,
                phase: PhaseJitter::None,
                draws: 1,
                seed: 0,
            },
        )
        .map_err(|e| e.to_string())?;
        let washed_vis = visibility(&washed.spectrum, delta_p);
        if washed_vis >= 0.1 {
            return Err(format!("contrast {washed_vis:.3} survives 2x fringe-period jitter"));
        }

        // A uniform drive phase leaves no net kick.
        let quick_beam = BeamParams {
            sigma_z0: 0.1e-6,
            drift_length: 0.0,
            beta: 0.7,
        };
        let grid = GridSpec::new(2048, 19.2e-6).unwrap();
        let kicked = LaserField::from_upsilon(0.1, 5e-6, 0.0, photon, &kin).unwrap();
        let quick = Scenario::with_default_timestep(quick_beam, kicked, grid).unwrap();
        let uniform = ensemble_average(
            &quick,
            &EnsembleParams {
                sigma_e_part: 0.0,
                phase: PhaseJitter::Uniform,
                draws: 8,
                seed: 0,
            },
        )
        .map_err(|e| e.to_string())?;
        let kick = E_CHARGE * kicked.e0 * 5e-6 / kin.v0;
        let residue = uniform.mean_shift.abs() / kick;
        if residue >= 1e-3 {
            return Err(format!("uniform-phase residue {residue:e} of the kick"));
        }

        Ok(format!(
            "width within {width_dev:.1e}; contrast {sharp_vis:.2} -> {washed_vis:.1e}; \
             uniform-phase residue {residue:.1e} of the kick"
        ))
    });
}
