//! The six commands behind the binary. Each one reads a parsed [`Config`],
//! runs the corresponding core pipeline, and writes a single text artifact
//! with a resolved-configuration header, so reruns are byte-identical.

use std::io::Write;

use anyhow::{anyhow, Context};
use qew::analysis::{
    ensemble_average, fringe_spacing_estimate, momentum_spectrum, peak_spacing_estimate,
    sideband_weights, sweep_fringe_vs_wavelength, EnsembleParams, PhaseJitter, Spectrum,
    SpectrumAxis,
};
use qew::kinematics::Kinematics;
use qew::perturbation::FirstOrderTheory;
use qew::propagator::{run_interaction, Scenario};
use qew::regimes::{classify, phase_diagram, DiagramSpec, RegimeLabel, RegimeReport};
use qew::wavepacket::{BeamParams, GridSpec};
use qew::wigner::wigner_map;

use crate::config::{Config, LaserConfig, PhaseKind};

/// What the binary was asked to do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Predict,
    Simulate,
    Wigner,
    PhaseDiagram,
    Sweep,
    Ensemble,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Predict => "predict",
            CommandKind::Simulate => "simulate",
            CommandKind::Wigner => "wigner",
            CommandKind::PhaseDiagram => "phase-diagram",
            CommandKind::Sweep => "sweep",
            CommandKind::Ensemble => "ensemble",
        }
    }
}

/// Run one command against a parsed configuration, writing the artifact to
/// `out`.
pub fn execute<W: Write>(kind: CommandKind, cfg: &Config, out: &mut W) -> anyhow::Result<()> {
    match kind {
        CommandKind::Predict => predict(cfg, out),
        CommandKind::Simulate => simulate(cfg, out),
        CommandKind::Wigner => wigner(cfg, out),
        CommandKind::PhaseDiagram => diagram(cfg, out),
        CommandKind::Sweep => sweep(cfg, out),
        CommandKind::Ensemble => ensemble(cfg, out),
    }
}

fn laser_config(cfg: &Config) -> anyhow::Result<&LaserConfig> {
    cfg.laser
        .as_ref()
        .ok_or_else(|| anyhow!("this command needs a [laser] section"))
}

fn build_scenario(cfg: &Config) -> anyhow::Result<(Scenario, Kinematics)> {
    let beam = cfg.beam.to_core();
    let kin = beam.kinematics()?;
    let laser = laser_config(cfg)?.build(&kin)?;
    let scenario = match (cfg.grid, cfg.run.dt) {
        (Some(g), Some(dt)) => Scenario::new(beam, laser, GridSpec::new(g.n, g.z_span)?, dt)?,
        (Some(g), None) => {
            Scenario::with_default_timestep(beam, laser, GridSpec::new(g.n, g.z_span)?)?
        }
        (None, Some(dt)) => {
            let grid = GridSpec::auto(&beam, Some(&laser.photon))?;
            Scenario::new(beam, laser, grid, dt)?
        }
        (None, None) => Scenario::auto(beam, laser)?,
    };
    Ok((scenario, kin))
}

fn regime_lines(report: &RegimeReport) -> Vec<String> {
    let mut lines = vec![
        format!("regime: {}", report.label),
        format!(
            "gamma0={:e} gamma={:e} damping={:e} sigma_z_entrance={:e} m",
            report.gamma0, report.gamma, report.damping, report.sigma_z_entrance
        ),
    ];
    if let Some(period) = report.predicted_period {
        lines.push(format!("predicted_period={period:e} kg m/s"));
    }
    lines
}

/// Closed-form expectations for the configured scenario; no propagation.
fn predict<W: Write>(cfg: &Config, out: &mut W) -> anyhow::Result<()> {
    let beam = cfg.beam.to_core();
    let kin = beam.kinematics()?;
    let lcfg = laser_config(cfg)?;
    let laser = lcfg.build(&kin)?;
    let report = classify(&beam, &laser.photon)?;
    let theory = FirstOrderTheory::evaluate(&beam, &laser)?;

    for line in cfg.echo("predict") {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "regime = {}", report.label)?;
    writeln!(out, "gamma0 = {:e}", theory.gamma0)?;
    writeln!(out, "gamma = {:e}", theory.gamma)?;
    writeln!(out, "damping = {:e}", theory.damping)?;
    writeln!(out, "sigma_z_entrance = {:e} m", theory.sigma_z_entrance)?;
    writeln!(out, "sigma_p0 = {:e} kg m/s", beam.sigma_p0())?;
    writeln!(out, "upsilon = {:e}", theory.upsilon)?;
    writeln!(out, "e0 = {:e} V/m", laser.e0)?;
    writeln!(out, "theta_bar = {:e} rad", theory.theta_bar)?;
    writeln!(out, "t_interaction = {:e} s", laser.t_interaction(&kin))?;
    writeln!(out, "hbar_omega = {:e} eV", laser.photon.hbar_omega_ev())?;
    writeln!(out, "kick_scale = {:e} kg m/s", theory.kick_scale)?;
    writeln!(out, "point_shift = {:e} kg m/s", theory.point_shift)?;
    writeln!(out, "expected_shift = {:e} kg m/s", theory.expected_shift)?;
    writeln!(out, "recoil = {:e} kg m/s", theory.recoil)?;
    writeln!(out, "fringe_spacing = {:e} kg m/s", theory.fringe_spacing)?;
    writeln!(out, "fringe_energy = {:e} J", theory.fringe_energy)?;
    if let Some(period) = report.predicted_period {
        writeln!(out, "predicted_period = {period:e} kg m/s")?;
    }
    Ok(())
}

/// Per-regime structure measurement lines for a final spectrum.
fn measurement_lines(spec: &Spectrum, report: &RegimeReport, beam: &BeamParams) -> Vec<String> {
    let mut lines = vec![format!(
        "mean_shift={:e} kg m/s, sigma_p={:e} kg m/s",
        spec.mean() - spec.p0,
        spec.sigma()
    )];
    match report.label {
        RegimeLabel::Apinem => {
            if let Some(est) = fringe_spacing_estimate(spec) {
                lines.push(format!(
                    "fringe_period={:e} kg m/s, visibility={:e}",
                    est.period, est.visibility
                ));
            } else {
                lines.push("fringe_period=unresolved".into());
            }
        }
        RegimeLabel::Pinem => {
            if let Some(spacing) = peak_spacing_estimate(spec, 1e-3) {
                lines.push(format!("comb_spacing={spacing:e} kg m/s"));
            } else {
                lines.push("comb_spacing=unresolved".into());
            }
            if let Some(period) = report.predicted_period {
                if let Ok(w) = sideband_weights(spec, period, 3, beam.sigma_p0()) {
                    let cells: Vec<String> = w
                        .orders
                        .iter()
                        .zip(&w.weights)
                        .map(|(n, v)| format!("w[{n}]={v:e}"))
                        .collect();
                    lines.push(format!("sideband_weights: {}", cells.join(" ")));
                }
            }
        }
        RegimeLabel::Acceleration => {}
    }
    lines
}

/// Propagate and export the exit momentum spectrum.
fn simulate<W: Write>(cfg: &Config, out: &mut W) -> anyhow::Result<()> {
    let (scenario, _) = build_scenario(cfg)?;
    let report = classify(&scenario.beam, &scenario.laser.photon)?;
    let run = run_interaction(&scenario, &[])?;
    let spec = momentum_spectrum(&run.final_state)?;

    let mut header = cfg.echo("simulate");
    header.extend(regime_lines(&report));
    header.push(format!("norm={:e}", run.final_state.norm_sq()));
    header.extend(measurement_lines(&spec, &report, &scenario.beam));
    spec.write_tsv(out, SpectrumAxis::MomentumOffset, &header)?;
    Ok(())
}

/// Propagate and export the exit phase-space map.
fn wigner<W: Write>(cfg: &Config, out: &mut W) -> anyhow::Result<()> {
    let (scenario, _) = build_scenario(cfg)?;
    let report = classify(&scenario.beam, &scenario.laser.photon)?;
    let run = run_interaction(&scenario, &[])?;
    let map = wigner_map(
        &run.final_state,
        cfg.run.wigner_stride_z,
        cfg.run.wigner_stride_p,
    )?;
    // Header diagnostics need full momentum sampling: the circular image
    // alternates sign across fine momentum bins, so it cancels from the mass
    // only at stride one. Grow the position stride until the dense map fits.
    let n = run.final_state.grid().n();
    let mut diag_stride_z = cfg.run.wigner_stride_z;
    while (n / diag_stride_z) * n > qew::wigner::MAX_MAP_CELLS {
        diag_stride_z *= 2;
    }
    let diag = if cfg.run.wigner_stride_p == 1 && diag_stride_z == cfg.run.wigner_stride_z {
        map.clone()
    } else {
        wigner_map(&run.final_state, diag_stride_z, 1)?
    };
    let moments = diag.central_moments();

    let mut header = cfg.echo("wigner");
    header.extend(regime_lines(&report));
    header.push(format!(
        "mass={:e}, area={:e} J s, central_negative_mass={:e}",
        diag.mass(),
        moments.area,
        diag.central_negative_mass()
    ));
    map.write_tsv(out, cfg.run.wigner_scale, &header)?;
    Ok(())
}

/// Classify the waist/drift plane and trace the regime boundary.
fn diagram<W: Write>(cfg: &Config, out: &mut W) -> anyhow::Result<()> {
    let beam = cfg.beam.to_core();
    let kin = beam.kinematics()?;
    let photon = laser_config(cfg)?.photon(&kin)?;
    let d = cfg
        .diagram
        .ok_or_else(|| anyhow!("phase-diagram needs a [diagram] section"))?;
    let spec = DiagramSpec {
        sigma_range: (d.sigma_min, d.sigma_max),
        n_sigma: d.n_sigma,
        drift_range: (d.drift_min, d.drift_max),
        n_drift: d.n_drift,
    };
    let map = phase_diagram(beam.beta, &photon, &spec)?;

    let mut header = cfg.echo("phase-diagram");
    if let Some(sigma) = map.boundary_max_sigma() {
        header.push(format!("boundary_max_sigma={sigma:e} m"));
    }
    map.write_grid_tsv(out, &header)?;
    writeln!(out)?;
    map.write_boundary_tsv(out, &["boundary polylines".into()])?;
    Ok(())
}

/// Scan fringe spacing against drive wavelength.
fn sweep<W: Write>(cfg: &Config, out: &mut W) -> anyhow::Result<()> {
    let s = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| anyhow!("sweep needs a [sweep] section"))?;
    let beam = cfg.beam.to_core();
    let result = sweep_fringe_vs_wavelength(&beam, &s.beta_lambdas, s.upsilon, s.length)
        .context("wavelength sweep failed")?;
    result.write_tsv(out, &cfg.echo("sweep"))?;
    Ok(())
}

/// Average the exit spectrum over shot-to-shot jitter.
fn ensemble<W: Write>(cfg: &Config, out: &mut W) -> anyhow::Result<()> {
    let (scenario, _) = build_scenario(cfg)?;
    let report = classify(&scenario.beam, &scenario.laser.photon)?;
    let e = &cfg.ensemble;
    let params = EnsembleParams {
        sigma_e_part: e.sigma_e_part,
        phase: match e.phase {
            PhaseKind::None => PhaseJitter::None,
            PhaseKind::Uniform => PhaseJitter::Uniform,
            PhaseKind::Gaussian => PhaseJitter::GaussianTiming {
                sigma_t: e.sigma_t.unwrap_or(0.0),
            },
        },
        draws: e.draws,
        seed: e.seed,
    };
    let result = ensemble_average(&scenario, &params)?;

    let mut header = cfg.echo("ensemble");
    header.extend(regime_lines(&report));
    header.push(format!(
        "draws={}, mean_shift={:e} kg m/s, sigma_p={:e} kg m/s, energy_width={:e} J",
        result.draws, result.mean_shift, result.sigma_p, result.energy_width
    ));
    result
        .spectrum
        .write_tsv(out, SpectrumAxis::MomentumOffset, &header)?;
    Ok(())
}
