//! Closed-form first-order interaction theory: coupling strength, detuning,
//! point-particle momentum kick, wavepacket damping factor, sideband spectra,
//! and chirp-interference fringe spacing.
//!
//! These expressions are what the solver is validated against; they assume
//! the interaction window is short enough that free dispersion inside it is
//! negligible compared to the dispersion accumulated over the drift.

use num_complex::Complex64;

use crate::constants::E_CHARGE;
use crate::error::Error;
use crate::kinematics::Kinematics;
use crate::propagator::LaserField;
use crate::wavepacket::{analytic_sigma_z, BeamParams, GridSpec, Wavefunction};
use crate::{analysis::Spectrum, Result};

/// Largest coupling at which the first-order (single-sideband) expressions
/// are still a sensible approximation.
pub const FIRST_ORDER_VALIDITY: f64 = 0.3;

/// sin(x)/x, continuous through the origin.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Dimensionless coupling strength e E0 L / (2 hbar omega).
pub fn coupling_upsilon(laser: &LaserField) -> f64 {
    laser.upsilon()
}

/// Accumulated phase-slip (omega/v0 - q_z) L over the interaction window.
pub fn detuning_theta(laser: &LaserField, kin: &Kinematics) -> f64 {
    laser.theta_bar(kin)
}

/// Momentum scale of the interaction, e E0 L / v0. The point-particle and
/// wavepacket mean shifts are this scale times order-unity factors.
pub fn kick_scale(laser: &LaserField, kin: &Kinematics) -> f64 {
    E_CHARGE * laser.e0 * laser.length / kin.v0
}

/// Mean momentum transfer to a point charge crossing the interaction window,
/// including the detuning walk-off.
pub fn point_particle_shift(laser: &LaserField, kin: &Kinematics) -> f64 {
    let half_theta = 0.5 * laser.theta_bar(kin);
    -kick_scale(laser, kin) * sinc(half_theta) * (laser.phi0 + half_theta).cos()
}

/// Packet-to-field size ratio Gamma = 2 pi sigma_z / (beta lambda).
pub fn gamma_factor(sigma_z: f64, beta_lambda: f64) -> f64 {
    std::f64::consts::TAU * sigma_z / beta_lambda
}

/// Phase-averaging attenuation exp(-Gamma^2 / 2) of a Gaussian packet of
/// size `sigma_z` against the field period.
pub fn coherence_damping(sigma_z: f64, beta_lambda: f64) -> f64 {
    let g = gamma_factor(sigma_z, beta_lambda);
    (-0.5 * g * g).exp()
}

/// Mean momentum shift of a Gaussian wavepacket: the point-particle kick
/// attenuated by the damping factor at the entrance size sigma_z(t_D).
pub fn expected_shift(beam: &BeamParams, laser: &LaserField) -> Result<f64> {
    beam.validate()?;
    let kin = beam.kinematics()?;
    let sigma_z = analytic_sigma_z(beam.sigma_z0, beam.drift_time(&kin), &kin);
    Ok(point_particle_shift(laser, &kin) * coherence_damping(sigma_z, laser.photon.beta_lambda))
}

/// Spacing of the chirp-interference fringes imprinted on the momentum
/// spectrum of a drifted packet: sigma_p0 beta lambda / sigma_z(t_D). For
/// drifts far beyond the Rayleigh range this tends to m* v0 beta lambda / L_D.
pub fn apinem_fringe_spacing(beam: &BeamParams, beta_lambda: f64) -> Result<f64> {
    beam.validate()?;
    if beta_lambda <= 0.0 || !beta_lambda.is_finite() {
        return Err(Error::NonPositive {
            name: "beta_lambda",
            value: beta_lambda,
        });
    }
    let kin = beam.kinematics()?;
    let sigma_z = analytic_sigma_z(beam.sigma_z0, beam.drift_time(&kin), &kin);
    Ok(beam.sigma_p0() * beta_lambda / sigma_z)
}

/// First-order momentum spectrum and a validity flag for the coupling.
#[derive(Debug, Clone)]
pub struct FirstOrderSpectrum {
    pub spectrum: Spectrum,
    /// False when Upsilon exceeds [`FIRST_ORDER_VALIDITY`]; the returned
    /// spectrum is then only qualitative (higher sidebands carry real weight).
    pub within_validity: bool,
}

/// Analytic sideband spectrum to first order in the coupling: the elastic
/// line at weight 1 - 2 Upsilon^2 plus one photon-recoil sideband on each
/// side at weight Upsilon^2, each a copy of the entrance Gaussian. Requires
/// the sidebands to be resolvable, recoil > 4 sigma_p0.
pub fn pinem_spectrum_first_order(
    beam: &BeamParams,
    laser: &LaserField,
    grid: &GridSpec,
) -> Result<FirstOrderSpectrum> {
    beam.validate()?;
    let kin = beam.kinematics()?;
    let sigma_p = beam.sigma_p0();
    let recoil = laser.photon.recoil;
    if recoil <= 4.0 * sigma_p {
        return Err(Error::SidebandsUnresolvable {
            spacing: recoil,
            four_sigma_p: 4.0 * sigma_p,
        });
    }
    let ups = laser.upsilon();
    let w1 = ups * ups;
    let w0 = 1.0 - 2.0 * w1;
    let norm = 1.0 / ((std::f64::consts::TAU).sqrt() * sigma_p);
    let gauss = |p: f64, center: f64| {
        let u = (p - center) / sigma_p;
        norm * (-0.5 * u * u).exp()
    };

    let n = grid.n();
    let dp = grid.dp();
    let half = n as f64 / 2.0;
    let mut p_axis = Vec::with_capacity(n);
    let mut rho = Vec::with_capacity(n);
    for j in 0..n {
        let p = kin.p0 + (j as f64 - half) * dp;
        p_axis.push(p);
        rho.push(
            w0 * gauss(p, kin.p0)
                + w1 * gauss(p, kin.p0 - recoil)
                + w1 * gauss(p, kin.p0 + recoil),
        );
    }
    Ok(FirstOrderSpectrum {
        spectrum: Spectrum::new(p_axis, rho, kin.p0)?,
        within_validity: ups <= FIRST_ORDER_VALIDITY,
    })
}

/// State after the interaction to first order in the coupling, valid at
/// synchronism when dispersion inside the window is negligible: the
/// unscattered packet minus Upsilon times two recoil-shifted copies.
pub fn first_order_state(entrance: &Wavefunction, laser: &LaserField) -> Wavefunction {
    let ups = laser.upsilon();
    let grid = entrance.grid().clone();
    let mut out = entrance.clone();
    for (i, v) in out.values.iter_mut().enumerate() {
        let theta = laser.q_z * grid.z_at(i) + laser.phi0;
        let up = Complex64::from_polar(ups, theta);
        let down = Complex64::from_polar(ups, -theta);
        *v *= Complex64::new(1.0, 0.0) - (up - down);
    }
    out
}

/// All first-order predictions for one beam/field combination.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderTheory {
    pub upsilon: f64,
    pub theta_bar: f64,
    /// Packet size at the interaction entrance (m).
    pub sigma_z_entrance: f64,
    /// Gamma at the waist.
    pub gamma0: f64,
    /// Gamma at the entrance.
    pub gamma: f64,
    /// exp(-Gamma^2/2) at the entrance.
    pub damping: f64,
    /// e E0 L / v0 (kg m/s).
    pub kick_scale: f64,
    /// Point-particle mean momentum shift (kg m/s).
    pub point_shift: f64,
    /// Damped wavepacket mean momentum shift (kg m/s).
    pub expected_shift: f64,
    /// Photon recoil hbar omega / v0, the sideband spacing (kg m/s).
    pub recoil: f64,
    /// Chirp-interference fringe spacing (kg m/s).
    pub fringe_spacing: f64,
    /// Fringe spacing on the energy axis, v0 * fringe_spacing (J).
    pub fringe_energy: f64,
}

impl FirstOrderTheory {
    pub fn evaluate(beam: &BeamParams, laser: &LaserField) -> Result<Self> {
        beam.validate()?;
        let kin = beam.kinematics()?;
        let bl = laser.photon.beta_lambda;
        let sigma_z = analytic_sigma_z(beam.sigma_z0, beam.drift_time(&kin), &kin);
        let damping = coherence_damping(sigma_z, bl);
        let point = point_particle_shift(laser, &kin);
        let fringe = beam.sigma_p0() * bl / sigma_z;
        Ok(Self {
            upsilon: laser.upsilon(),
            theta_bar: laser.theta_bar(&kin),
            sigma_z_entrance: sigma_z,
            gamma0: gamma_factor(beam.sigma_z0, bl),
            gamma: gamma_factor(sigma_z, bl),
            damping,
            kick_scale: kick_scale(laser, &kin),
            point_shift: point,
            expected_shift: point * damping,
            recoil: laser.photon.recoil,
            fringe_spacing: fringe,
            fringe_energy: kin.v0 * fringe,
        })
    }
}
