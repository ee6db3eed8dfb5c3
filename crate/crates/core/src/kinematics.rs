//! Relativistic kinematics of the carrier electron and the photon scales of
//! the driving field.
//!
//! Longitudinal wavepacket dynamics about a relativistic carrier is governed
//! by the longitudinal effective mass `m* = gamma^3 m_e`; the corresponding
//! effective Compton wavelength `lambda_C* = lambda_C / gamma^3` sets the
//! free-space dispersion rate.

use crate::constants::{C, E_CHARGE, HBAR, LAMBDA_C, M_E};
use crate::error::Error;
use crate::Result;

/// Derived single-electron kinematic quantities, all SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    /// Speed ratio v0/c, in (0, 1).
    pub beta: f64,
    /// Lorentz factor.
    pub gamma: f64,
    /// Carrier velocity (m/s).
    pub v0: f64,
    /// Carrier momentum gamma m_e v0 (kg m/s).
    pub p0: f64,
    /// Longitudinal effective mass gamma^3 m_e (kg).
    pub m_star: f64,
    /// Effective Compton wavelength lambda_C / gamma^3 (m).
    pub lambda_c_star: f64,
}

impl Kinematics {
    pub fn from_beta(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::NotFinite {
                name: "beta",
                value: beta,
            });
        }
        if beta <= 0.0 || beta >= 1.0 {
            return Err(Error::InvalidBeta(beta));
        }
        let gamma = 1.0 / (1.0 - beta * beta).sqrt();
        let v0 = beta * C;
        let gamma3 = gamma * gamma * gamma;
        Ok(Self {
            beta,
            gamma,
            v0,
            p0: gamma * M_E * v0,
            m_star: gamma3 * M_E,
            lambda_c_star: LAMBDA_C / gamma3,
        })
    }

    /// Carrier kinetic energy scale used to convert momentum offsets to
    /// energy offsets: dE = v0 dp for dp << p0.
    pub fn energy_per_momentum(&self) -> f64 {
        self.v0
    }
}

/// Scales of a monochromatic optical field as seen by the carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonScale {
    /// Vacuum wavelength (m).
    pub lambda: f64,
    /// Angular frequency 2 pi c / lambda (rad/s).
    pub omega: f64,
    /// Optical period lambda / c (s).
    pub period: f64,
    /// Photon energy (J).
    pub hbar_omega: f64,
    /// Photon momentum recoil on the electron spectrum, hbar omega / v0
    /// (kg m/s); equals the PINEM sideband spacing.
    pub recoil: f64,
    /// Slippage wavelength beta lambda (m): the spatial period of the
    /// near-field force in the comoving frame.
    pub beta_lambda: f64,
}

impl PhotonScale {
    pub fn new(lambda: f64, kin: &Kinematics) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::NotFinite {
                name: "lambda",
                value: lambda,
            });
        }
        if lambda <= 0.0 {
            return Err(Error::NonPositive {
                name: "lambda",
                value: lambda,
            });
        }
        let omega = std::f64::consts::TAU * C / lambda;
        let hbar_omega = HBAR * omega;
        Ok(Self {
            lambda,
            omega,
            period: lambda / C,
            hbar_omega,
            recoil: hbar_omega / kin.v0,
            beta_lambda: kin.beta * lambda,
        })
    }

    /// Wavelength whose slippage period equals `beta_lambda` at the given
    /// kinematics. Convenient for sweeps parameterized by beta lambda.
    pub fn from_beta_lambda(beta_lambda: f64, kin: &Kinematics) -> Result<Self> {
        if beta_lambda <= 0.0 || !beta_lambda.is_finite() {
            return Err(Error::NonPositive {
                name: "beta_lambda",
                value: beta_lambda,
            });
        }
        Self::new(beta_lambda / kin.beta, kin)
    }

    /// Photon energy in eV, for reporting.
    pub fn hbar_omega_ev(&self) -> f64 {
        self.hbar_omega / E_CHARGE
    }
}
