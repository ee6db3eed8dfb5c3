//! CODATA 2018 physical constants (SI).

/// Speed of light in vacuum (m/s, exact).
pub const C: f64 = 299_792_458.0;

/// Elementary charge (C, exact).
pub const E_CHARGE: f64 = 1.602_176_634e-19;

/// Planck constant (J s, exact).
pub const H: f64 = 6.626_070_15e-34;

/// Reduced Planck constant (J s), derived from the exact `H` so that
/// `2 pi * HBAR == H` to the last bit.
pub const HBAR: f64 = H / std::f64::consts::TAU;

/// Electron rest mass (kg).
pub const M_E: f64 = 9.109_383_7015e-31;

/// Electron Compton wavelength h/(m_e c) (m), derived from the values above.
pub const LAMBDA_C: f64 = H / (M_E * C);

/// One electronvolt (J, exact).
pub const EV: f64 = E_CHARGE;
