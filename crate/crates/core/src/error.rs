//! Library error type.

use thiserror::Error;

/// Everything that can go wrong while setting up or running a scenario.
///
/// Numerical-guard variants name the violated bound so a caller can report
/// actionable messages without re-deriving the check.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Speed ratio beta outside the open interval (0, 1).
    #[error("beta = {0} must lie strictly between 0 and 1")]
    InvalidBeta(f64),

    /// A parameter that must be strictly positive was not.
    #[error("{name} = {value} must be > 0")]
    NonPositive { name: &'static str, value: f64 },

    /// A parameter that must be finite was NaN or infinite.
    #[error("{name} = {value} must be finite")]
    NotFinite { name: &'static str, value: f64 },

    /// Grid cannot represent the requested state.
    #[error("grid too coarse: {requirement} (have {actual:.6e}, need {bound:.6e})")]
    GridResolution {
        requirement: &'static str,
        actual: f64,
        bound: f64,
    },

    /// State content has reached the edge of the position or momentum window.
    #[error(
        "{axis} aliasing: probability {fraction:.3e} within {cells} cells of the \
         window edge (limit {limit:.1e}); enlarge the grid or shorten the drift"
    )]
    Aliasing {
        axis: &'static str,
        fraction: f64,
        cells: usize,
        limit: f64,
    },

    /// Refusing to allocate an output grid this large.
    #[error(
        "phase-space grid of {cells} cells exceeds the {limit}-cell memory guard; \
         downsample or reduce n"
    )]
    MemoryGuard { cells: usize, limit: usize },

    /// Two states or spectra do not share a common grid.
    #[error("axis mismatch: {0}")]
    AxisMismatch(String),

    /// Sideband spacing below the resolvability threshold (large-recoil
    /// condition): the photon recoil must exceed the intrinsic momentum
    /// spread for discrete sidebands to exist.
    #[error(
        "sidebands unresolvable: spacing {spacing:.3e} kg m/s must exceed \
         4 sigma_p = {four_sigma_p:.3e} kg m/s"
    )]
    SidebandsUnresolvable { spacing: f64, four_sigma_p: f64 },

    /// Split-step accuracy bound on the timestep.
    #[error("dt = {dt:e} s exceeds the accuracy bound T/64 = {bound:e} s")]
    TimestepTooLarge { dt: f64, bound: f64 },

    /// A requested domain or range is empty or inverted.
    #[error("invalid range for {name}: [{lo}, {hi}]")]
    InvalidRange { name: &'static str, lo: f64, hi: f64 },

    /// Catch-all for invalid argument combinations.
    #[error("{0}")]
    Invalid(String),
}
