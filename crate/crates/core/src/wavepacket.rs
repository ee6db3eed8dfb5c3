//! Gaussian wavepacket states on a uniform comoving grid, free-space drift,
//! and phase-space moments.
//!
//! The comoving coordinate is `zeta = z - v0 t`; the state lives on a
//! periodic grid of `n` samples spanning `z_span`, with momentum carried
//! relative to the carrier `p0`. Free drift is a single momentum-space phase
//! `exp(-i (p - p0)^2 t_D / (2 m* hbar))`, never time-stepped.

use num_complex::Complex64;

use crate::constants::HBAR;
use crate::error::Error;
use crate::fft::FftPlan;
use crate::kinematics::{Kinematics, PhotonScale};
use crate::Result;

/// Default grid size; doubled automatically when the waist needs finer
/// sampling.
pub const DEFAULT_N: usize = 16_384;

/// Largest grid the automatic selector will pick.
pub const MAX_N: usize = 1 << 22;

/// Probability fraction near a window edge that trips the aliasing guard.
pub const ALIAS_LIMIT: f64 = 1e-6;

/// Number of cells per edge inspected by the aliasing guard.
pub const ALIAS_EDGE_CELLS: usize = 3;

/// Incoming beam: waist size, drift distance to the interaction point, and
/// carrier speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParams {
    /// Waist rms size sigma_z0 (m), > 0.
    pub sigma_z0: f64,
    /// Drift distance L_D from the waist to the interaction entrance (m).
    /// Negative values model a converging (pre-waist) beam.
    pub drift_length: f64,
    /// Carrier speed ratio v0/c.
    pub beta: f64,
}

impl BeamParams {
    pub fn validate(&self) -> Result<()> {
        if !self.sigma_z0.is_finite() {
            return Err(Error::NotFinite {
                name: "sigma_z0",
                value: self.sigma_z0,
            });
        }
        if self.sigma_z0 <= 0.0 {
            return Err(Error::NonPositive {
                name: "sigma_z0",
                value: self.sigma_z0,
            });
        }
        if !self.drift_length.is_finite() {
            return Err(Error::NotFinite {
                name: "drift_length",
                value: self.drift_length,
            });
        }
        Kinematics::from_beta(self.beta).map(|_| ())
    }

    pub fn kinematics(&self) -> Result<Kinematics> {
        Kinematics::from_beta(self.beta)
    }

    /// Minimum-uncertainty momentum spread at the waist, hbar / (2 sigma_z0).
    pub fn sigma_p0(&self) -> f64 {
        0.5 * HBAR / self.sigma_z0
    }

    /// Drift time corresponding to `drift_length` at the carrier speed.
    pub fn drift_time(&self, kin: &Kinematics) -> f64 {
        self.drift_length / kin.v0
    }
}

/// Uniform periodic grid in the comoving coordinate.
///
/// Sample `i` sits at `zeta = (i - n/2) dz`; the conjugate momentum spacing
/// is `dp = 2 pi hbar / z_span`. DFT bin `k` carries the signed frequency
/// `k` for `k < n/2` and `k - n` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n: usize,
    z_span: f64,
}

impl GridSpec {
    pub fn new(n: usize, z_span: f64) -> Result<Self> {
        if !n.is_power_of_two() || n < 16 {
            return Err(Error::Invalid(format!(
                "grid n = {n} must be a power of two >= 16"
            )));
        }
        if n > MAX_N {
            return Err(Error::Invalid(format!(
                "grid n = {n} exceeds the maximum {MAX_N}"
            )));
        }
        if !z_span.is_finite() || z_span <= 0.0 {
            return Err(Error::NonPositive {
                name: "z_span",
                value: z_span,
            });
        }
        Ok(Self { n, z_span })
    }

    /// Pick a grid for the given beam: span covers the drifted packet and
    /// the slippage period with wide margins, sampling resolves the waist.
    pub fn auto(beam: &BeamParams, photon: Option<&PhotonScale>) -> Result<Self> {
        beam.validate()?;
        let kin = beam.kinematics()?;
        let sigma_zt = analytic_sigma_z(beam.sigma_z0, beam.drift_time(&kin), &kin);
        let mut span = 32.0 * sigma_zt;
        if let Some(ph) = photon {
            span = span.max(16.0 * ph.beta_lambda);
        }
        let dz_max = beam.sigma_z0 / 8.0;
        let mut n = DEFAULT_N;
        while span / n as f64 > dz_max {
            n *= 2;
            if n > MAX_N {
                return Err(Error::GridResolution {
                    requirement: "dz <= sigma_z0 / 8 with z_span covering the drifted packet",
                    actual: span / MAX_N as f64,
                    bound: dz_max,
                });
            }
        }
        Self::new(n, span)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn z_span(&self) -> f64 {
        self.z_span
    }

    /// Cell size in zeta.
    pub fn dz(&self) -> f64 {
        self.z_span() / self.n as f64
    }

    /// Momentum bin spacing 2 pi hbar / z_span.
    pub fn dp(&self) -> f64 {
        std::f64::consts::TAU * HBAR / self.z_span()
    }

    /// Comoving position of sample `i`.
    pub fn z_at(&self, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.dz()
    }

    /// Signed DFT frequency index of bin `k`.
    pub fn signed_index(&self, k: usize) -> i64 {
        if k < self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    /// Momentum (relative to p0) carried by DFT bin `k`.
    pub fn p_rel_at(&self, k: usize) -> f64 {
        self.signed_index(k) as f64 * self.dp()
    }

    pub fn z_axis(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.z_at(i)).collect()
    }
}

/// Wavepacket state: complex samples over a [`GridSpec`], the carrier
/// momentum, and the elapsed lab time since the waist.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    grid: GridSpec,
    /// Position-space samples psi(zeta_i).
    pub values: Vec<Complex64>,
    /// Carrier momentum p0 (kg m/s); momenta in the spectral representation
    /// are offsets from this.
    pub p0: f64,
    /// Time since the waist (s).
    pub t_elapsed: f64,
}

impl Wavefunction {
    pub fn new(grid: GridSpec, values: Vec<Complex64>, p0: f64, t_elapsed: f64) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::AxisMismatch(format!(
                "{} samples on a grid of {}",
                values.len(),
                grid.n()
            )));
        }
        Ok(Self {
            grid,
            values,
            p0,
            t_elapsed,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Total probability, Riemann sum of |psi|^2.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dz()
    }

    /// Rescale to unit total probability.
    pub fn renormalize(&mut self) {
        let n = self.norm_sq().sqrt();
        if n > 0.0 {
            let inv = 1.0 / n;
            for v in &mut self.values {
                *v *= inv;
            }
        }
    }

    /// |psi(zeta)|^2 samples.
    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Momentum-space amplitudes in DFT bin order (unnormalized transform).
    pub fn momentum_amplitudes(&self) -> Vec<Complex64> {
        let mut data = self.values.clone();
        FftPlan::new(self.grid.n()).forward(&mut data);
        data
    }

    /// Two-column (Re, Im) text export with a metadata header. Extra
    /// header lines (e.g. a resolved config echo) come first, prefixed '#'.
    pub fn write_tsv<W: std::io::Write>(
        &self,
        w: &mut W,
        extra_header: &[String],
    ) -> std::io::Result<()> {
        for line in extra_header {
            writeln!(w, "# {line}")?;
        }
        writeln!(
            w,
            "# wavefunction n={} dz={:e} p0={:e} t_elapsed={:e}",
            self.grid.n(),
            self.grid.dz(),
            self.p0,
            self.t_elapsed
        )?;
        writeln!(w, "# columns: re(psi)\tim(psi)")?;
        for v in &self.values {
            writeln!(w, "{:e}\t{:e}", v.re, v.im)?;
        }
        Ok(())
    }
}

/// Fraction of spectral probability within [`ALIAS_EDGE_CELLS`] bins of the
/// momentum-window edge (highest absolute signed frequencies).
pub(crate) fn p_edge_fraction(grid: &GridSpec, values_p: &[Complex64]) -> f64 {
    let n = grid.n();
    let half = (n / 2) as i64;
    let mut edge = 0.0;
    let mut total = 0.0;
    for (k, v) in values_p.iter().enumerate() {
        let w = v.norm_sqr();
        total += w;
        let s = grid.signed_index(k);
        if s >= half - ALIAS_EDGE_CELLS as i64 || s < -half + ALIAS_EDGE_CELLS as i64 {
            edge += w;
        }
    }
    if total > 0.0 {
        edge / total
    } else {
        0.0
    }
}

/// Fraction of position-space probability within [`ALIAS_EDGE_CELLS`] cells
/// of the window edge.
pub(crate) fn z_edge_fraction(values_z: &[Complex64]) -> f64 {
    let n = values_z.len();
    let mut edge = 0.0;
    let mut total = 0.0;
    for (i, v) in values_z.iter().enumerate() {
        let w = v.norm_sqr();
        total += w;
        if i < ALIAS_EDGE_CELLS || i >= n - ALIAS_EDGE_CELLS {
            edge += w;
        }
    }
    if total > 0.0 {
        edge / total
    } else {
        0.0
    }
}

pub(crate) fn check_p_aliasing(grid: &GridSpec, values_p: &[Complex64]) -> Result<()> {
    let fraction = p_edge_fraction(grid, values_p);
    if fraction >= ALIAS_LIMIT {
        return Err(Error::Aliasing {
            axis: "momentum-window",
            fraction,
            cells: ALIAS_EDGE_CELLS,
            limit: ALIAS_LIMIT,
        });
    }
    Ok(())
}

pub(crate) fn check_z_aliasing(values_z: &[Complex64]) -> Result<()> {
    let fraction = z_edge_fraction(values_z);
    if fraction >= ALIAS_LIMIT {
        return Err(Error::Aliasing {
            axis: "position-window",
            fraction,
            cells: ALIAS_EDGE_CELLS,
            limit: ALIAS_LIMIT,
        });
    }
    Ok(())
}

/// Minimum-uncertainty Gaussian waist centered on the grid:
/// psi(zeta) = (2 pi sigma_z0^2)^(-1/4) exp(-zeta^2 / (4 sigma_z0^2)).
pub fn gaussian_waist(beam: &BeamParams, grid: &GridSpec) -> Result<Wavefunction> {
    beam.validate()?;
    let kin = beam.kinematics()?;
    if grid.dz() > beam.sigma_z0 / 8.0 {
        return Err(Error::GridResolution {
            requirement: "dz <= sigma_z0 / 8 to resolve the waist",
            actual: grid.dz(),
            bound: beam.sigma_z0 / 8.0,
        });
    }
    if grid.z_span() < 16.0 * beam.sigma_z0 {
        return Err(Error::GridResolution {
            requirement: "z_span >= 16 sigma_z0 to contain the waist",
            actual: grid.z_span(),
            bound: 16.0 * beam.sigma_z0,
        });
    }
    let amp = 1.0 / (std::f64::consts::TAU * beam.sigma_z0 * beam.sigma_z0).powf(0.25);
    let inv_4s2 = 1.0 / (4.0 * beam.sigma_z0 * beam.sigma_z0);
    let values: Vec<Complex64> = (0..grid.n())
        .map(|i| {
            let z = grid.z_at(i);
            Complex64::new(amp * (-z * z * inv_4s2).exp(), 0.0)
        })
        .collect();
    let mut psi = Wavefunction::new(*grid, values, kin.p0, 0.0)?;
    psi.renormalize();
    Ok(psi)
}

/// Closed-form rms size of a freely drifting minimum-uncertainty packet:
/// sigma_z(t) = sqrt(sigma_z0^2 + (lambda_C* c t / (4 pi sigma_z0))^2).
pub fn analytic_sigma_z(sigma_z0: f64, t_d: f64, kin: &Kinematics) -> f64 {
    let spread = kin.lambda_c_star * crate::constants::C * t_d
        / (4.0 * std::f64::consts::PI * sigma_z0);
    (sigma_z0 * sigma_z0 + spread * spread).sqrt()
}

/// Free drift for a time `t_d`, applied as a single quadratic phase in the
/// momentum representation. Negative `t_d` undoes a previous drift.
pub fn drift(psi: &Wavefunction, t_d: f64, kin: &Kinematics) -> Result<Wavefunction> {
    if !t_d.is_finite() {
        return Err(Error::NotFinite {
            name: "t_d",
            value: t_d,
        });
    }
    let grid = *psi.grid();
    let mut plan = FftPlan::new(grid.n());
    let mut data = psi.values.clone();
    plan.forward(&mut data);
    check_p_aliasing(&grid, &data)?;
    let coeff = t_d / (2.0 * kin.m_star * HBAR);
    for (k, v) in data.iter_mut().enumerate() {
        let p = grid.p_rel_at(k);
        *v *= Complex64::from_polar(1.0, -p * p * coeff);
    }
    plan.inverse(&mut data);
    check_z_aliasing(&data)?;
    Wavefunction::new(grid, data, psi.p0, psi.t_elapsed + t_d)
}

/// First and second phase-space moments of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    /// Mean comoving position (m).
    pub mean_z: f64,
    /// Rms size (m).
    pub sigma_z: f64,
    /// Mean absolute momentum, p0 + <p - p0> (kg m/s).
    pub mean_p: f64,
    /// Rms momentum spread (kg m/s).
    pub sigma_p: f64,
    /// Symmetrized covariance <{dz, dp}>/2 (J s); positive for a packet
    /// chirped by forward drift.
    pub cov_zp: f64,
    /// Phase-space area 2 pi sqrt(sigma_z^2 sigma_p^2 - cov^2) (J s);
    /// h/2 for any minimum-uncertainty Gaussian, preserved under drift.
    pub area: f64,
}

/// Compute [`Moments`] by quadrature in both representations.
pub fn moments(psi: &Wavefunction) -> Moments {
    let grid = psi.grid();
    let n = grid.n();

    let mut norm = 0.0;
    let mut mean_z = 0.0;
    for (i, v) in psi.values.iter().enumerate() {
        let w = v.norm_sqr();
        norm += w;
        mean_z += grid.z_at(i) * w;
    }
    mean_z /= norm;
    let mut var_z = 0.0;
    for (i, v) in psi.values.iter().enumerate() {
        let d = grid.z_at(i) - mean_z;
        var_z += d * d * v.norm_sqr();
    }
    var_z /= norm;

    let mut plan = FftPlan::new(n);
    let mut amps = psi.values.clone();
    plan.forward(&mut amps);
    let mut pnorm = 0.0;
    let mut mean_p_rel = 0.0;
    for (k, v) in amps.iter().enumerate() {
        let w = v.norm_sqr();
        pnorm += w;
        mean_p_rel += grid.p_rel_at(k) * w;
    }
    mean_p_rel /= pnorm;
    let mut var_p = 0.0;
    for (k, v) in amps.iter().enumerate() {
        let d = grid.p_rel_at(k) - mean_p_rel;
        var_p += d * d * v.norm_sqr();
    }
    var_p /= pnorm;

    // (p - <p>) psi back in position space, for the symmetrized covariance
    // Re <psi| (z - <z>)(p - <p>) |psi>.
    let mut dp_psi = amps;
    for (k, v) in dp_psi.iter_mut().enumerate() {
        *v *= grid.p_rel_at(k) - mean_p_rel;
    }
    plan.inverse(&mut dp_psi);
    let mut cov = 0.0;
    for (i, (v, d)) in psi.values.iter().zip(&dp_psi).enumerate() {
        cov += (v.conj() * d).re * (grid.z_at(i) - mean_z);
    }
    cov /= norm;

    let det = (var_z * var_p - cov * cov).max(0.0);
    Moments {
        mean_z,
        sigma_z: var_z.sqrt(),
        mean_p: psi.p0 + mean_p_rel,
        sigma_p: var_p.sqrt(),
        cov_zp: cov,
        area: std::f64::consts::TAU * det.sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::H;
    use approx::assert_relative_eq;

    fn beam_07(sigma_z0: f64, drift_length: f64) -> BeamParams {
        BeamParams {
            sigma_z0,
            drift_length,
            beta: 0.7,
        }
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(1000, 1e-5).is_err(), "non power of two");
        assert!(GridSpec::new(8, 1e-5).is_err(), "too small");
        assert!(GridSpec::new(1024, 0.0).is_err());
        assert!(GridSpec::new(1024, -1.0).is_err());
        let g = GridSpec::new(1024, 1e-5).unwrap();
        assert_relative_eq!(g.dz(), 1e-5 / 1024.0);
        assert_relative_eq!(g.dp() * g.z_span(), H, max_relative = 1e-14);
    }

    #[test]
    fn signed_indexing_covers_both_halves() {
        let g = GridSpec::new(16, 1.0).unwrap();
        assert_eq!(g.signed_index(0), 0);
        assert_eq!(g.signed_index(7), 7);
        assert_eq!(g.signed_index(8), -8);
        assert_eq!(g.signed_index(15), -1);
        assert_relative_eq!(g.z_at(8), 0.0);
        assert_relative_eq!(g.z_at(0), -0.5);
    }

    #[test]
    fn waist_is_normalized_minimum_uncertainty() {
        let beam = beam_07(0.04e-6, 0.0);
        let grid = GridSpec::auto(&beam, None).unwrap();
        let psi = gaussian_waist(&beam, &grid).unwrap();
        assert!((psi.norm_sq() - 1.0).abs() < 1e-12);
        let m = moments(&psi);
        assert_relative_eq!(m.sigma_z, 0.04e-6, max_relative = 1e-10);
        assert_relative_eq!(m.sigma_p, beam.sigma_p0(), max_relative = 1e-10);
        assert!((m.cov_zp / (m.sigma_z * m.sigma_p)).abs() < 1e-10);
        assert_relative_eq!(m.area, 0.5 * H, max_relative = 1e-9);
        assert_relative_eq!(m.mean_p, beam.kinematics().unwrap().p0, max_relative = 1e-12);
        assert!((m.mean_z / m.sigma_z).abs() < 1e-10);
    }

    #[test]
    fn waist_rejects_coarse_grid() {
        let beam = beam_07(0.04e-6, 0.0);
        // dz = 10 um / 1024 is far coarser than sigma_z0 / 8 = 5 nm.
        let grid = GridSpec::new(1024, 10e-6).unwrap();
        assert!(matches!(
            gaussian_waist(&beam, &grid),
            Err(Error::GridResolution { .. })
        ));
    }

    #[test]
    fn drift_law_frozen_values() {
        // Independently computed from the closed form.
        let kin = Kinematics::from_beta(0.7).unwrap();
        let t60 = 0.60 / kin.v0;
        assert_relative_eq!(
            analytic_sigma_z(0.04e-6, t60, &kin),
            1.507_432_591_568_78e-6,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            analytic_sigma_z(0.06e-6, t60, &kin),
            1.006_391_357_082_60e-6,
            max_relative = 1e-12
        );
        let t40 = 0.40 / kin.v0;
        assert_relative_eq!(
            analytic_sigma_z(0.04e-6, t40, &kin),
            1.005_397_216_830_52e-6,
            max_relative = 1e-12
        );
    }

    #[test]
    fn numerical_drift_matches_analytic_law() {
        let beam = beam_07(0.04e-6, 0.60);
        let kin = beam.kinematics().unwrap();
        let grid = GridSpec::auto(&beam, None).unwrap();
        let psi0 = gaussian_waist(&beam, &grid).unwrap();
        let t_d = beam.drift_time(&kin);
        let psi = drift(&psi0, t_d, &kin).unwrap();
        let m = moments(&psi);
        let expect = analytic_sigma_z(beam.sigma_z0, t_d, &kin);
        assert_relative_eq!(m.sigma_z, expect, max_relative = 1e-6);
        // Momentum distribution untouched by drift.
        assert_relative_eq!(m.sigma_p, beam.sigma_p0(), max_relative = 1e-10);
        assert_relative_eq!(m.mean_p, kin.p0, epsilon = 1e-12 * kin.p0);
        // Forward drift chirps the packet positively.
        assert!(m.cov_zp > 0.0);
        // Phase-space area is invariant.
        assert_relative_eq!(m.area, 0.5 * H, max_relative = 1e-6);
        assert!((psi.norm_sq() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn drift_composes_and_inverts() {
        let beam = beam_07(0.05e-6, 0.30);
        let kin = beam.kinematics().unwrap();
        let grid = GridSpec::auto(&beam, None).unwrap();
        let psi0 = gaussian_waist(&beam, &grid).unwrap();
        let t = beam.drift_time(&kin);
        let once = drift(&psi0, t, &kin).unwrap();
        let twice = {
            let half = drift(&psi0, 0.5 * t, &kin).unwrap();
            drift(&half, 0.5 * t, &kin).unwrap()
        };
        let err: f64 = once
            .values
            .iter()
            .zip(&twice.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            * grid.dz();
        assert!(err.sqrt() < 1e-10, "composition L2 error {}", err.sqrt());

        let back = drift(&once, -t, &kin).unwrap();
        let err: f64 = back
            .values
            .iter()
            .zip(&psi0.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            * grid.dz();
        assert!(err.sqrt() < 1e-10, "inversion L2 error {}", err.sqrt());
        assert_relative_eq!(back.t_elapsed, 0.0);
    }

    #[test]
    fn zero_drift_is_identity() {
        let beam = beam_07(0.1e-6, 0.0);
        let kin = beam.kinematics().unwrap();
        let grid = GridSpec::auto(&beam, None).unwrap();
        let psi0 = gaussian_waist(&beam, &grid).unwrap();
        let psi = drift(&psi0, 0.0, &kin).unwrap();
        let peak = psi0.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (a, b) in psi.values.iter().zip(&psi0.values) {
            assert!((a - b).norm() < 1e-12 * peak);
        }
    }

    #[test]
    fn long_drift_on_undersized_grid_trips_the_guard() {
        let beam = beam_07(0.02e-6, 0.0);
        let kin = beam.kinematics().unwrap();
        // Grid sized for the waist only; a 1 m drift stretches the packet
        // to ~5 um, far beyond this 0.64 um window.
        let grid = GridSpec::new(1024, 0.64e-6).unwrap();
        let psi0 = gaussian_waist(&beam, &grid).unwrap();
        let res = drift(&psi0, 1.0 / kin.v0, &kin);
        assert!(matches!(res, Err(Error::Aliasing { .. })));
    }

    #[test]
    fn negative_drift_spreads_symmetrically() {
        let beam = beam_07(0.04e-6, 0.0);
        let kin = beam.kinematics().unwrap();
        let spec = GridSpec::new(
            DEFAULT_N,
            32.0 * analytic_sigma_z(0.04e-6, 0.2 / kin.v0, &kin),
        )
        .unwrap();
        let psi0 = gaussian_waist(&beam, &spec).unwrap();
        let t = 0.2 / kin.v0;
        let fwd = moments(&drift(&psi0, t, &kin).unwrap());
        let bwd = moments(&drift(&psi0, -t, &kin).unwrap());
        assert_relative_eq!(fwd.sigma_z, bwd.sigma_z, max_relative = 1e-10);
        assert!(fwd.cov_zp > 0.0 && bwd.cov_zp < 0.0);
    }

    #[test]
    fn tsv_export_carries_metadata() {
        let beam = beam_07(0.1e-6, 0.0);
        let grid = GridSpec::auto(&beam, None).unwrap();
        let psi = gaussian_waist(&beam, &grid).unwrap();
        let mut buf = Vec::new();
        psi.write_tsv(&mut buf, &["scenario = test".to_string()])
            .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# scenario = test\n# wavefunction n="));
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().count(), grid.n() + 3);
    }
}
