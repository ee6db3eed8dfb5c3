//! Momentum-spectrum diagnostics, fringe estimation, parameter sweeps, and
//! ensemble averaging over shot-to-shot jitter.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::HBAR;
use crate::error::Error;
use crate::exec;
use crate::fft::FftPlan;
use crate::kinematics::PhotonScale;
use crate::propagator::{propagate_window, run_interaction, LaserField, Scenario};
use crate::regimes::{classify, RegimeLabel};
use crate::wavepacket::{analytic_sigma_z, check_p_aliasing, BeamParams, Wavefunction};
use crate::Result;

/// Probability density over absolute longitudinal momentum, on a uniform
/// ascending axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Absolute momentum at each bin center (kg m/s), ascending, uniform.
    pub p: Vec<f64>,
    /// Probability density per unit momentum (s/(kg m)).
    pub rho: Vec<f64>,
    /// Carrier momentum the axis is centered on.
    pub p0: f64,
    // Spacing held separately: adjacent-bin differences of the absolute axis
    // lose eight digits to cancellation against p0.
    dp: f64,
}

impl Spectrum {
    pub fn new(p: Vec<f64>, rho: Vec<f64>, p0: f64) -> Result<Self> {
        if p.len() != rho.len() || p.len() < 2 {
            return Err(Error::AxisMismatch(format!(
                "spectrum axis of {} bins against {} density values",
                p.len(),
                rho.len()
            )));
        }
        let dp = (p[p.len() - 1] - p[0]) / (p.len() - 1) as f64;
        if !(dp.is_finite() && dp > 0.0) {
            return Err(Error::NonPositive {
                name: "spectrum dp",
                value: dp,
            });
        }
        Ok(Self { p, rho, p0, dp })
    }

    /// Bin spacing.
    pub fn dp(&self) -> f64 {
        self.dp
    }

    /// Riemann integral of the density.
    pub fn integral(&self) -> f64 {
        self.rho.iter().sum::<f64>() * self.dp()
    }

    /// Mean momentum.
    pub fn mean(&self) -> f64 {
        let mut m = 0.0;
        let mut w = 0.0;
        for (p, r) in self.p.iter().zip(&self.rho) {
            m += p * r;
            w += r;
        }
        m / w
    }

    /// Rms momentum spread.
    pub fn sigma(&self) -> f64 {
        let mean = self.mean();
        let mut v = 0.0;
        let mut w = 0.0;
        for (p, r) in self.p.iter().zip(&self.rho) {
            v += (p - mean) * (p - mean) * r;
            w += r;
        }
        (v / w).sqrt()
    }

    /// Same-axis check for spectra that will be compared bin by bin.
    pub fn check_same_axis(&self, other: &Spectrum) -> Result<()> {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * (a.abs() + b.abs() + f64::MIN_POSITIVE);
        if self.p.len() != other.p.len()
            || !close(self.p[0], other.p[0])
            || !close(self.dp(), other.dp())
            || !close(self.p0, other.p0)
        {
            return Err(Error::AxisMismatch(
                "spectra live on different momentum axes".into(),
            ));
        }
        Ok(())
    }

    /// Two-column text export. `axis` picks the first column: absolute
    /// momentum, momentum offset from p0, or energy offset v0 (p - p0).
    pub fn write_tsv<W: std::io::Write>(
        &self,
        w: &mut W,
        axis: SpectrumAxis,
        extra_header: &[String],
    ) -> std::io::Result<()> {
        for line in extra_header {
            writeln!(w, "# {line}")?;
        }
        writeln!(
            w,
            "# spectrum n={} dp={:e} p0={:e}",
            self.p.len(),
            self.dp(),
            self.p0
        )?;
        match axis {
            SpectrumAxis::MomentumAbsolute => {
                writeln!(w, "# columns: p(kg m/s)\trho(1/(kg m/s))")?;
                for (p, r) in self.p.iter().zip(&self.rho) {
                    writeln!(w, "{p:e}\t{r:e}")?;
                }
            }
            SpectrumAxis::MomentumOffset => {
                writeln!(w, "# columns: p-p0(kg m/s)\trho(1/(kg m/s))")?;
                for (p, r) in self.p.iter().zip(&self.rho) {
                    writeln!(w, "{:e}\t{r:e}", p - self.p0)?;
                }
            }
            SpectrumAxis::EnergyOffset { v0 } => {
                writeln!(w, "# columns: E-E0(J)\trho(1/J)")?;
                for (p, r) in self.p.iter().zip(&self.rho) {
                    writeln!(w, "{:e}\t{:e}", v0 * (p - self.p0), r / v0)?;
                }
            }
        }
        Ok(())
    }
}

/// First-column convention for spectrum exports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumAxis {
    MomentumAbsolute,
    MomentumOffset,
    /// Energy offset E - E0 = v0 (p - p0).
    EnergyOffset { v0: f64 },
}

/// Momentum probability density of a state, |psi(p)|^2, normalized so the
/// Riemann sum over the axis is the total probability.
pub fn momentum_spectrum(psi: &Wavefunction) -> Result<Spectrum> {
    let grid = psi.grid();
    let n = grid.n();
    let amps = psi.momentum_amplitudes();
    check_p_aliasing(grid, &amps)?;

    let dz = grid.dz();
    let scale = dz * dz / (std::f64::consts::TAU * HBAR);
    let half = n / 2;
    let mut p = Vec::with_capacity(n);
    let mut rho = Vec::with_capacity(n);
    // Ascending axis: bins n/2..n carry the negative offsets.
    for j in 0..n {
        let k = (j + half) % n;
        p.push(psi.p0 + grid.p_rel_at(k));
        rho.push(amps[k].norm_sqr() * scale);
    }
    Spectrum::new(p, rho, psi.p0)
}

pub(crate) fn fourier_magnitudes(rho: &[f64]) -> Vec<f64> {
    let n = rho.len();
    let mut data: Vec<Complex64> = rho.iter().map(|&r| Complex64::new(r, 0.0)).collect();
    FftPlan::new(n).forward(&mut data);
    data.truncate(n / 2);
    data.into_iter().map(|c| c.norm()).collect()
}

/// Mean-momentum change of `after` relative to `reference`. Both spectra must
/// live on the same axis.
pub fn mean_shift(reference: &Spectrum, after: &Spectrum) -> Result<f64> {
    reference.check_same_axis(after)?;
    Ok(after.mean() - reference.mean())
}

/// Probability carried by each sideband order of a discrete momentum comb.
#[derive(Debug, Clone)]
pub struct SidebandWeights {
    /// Sideband orders, ascending (0 is the elastic line).
    pub orders: Vec<i32>,
    /// Probability in each order's window, same order as `orders`.
    pub weights: Vec<f64>,
    /// Comb spacing used for the windows.
    pub spacing: f64,
}

/// Integrate the spectrum over windows of width `spacing` centered on
/// p0 + n*spacing for |n| <= max_order. The comb is only meaningful when the
/// lines are separated well beyond the intrinsic width, so spacings at or
/// below four `sigma_p_intrinsic` are rejected.
pub fn sideband_weights(
    spec: &Spectrum,
    spacing: f64,
    max_order: u32,
    sigma_p_intrinsic: f64,
) -> Result<SidebandWeights> {
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::NonPositive {
            name: "sideband spacing",
            value: spacing,
        });
    }
    let four_sigma_p = 4.0 * sigma_p_intrinsic;
    if spacing <= four_sigma_p {
        return Err(Error::SidebandsUnresolvable {
            spacing,
            four_sigma_p,
        });
    }
    let dp = spec.dp();
    let mut orders = Vec::with_capacity(2 * max_order as usize + 1);
    let mut weights = Vec::with_capacity(2 * max_order as usize + 1);
    for order in -(max_order as i32)..=max_order as i32 {
        let center = spec.p0 + order as f64 * spacing;
        let lo = center - spacing / 2.0;
        let hi = center + spacing / 2.0;
        let mut mass = 0.0;
        for (p, r) in spec.p.iter().zip(&spec.rho) {
            if *p >= lo && *p < hi {
                mass += r * dp;
            }
        }
        orders.push(order);
        weights.push(mass);
    }
    Ok(SidebandWeights {
        orders,
        weights,
        spacing,
    })
}

/// Fringe pattern extracted from a modulated spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeEstimate {
    /// Fringe period in momentum.
    pub period: f64,
    /// Modulation visibility at that period, in [0, ~1].
    pub visibility: f64,
}

// Fourier frequencies below this many inverse rms widths belong to the
// envelope, not to fringes.
const FRINGE_MASK_SIGMA: f64 = 2.5;
// A fringe line must carry at least this fraction of the DC amplitude.
const FRINGE_MIN_REL_AMPLITUDE: f64 = 0.01;

/// Dominant fringe period of a modulated spectrum, from the peak of its
/// Fourier transform above the envelope band. Returns None when no credible
/// fringe line exists: the envelope band (frequencies below 2.5 / sigma_p) is
/// masked off, the peak must be a strict local maximum, and it must carry at
/// least 1% of the DC amplitude.
pub fn fringe_spacing_estimate(spec: &Spectrum) -> Option<FringeEstimate> {
    let sigma_p = spec.sigma();
    if !(sigma_p.is_finite() && sigma_p > 0.0) {
        return None;
    }
    let n = spec.rho.len();
    let amps = fourier_magnitudes(&spec.rho);
    let dp = spec.dp();
    // Frequency of bin m in radians per unit momentum.
    let s_of = |m: f64| std::f64::consts::TAU * m / (n as f64 * dp);
    let mask = FRINGE_MASK_SIGMA / sigma_p;

    let mut best: Option<usize> = None;
    for m in 1..amps.len() - 1 {
        if s_of(m as f64) < mask {
            continue;
        }
        // Equality on the right keeps an exact two-bin tie (peak halfway
        // between bins) as one peak at its left bin; refinement restores the
        // half-bin offset.
        if amps[m] > amps[m - 1] && amps[m] >= amps[m + 1] {
            if best.map_or(true, |b| amps[m] > amps[b]) {
                best = Some(m);
            }
        }
    }
    let m = best?;
    if amps[m] < FRINGE_MIN_REL_AMPLITUDE * amps[0] {
        return None;
    }
    // Parabolic refinement on the three bins around the peak.
    let denom = amps[m - 1] - 2.0 * amps[m] + amps[m + 1];
    let offset = if denom.abs() > 0.0 {
        0.5 * (amps[m - 1] - amps[m + 1]) / denom
    } else {
        0.0
    };
    let s_star = s_of(m as f64 + offset);
    let period = std::f64::consts::TAU / s_star;
    Some(FringeEstimate {
        period,
        visibility: visibility(spec, period),
    })
}

/// Mean spacing between adjacent resolved lines of a comb-like spectrum.
/// Lines are strict local maxima above `min_rel_height` of the global peak,
/// refined parabolically. Returns None with fewer than two lines.
pub fn peak_spacing_estimate(spec: &Spectrum, min_rel_height: f64) -> Option<f64> {
    let rho = &spec.rho;
    let floor = min_rel_height * rho.iter().cloned().fold(0.0, f64::max);
    let mut positions = Vec::new();
    for m in 1..rho.len() - 1 {
        // Right-side equality admits exact two-bin ties; see the fringe
        // estimator.
        if rho[m] > rho[m - 1] && rho[m] >= rho[m + 1] && rho[m] >= floor {
            let denom = rho[m - 1] - 2.0 * rho[m] + rho[m + 1];
            let offset = if denom.abs() > 0.0 {
                0.5 * (rho[m - 1] - rho[m + 1]) / denom
            } else {
                0.0
            };
            positions.push(spec.p[m] + offset * spec.dp());
        }
    }
    if positions.len() < 2 {
        return None;
    }
    let span = positions.last().unwrap() - positions.first().unwrap();
    Some(span / (positions.len() - 1) as f64)
}

/// Modulation visibility of the spectrum at a trial fringe period: twice the
/// magnitude of the density's Fourier component at that period over its total
/// mass. A fully modulated pattern rho0 (1 + cos) gives ~1.
pub fn visibility(spec: &Spectrum, period: f64) -> f64 {
    let s = std::f64::consts::TAU / period;
    let mut f = Complex64::new(0.0, 0.0);
    let mut f0 = 0.0;
    for (p, r) in spec.p.iter().zip(&spec.rho) {
        f += r * Complex64::new(0.0, -s * (p - spec.p0)).exp();
        f0 += r;
    }
    2.0 * f.norm() / f0
}

/// Convolve the density with a Gaussian of rms width `sigma` (momentum
/// units), e.g. to fold in incoherent shot-to-shot energy jitter. The kernel
/// is truncated at six sigma and renormalized; it must fit inside half the
/// axis.
pub fn convolve_gaussian(spec: &Spectrum, sigma: f64) -> Result<Spectrum> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::NotFinite {
            name: "convolution width",
            value: sigma,
        });
    }
    if sigma == 0.0 {
        return Ok(spec.clone());
    }
    let dp = spec.dp();
    let n = spec.rho.len();
    let half = (6.0 * sigma / dp).ceil() as usize;
    if half >= n / 2 {
        return Err(Error::Invalid(format!(
            "jitter kernel needs {half} bins per side but the axis has only {n}",
        )));
    }
    let mut kernel = Vec::with_capacity(2 * half + 1);
    for k in -(half as i64)..=half as i64 {
        let x = k as f64 * dp / sigma;
        kernel.push((-0.5 * x * x).exp());
    }
    let total: f64 = kernel.iter().sum();
    for w in &mut kernel {
        *w /= total;
    }
    let mut rho = vec![0.0; n];
    for (j, out) in rho.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (ki, w) in kernel.iter().enumerate() {
            let src = j as i64 + ki as i64 - half as i64;
            if (0..n as i64).contains(&src) {
                acc += w * spec.rho[src as usize];
            }
        }
        *out = acc;
    }
    Spectrum::new(spec.p.clone(), rho, spec.p0)
}

/// Shot-to-shot optical phase statistics of an ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseJitter {
    /// Every shot sees the same phase.
    None,
    /// Arrival-time jitter of rms `sigma_t` seconds, i.e. Gaussian phase
    /// jitter of rms omega * sigma_t.
    GaussianTiming { sigma_t: f64 },
    /// Phase uniform over a full cycle; realized as an equally spaced grid of
    /// `draws` phases so the cancellation is exact, not sampled.
    Uniform,
}

/// Incoherent averaging setup for an ensemble of shots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleParams {
    /// Rms energy jitter of the source (J), folded in as a Gaussian
    /// convolution of the averaged spectrum.
    pub sigma_e_part: f64,
    /// Optical phase statistics across shots.
    pub phase: PhaseJitter,
    /// Number of shots.
    pub draws: usize,
    /// Seed for the phase draws (Gaussian jitter only).
    pub seed: u64,
}

impl Default for EnsembleParams {
    fn default() -> Self {
        Self {
            sigma_e_part: 0.0,
            phase: PhaseJitter::None,
            draws: 64,
            seed: 0,
        }
    }
}

impl EnsembleParams {
    fn validate(&self) -> Result<()> {
        if !self.sigma_e_part.is_finite() || self.sigma_e_part < 0.0 {
            return Err(Error::NotFinite {
                name: "sigma_e_part",
                value: self.sigma_e_part,
            });
        }
        match self.phase {
            PhaseJitter::None => Ok(()),
            PhaseJitter::Uniform => {
                if self.draws < 2 {
                    Err(Error::InvalidRange {
                        name: "uniform phase draws",
                        lo: 2.0,
                        hi: f64::INFINITY,
                    })
                } else {
                    Ok(())
                }
            }
            PhaseJitter::GaussianTiming { sigma_t } => {
                if !sigma_t.is_finite() || sigma_t < 0.0 {
                    Err(Error::NotFinite {
                        name: "sigma_t",
                        value: sigma_t,
                    })
                } else if self.draws == 0 {
                    Err(Error::InvalidRange {
                        name: "phase draws",
                        lo: 1.0,
                        hi: f64::INFINITY,
                    })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Entrance phases for every shot. Gaussian draws come from a seeded
    /// ChaCha8 stream so reruns are reproducible.
    fn phase_draws(&self, phi0: f64, omega: f64) -> Vec<f64> {
        match self.phase {
            PhaseJitter::None => vec![phi0],
            PhaseJitter::Uniform => (0..self.draws)
                .map(|k| phi0 + std::f64::consts::TAU * k as f64 / self.draws as f64)
                .collect(),
            PhaseJitter::GaussianTiming { sigma_t } => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..self.draws)
                    .map(|_| {
                        // Box-Muller; 1 - u keeps the log argument positive.
                        let u1: f64 = 1.0 - rng.gen::<f64>();
                        let u2: f64 = rng.gen();
                        let xi = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
                        phi0 + omega * sigma_t * xi
                    })
                    .collect()
            }
        }
    }
}

/// Incoherently averaged spectrum of an ensemble of shots.
#[derive(Debug, Clone)]
pub struct EnsembleOutput {
    /// Phase-averaged spectrum with energy jitter folded in.
    pub spectrum: Spectrum,
    /// Number of shots averaged.
    pub draws: usize,
    /// Mean momentum minus the carrier momentum.
    pub mean_shift: f64,
    /// Rms momentum spread of the averaged spectrum.
    pub sigma_p: f64,
    /// Energy full width 2 v0 sigma_p.
    pub energy_width: f64,
}

/// Average the exit spectrum over an ensemble of shots with phase and energy
/// jitter. The entrance state is propagated once per phase draw; the energy
/// jitter enters as a Gaussian convolution of the averaged spectrum, which is
/// exact for jitter applied to a momentum-translation family of shots.
pub fn ensemble_average(scenario: &Scenario, params: &EnsembleParams) -> Result<EnsembleOutput> {
    ensemble_impl(scenario, params, false)
}

/// Sequential twin of `ensemble_average`; identical output bit for bit.
pub fn ensemble_average_seq(
    scenario: &Scenario,
    params: &EnsembleParams,
) -> Result<EnsembleOutput> {
    ensemble_impl(scenario, params, true)
}

fn ensemble_impl(
    scenario: &Scenario,
    params: &EnsembleParams,
    sequential: bool,
) -> Result<EnsembleOutput> {
    params.validate()?;
    let kin = scenario.kinematics()?;
    let entrance = scenario.entrance_state()?;
    let phases = params.phase_draws(scenario.laser.phi0, scenario.laser.photon.omega);

    let run_one = |i: usize| -> Result<Vec<f64>> {
        let mut laser = scenario.laser;
        laser.phi0 = phases[i];
        let out = propagate_window(&entrance, &laser, &kin, scenario.dt, &[])?;
        Ok(momentum_spectrum(&out.final_state)?.rho)
    };
    let runs: Vec<Result<Vec<f64>>> = if sequential {
        exec::map_indexed_seq(phases.len(), run_one)
    } else {
        exec::map_indexed(phases.len(), run_one)
    };

    let n = entrance.grid().n();
    let mut rho = vec![0.0; n];
    for run in runs {
        for (acc, v) in rho.iter_mut().zip(run?) {
            *acc += v;
        }
    }
    let weight = 1.0 / phases.len() as f64;
    for v in &mut rho {
        *v *= weight;
    }

    // Same ascending axis construction as momentum_spectrum.
    let grid = entrance.grid();
    let half = n / 2;
    let p_axis: Vec<f64> = (0..n)
        .map(|j| entrance.p0 + grid.p_rel_at((j + half) % n))
        .collect();
    let averaged = Spectrum::new(p_axis, rho, entrance.p0)?;
    let spectrum = convolve_gaussian(&averaged, params.sigma_e_part / kin.v0)?;

    let sigma_p = spectrum.sigma();
    Ok(EnsembleOutput {
        mean_shift: spectrum.mean() - spectrum.p0,
        sigma_p,
        energy_width: 2.0 * kin.v0 * sigma_p,
        draws: phases.len(),
        spectrum,
    })
}

/// One wavelength of a fringe-versus-wavelength sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepPoint {
    /// Drive scale beta * lambda (m).
    pub beta_lambda: f64,
    /// Vacuum wavelength (m).
    pub lambda: f64,
    /// Waist-referenced coherence parameter.
    pub gamma0: f64,
    /// Entrance coherence parameter.
    pub gamma: f64,
    /// Regime at this wavelength.
    pub label: RegimeLabel,
    /// Structure period the regime predicts, if any.
    pub predicted: Option<f64>,
    /// Period measured from the propagated spectrum, if resolvable.
    pub measured: Option<f64>,
    /// Fringe visibility, for fringe-bearing regimes.
    pub visibility: Option<f64>,
}

/// Measured fringe periods across drive wavelengths for one beam.
#[derive(Debug, Clone)]
pub struct WavelengthSweep {
    pub points: Vec<SweepPoint>,
    /// Least-squares slope through the origin of measured period versus
    /// beta * lambda, over fringe-bearing points. None without such points.
    pub measured_slope: Option<f64>,
    /// Slope the packet geometry predicts: sigma_p0 / sigma_z at the
    /// interaction.
    pub predicted_slope: f64,
}

impl WavelengthSweep {
    /// Multi-column text export, one row per wavelength.
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
            "# slope measured={} predicted={:e}",
            self.measured_slope
                .map_or("none".into(), |s| format!("{s:e}")),
            self.predicted_slope
        )?;
        writeln!(
            w,
            "# columns: beta_lambda(m)\tlambda(m)\tgamma0\tgamma\tregime\tpredicted(kg m/s)\tmeasured(kg m/s)\tvisibility"
        )?;
        let opt = |v: Option<f64>| v.map_or("nan".into(), |x| format!("{x:e}"));
        for pt in &self.points {
            writeln!(
                w,
                "{:e}\t{:e}\t{:e}\t{:e}\t{}\t{}\t{}\t{}",
                pt.beta_lambda,
                pt.lambda,
                pt.gamma0,
                pt.gamma,
                pt.label,
                opt(pt.predicted),
                opt(pt.measured),
                opt(pt.visibility)
            )?;
        }
        Ok(())
    }
}

/// Propagate one beam through drives of several wavelengths at fixed coupling
/// and interaction length, measuring the exit-spectrum period at each point.
/// Fringe-bearing spectra use the Fourier fringe estimator; discrete combs
/// use the line-spacing estimator.
pub fn sweep_fringe_vs_wavelength(
    beam: &BeamParams,
    beta_lambdas: &[f64],
    upsilon: f64,
    length: f64,
) -> Result<WavelengthSweep> {
    sweep_impl(beam, beta_lambdas, upsilon, length, false)
}

/// Sequential twin of `sweep_fringe_vs_wavelength`; identical output.
pub fn sweep_fringe_vs_wavelength_seq(
    beam: &BeamParams,
    beta_lambdas: &[f64],
    upsilon: f64,
    length: f64,
) -> Result<WavelengthSweep> {
    sweep_impl(beam, beta_lambdas, upsilon, length, true)
}

fn sweep_impl(
    beam: &BeamParams,
    beta_lambdas: &[f64],
    upsilon: f64,
    length: f64,
    sequential: bool,
) -> Result<WavelengthSweep> {
    beam.validate()?;
    if beta_lambdas.is_empty() {
        return Err(Error::Invalid("empty wavelength list".into()));
    }
    let kin = beam.kinematics()?;

    let run_point = |i: usize| -> Result<SweepPoint> {
        let photon = PhotonScale::from_beta_lambda(beta_lambdas[i], &kin)?;
        let laser = LaserField::from_upsilon(upsilon, length, 0.0, photon, &kin)?;
        let report = classify(beam, &photon)?;
        let scenario = Scenario::auto(*beam, laser)?;
        let out = run_interaction(&scenario, &[])?;
        let spec = momentum_spectrum(&out.final_state)?;
        let (measured, vis) = match report.label {
            RegimeLabel::Apinem => fringe_spacing_estimate(&spec)
                .map_or((None, None), |f| (Some(f.period), Some(f.visibility))),
            RegimeLabel::Pinem => (peak_spacing_estimate(&spec, 1e-3), None),
            RegimeLabel::Acceleration => (None, None),
        };
        Ok(SweepPoint {
            beta_lambda: beta_lambdas[i],
            lambda: photon.lambda,
            gamma0: report.gamma0,
            gamma: report.gamma,
            label: report.label,
            predicted: report.predicted_period,
            measured,
            visibility: vis,
        })
    };
    let results: Vec<Result<SweepPoint>> = if sequential {
        exec::map_indexed_seq(beta_lambdas.len(), run_point)
    } else {
        exec::map_indexed(beta_lambdas.len(), run_point)
    };
    let points = results.into_iter().collect::<Result<Vec<_>>>()?;

    // Slope through the origin over fringe-bearing measured points.
    let mut num = 0.0;
    let mut den = 0.0;
    for pt in &points {
        if pt.label == RegimeLabel::Apinem {
            if let Some(m) = pt.measured {
                num += pt.beta_lambda * m;
                den += pt.beta_lambda * pt.beta_lambda;
            }
        }
    }
    let measured_slope = (den > 0.0).then(|| num / den);
    let sigma_z = analytic_sigma_z(beam.sigma_z0, beam.drift_time(&kin), &kin);
    Ok(WavelengthSweep {
        points,
        measured_slope,
        predicted_slope: beam.sigma_p0() / sigma_z,
    })
}
