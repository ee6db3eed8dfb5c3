//! Split-step spectral solution of the comoving-frame Schroedinger equation
//! through the near-field interaction window.
//!
//! In the comoving coordinate the Hamiltonian is
//! `H = (p - p0)^2 / (2 m*) + V(zeta, t)` with the carrier-reduced potential
//! of the synchronous near-field harmonic
//!
//! ```text
//! V(zeta, t) = (e v0 E0 / omega) sin(q_z zeta + (q_z v0 - omega) t + phi0)
//! ```
//!
//! applied as a top-hat window of duration `T_int = L / v0`. Each step is a
//! symmetric Strang split: half kinetic phase, full potential phase at the
//! midpoint time, half kinetic phase. Both factors are diagonal in their
//! representation, so the evolution is unitary to rounding error.

use num_complex::Complex64;

use crate::constants::{E_CHARGE, HBAR};
use crate::error::Error;
use crate::fft::FftPlan;
use crate::kinematics::{Kinematics, PhotonScale};
use crate::wavepacket::{
    check_p_aliasing, check_z_aliasing, drift, gaussian_waist, BeamParams, GridSpec, Wavefunction,
};
use crate::Result;

/// Default number of timesteps per optical period.
pub const DEFAULT_STEPS_PER_PERIOD: usize = 256;

/// Largest allowed timestep, as a fraction of the optical period.
pub const MAX_DT_FRACTION_OF_PERIOD: f64 = 1.0 / 64.0;

/// Monochromatic near-field interaction region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserField {
    /// Peak field of the synchronous spatial harmonic (V/m); zero turns the
    /// interaction off.
    pub e0: f64,
    /// Interaction length L (m).
    pub length: f64,
    /// Longitudinal wavenumber q_z of the harmonic (rad/m).
    pub q_z: f64,
    /// Field phase seen by the packet center at the entrance (rad).
    pub phi0: f64,
    /// Photon scales of the drive.
    pub photon: PhotonScale,
}

impl LaserField {
    /// Harmonic synchronous with the carrier: q_z = omega / v0.
    pub fn synchronous(
        e0: f64,
        length: f64,
        phi0: f64,
        photon: PhotonScale,
        kin: &Kinematics,
    ) -> Result<Self> {
        Self::new(e0, length, photon.omega / kin.v0, phi0, photon)
    }

    /// Harmonic with a total phase-slippage `theta_bar` (rad) over the
    /// window: q_z = omega / v0 - theta_bar / L.
    pub fn detuned(
        e0: f64,
        length: f64,
        theta_bar: f64,
        phi0: f64,
        photon: PhotonScale,
        kin: &Kinematics,
    ) -> Result<Self> {
        Self::new(
            e0,
            length,
            photon.omega / kin.v0 - theta_bar / length,
            phi0,
            photon,
        )
    }

    pub fn new(e0: f64, length: f64, q_z: f64, phi0: f64, photon: PhotonScale) -> Result<Self> {
        for (name, value) in [
            ("e0", e0),
            ("length", length),
            ("q_z", q_z),
            ("phi0", phi0),
        ] {
            if !value.is_finite() {
                return Err(Error::NotFinite { name, value });
            }
        }
        if e0 < 0.0 {
            return Err(Error::Invalid(format!(
                "e0 = {e0} must be >= 0 (set phi0 to shift the field sign)"
            )));
        }
        if length <= 0.0 {
            return Err(Error::NonPositive {
                name: "length",
                value: length,
            });
        }
        Ok(Self {
            e0,
            length,
            q_z,
            phi0,
            photon,
        })
    }

    /// Field strength that realizes a target coupling Upsilon:
    /// E0 = 2 hbar omega Upsilon / (e L).
    pub fn from_upsilon(
        upsilon: f64,
        length: f64,
        phi0: f64,
        photon: PhotonScale,
        kin: &Kinematics,
    ) -> Result<Self> {
        if !(upsilon.is_finite() && upsilon >= 0.0) {
            return Err(Error::Invalid(format!("upsilon = {upsilon} must be >= 0")));
        }
        let e0 = 2.0 * photon.hbar_omega * upsilon / (E_CHARGE * length);
        Self::synchronous(e0, length, phi0, photon, kin)
    }

    /// Dimensionless first-order coupling Upsilon = e E0 L / (2 hbar omega).
    pub fn upsilon(&self) -> f64 {
        E_CHARGE * self.e0 * self.length / (2.0 * self.photon.hbar_omega)
    }

    /// Total detuning phase over the window, theta_bar = (omega/v0 - q_z) L.
    pub fn theta_bar(&self, kin: &Kinematics) -> f64 {
        (self.photon.omega / kin.v0 - self.q_z) * self.length
    }

    /// Interaction (transit) time T_int = L / v0.
    pub fn t_interaction(&self, kin: &Kinematics) -> f64 {
        self.length / kin.v0
    }
}

/// Carrier-reduced interaction potential (J) at comoving position `zeta`
/// and window time `t`.
pub fn effective_potential(laser: &LaserField, kin: &Kinematics, zeta: f64, t: f64) -> f64 {
    let amp = E_CHARGE * kin.v0 * laser.e0 / laser.photon.omega;
    let detune = laser.q_z * kin.v0 - laser.photon.omega;
    amp * (laser.q_z * zeta + detune * t + laser.phi0).sin()
}

/// A complete single-shot setup: beam, drive, grid, timestep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub beam: BeamParams,
    pub laser: LaserField,
    pub grid: GridSpec,
    /// Solver timestep (s); at most T/64.
    pub dt: f64,
}

impl Scenario {
    pub fn new(beam: BeamParams, laser: LaserField, grid: GridSpec, dt: f64) -> Result<Self> {
        beam.validate()?;
        let bound = laser.photon.period * MAX_DT_FRACTION_OF_PERIOD;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::NonPositive {
                name: "dt",
                value: dt,
            });
        }
        if dt > bound {
            return Err(Error::TimestepTooLarge { dt, bound });
        }
        Ok(Self {
            beam,
            laser,
            grid,
            dt,
        })
    }

    /// Scenario with dt = T/256 on the given grid.
    pub fn with_default_timestep(
        beam: BeamParams,
        laser: LaserField,
        grid: GridSpec,
    ) -> Result<Self> {
        let dt = laser.photon.period / DEFAULT_STEPS_PER_PERIOD as f64;
        Self::new(beam, laser, grid, dt)
    }

    /// Scenario with the automatic grid and the default timestep.
    pub fn auto(beam: BeamParams, laser: LaserField) -> Result<Self> {
        let grid = GridSpec::auto(&beam, Some(&laser.photon))?;
        Self::with_default_timestep(beam, laser, grid)
    }

    pub fn kinematics(&self) -> Result<Kinematics> {
        self.beam.kinematics()
    }

    pub fn t_interaction(&self) -> f64 {
        // beam validated at construction, beta is good
        self.laser.length / self.kinematics().unwrap().v0
    }

    /// Waist state drifted to the interaction entrance.
    pub fn entrance_state(&self) -> Result<Wavefunction> {
        let kin = self.kinematics()?;
        let waist = gaussian_waist(&self.beam, &self.grid)?;
        drift(&waist, self.beam.drift_time(&kin), &kin)
    }
}

/// One symmetric split step from window time `t` to `t + dt`.
pub fn step(
    psi: &Wavefunction,
    laser: &LaserField,
    kin: &Kinematics,
    t: f64,
    dt: f64,
) -> Result<Wavefunction> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::NonPositive {
            name: "dt",
            value: dt,
        });
    }
    let grid = *psi.grid();
    let mut plan = FftPlan::new(grid.n());
    let mut data = psi.values.clone();

    let half_kin = kinetic_half_phases(&grid, kin, dt);
    plan.forward(&mut data);
    check_p_aliasing(&grid, &data)?;
    apply(&mut data, &half_kin);
    plan.inverse(&mut data);
    apply_potential_phase(&mut data, &grid, laser, kin, t + 0.5 * dt, dt);
    plan.forward(&mut data);
    apply(&mut data, &half_kin);
    check_p_aliasing(&grid, &data)?;
    plan.inverse(&mut data);

    Wavefunction::new(grid, data, psi.p0, psi.t_elapsed + dt)
}

/// A state captured at a step boundary inside the window.
#[derive(Debug, Clone)]
pub struct Snapshot {
    /// Requested window time (s).
    pub t_requested: f64,
    /// Boundary time actually captured (s); within dt/2 of the request.
    pub t_actual: f64,
    pub state: Wavefunction,
}

/// Result of driving a state through the full interaction window.
#[derive(Debug, Clone)]
pub struct InteractionOutput {
    /// State at the window entrance (after any drift).
    pub entrance: Wavefunction,
    /// State at the window exit.
    pub final_state: Wavefunction,
    /// Any requested intermediate states, in request order.
    pub snapshots: Vec<Snapshot>,
}

/// Build the entrance state for `scenario` and propagate it through the
/// interaction window, capturing snapshots at the requested window times
/// (each snapped to the nearest step boundary).
pub fn run_interaction(scenario: &Scenario, snapshot_times: &[f64]) -> Result<InteractionOutput> {
    let entrance = scenario.entrance_state()?;
    let kin = scenario.kinematics()?;
    propagate_window(&entrance, &scenario.laser, &kin, scenario.dt, snapshot_times)
}

/// Propagate an arbitrary entrance state through the window. Exposed so
/// ensemble averaging can reuse one drifted state across phase draws.
pub fn propagate_window(
    entrance: &Wavefunction,
    laser: &LaserField,
    kin: &Kinematics,
    dt: f64,
    snapshot_times: &[f64],
) -> Result<InteractionOutput> {
    let t_int = laser.t_interaction(kin);
    let bound = laser.photon.period * MAX_DT_FRACTION_OF_PERIOD;
    if dt > bound {
        return Err(Error::TimestepTooLarge { dt, bound });
    }

    // Fixed steps of dt plus a partial final step for the remainder.
    let n_full = (t_int / dt).floor() as usize;
    let remainder = t_int - n_full as f64 * dt;
    let has_partial = remainder > 1e-9 * dt;
    let n_steps = n_full + usize::from(has_partial);
    if n_steps == 0 {
        return Err(Error::Invalid(
            "interaction window shorter than one timestep".into(),
        ));
    }

    // Snapshot requests snapped to step boundaries (boundary b is time b*dt,
    // boundary n_steps is t_int).
    let boundary_time = |b: usize| -> f64 {
        if b >= n_steps && has_partial {
            t_int
        } else {
            (b as f64 * dt).min(t_int)
        }
    };
    let mut wanted: Vec<(usize, f64)> = Vec::with_capacity(snapshot_times.len());
    for &t in snapshot_times {
        if !(0.0..=t_int * (1.0 + 1e-12)).contains(&t) {
            return Err(Error::InvalidRange {
                name: "snapshot time",
                lo: 0.0,
                hi: t_int,
            });
        }
        let mut b = (t / dt).round() as usize;
        if b > n_steps {
            b = n_steps;
        }
        // Snapping never moves a request across the window.
        wanted.push((b, t));
    }

    let grid = *entrance.grid();
    let mut plan = FftPlan::new(grid.n());
    let half_kin = kinetic_half_phases(&grid, kin, dt);

    let mut data = entrance.values.clone();
    let mut snapshots: Vec<Snapshot> = Vec::with_capacity(wanted.len());
    let record = |b: usize, values: &[Complex64], snaps: &mut Vec<Snapshot>| -> Result<()> {
        for &(wb, t_req) in wanted.iter().filter(|(wb, _)| *wb == b) {
            let state = Wavefunction::new(
                grid,
                values.to_vec(),
                entrance.p0,
                entrance.t_elapsed + boundary_time(wb),
            )?;
            snaps.push(Snapshot {
                t_requested: t_req,
                t_actual: boundary_time(wb),
                state,
            });
        }
        Ok(())
    };

    record(0, &data, &mut snapshots)?;
    let mut t = 0.0;
    for k in 0..n_steps {
        let h = if k < n_full { dt } else { remainder };
        let half = if k < n_full {
            // reuse the precomputed dt phases
            None
        } else {
            Some(kinetic_half_phases(&grid, kin, h))
        };
        let half = half.as_ref().unwrap_or(&half_kin);

        plan.forward(&mut data);
        if k == 0 {
            check_p_aliasing(&grid, &data)?;
        }
        apply(&mut data, half);
        plan.inverse(&mut data);
        apply_potential_phase(&mut data, &grid, laser, kin, t + 0.5 * h, h);
        plan.forward(&mut data);
        apply(&mut data, half);
        check_p_aliasing(&grid, &data)?;
        plan.inverse(&mut data);

        t += h;
        record(k + 1, &data, &mut snapshots)?;
    }
    check_z_aliasing(&data)?;

    // Report snapshots in request order.
    snapshots.sort_by(|a, b| {
        a.t_requested
            .partial_cmp(&b.t_requested)
            .expect("snapshot times are finite")
    });

    let final_state = Wavefunction::new(grid, data, entrance.p0, entrance.t_elapsed + t_int)?;
    Ok(InteractionOutput {
        entrance: entrance.clone(),
        final_state,
        snapshots,
    })
}

/// exp(-i (p-p0)^2 dt / (4 m* hbar)) over DFT bins: half of the kinetic
/// phase for a step dt.
fn kinetic_half_phases(grid: &GridSpec, kin: &Kinematics, dt: f64) -> Vec<Complex64> {
    let coeff = dt / (4.0 * kin.m_star * HBAR);
    (0..grid.n())
        .map(|k| {
            let p = grid.p_rel_at(k);
            Complex64::from_polar(1.0, -p * p * coeff)
        })
        .collect()
}

fn apply(data: &mut [Complex64], phases: &[Complex64]) {
    for (v, ph) in data.iter_mut().zip(phases) {
        *v *= ph;
    }
}

/// Multiply by exp(-i V(zeta, t_mid) h / hbar) in position space.
fn apply_potential_phase(
    data: &mut [Complex64],
    grid: &GridSpec,
    laser: &LaserField,
    kin: &Kinematics,
    t_mid: f64,
    h: f64,
) {
    if laser.e0 == 0.0 {
        return;
    }
    let amp = E_CHARGE * kin.v0 * laser.e0 / laser.photon.omega;
    let detune = laser.q_z * kin.v0 - laser.photon.omega;
    let scale = amp * h / HBAR;
    let offset = detune * t_mid + laser.phi0;
    for (i, v) in data.iter_mut().enumerate() {
        let s = (laser.q_z * grid.z_at(i) + offset).sin();
        *v *= Complex64::from_polar(1.0, -scale * s);
    }
}
