//! Interaction-regime classification and the waist-size/drift phase diagram.
//!
//! The deciding quantity is the packet-to-field size ratio
//! Gamma = 2 pi sigma_z / (beta lambda), evaluated at the waist (Gamma_0) and
//! at the interaction entrance after the drift (Gamma). A packet born large
//! (Gamma_0 above threshold) shows photon-recoil sidebands; a packet born
//! small but dispersed past the threshold shows chirp-interference fringes;
//! one that stays small behaves like a point charge and is accelerated.

use std::collections::HashMap;
use std::fmt;

use ndarray::Array2;

use crate::error::Error;
use crate::exec;
use crate::kinematics::{Kinematics, PhotonScale};
use crate::perturbation::gamma_factor;
use crate::wavepacket::{analytic_sigma_z, BeamParams};
use crate::Result;

/// Gamma value separating the regimes.
pub const REGIME_THRESHOLD: f64 = std::f64::consts::SQRT_2;

/// The three interaction regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeLabel {
    /// Point-like packet, net momentum transfer.
    Acceleration,
    /// Packet wide at birth, recoil sidebands.
    Pinem,
    /// Packet widened by dispersion, chirp-interference fringes.
    Apinem,
}

impl RegimeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeLabel::Acceleration => "acceleration",
            RegimeLabel::Pinem => "PINEM",
            RegimeLabel::Apinem => "APINEM",
        }
    }
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classification rule. Ties at the threshold go to the quantum side.
pub fn label_for(gamma0: f64, gamma: f64) -> RegimeLabel {
    if gamma0 >= REGIME_THRESHOLD {
        RegimeLabel::Pinem
    } else if gamma >= REGIME_THRESHOLD {
        RegimeLabel::Apinem
    } else {
        RegimeLabel::Acceleration
    }
}

/// Classification of one beam against one drive, with the numbers behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub label: RegimeLabel,
    pub gamma0: f64,
    pub gamma: f64,
    /// exp(-Gamma^2/2) at the entrance.
    pub damping: f64,
    /// Packet size at the entrance (m).
    pub sigma_z_entrance: f64,
    /// Expected spacing of spectral structure (kg m/s): the photon recoil
    /// for sidebands, the chirp-interference spacing for fringes, nothing
    /// in the acceleration regime.
    pub predicted_period: Option<f64>,
}

pub fn classify(beam: &BeamParams, photon: &PhotonScale) -> Result<RegimeReport> {
    beam.validate()?;
    let kin = beam.kinematics()?;
    Ok(classify_unchecked(beam, photon, &kin))
}

fn classify_unchecked(beam: &BeamParams, photon: &PhotonScale, kin: &Kinematics) -> RegimeReport {
    let bl = photon.beta_lambda;
    let sigma_z = analytic_sigma_z(beam.sigma_z0, beam.drift_time(kin), kin);
    let gamma0 = gamma_factor(beam.sigma_z0, bl);
    let gamma = gamma_factor(sigma_z, bl);
    let label = label_for(gamma0, gamma);
    let predicted_period = match label {
        RegimeLabel::Acceleration => None,
        RegimeLabel::Pinem => Some(photon.recoil),
        RegimeLabel::Apinem => Some(beam.sigma_p0() * bl / sigma_z),
    };
    RegimeReport {
        label,
        gamma0,
        gamma,
        damping: (-0.5 * gamma * gamma).exp(),
        sigma_z_entrance: sigma_z,
        predicted_period,
    }
}

/// Axes and resolution of a phase diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramSpec {
    /// Waist size range (m), sampled logarithmically. Both ends > 0.
    pub sigma_range: (f64, f64),
    pub n_sigma: usize,
    /// Drift length range (m), sampled linearly. Negative drifts (converging
    /// beams) are allowed.
    pub drift_range: (f64, f64),
    pub n_drift: usize,
}

impl DiagramSpec {
    fn validate(&self) -> Result<()> {
        let (slo, shi) = self.sigma_range;
        if !(slo.is_finite() && shi.is_finite() && slo > 0.0 && shi > slo) {
            return Err(Error::InvalidRange {
                name: "sigma_range",
                lo: slo,
                hi: shi,
            });
        }
        let (dlo, dhi) = self.drift_range;
        if !(dlo.is_finite() && dhi.is_finite() && dhi > dlo) {
            return Err(Error::InvalidRange {
                name: "drift_range",
                lo: dlo,
                hi: dhi,
            });
        }
        if self.n_sigma < 2 || self.n_drift < 2 {
            return Err(Error::Invalid(format!(
                "phase diagram needs at least 2 samples per axis, got {} x {}",
                self.n_sigma, self.n_drift
            )));
        }
        Ok(())
    }

    fn sigma_axis(&self) -> Vec<f64> {
        let (lo, hi) = self.sigma_range;
        let (llo, lhi) = (lo.ln(), hi.ln());
        (0..self.n_sigma)
            .map(|i| (llo + (lhi - llo) * i as f64 / (self.n_sigma - 1) as f64).exp())
            .collect()
    }

    fn drift_axis(&self) -> Vec<f64> {
        let (lo, hi) = self.drift_range;
        (0..self.n_drift)
            .map(|j| lo + (hi - lo) * j as f64 / (self.n_drift - 1) as f64)
            .collect()
    }
}

/// Regime map over waist size and drift length for a fixed beam speed and
/// drive wavelength. Grids are indexed `[i_sigma, j_drift]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagram {
    /// Waist sizes (m), log-spaced ascending.
    pub sigma_z0: Vec<f64>,
    /// Drift lengths (m), linear ascending.
    pub drift_length: Vec<f64>,
    pub gamma: Array2<f64>,
    pub damping: Array2<f64>,
    pub labels: Array2<RegimeLabel>,
    /// Gamma = threshold level set, polylines of (sigma_z0, drift_length)
    /// vertices. Closed loops repeat their first vertex at the end.
    pub boundary: Vec<Vec<(f64, f64)>>,
    /// Waist size where Gamma_0 crosses the threshold (the vertical PINEM
    /// border), if it falls inside the sigma range.
    pub waist_boundary: Option<f64>,
}

pub fn phase_diagram(beta: f64, photon: &PhotonScale, spec: &DiagramSpec) -> Result<PhaseDiagram> {
    phase_diagram_impl(beta, photon, spec, false)
}

/// Single-threaded variant of [`phase_diagram`], same output bit for bit.
pub fn phase_diagram_seq(
    beta: f64,
    photon: &PhotonScale,
    spec: &DiagramSpec,
) -> Result<PhaseDiagram> {
    phase_diagram_impl(beta, photon, spec, true)
}

fn phase_diagram_impl(
    beta: f64,
    photon: &PhotonScale,
    spec: &DiagramSpec,
    sequential: bool,
) -> Result<PhaseDiagram> {
    spec.validate()?;
    let kin = Kinematics::from_beta(beta)?;
    let sigma_axis = spec.sigma_axis();
    let drift_axis = spec.drift_axis();
    let (ns, nd) = (spec.n_sigma, spec.n_drift);

    let cell = |idx: usize| {
        let (i, j) = (idx / nd, idx % nd);
        let beam = BeamParams {
            sigma_z0: sigma_axis[i],
            drift_length: drift_axis[j],
            beta,
        };
        let report = classify_unchecked(&beam, photon, &kin);
        (report.gamma, report.damping, report.label)
    };
    let cells = if sequential {
        exec::map_indexed_seq(ns * nd, cell)
    } else {
        exec::map_indexed(ns * nd, cell)
    };

    let gamma = Array2::from_shape_vec((ns, nd), cells.iter().map(|c| c.0).collect()).unwrap();
    let damping = Array2::from_shape_vec((ns, nd), cells.iter().map(|c| c.1).collect()).unwrap();
    let labels = Array2::from_shape_vec((ns, nd), cells.iter().map(|c| c.2).collect()).unwrap();

    let boundary = level_set(&gamma, &sigma_axis, &drift_axis, REGIME_THRESHOLD);
    let s_star = photon.beta_lambda / (REGIME_THRESHOLD * std::f64::consts::PI);
    let waist_boundary = (spec.sigma_range.0 <= s_star && s_star <= spec.sigma_range.1)
        .then_some(s_star);

    Ok(PhaseDiagram {
        sigma_z0: sigma_axis,
        drift_length: drift_axis,
        gamma,
        damping,
        labels,
        boundary,
        waist_boundary,
    })
}

impl PhaseDiagram {
    /// Largest waist size reached by the Gamma = threshold level set.
    pub fn boundary_max_sigma(&self) -> Option<f64> {
        self.boundary
            .iter()
            .flatten()
            .map(|&(s, _)| s)
            .fold(None, |m, s| Some(m.map_or(s, |v: f64| v.max(s))))
    }

    /// Grid and labels as text: a header, the two axes, then one line per
    /// waist size with damping values, then one line per waist size with
    /// single-letter labels (a/p/A).
    pub fn write_grid_tsv<W: std::io::Write>(
        &self,
        w: &mut W,
        extra_header: &[String],
    ) -> std::io::Result<()> {
        for line in extra_header {
            writeln!(w, "# {line}")?;
        }
        writeln!(
            w,
            "# phase diagram n_sigma={} n_drift={}",
            self.sigma_z0.len(),
            self.drift_length.len()
        )?;
        write!(w, "# sigma_z0(m):")?;
        for s in &self.sigma_z0 {
            write!(w, " {s:e}")?;
        }
        writeln!(w)?;
        write!(w, "# drift_length(m):")?;
        for d in &self.drift_length {
            write!(w, " {d:e}")?;
        }
        writeln!(w)?;
        writeln!(w, "# damping rows (one waist size per row):")?;
        for i in 0..self.sigma_z0.len() {
            let row: Vec<String> = (0..self.drift_length.len())
                .map(|j| format!("{:e}", self.damping[[i, j]]))
                .collect();
            writeln!(w, "{}", row.join("\t"))?;
        }
        writeln!(w, "# labels (a=acceleration p=PINEM A=APINEM):")?;
        for i in 0..self.sigma_z0.len() {
            let row: String = (0..self.drift_length.len())
                .map(|j| match self.labels[[i, j]] {
                    RegimeLabel::Acceleration => 'a',
                    RegimeLabel::Pinem => 'p',
                    RegimeLabel::Apinem => 'A',
                })
                .collect();
            writeln!(w, "{row}")?;
        }
        Ok(())
    }

    /// Boundary polylines as text, one vertex per line, blank line between
    /// polylines.
    pub fn write_boundary_tsv<W: std::io::Write>(
        &self,
        w: &mut W,
        extra_header: &[String],
    ) -> std::io::Result<()> {
        for line in extra_header {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "# columns: sigma_z0(m)\tdrift_length(m)")?;
        if let Some(s) = self.waist_boundary {
            writeln!(w, "# waist boundary sigma_z0={s:e}")?;
        }
        for (k, line) in self.boundary.iter().enumerate() {
            if k > 0 {
                writeln!(w)?;
            }
            for (s, d) in line {
                writeln!(w, "{s:e}\t{d:e}")?;
            }
        }
        Ok(())
    }
}

/// Edge of the sampling grid a level crossing sits on: horizontal edges run
/// along the sigma axis, vertical ones along the drift axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeKey {
    H(usize, usize),
    V(usize, usize),
}

/// Marching-squares extraction of the `level` contour of `grid`. Crossings
/// are interpolated linearly in log(sigma) along the sigma axis and linearly
/// in drift along the drift axis, matching the axis spacings.
fn level_set(
    grid: &Array2<f64>,
    sigma_axis: &[f64],
    drift_axis: &[f64],
    level: f64,
) -> Vec<Vec<(f64, f64)>> {
    let (ns, nd) = grid.dim();
    let mut points: HashMap<EdgeKey, (f64, f64)> = HashMap::new();
    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();

    let frac = |ga: f64, gb: f64| (level - ga) / (gb - ga);
    let h_edge = |points: &mut HashMap<EdgeKey, (f64, f64)>, i: usize, j: usize| {
        let key = EdgeKey::H(i, j);
        points.entry(key).or_insert_with(|| {
            let t = frac(grid[[i, j]], grid[[i + 1, j]]);
            let s = (sigma_axis[i].ln() + t * (sigma_axis[i + 1].ln() - sigma_axis[i].ln())).exp();
            (s, drift_axis[j])
        });
        key
    };
    let v_edge = |points: &mut HashMap<EdgeKey, (f64, f64)>, i: usize, j: usize| {
        let key = EdgeKey::V(i, j);
        points.entry(key).or_insert_with(|| {
            let t = frac(grid[[i, j]], grid[[i, j + 1]]);
            (
                sigma_axis[i],
                drift_axis[j] + t * (drift_axis[j + 1] - drift_axis[j]),
            )
        });
        key
    };

    for i in 0..ns - 1 {
        for j in 0..nd - 1 {
            let inside = |g: f64| g >= level;
            let (ga, gb, gc, gd) = (
                grid[[i, j]],
                grid[[i + 1, j]],
                grid[[i + 1, j + 1]],
                grid[[i, j + 1]],
            );
            let case = inside(ga) as u8
                | (inside(gb) as u8) << 1
                | (inside(gc) as u8) << 2
                | (inside(gd) as u8) << 3;
            // Edge shorthand within this cell.
            let bottom = |p: &mut HashMap<_, _>| h_edge(p, i, j);
            let top = |p: &mut HashMap<_, _>| h_edge(p, i, j + 1);
            let left = |p: &mut HashMap<_, _>| v_edge(p, i, j);
            let right = |p: &mut HashMap<_, _>| v_edge(p, i + 1, j);
            let mut seg = |a: EdgeKey, b: EdgeKey| segments.push((a, b));
            match case {
                0 | 15 => {}
                1 => {
                    let (a, b) = (bottom(&mut points), left(&mut points));
                    seg(a, b);
                }
                2 => {
                    let (a, b) = (bottom(&mut points), right(&mut points));
                    seg(a, b);
                }
                3 => {
                    let (a, b) = (left(&mut points), right(&mut points));
                    seg(a, b);
                }
                4 => {
                    let (a, b) = (right(&mut points), top(&mut points));
                    seg(a, b);
                }
                5 => {
                    // Both diagonal corners inside: split by the cell center.
                    let center = 0.25 * (ga + gb + gc + gd);
                    if inside(center) {
                        let (a, b) = (bottom(&mut points), right(&mut points));
                        seg(a, b);
                        let (a, b) = (left(&mut points), top(&mut points));
                        seg(a, b);
                    } else {
                        let (a, b) = (bottom(&mut points), left(&mut points));
                        seg(a, b);
                        let (a, b) = (right(&mut points), top(&mut points));
                        seg(a, b);
                    }
                }
                6 => {
                    let (a, b) = (bottom(&mut points), top(&mut points));
                    seg(a, b);
                }
                7 => {
                    let (a, b) = (left(&mut points), top(&mut points));
                    seg(a, b);
                }
                8 => {
                    let (a, b) = (top(&mut points), left(&mut points));
                    seg(a, b);
                }
                9 => {
                    let (a, b) = (bottom(&mut points), top(&mut points));
                    seg(a, b);
                }
                10 => {
                    let center = 0.25 * (ga + gb + gc + gd);
                    if inside(center) {
                        let (a, b) = (bottom(&mut points), left(&mut points));
                        seg(a, b);
                        let (a, b) = (right(&mut points), top(&mut points));
                        seg(a, b);
                    } else {
                        let (a, b) = (bottom(&mut points), right(&mut points));
                        seg(a, b);
                        let (a, b) = (left(&mut points), top(&mut points));
                        seg(a, b);
                    }
                }
                11 => {
                    let (a, b) = (right(&mut points), top(&mut points));
                    seg(a, b);
                }
                12 => {
                    let (a, b) = (left(&mut points), right(&mut points));
                    seg(a, b);
                }
                13 => {
                    let (a, b) = (bottom(&mut points), right(&mut points));
                    seg(a, b);
                }
                14 => {
                    let (a, b) = (bottom(&mut points), left(&mut points));
                    seg(a, b);
                }
                _ => unreachable!(),
            }
        }
    }

    chain_segments(&segments, &points)
}

/// Join crossing segments that share grid edges into polylines.
fn chain_segments(
    segments: &[(EdgeKey, EdgeKey)],
    points: &HashMap<EdgeKey, (f64, f64)>,
) -> Vec<Vec<(f64, f64)>> {
    let mut adjacency: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (idx, (a, b)) in segments.iter().enumerate() {
        adjacency.entry(*a).or_default().push(idx);
        adjacency.entry(*b).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();

    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let mut chain = std::collections::VecDeque::from([a, b]);
        // Grow at the back, then at the front.
        loop {
            let tail = *chain.back().unwrap();
            let Some(&next) = adjacency[&tail].iter().find(|&&s| !used[s]) else {
                break;
            };
            used[next] = true;
            let (na, nb) = segments[next];
            chain.push_back(if na == tail { nb } else { na });
        }
        loop {
            let head = *chain.front().unwrap();
            let Some(&next) = adjacency[&head].iter().find(|&&s| !used[s]) else {
                break;
            };
            used[next] = true;
            let (na, nb) = segments[next];
            chain.push_front(if na == head { nb } else { na });
        }
        polylines.push(chain.into_iter().map(|k| points[&k]).collect());
    }
    polylines
}
