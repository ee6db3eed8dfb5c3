//! Discrete Wigner quasiprobability distribution over the comoving
//! phase space.
//!
//! Each row of the map is the length-N FFT of the circular correlation
//! `psi*[(n - k) mod N] psi[(n + k) mod N]`, so the momentum axis has twice
//! the resolution of the spectral grid but covers only half its window. Two
//! consequences of the circular indexing matter for interpretation:
//!
//! - a sign-alternating image of the packet appears half a window away in
//!   position, so pointwise diagnostics (minimum, moments) are taken over
//!   the central half of the position axis;
//! - the paired fine-bin momentum marginal reproduces the spectral density
//!   exactly only while the state keeps clear of the half-window edge, which
//!   an occupancy guard enforces.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

use crate::constants::HBAR;
use crate::error::Error;
use crate::exec;
use crate::fft::FftPlan;
use crate::wavepacket::{Wavefunction, ALIAS_EDGE_CELLS, ALIAS_LIMIT};
use crate::Result;

/// Largest number of stored cells a map may have; larger requests must
/// downsample.
pub const MAX_MAP_CELLS: usize = 100_000_000;

/// Value scaling for exports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WignerScale {
    /// Raw density, integrates to one over z and p.
    Unit,
    /// Multiplied by h/2, so a minimum-uncertainty Gaussian peaks at one.
    HalfPlanck,
}

/// Sampled Wigner map. Momenta are offsets from the carrier `p0`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerMap {
    z: Vec<f64>,
    p: Vec<f64>,
    values: Array2<f64>,
    p0: f64,
    /// Cell sizes of the sampled axes (stride times the fine resolution).
    dz_cell: f64,
    dp_cell: f64,
    stride_z: usize,
    stride_p: usize,
    n_full: usize,
    /// Largest imaginary part left after the row transforms, in map units.
    /// `None` for cross maps, whose imaginary part is not an error term.
    imag_residue: Option<f64>,
}

impl WignerMap {
    /// Sampled comoving positions (m).
    pub fn z(&self) -> &[f64] {
        &self.z
    }

    /// Sampled momentum offsets from `p0` (kg m/s).
    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// Map values indexed `[iz, ip]`.
    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn imag_residue(&self) -> Option<f64> {
        self.imag_residue
    }

    /// Riemann mass of the sampled map. Equals the state norm exactly at
    /// stride one. The circular image alternates sign across fine momentum
    /// bins, so an even `stride_p` keeps only one sign and inflates the sum
    /// by the image weight; integrate at `stride_p == 1` for a trusted value.
    pub fn mass(&self) -> f64 {
        self.values.sum() * self.dz_cell * self.dp_cell
    }

    /// Position marginal on the sampled z axis. At `stride_p == 1` this is
    /// the probability density |psi|^2 bin for bin.
    pub fn marginal_z(&self) -> Vec<f64> {
        self.values
            .rows()
            .into_iter()
            .map(|row| row.sum() * self.dp_cell)
            .collect()
    }

    /// Momentum marginal with adjacent fine bins paired onto the spectral
    /// axis (offsets from p0, spacing twice the fine axis). Odd fine bins of
    /// the z-sum vanish identically, so the pairing recovers the density of
    /// the spectral representation. Requires full momentum sampling.
    pub fn marginal_p(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        if self.stride_p != 1 {
            return Err(Error::Invalid(format!(
                "paired momentum marginal needs stride_p = 1, map has {}",
                self.stride_p
            )));
        }
        let n = self.n_full;
        let dp = 2.0 * self.dp_cell;
        let mut axis = Vec::with_capacity(n / 2);
        let mut rho = Vec::with_capacity(n / 2);
        for m in 0..n / 2 {
            axis.push((m as f64 - (n / 4) as f64) * dp);
            let mut s = 0.0;
            for r in 0..self.z.len() {
                s += self.values[[r, 2 * m]] + self.values[[r, 2 * m + 1]];
            }
            rho.push(s * self.dz_cell / 2.0);
        }
        Ok((axis, rho))
    }

    fn central_rows(&self) -> impl Iterator<Item = usize> + '_ {
        let quarter = self.n_full as f64 * self.dz_cell / self.stride_z as f64 / 4.0;
        (0..self.z.len()).filter(move |&r| self.z[r].abs() <= quarter)
    }

    /// Smallest value over the central half of the position axis, where the
    /// circular image cannot reach.
    pub fn central_min(&self) -> f64 {
        self.central_rows()
            .flat_map(|r| self.values.row(r).to_vec())
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest value over the central half of the position axis.
    pub fn central_max(&self) -> f64 {
        self.central_rows()
            .flat_map(|r| self.values.row(r).to_vec())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Net negative mass over the central half, in units of total mass.
    pub fn central_negative_mass(&self) -> f64 {
        let mut s = 0.0;
        for r in self.central_rows() {
            for &v in self.values.row(r) {
                if v < 0.0 {
                    s += v;
                }
            }
        }
        s * self.dz_cell * self.dp_cell
    }

    /// First and second phase-space moments over the central half of the
    /// position axis, normalized by the enclosed mass.
    pub fn central_moments(&self) -> WignerMoments {
        let mut mass = 0.0;
        let (mut mz, mut mp) = (0.0, 0.0);
        for r in self.central_rows() {
            for (c, &v) in self.values.row(r).iter().enumerate() {
                mass += v;
                mz += v * self.z[r];
                mp += v * self.p[c];
            }
        }
        mz /= mass;
        mp /= mass;
        let (mut vz, mut vp, mut cov) = (0.0, 0.0, 0.0);
        for r in self.central_rows() {
            let dz = self.z[r] - mz;
            for (c, &v) in self.values.row(r).iter().enumerate() {
                let dp = self.p[c] - mp;
                vz += v * dz * dz;
                vp += v * dp * dp;
                cov += v * dz * dp;
            }
        }
        vz /= mass;
        vp /= mass;
        cov /= mass;
        WignerMoments {
            mean_z: mz,
            mean_p: mp,
            sigma_z: vz.sqrt(),
            sigma_p: vp.sqrt(),
            cov_zp: cov,
            area: std::f64::consts::TAU * (vz * vp - cov * cov).sqrt(),
        }
    }

    /// Grid export: header with the axes, then one line of tab-separated
    /// values per position sample.
    pub fn write_tsv<W: std::io::Write>(
        &self,
        w: &mut W,
        scale: WignerScale,
        extra_header: &[String],
    ) -> std::io::Result<()> {
        for line in extra_header {
            writeln!(w, "# {line}")?;
        }
        writeln!(
            w,
            "# wigner n_z={} n_p={} stride_z={} stride_p={} p0={:e}",
            self.z.len(),
            self.p.len(),
            self.stride_z,
            self.stride_p,
            self.p0
        )?;
        writeln!(w, "# z axis: z0={:e} dz={:e}", self.z[0], self.dz_cell)?;
        writeln!(
            w,
            "# p axis (offsets from p0): p_off0={:e} dp={:e}",
            self.p[0], self.dp_cell
        )?;
        let factor = match scale {
            WignerScale::Unit => {
                writeln!(w, "# scale: unit (integrates to 1)")?;
                1.0
            }
            WignerScale::HalfPlanck => {
                writeln!(w, "# scale: h/2 (minimum-uncertainty peak = 1)")?;
                PI * HBAR
            }
        };
        for r in 0..self.z.len() {
            let row: Vec<String> = self
                .values
                .row(r)
                .iter()
                .map(|v| format!("{:e}", v * factor))
                .collect();
            writeln!(w, "{}", row.join("\t"))?;
        }
        Ok(())
    }
}

/// Moments of a Wigner map; `area` is 2 pi sqrt(det) of the covariance
/// matrix, h/2 for a minimum-uncertainty Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerMoments {
    pub mean_z: f64,
    pub mean_p: f64,
    pub sigma_z: f64,
    pub sigma_p: f64,
    pub cov_zp: f64,
    pub area: f64,
}

/// Wigner map of a state, keeping every `stride_z`-th position sample and
/// every `stride_p`-th momentum bin.
pub fn wigner_map(psi: &Wavefunction, stride_z: usize, stride_p: usize) -> Result<WignerMap> {
    build_map(psi, psi, stride_z, stride_p, false)
}

/// Single-threaded variant of [`wigner_map`], same output bit for bit.
pub fn wigner_map_seq(psi: &Wavefunction, stride_z: usize, stride_p: usize) -> Result<WignerMap> {
    build_map(psi, psi, stride_z, stride_p, true)
}

/// Real part of the cross-Wigner distribution of two states on one grid.
/// The Wigner map is quadratic in the state, so for `c = a + b` it splits as
/// `W[c] = W[a] + W[b] + 2 * cross(a, b)`.
pub fn cross_wigner_map(
    bra: &Wavefunction,
    ket: &Wavefunction,
    stride_z: usize,
    stride_p: usize,
) -> Result<WignerMap> {
    build_map(bra, ket, stride_z, stride_p, false)
}

fn build_map(
    bra: &Wavefunction,
    ket: &Wavefunction,
    stride_z: usize,
    stride_p: usize,
    sequential: bool,
) -> Result<WignerMap> {
    let grid = *bra.grid();
    let auto = std::ptr::eq(bra, ket);
    if !auto && (grid != *ket.grid() || bra.p0 != ket.p0) {
        return Err(Error::AxisMismatch(
            "cross-Wigner states live on different grids".into(),
        ));
    }
    let n = grid.n();
    // Power-of-two grids of at least 16 cells always satisfy this; the fine
    // momentum pairing and the image sign rule both need it.
    assert!(n % 4 == 0, "Wigner transform needs n divisible by 4");
    for (name, stride) in [("stride_z", stride_z), ("stride_p", stride_p)] {
        if stride == 0 || n % stride != 0 {
            return Err(Error::Invalid(format!(
                "{name} = {stride} must be a nonzero divisor of the grid size {n}"
            )));
        }
    }
    let (rows, cols) = (n / stride_z, n / stride_p);
    if rows * cols > MAX_MAP_CELLS {
        return Err(Error::MemoryGuard {
            cells: rows * cols,
            limit: MAX_MAP_CELLS,
        });
    }
    check_half_window(bra)?;
    if !auto {
        check_half_window(ket)?;
    }

    let dz = grid.dz();
    let scale = dz / (PI * HBAR);
    let row_values = |fft: &mut (FftPlan, Vec<Complex64>), r: usize| {
        let (plan, buf) = fft;
        let nrow = r * stride_z;
        for k in 0..n {
            let down = bra.values[(nrow + n - k) % n].conj();
            let up = ket.values[(nrow + k) % n];
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            buf[k] = down * up * sign;
        }
        plan.forward(buf);
        let mut vals = Vec::with_capacity(cols);
        let mut residue = 0.0f64;
        for c in 0..cols {
            let v = buf[c * stride_p];
            vals.push(v.re * scale);
            residue = residue.max(v.im.abs() * scale);
        }
        (vals, residue)
    };
    let init = || (FftPlan::new(n), vec![Complex64::default(); n]);
    let computed = if sequential {
        exec::map_indexed_init_seq(rows, init, row_values)
    } else {
        exec::map_indexed_init(rows, init, row_values)
    };

    let mut flat = Vec::with_capacity(rows * cols);
    let mut residue = 0.0f64;
    for (vals, res) in computed {
        flat.extend_from_slice(&vals);
        residue = residue.max(res);
    }
    let values = Array2::from_shape_vec((rows, cols), flat).unwrap();

    let dp_fine = grid.dp() / 2.0;
    let z: Vec<f64> = (0..rows).map(|r| grid.z_at(r * stride_z)).collect();
    let p: Vec<f64> = (0..cols)
        .map(|c| ((c * stride_p) as f64 - (n / 2) as f64) * dp_fine)
        .collect();
    Ok(WignerMap {
        z,
        p,
        values,
        p0: bra.p0,
        dz_cell: dz * stride_z as f64,
        dp_cell: dp_fine * stride_p as f64,
        stride_z,
        stride_p,
        n_full: n,
        imag_residue: auto.then_some(residue),
    })
}

/// The map's momentum axis covers half the spectral window; refuse states
/// with appreciable spectral mass near or beyond that boundary.
fn check_half_window(psi: &Wavefunction) -> Result<()> {
    let grid = psi.grid();
    let n = grid.n();
    let amps = psi.momentum_amplitudes();
    let boundary = (n / 4 - ALIAS_EDGE_CELLS) as i64;
    let mut outside = 0.0;
    let mut total = 0.0;
    for (k, a) in amps.iter().enumerate() {
        let w = a.norm_sqr();
        total += w;
        if grid.signed_index(k).abs() >= boundary {
            outside += w;
        }
    }
    let fraction = outside / total;
    if fraction >= ALIAS_LIMIT {
        return Err(Error::Aliasing {
            axis: "momentum half-window",
            fraction,
            cells: ALIAS_EDGE_CELLS,
            limit: ALIAS_LIMIT,
        });
    }
    Ok(())
}
