//! INI-style run configuration: sections of `key = value` pairs with unit
//! suffixes on dimensional quantities. Parsing collects every problem it
//! finds before failing so a bad file is fixed in one pass.

use std::fmt;
use std::path::Path;

use qew::constants::EV;
use qew::kinematics::{Kinematics, PhotonScale};
use qew::propagator::LaserField;
use qew::wavepacket::BeamParams;
use qew::wigner::WignerScale;

/// Every problem found in a configuration file.
#[derive(Debug)]
pub struct ConfigError {
    pub problems: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} configuration problem{}:",
            self.problems.len(),
            if self.problems.len() == 1 { "" } else { "s" }
        )?;
        for p in &self.problems {
            writeln!(f, "  - {p}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

/// `[beam]`: the electron wavepacket and its transport to the interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamConfig {
    pub sigma_z0: f64,
    pub drift_length: f64,
    pub beta: f64,
}

impl BeamConfig {
    pub fn to_core(self) -> BeamParams {
        BeamParams {
            sigma_z0: self.sigma_z0,
            drift_length: self.drift_length,
            beta: self.beta,
        }
    }
}

/// Drive strength, given either directly or through the coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    Field(f64),
    Upsilon(f64),
}

/// Optical scale, given as a vacuum wavelength or as beta * lambda.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpticalScale {
    Lambda(f64),
    BetaLambda(f64),
}

/// `[laser]`: the near-field drive. The drive strength is optional at parse
/// time; commands that propagate require it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserConfig {
    pub drive: Option<Drive>,
    pub scale: OpticalScale,
    /// Interaction length; optional at parse time because the phase diagram
    /// needs only the wavelength.
    pub length: Option<f64>,
    pub phi0: f64,
    pub theta_bar: f64,
}

impl LaserConfig {
    pub fn photon(&self, kin: &Kinematics) -> qew::Result<PhotonScale> {
        match self.scale {
            OpticalScale::Lambda(l) => PhotonScale::new(l, kin),
            OpticalScale::BetaLambda(bl) => PhotonScale::from_beta_lambda(bl, kin),
        }
    }

    /// Resolve the full drive description. Fails without a drive strength
    /// or interaction length.
    pub fn build(&self, kin: &Kinematics) -> anyhow::Result<LaserField> {
        let photon = self.photon(kin)?;
        let drive = self
            .drive
            .ok_or_else(|| anyhow::anyhow!("[laser] needs e0 or upsilon for this command"))?;
        let length = self
            .length
            .ok_or_else(|| anyhow::anyhow!("[laser] needs `length` for this command"))?;
        let e0 = match drive {
            Drive::Field(e0) => e0,
            Drive::Upsilon(u) => {
                2.0 * photon.hbar_omega * u / (qew::constants::E_CHARGE * length)
            }
        };
        let laser = if self.theta_bar == 0.0 {
            LaserField::synchronous(e0, length, self.phi0, photon, kin)?
        } else {
            LaserField::detuned(e0, length, self.theta_bar, self.phi0, photon, kin)?
        };
        Ok(laser)
    }
}

/// `[grid]`: explicit sampling; omit the section for automatic sizing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub n: usize,
    pub z_span: f64,
}

/// `[run]`: solver controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    /// Timestep; None means the default fraction of the optical period.
    pub dt: Option<f64>,
    pub wigner_stride_z: usize,
    pub wigner_stride_p: usize,
    pub wigner_scale: WignerScale,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dt: None,
            wigner_stride_z: 16,
            wigner_stride_p: 16,
            wigner_scale: WignerScale::Unit,
        }
    }
}

/// Phase statistics named in `[ensemble] phase`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseKind {
    None,
    Uniform,
    Gaussian,
}

/// `[ensemble]`: shot-to-shot jitter statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleConfig {
    pub sigma_e_part: f64,
    pub phase: PhaseKind,
    pub sigma_t: Option<f64>,
    pub draws: usize,
    pub seed: u64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            sigma_e_part: 0.0,
            phase: PhaseKind::None,
            sigma_t: None,
            draws: 64,
            seed: 0,
        }
    }
}

/// `[diagram]`: the waist/drift plane to classify.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramConfig {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub n_sigma: usize,
    pub drift_min: f64,
    pub drift_max: f64,
    pub n_drift: usize,
}

/// `[sweep]`: wavelengths for the fringe-scaling scan.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub beta_lambdas: Vec<f64>,
    pub upsilon: f64,
    pub length: f64,
}

/// A fully parsed configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub beam: BeamConfig,
    pub laser: Option<LaserConfig>,
    pub grid: Option<GridConfig>,
    pub run: RunConfig,
    pub ensemble: EnsembleConfig,
    pub diagram: Option<DiagramConfig>,
    pub sweep: Option<SweepConfig>,
}

impl Config {
    /// Normalized echo of the configuration, for output headers. Values are
    /// printed in SI so a run is reproducible from its artifact alone.
    pub fn echo(&self, command: &str) -> Vec<String> {
        let mut lines = vec![format!("command: {command}")];
        lines.push(format!(
            "beam: sigma_z0={:e} m, drift_length={:e} m, beta={:e}",
            self.beam.sigma_z0, self.beam.drift_length, self.beam.beta
        ));
        if let Some(l) = &self.laser {
            let drive = match l.drive {
                Some(Drive::Field(e0)) => format!("e0={e0:e} V/m"),
                Some(Drive::Upsilon(u)) => format!("upsilon={u:e}"),
                None => "undriven".into(),
            };
            let scale = match l.scale {
                OpticalScale::Lambda(v) => format!("lambda={v:e} m"),
                OpticalScale::BetaLambda(v) => format!("beta_lambda={v:e} m"),
            };
            lines.push(format!(
                "laser: {drive}, {scale}, length={}, phi0={:e} rad, theta_bar={:e} rad",
                l.length.map_or("unset".into(), |v| format!("{v:e} m")),
                l.phi0,
                l.theta_bar
            ));
        }
        if let Some(g) = &self.grid {
            lines.push(format!("grid: n={}, z_span={:e} m", g.n, g.z_span));
        }
        let r = &self.run;
        lines.push(format!(
            "run: dt={}, wigner_stride_z={}, wigner_stride_p={}, wigner_scale={}",
            r.dt.map_or("auto".into(), |v| format!("{v:e} s")),
            r.wigner_stride_z,
            r.wigner_stride_p,
            match r.wigner_scale {
                WignerScale::Unit => "unit",
                WignerScale::HalfPlanck => "half_planck",
            }
        ));
        if command == "ensemble" {
            let e = &self.ensemble;
            lines.push(format!(
                "ensemble: sigma_e_part={:e} J, phase={}, sigma_t={}, draws={}, seed={}",
                e.sigma_e_part,
                match e.phase {
                    PhaseKind::None => "none",
                    PhaseKind::Uniform => "uniform",
                    PhaseKind::Gaussian => "gaussian",
                },
                e.sigma_t.map_or("none".into(), |v| format!("{v:e} s")),
                e.draws,
                e.seed
            ));
        }
        if let Some(d) = &self.diagram {
            lines.push(format!(
                "diagram: sigma=[{:e}, {:e}] m x{}, drift=[{:e}, {:e}] m x{}",
                d.sigma_min, d.sigma_max, d.n_sigma, d.drift_min, d.drift_max, d.n_drift
            ));
        }
        if let Some(s) = &self.sweep {
            let bls: Vec<String> = s.beta_lambdas.iter().map(|b| format!("{b:e}")).collect();
            lines.push(format!(
                "sweep: beta_lambdas=[{}] m, upsilon={:e}, length={:e} m",
                bls.join(", "),
                s.upsilon,
                s.length
            ));
        }
        lines
    }
}

/// Load and fully validate a configuration file.
pub fn load(path: &Path) -> Result<Config, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        problems: vec![format!("cannot read {}: {e}", path.display())],
    })?;
    parse_str(&text)
}

struct Entry {
    key: String,
    value: String,
    line: usize,
    used: bool,
}

struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

/// Parse configuration text. Collects all problems instead of stopping at
/// the first.
pub fn parse_str(text: &str) -> Result<Config, ConfigError> {
    let mut problems = Vec::new();
    let mut sections: Vec<Section> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        // Inline comments start at '#' or ';'.
        let line = match raw_line.find(['#', ';']) {
            Some(cut) => &raw_line[..cut],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            match name.strip_suffix(']') {
                Some(name) => {
                    let name = name.trim().to_string();
                    if sections.iter().any(|s| s.name == name) {
                        problems.push(format!("line {line_no}: duplicate section [{name}]"));
                    }
                    sections.push(Section {
                        name,
                        line: line_no,
                        entries: Vec::new(),
                    });
                }
                None => problems.push(format!("line {line_no}: unterminated section header")),
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            problems.push(format!("line {line_no}: expected `key = value`, got `{line}`"));
            continue;
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        match sections.last_mut() {
            Some(section) => {
                if section.entries.iter().any(|e| e.key == key) {
                    problems.push(format!(
                        "line {line_no}: duplicate key `{key}` in [{}]",
                        section.name
                    ));
                }
                section.entries.push(Entry {
                    key,
                    value,
                    line: line_no,
                    used: false,
                });
            }
            None => problems.push(format!(
                "line {line_no}: key `{key}` appears before any [section]"
            )),
        }
    }

    let known = [
        "beam", "laser", "grid", "run", "ensemble", "diagram", "sweep",
    ];
    for s in &sections {
        if !known.contains(&s.name.as_str()) {
            problems.push(format!("line {}: unknown section [{}]", s.line, s.name));
        }
    }

    let beam = read_beam(&mut sections, &mut problems);
    let laser = read_laser(&mut sections, &mut problems);
    let grid = read_grid(&mut sections, &mut problems);
    let run = read_run(&mut sections, &mut problems);
    let ensemble = read_ensemble(&mut sections, &mut problems);
    let diagram = read_diagram(&mut sections, &mut problems);
    let sweep = read_sweep(&mut sections, &mut problems);

    for s in &sections {
        for e in &s.entries {
            if !e.used && known.contains(&s.name.as_str()) {
                problems.push(format!(
                    "line {}: unknown key `{}` in [{}]",
                    e.line, e.key, s.name
                ));
            }
        }
    }

    if problems.is_empty() {
        Ok(Config {
            beam: beam.unwrap(),
            laser,
            grid,
            run,
            ensemble,
            diagram,
            sweep,
        })
    } else {
        Err(ConfigError { problems })
    }
}

/// Dimension of a configuration value, deciding which unit suffixes apply.
#[derive(Clone, Copy, PartialEq)]
enum Dim {
    Length,
    Time,
    Energy,
    Plain,
}

fn unit_factor(dim: Dim, suffix: &str) -> Option<f64> {
    match dim {
        Dim::Length => match suffix {
            "" | "m" => Some(1.0),
            "cm" => Some(1e-2),
            "mm" => Some(1e-3),
            "um" => Some(1e-6),
            "nm" => Some(1e-9),
            _ => None,
        },
        Dim::Time => match suffix {
            "" | "s" => Some(1.0),
            "ps" => Some(1e-12),
            "fs" => Some(1e-15),
            _ => None,
        },
        Dim::Energy => match suffix {
            "" | "J" => Some(1.0),
            "eV" => Some(EV),
            "meV" => Some(1e-3 * EV),
            _ => None,
        },
        Dim::Plain => match suffix {
            "" => Some(1.0),
            _ => None,
        },
    }
}

fn parse_value(raw: &str, dim: Dim) -> Result<f64, String> {
    let trimmed = raw.trim();
    // The unit suffix is the trailing alphabetic run; exponents like `1e-6`
    // keep their `e` because a digit follows it.
    let cut = trimmed
        .rfind(|c: char| !c.is_ascii_alphabetic())
        .map_or(0, |i| i + 1);
    let (number, suffix) = trimmed.split_at(cut);
    let factor = unit_factor(dim, suffix)
        .ok_or_else(|| format!("unknown unit `{suffix}` in `{raw}`"))?;
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| format!("not a number: `{raw}`"))?;
    if !value.is_finite() {
        return Err(format!("not finite: `{raw}`"));
    }
    Ok(value * factor)
}

fn parse_list(raw: &str, dim: Dim) -> Result<Vec<f64>, String> {
    raw.split(',').map(|item| parse_value(item, dim)).collect()
}

/// Cursor over one section's entries that records which keys were consumed.
struct Reader<'a> {
    section: Option<&'a mut Section>,
    problems: &'a mut Vec<String>,
}

impl<'a> Reader<'a> {
    fn new(
        sections: &'a mut [Section],
        name: &str,
        problems: &'a mut Vec<String>,
    ) -> Option<Self> {
        let section = sections.iter_mut().find(|s| s.name == name)?;
        Some(Self {
            section: Some(section),
            problems,
        })
    }

    fn take(&mut self, key: &str, dim: Dim) -> Option<f64> {
        let section = self.section.as_mut()?;
        let name = section.name.clone();
        let entry = section.entries.iter_mut().find(|e| e.key == key)?;
        entry.used = true;
        match parse_value(&entry.value, dim) {
            Ok(v) => Some(v),
            Err(e) => {
                self.problems
                    .push(format!("line {}: [{}] {key}: {e}", entry.line, name));
                None
            }
        }
    }

    fn take_list(&mut self, key: &str, dim: Dim) -> Option<Vec<f64>> {
        let section = self.section.as_mut()?;
        let name = section.name.clone();
        let entry = section.entries.iter_mut().find(|e| e.key == key)?;
        entry.used = true;
        match parse_list(&entry.value, dim) {
            Ok(v) => Some(v),
            Err(e) => {
                self.problems
                    .push(format!("line {}: [{}] {key}: {e}", entry.line, name));
                None
            }
        }
    }

    fn take_str(&mut self, key: &str) -> Option<(String, usize)> {
        let section = self.section.as_mut()?;
        let entry = section.entries.iter_mut().find(|e| e.key == key)?;
        entry.used = true;
        Some((entry.value.clone(), entry.line))
    }

    fn take_usize(&mut self, key: &str) -> Option<usize> {
        let (value, line) = self.take_str(key)?;
        let name = self.name();
        match value.parse() {
            Ok(v) => Some(v),
            Err(_) => {
                self.problems.push(format!(
                    "line {line}: [{name}] {key}: not a non-negative integer: `{value}`"
                ));
                None
            }
        }
    }

    fn take_u64(&mut self, key: &str) -> Option<u64> {
        let (value, line) = self.take_str(key)?;
        let name = self.name();
        match value.parse() {
            Ok(v) => Some(v),
            Err(_) => {
                self.problems.push(format!(
                    "line {line}: [{name}] {key}: not a non-negative integer: `{value}`"
                ));
                None
            }
        }
    }

    fn require(&mut self, key: &str, dim: Dim) -> Option<f64> {
        let got = self.take(key, dim);
        if got.is_none() && !self.taken_with_error(key) {
            let name = self.name();
            self.problems.push(format!("[{name}] is missing `{key}`"));
        }
        got
    }

    fn taken_with_error(&self, key: &str) -> bool {
        self.section
            .as_ref()
            .is_some_and(|s| s.entries.iter().any(|e| e.key == key && e.used))
    }

    fn name(&self) -> String {
        self.section.as_ref().map_or_else(String::new, |s| s.name.clone())
    }
}

fn read_beam(sections: &mut [Section], problems: &mut Vec<String>) -> Option<BeamConfig> {
    let Some(mut r) = Reader::new(sections, "beam", problems) else {
        problems.push("missing required section [beam]".into());
        return None;
    };
    let sigma_z0 = r.require("sigma_z0", Dim::Length);
    let drift_length = r.require("drift_length", Dim::Length);
    let beta = r.require("beta", Dim::Plain);
    Some(BeamConfig {
        sigma_z0: sigma_z0?,
        drift_length: drift_length?,
        beta: beta?,
    })
}

fn read_laser(sections: &mut [Section], problems: &mut Vec<String>) -> Option<LaserConfig> {
    let mut r = Reader::new(sections, "laser", problems)?;
    let e0 = r.take("e0", Dim::Plain);
    let upsilon = r.take("upsilon", Dim::Plain);
    let lambda = r.take("lambda", Dim::Length);
    let beta_lambda = r.take("beta_lambda", Dim::Length);
    let length = r.take("length", Dim::Length);
    let phi0 = r.take("phi0", Dim::Plain).unwrap_or(0.0);
    let theta_bar = r.take("theta_bar", Dim::Plain).unwrap_or(0.0);

    let drive = match (e0, upsilon) {
        (Some(e0), None) => Some(Drive::Field(e0)),
        (None, Some(u)) => Some(Drive::Upsilon(u)),
        (None, None) => None,
        (Some(_), Some(_)) => {
            r.problems
                .push("[laser] has both `e0` and `upsilon`; give exactly one".into());
            None
        }
    };
    let scale = match (lambda, beta_lambda) {
        (Some(l), None) => Some(OpticalScale::Lambda(l)),
        (None, Some(bl)) => Some(OpticalScale::BetaLambda(bl)),
        (None, None) => {
            r.problems
                .push("[laser] needs `lambda` or `beta_lambda`".into());
            None
        }
        (Some(_), Some(_)) => {
            r.problems
                .push("[laser] has both `lambda` and `beta_lambda`; give exactly one".into());
            None
        }
    };
    Some(LaserConfig {
        drive,
        scale: scale?,
        length,
        phi0,
        theta_bar,
    })
}

fn read_grid(sections: &mut [Section], problems: &mut Vec<String>) -> Option<GridConfig> {
    let mut r = Reader::new(sections, "grid", problems)?;
    let n = r.take_usize("n");
    let z_span = r.take("z_span", Dim::Length);
    match (n, z_span) {
        (Some(n), Some(z_span)) => Some(GridConfig { n, z_span }),
        _ => {
            r.problems
                .push("[grid] needs both `n` and `z_span` (or omit the section)".into());
            None
        }
    }
}

fn read_run(sections: &mut [Section], problems: &mut Vec<String>) -> RunConfig {
    let mut out = RunConfig::default();
    let Some(mut r) = Reader::new(sections, "run", problems) else {
        return out;
    };
    out.dt = r.take("dt", Dim::Time);
    if let Some(v) = r.take_usize("wigner_stride_z") {
        out.wigner_stride_z = v;
    }
    if let Some(v) = r.take_usize("wigner_stride_p") {
        out.wigner_stride_p = v;
    }
    if let Some((value, line)) = r.take_str("wigner_scale") {
        match value.as_str() {
            "unit" => out.wigner_scale = WignerScale::Unit,
            "half_planck" => out.wigner_scale = WignerScale::HalfPlanck,
            other => r.problems.push(format!(
                "line {line}: [run] wigner_scale: expected `unit` or `half_planck`, got `{other}`"
            )),
        }
    }
    out
}

fn read_ensemble(sections: &mut [Section], problems: &mut Vec<String>) -> EnsembleConfig {
    let mut out = EnsembleConfig::default();
    let Some(mut r) = Reader::new(sections, "ensemble", problems) else {
        return out;
    };
    if let Some(v) = r.take("sigma_e_part", Dim::Energy) {
        out.sigma_e_part = v;
    }
    out.sigma_t = r.take("sigma_t", Dim::Time);
    if let Some(v) = r.take_usize("draws") {
        out.draws = v;
    }
    if let Some(v) = r.take_u64("seed") {
        out.seed = v;
    }
    if let Some((value, line)) = r.take_str("phase") {
        match value.as_str() {
            "none" => out.phase = PhaseKind::None,
            "uniform" => out.phase = PhaseKind::Uniform,
            "gaussian" => out.phase = PhaseKind::Gaussian,
            other => r.problems.push(format!(
                "line {line}: [ensemble] phase: expected none, uniform, or gaussian, got `{other}`"
            )),
        }
    }
    if out.phase == PhaseKind::Gaussian && out.sigma_t.is_none() {
        r.problems
            .push("[ensemble] phase = gaussian needs `sigma_t`".into());
    }
    if out.phase != PhaseKind::Gaussian && out.sigma_t.is_some() {
        r.problems
            .push("[ensemble] `sigma_t` only applies to phase = gaussian".into());
    }
    out
}

fn read_diagram(sections: &mut [Section], problems: &mut Vec<String>) -> Option<DiagramConfig> {
    let mut r = Reader::new(sections, "diagram", problems)?;
    let sigma_min = r.require("sigma_min", Dim::Length);
    let sigma_max = r.require("sigma_max", Dim::Length);
    let n_sigma = r.take_usize("n_sigma");
    let drift_min = r.require("drift_min", Dim::Length);
    let drift_max = r.require("drift_max", Dim::Length);
    let n_drift = r.take_usize("n_drift");
    if n_sigma.is_none() {
        r.problems.push("[diagram] is missing `n_sigma`".into());
    }
    if n_drift.is_none() {
        r.problems.push("[diagram] is missing `n_drift`".into());
    }
    Some(DiagramConfig {
        sigma_min: sigma_min?,
        sigma_max: sigma_max?,
        n_sigma: n_sigma?,
        drift_min: drift_min?,
        drift_max: drift_max?,
        n_drift: n_drift?,
    })
}

fn read_sweep(sections: &mut [Section], problems: &mut Vec<String>) -> Option<SweepConfig> {
    let mut r = Reader::new(sections, "sweep", problems)?;
    let beta_lambdas = r.take_list("beta_lambdas", Dim::Length);
    let upsilon = r.require("upsilon", Dim::Plain);
    let length = r.require("length", Dim::Length);
    if beta_lambdas.is_none() && !r.taken_with_error("beta_lambdas") {
        r.problems.push("[sweep] is missing `beta_lambdas`".into());
    }
    Some(SweepConfig {
        beta_lambdas: beta_lambdas?,
        upsilon: upsilon?,
        length: length?,
    })
}
