//! Experiment configuration: presets, flat key-value config files and
//! override resolution.
//!
//! The config surface is a flat `key = value` text format; CLI flags mirror
//! every key 1:1 and win over file values, which in turn win over preset
//! defaults (each preset override is reported as a notice).

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::fields::{gaussian_spinor, GridSpec, SpinorField};
use crate::observables::Evolver;
use crate::relativistic::MassSign;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    LowMass,
    HighMass,
    Custom,
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Preset::LowMass => "lowmass",
            Preset::HighMass => "highmass",
            Preset::Custom => "custom",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Spinor,
    Lattice,
    Device,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolverKind {
    DiracPlus,
    DiracMinus,
    MajoranaComposed,
    MajoranaReference,
}

impl EvolverKind {
    pub fn mass_sign(self) -> Option<MassSign> {
        match self {
            EvolverKind::DiracPlus => Some(MassSign::Plus),
            EvolverKind::DiracMinus => Some(MassSign::Minus),
            _ => None,
        }
    }

    pub fn spinor_evolver(self) -> Evolver {
        match self {
            EvolverKind::DiracPlus => Evolver::Dirac(MassSign::Plus),
            EvolverKind::DiracMinus => Evolver::Dirac(MassSign::Minus),
            EvolverKind::MajoranaComposed => Evolver::MajoranaComposed,
            EvolverKind::MajoranaReference => Evolver::MajoranaReference,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OutputKind {
    PseudoEnergy,
    Intensities,
    Map,
    CentroidWidth,
}

/// Evolution-coordinate sampling: explicit list or uniform range from 0.
#[derive(Debug, Clone, PartialEq)]
pub enum ZetaSpec {
    List(Vec<f64>),
    Range { max: f64, step: f64 },
}

impl ZetaSpec {
    pub fn samples(&self) -> Vec<f64> {
        match self {
            ZetaSpec::List(v) => v.clone(),
            ZetaSpec::Range { max, step } => {
                let n = (max / step).round() as usize;
                (0..=n).map(|i| i as f64 * step).collect()
            }
        }
    }
}

/// Fully resolved experiment description. Construction goes through
/// [`resolve_config`]; every run derived from an equal config is
/// deterministic down to the output bytes.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub model: Model,
    pub evolver: EvolverKind,
    pub n_cells: usize,
    pub kappa_per_mm: f64,
    pub mu: f64,
    pub sigma: f64,
    pub n0: f64,
    pub p0: f64,
    pub zeta: ZetaSpec,
    pub outputs: BTreeSet<OutputKind>,
    /// Coordinates at which the chips were measured; intensity profiles are
    /// reported there.
    pub measurement_zetas: Vec<f64>,
    pub segmentation_step_mm: f64,
}

impl ExperimentConfig {
    pub fn zeta_samples(&self) -> Vec<f64> {
        self.zeta.samples()
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::periodic(self.n_cells)
    }

    /// Packet center rule: (N+1)/2 for odd N, N/2 + 1/2 for even N.
    pub fn default_center(n_cells: usize) -> f64 {
        if n_cells % 2 == 1 {
            (n_cells as f64 + 1.0) / 2.0
        } else {
            n_cells as f64 / 2.0 + 0.5
        }
    }

    /// Initial wavepacket. Spinor and device runs start from the ψ₂ = 0
    /// Majoranon packet; lattice runs use the flat (1,1)/√2 beam that the
    /// single-plane trembling experiments launch.
    pub fn initial_state(&self) -> Result<SpinorField> {
        let grid = self.grid()?;
        let (w1, w2) = match self.model {
            Model::Lattice => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                (Complex64::new(r, 0.0), Complex64::new(r, 0.0))
            }
            _ => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        };
        gaussian_spinor(grid, self.n0, self.sigma, self.p0, w1, w2)
    }
}

/// One raw `key = value` assignment with its provenance.
#[derive(Debug, Clone)]
pub struct ConfigPair {
    pub key: String,
    pub value: String,
    /// 1-based line number when the pair came from a file.
    pub line: Option<usize>,
}

impl ConfigPair {
    pub fn flag(key: &str, value: &str) -> Self {
        Self {
            key: key.to_string(),
            value: value.to_string(),
            line: None,
        }
    }
}

/// Read a flat key-value config file (`key = value`, `#` comments).
pub fn load_config_file(path: &Path) -> Result<Vec<ConfigPair>> {
    let text = std::fs::read_to_string(path)?;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let Some((key, value)) = stripped.split_once('=') else {
            return Err(SimError::Config(format!(
                "expected 'key = value' (line {line}): {raw:?}"
            )));
        };
        pairs.push(ConfigPair {
            key: key.trim().to_string(),
            value: value.trim().to_string(),
            line: Some(line),
        });
    }
    Ok(pairs)
}

const KNOWN_KEYS: &[&str] = &[
    "preset",
    "model",
    "evolver",
    "n",
    "sites",
    "kappa",
    "mu",
    "sigma",
    "n0",
    "p0",
    "zetas",
    "zeta_max",
    "zeta_step",
    "outputs",
];

fn where_from(line: Option<usize>) -> String {
    match line {
        Some(l) => format!(" (line {l})"),
        None => String::new(),
    }
}

fn parse_f64(pair: &ConfigPair) -> Result<f64> {
    pair.value.parse::<f64>().map_err(|_| {
        SimError::Config(format!(
            "invalid value for '{}'{}: expected a number, got {:?}",
            pair.key,
            where_from(pair.line),
            pair.value
        ))
    })
}

fn parse_usize(pair: &ConfigPair) -> Result<usize> {
    pair.value.parse::<usize>().map_err(|_| {
        SimError::Config(format!(
            "invalid value for '{}'{}: expected a positive integer, got {:?}",
            pair.key,
            where_from(pair.line),
            pair.value
        ))
    })
}

fn parse_zeta_list(pair: &ConfigPair) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in pair.value.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        out.push(item.parse::<f64>().map_err(|_| {
            SimError::Config(format!(
                "invalid value for 'zetas'{}: {:?} is not a number",
                where_from(pair.line),
                item
            ))
        })?);
    }
    if out.is_empty() {
        return Err(SimError::Config(format!(
            "'zetas'{} must list at least one coordinate",
            where_from(pair.line)
        )));
    }
    Ok(out)
}

fn parse_outputs(pair: &ConfigPair) -> Result<BTreeSet<OutputKind>> {
    let mut set = BTreeSet::new();
    for item in pair.value.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let kind = match item {
            "pseudo_energy" => OutputKind::PseudoEnergy,
            "intensities" => OutputKind::Intensities,
            "map" => OutputKind::Map,
            "centroid_width" => OutputKind::CentroidWidth,
            other => {
                return Err(SimError::Config(format!(
                    "unknown output {:?}{}; expected pseudo_energy, intensities, map or \
                     centroid_width",
                    other,
                    where_from(pair.line)
                )))
            }
        };
        set.insert(kind);
    }
    if set.is_empty() {
        return Err(SimError::Config(format!(
            "'outputs'{} must list at least one output",
            where_from(pair.line)
        )));
    }
    Ok(set)
}

#[derive(Default)]
struct Draft {
    model: Option<Model>,
    evolver: Option<EvolverKind>,
    n_cells: Option<usize>,
    kappa: Option<f64>,
    mu: Option<f64>,
    sigma: Option<f64>,
    n0: Option<f64>,
    p0: Option<f64>,
    zetas: Option<Vec<f64>>,
    zeta_max: Option<f64>,
    zeta_step: Option<f64>,
    outputs: Option<BTreeSet<OutputKind>>,
}

fn preset_draft(preset: Preset) -> Draft {
    let all_outputs = BTreeSet::from([
        OutputKind::PseudoEnergy,
        OutputKind::Intensities,
        OutputKind::Map,
        OutputKind::CentroidWidth,
    ]);
    match preset {
        Preset::LowMass => Draft {
            model: Some(Model::Spinor),
            evolver: Some(EvolverKind::MajoranaComposed),
            n_cells: Some(13),
            kappa: Some(0.064),
            mu: Some(0.65),
            sigma: Some(1.1),
            n0: Some(7.0),
            p0: Some(0.0),
            zetas: None,
            zeta_max: Some(5.0),
            zeta_step: Some(0.05),
            outputs: Some(all_outputs),
        },
        Preset::HighMass => Draft {
            model: Some(Model::Spinor),
            evolver: Some(EvolverKind::MajoranaComposed),
            n_cells: Some(15),
            kappa: Some(0.072),
            mu: Some(1.2),
            sigma: Some(1.3),
            n0: Some(8.0),
            p0: Some(0.0),
            zetas: None,
            zeta_max: Some(5.0),
            zeta_step: Some(0.05),
            outputs: Some(all_outputs),
        },
        Preset::Custom => Draft {
            model: Some(Model::Spinor),
            evolver: Some(EvolverKind::MajoranaComposed),
            p0: Some(0.0),
            ..Draft::default()
        },
    }
}

fn preset_measurements(preset: Preset) -> Option<Vec<f64>> {
    match preset {
        Preset::LowMass => Some(vec![0.55, 4.4]),
        Preset::HighMass => Some(vec![0.9, 3.5]),
        Preset::Custom => None,
    }
}

fn preset_segmentation_step(preset: Preset) -> f64 {
    match preset {
        Preset::HighMass => 1.85,
        _ => 1.76,
    }
}

/// Resolve ordered key-value pairs into a validated config. Later pairs win
/// over earlier ones; overrides of preset-provided physics values are
/// reported in the returned notices.
pub fn resolve_config(pairs: &[ConfigPair]) -> Result<(ExperimentConfig, Vec<String>)> {
    for pair in pairs {
        if !KNOWN_KEYS.contains(&pair.key.as_str()) {
            return Err(SimError::Config(format!(
                "unknown key '{}'{}",
                pair.key,
                where_from(pair.line)
            )));
        }
    }

    let preset = match pairs.iter().rev().find(|p| p.key == "preset") {
        Some(pair) => match pair.value.as_str() {
            "lowmass" => Preset::LowMass,
            "highmass" => Preset::HighMass,
            "custom" => Preset::Custom,
            other => {
                return Err(SimError::Config(format!(
                    "unknown preset {:?}{}; expected lowmass, highmass or custom",
                    other,
                    where_from(pair.line)
                )))
            }
        },
        None => {
            return Err(SimError::Config(
                "missing 'preset' (lowmass, highmass or custom)".into(),
            ))
        }
    };

    let mut draft = preset_draft(preset);
    let mut notices = Vec::new();
    let physics_keys = ["n", "sites", "kappa", "mu", "sigma", "n0", "p0"];

    for pair in pairs {
        let key = pair.key.as_str();
        if preset != Preset::Custom && physics_keys.contains(&key) {
            notices.push(format!(
                "override: '{}' = {} replaces the {} preset value",
                key, pair.value, preset
            ));
        }
        match key {
            "preset" => {}
            "model" => {
                draft.model = Some(match pair.value.as_str() {
                    "spinor" => Model::Spinor,
                    "lattice" => Model::Lattice,
                    "device" => Model::Device,
                    other => {
                        return Err(SimError::Config(format!(
                            "unknown model {:?}{}; expected spinor, lattice or device",
                            other,
                            where_from(pair.line)
                        )))
                    }
                })
            }
            "evolver" => {
                draft.evolver = Some(match pair.value.as_str() {
                    "dirac_plus" => EvolverKind::DiracPlus,
                    "dirac_minus" => EvolverKind::DiracMinus,
                    "majorana_composed" => EvolverKind::MajoranaComposed,
                    "majorana_reference" => EvolverKind::MajoranaReference,
                    other => {
                        return Err(SimError::Config(format!(
                            "unknown evolver {:?}{}; expected dirac_plus, dirac_minus, \
                             majorana_composed or majorana_reference",
                            other,
                            where_from(pair.line)
                        )))
                    }
                })
            }
            "n" => draft.n_cells = Some(parse_usize(pair)?),
            "sites" => {
                let sites = parse_usize(pair)?;
                if sites % 2 != 0 {
                    return Err(SimError::Config(format!(
                        "'sites'{} must be even (two sites per cell), got {sites}",
                        where_from(pair.line)
                    )));
                }
                draft.n_cells = Some(sites / 2);
            }
            "kappa" => draft.kappa = Some(parse_f64(pair)?),
            "mu" => draft.mu = Some(parse_f64(pair)?),
            "sigma" => draft.sigma = Some(parse_f64(pair)?),
            "n0" => draft.n0 = Some(parse_f64(pair)?),
            "p0" => draft.p0 = Some(parse_f64(pair)?),
            "zetas" => draft.zetas = Some(parse_zeta_list(pair)?),
            "zeta_max" => draft.zeta_max = Some(parse_f64(pair)?),
            "zeta_step" => draft.zeta_step = Some(parse_f64(pair)?),
            "outputs" => draft.outputs = Some(parse_outputs(pair)?),
            _ => unreachable!("key was checked against KNOWN_KEYS"),
        }
    }

    let mut missing: Vec<&'static str> = Vec::new();
    let mut require = |name: &'static str, present: bool| {
        if !present {
            missing.push(name);
        }
    };
    require("n (or sites)", draft.n_cells.is_some());
    require("kappa", draft.kappa.is_some());
    require("mu", draft.mu.is_some());
    require("sigma", draft.sigma.is_some());
    require("n0", draft.n0.is_some());
    require(
        "zetas (or zeta_max + zeta_step)",
        draft.zetas.is_some() || (draft.zeta_max.is_some() && draft.zeta_step.is_some()),
    );
    require("outputs", draft.outputs.is_some());
    if !missing.is_empty() {
        return Err(SimError::Config(format!(
            "custom preset requires explicit values for: {}",
            missing.join(", ")
        )));
    }

    let zeta = match (&draft.zetas, draft.zeta_max, draft.zeta_step) {
        (Some(list), _, _) => {
            let mut sorted = list.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            sorted.dedup();
            ZetaSpec::List(sorted)
        }
        (None, Some(max), Some(step)) => {
            if !max.is_finite() || !step.is_finite() || max <= 0.0 || step <= 0.0 || step > max {
                return Err(SimError::Config(format!(
                    "need 0 < zeta_step <= zeta_max, got step {step}, max {max}"
                )));
            }
            ZetaSpec::Range { max, step }
        }
        _ => unreachable!("checked above"),
    };

    let measurement_zetas = match preset_measurements(preset) {
        Some(m) => m,
        None => match &zeta {
            ZetaSpec::List(list) => list.clone(),
            ZetaSpec::Range { max, .. } => vec![*max],
        },
    };

    let cfg = ExperimentConfig {
        preset,
        model: draft.model.expect("model has a default"),
        evolver: draft.evolver.expect("evolver has a default"),
        n_cells: draft.n_cells.expect("checked"),
        kappa_per_mm: draft.kappa.expect("checked"),
        mu: draft.mu.expect("checked"),
        sigma: draft.sigma.expect("checked"),
        n0: draft.n0.expect("checked"),
        p0: draft.p0.unwrap_or(0.0),
        zeta,
        outputs: draft.outputs.expect("checked"),
        measurement_zetas,
        segmentation_step_mm: preset_segmentation_step(preset),
    };
    validate_config(&cfg)?;
    Ok((cfg, notices))
}

fn validate_config(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.n_cells < 2 {
        return Err(SimError::Config(format!(
            "need at least 2 cells, got {}",
            cfg.n_cells
        )));
    }
    if cfg.kappa_per_mm <= 0.0 || !cfg.kappa_per_mm.is_finite() {
        return Err(SimError::Config(format!(
            "kappa must be positive, got {}",
            cfg.kappa_per_mm
        )));
    }
    if cfg.mu < 0.0 || !cfg.mu.is_finite() {
        return Err(SimError::Config(format!("mu must be >= 0, got {}", cfg.mu)));
    }
    if cfg.sigma <= 0.0 || !cfg.sigma.is_finite() {
        return Err(SimError::Config(format!(
            "sigma must be positive, got {}",
            cfg.sigma
        )));
    }
    if !cfg.n0.is_finite() || !cfg.p0.is_finite() {
        return Err(SimError::Config("n0 and p0 must be finite".into()));
    }
    let samples = cfg.zeta_samples();
    if samples.is_empty() {
        return Err(SimError::Config(
            "no evolution coordinates to sample".into(),
        ));
    }
    if samples[0] < 0.0 {
        return Err(SimError::Config(format!(
            "evolution coordinates must be >= 0, got {}",
            samples[0]
        )));
    }
    match cfg.model {
        Model::Lattice => {
            if cfg.evolver.mass_sign().is_none() {
                return Err(SimError::Config(
                    "model 'lattice' simulates a single Dirac plane; use evolver dirac_plus \
                     or dirac_minus (majorana evolution needs model spinor or device)"
                        .into(),
                ));
            }
        }
        Model::Device => {
            if cfg.evolver != EvolverKind::MajoranaComposed {
                return Err(SimError::Config(
                    "model 'device' realizes the composed majorana evolution; set evolver \
                     majorana_composed"
                        .into(),
                ));
            }
        }
        Model::Spinor => {}
    }
    Ok(())
}
