//! Scenario configuration.
//!
//! A config is a TOML document. Its `scenario` key selects a built-in preset;
//! the preset is deep-merged under the user's file (user keys win) and the
//! result is deserialized with unknown keys rejected. Dotted keys such as
//! `time.dt = 1e-3` at top level are plain TOML and work as well.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use spde_order::operators::{
    CheckOptions, DriftKind, DriftSpec, JumpSide, NoiseSpec, PointwiseKind, ReactionKind, ReactionSpec, SpatialOpSpec,
};
use spde_order::{BracketOptions, DriftSampling, Field, Grid, NewtonOptions, ProblemSpec, Side, TimeGrid};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown scenario `{name}`{}", suggestion.as_ref().map(|s| format!(" (did you mean `{s}`?)")).unwrap_or_default())]
    UnknownScenario { name: String, suggestion: Option<String> },
    #[error("{key} {reason}")]
    Invalid { key: String, reason: String },
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        reason: reason.into(),
    }
}

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub toml: &'static str,
}

pub const PRESETS: [Preset; 4] = [
    Preset {
        name: "ode_counterexample",
        description: "u' = sqrt(u+), u(0) = 0: minimal solution 0, maximal t^2/4, recovered by bracket iteration",
        toml: include_str!("presets/ode_counterexample.toml"),
    },
    Preset {
        name: "heat_comparison",
        description: "stochastic heat equation, ordered data and forcings on shared noise paths",
        toml: include_str!("presets/heat_comparison.toml"),
    },
    Preset {
        name: "plap_bracket",
        description: "heat equation with a Heaviside drift: min/max bracket iterations",
        toml: include_str!("presets/plap_bracket.toml"),
    },
    Preset {
        name: "custom",
        description: "all defaults, every study disabled except the assumption checks",
        toml: "",
    },
];

pub fn preset(name: &str) -> Result<&'static Preset, ConfigError> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        let suggestion = PRESETS
            .iter()
            .map(|p| (strsim::jaro_winkler(name, p.name), p.name))
            .filter(|(score, _)| *score > 0.7)
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, n)| n.to_string());
        ConfigError::UnknownScenario {
            name: name.to_string(),
            suggestion,
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GridModeConfig {
    #[default]
    #[serde(rename = "pde_1d")]
    Pde1d,
    Ode,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub mode: GridModeConfig,
    pub n: usize,
    pub length: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            mode: GridModeConfig::Pde1d,
            n: 64,
            length: 1.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeConfig {
    pub final_time: f64,
    pub dt: f64,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self {
            final_time: 0.25,
            dt: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpatialConfig {
    pub p: f64,
    pub alpha: f64,
    pub reg_delta: f64,
}

impl Default for SpatialConfig {
    fn default() -> Self {
        let d = SpatialOpSpec::default();
        Self {
            p: d.p,
            alpha: d.alpha,
            reg_delta: d.reg_delta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DriftKindConfig {
    #[default]
    Zero,
    SqrtPlus,
    Heaviside,
    LipschitzTanh,
    PiecewiseLinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum JumpSideConfig {
    #[default]
    Lower,
    Mid,
    Upper,
}

impl From<JumpSideConfig> for JumpSide {
    fn from(j: JumpSideConfig) -> Self {
        match j {
            JumpSideConfig::Lower => JumpSide::Lower,
            JumpSideConfig::Mid => JumpSide::Mid,
            JumpSideConfig::Upper => JumpSide::Upper,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriftConfig {
    pub kind: DriftKindConfig,
    pub c_b: f64,
    pub jump_side: JumpSideConfig,
    /// Heaviside jump location and levels.
    pub s0: f64,
    pub low: f64,
    pub high: f64,
    /// Amplitude of `lipschitz_tanh`.
    pub scale: f64,
    /// `[[r, b(r)], ...]` for `piecewise_linear`.
    pub knots: Vec<[f64; 2]>,
}

impl Default for DriftConfig {
    fn default() -> Self {
        Self {
            kind: DriftKindConfig::Zero,
            c_b: 1.0,
            jump_side: JumpSideConfig::Lower,
            s0: 0.0,
            low: 0.0,
            high: 1.0,
            scale: 1.0,
            knots: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ReactionKindConfig {
    #[default]
    Zero,
    Linear,
    LipschitzTanh,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReactionConfig {
    pub kind: ReactionKindConfig,
    pub c_f: f64,
    pub slope: f64,
    pub offset: f64,
    pub scale: f64,
}

impl Default for ReactionConfig {
    fn default() -> Self {
        Self {
            kind: ReactionKindConfig::Zero,
            c_f: 1.0,
            slope: 0.0,
            offset: 0.0,
            scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PointwiseConfig {
    #[default]
    Linear,
    LipschitzTanh,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    /// Number of modes `K` with `c_k = gamma · 2^{−k/2}`; ignored when `coeffs` is set.
    pub modes: usize,
    pub gamma: f64,
    pub coeffs: Option<Vec<f64>>,
    pub pointwise: PointwiseConfig,
    pub c_g: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            modes: 0,
            gamma: 0.5,
            coeffs: None,
            pointwise: PointwiseConfig::Linear,
            c_g: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    #[default]
    Zero,
    /// `amplitude · sin(π x / L)`.
    Sine,
    Constant,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialConfig {
    pub kind: InitialKind,
    pub amplitude: f64,
}

impl Default for InitialConfig {
    fn default() -> Self {
        Self {
            kind: InitialKind::Zero,
            amplitude: 1.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub newton_tol: f64,
    pub newton_max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let d = NewtonOptions::default();
        Self {
            newton_tol: d.tol,
            newton_max_iter: d.max_iter,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AssumptionsConfig {
    pub enabled: bool,
    pub samples: usize,
    pub range: f64,
    pub pairs: usize,
    pub seed: u64,
    pub sigma_eps: f64,
}

impl Default for AssumptionsConfig {
    fn default() -> Self {
        let d = CheckOptions::default();
        Self {
            enabled: true,
            samples: d.samples,
            range: d.range,
            pairs: d.pairs,
            seed: d.seed,
            sigma_eps: d.sigma_eps,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComparisonConfig {
    pub enabled: bool,
    pub first_initial: InitialConfig,
    pub second_initial: InitialConfig,
    /// Constant frozen drifts `h_1 ≤ h_2`.
    pub first_forcing: f64,
    pub second_forcing: f64,
    /// Swap the two initial data: a control run that must fail the gate.
    pub reversed: bool,
    pub tol: f64,
}

impl Default for ComparisonConfig {
    fn default() -> Self {
        Self {
            enabled: false,
            first_initial: InitialConfig::default(),
            second_initial: InitialConfig {
                kind: InitialKind::Sine,
                amplitude: 1.0,
            },
            first_forcing: -1.0,
            second_forcing: 1.0,
            reversed: false,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideConfig {
    Min,
    Max,
}

impl From<SideConfig> for Side {
    fn from(s: SideConfig) -> Self {
        match s {
            SideConfig::Min => Side::Min,
            SideConfig::Max => Side::Max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SamplingConfig {
    Left,
    #[default]
    Right,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BracketConfig {
    pub enabled: bool,
    pub sides: Vec<SideConfig>,
    pub tol_fixed: f64,
    pub max_outer: usize,
    pub mono_tol: f64,
    pub interval_tol: f64,
    pub retain_iterates: bool,
    /// Rerun with `jump_side = lower` and `upper` (Heaviside drifts only).
    pub dual_jump_side: bool,
    pub drift_sampling: SamplingConfig,
}

impl Default for BracketConfig {
    fn default() -> Self {
        let d = BracketOptions::default();
        Self {
            enabled: false,
            sides: vec![SideConfig::Min, SideConfig::Max],
            tol_fixed: d.tol_fixed,
            max_outer: d.max_outer,
            mono_tol: d.mono_tol,
            interval_tol: d.interval_tol,
            retain_iterates: false,
            dual_jump_side: false,
            drift_sampling: SamplingConfig::Right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    #[default]
    None,
    /// Minimal solution `0`, maximal solution `t²/4`.
    Counterexample,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReferenceConfig {
    pub kind: ReferenceKind,
    pub min_tol: f64,
    pub max_tol: f64,
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        Self {
            kind: ReferenceKind::None,
            min_tol: 1e-6,
            max_tol: 5e-3,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsConfig {
    /// `eps` values of the smoothed positive-part energy traces.
    pub sigma_eps: Vec<f64>,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            sigma_eps: vec![1.0, 1e-2, 1e-4, 1e-8],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub master_seed: u64,
    /// Number of noise paths `M`.
    pub paths: usize,
    /// Worker threads; 0 uses all cores. Outputs do not depend on it.
    pub threads: usize,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            master_seed: 0,
            paths: 1,
            threads: 0,
            out_dir: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    pub grid: GridConfig,
    pub time: TimeConfig,
    pub spatial: SpatialConfig,
    pub drift: DriftConfig,
    pub reaction: ReactionConfig,
    pub noise: NoiseConfig,
    pub initial: InitialConfig,
    pub solver: SolverConfig,
    pub assumptions: AssumptionsConfig,
    pub comparison: ComparisonConfig,
    pub bracket: BracketConfig,
    pub reference: ReferenceConfig,
    pub diagnostics: DiagnosticsConfig,
    pub run: RunConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scenario: "custom".into(),
            grid: GridConfig::default(),
            time: TimeConfig::default(),
            spatial: SpatialConfig::default(),
            drift: DriftConfig::default(),
            reaction: ReactionConfig::default(),
            noise: NoiseConfig::default(),
            initial: InitialConfig::default(),
            solver: SolverConfig::default(),
            assumptions: AssumptionsConfig::default(),
            comparison: ComparisonConfig::default(),
            bracket: BracketConfig::default(),
            reference: ReferenceConfig::default(),
            diagnostics: DiagnosticsConfig::default(),
            run: RunConfig::default(),
        }
    }
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

impl ScenarioConfig {
    /// Parses a config document: preset defaults, then the document's keys.
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let user: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        let name = match user.get("scenario") {
            None => "custom".to_string(),
            Some(toml::Value::String(s)) => s.clone(),
            Some(_) => return Err(invalid("scenario", "must be a string")),
        };
        let preset = preset(&name)?;
        let mut merged: toml::Table = preset
            .toml
            .parse()
            .map_err(|e: toml::de::Error| ConfigError::Parse(format!("preset {name}: {e}")))?;
        merge(&mut merged, user);
        merged.insert("scenario".into(), toml::Value::String(name));
        let cfg: ScenarioConfig = merged
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// The built-in scenario with every default pinned.
    pub fn builtin(name: &str) -> Result<Self, ConfigError> {
        Self::from_toml_str(&format!("scenario = \"{name}\""))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        fn positive(key: &str, v: f64) -> Result<(), ConfigError> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(key, format!("must be positive, got {v}")))
            }
        }
        fn finite(key: &str, v: f64) -> Result<(), ConfigError> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(invalid(key, format!("must be finite, got {v}")))
            }
        }
        fn nonneg(key: &str, v: f64) -> Result<(), ConfigError> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(invalid(key, format!("must be nonnegative, got {v}")))
            }
        }

        if self.grid.mode == GridModeConfig::Pde1d && self.grid.n < 2 {
            return Err(invalid("grid.n", "must be at least 2"));
        }
        positive("grid.length", self.grid.length)?;
        positive("time.final_time", self.time.final_time)?;
        positive("time.dt", self.time.dt)?;
        if self.time.dt > self.time.final_time {
            return Err(invalid("time.dt", "must not exceed time.final_time"));
        }
        if self.spatial.p < 2.0 || !self.spatial.p.is_finite() {
            return Err(invalid(
                "spatial.p",
                format!("must be at least 2, got {}", self.spatial.p),
            ));
        }
        positive("spatial.alpha", self.spatial.alpha)?;
        positive("spatial.reg_delta", self.spatial.reg_delta)?;
        nonneg("drift.c_b", self.drift.c_b)?;
        finite("drift.s0", self.drift.s0)?;
        finite("drift.low", self.drift.low)?;
        finite("drift.high", self.drift.high)?;
        nonneg("drift.scale", self.drift.scale)?;
        positive("reaction.c_f", self.reaction.c_f)?;
        finite("reaction.slope", self.reaction.slope)?;
        finite("reaction.offset", self.reaction.offset)?;
        finite("reaction.scale", self.reaction.scale)?;
        nonneg("noise.gamma", self.noise.gamma)?;
        nonneg("noise.c_g", self.noise.c_g)?;
        finite("initial.amplitude", self.initial.amplitude)?;
        positive("solver.newton_tol", self.solver.newton_tol)?;
        if self.solver.newton_max_iter == 0 {
            return Err(invalid("solver.newton_max_iter", "must be at least 1"));
        }
        if self.assumptions.samples < 2 {
            return Err(invalid("assumptions.samples", "must be at least 2"));
        }
        positive("assumptions.range", self.assumptions.range)?;
        positive("assumptions.sigma_eps", self.assumptions.sigma_eps)?;
        nonneg("comparison.tol", self.comparison.tol)?;
        finite("comparison.first_forcing", self.comparison.first_forcing)?;
        finite("comparison.second_forcing", self.comparison.second_forcing)?;
        positive("bracket.tol_fixed", self.bracket.tol_fixed)?;
        if self.bracket.max_outer == 0 {
            return Err(invalid("bracket.max_outer", "must be at least 1"));
        }
        nonneg("bracket.mono_tol", self.bracket.mono_tol)?;
        nonneg("bracket.interval_tol", self.bracket.interval_tol)?;
        if self.bracket.enabled && self.bracket.sides.is_empty() {
            return Err(invalid("bracket.sides", "must name at least one side"));
        }
        positive("reference.min_tol", self.reference.min_tol)?;
        positive("reference.max_tol", self.reference.max_tol)?;
        for (i, &e) in self.diagnostics.sigma_eps.iter().enumerate() {
            positive(&format!("diagnostics.sigma_eps[{i}]"), e)?;
        }
        if self.run.paths == 0 {
            return Err(invalid("run.paths", "must be at least 1"));
        }
        // the remaining structural checks live in the library constructors
        self.problem_spec().map(|_| ())
    }

    pub fn grid(&self) -> Result<Grid, ConfigError> {
        match self.grid.mode {
            GridModeConfig::Ode => Ok(Grid::ode()),
            GridModeConfig::Pde1d => {
                Grid::pde_1d(self.grid.n, self.grid.length).map_err(|e| invalid("grid", e.to_string()))
            }
        }
    }

    pub fn time_grid(&self) -> Result<TimeGrid, ConfigError> {
        TimeGrid::from_step(self.time.final_time, self.time.dt).map_err(|e| invalid("time.dt", e.to_string()))
    }

    pub fn initial_field(&self, init: &InitialConfig, key: &str) -> Result<Field, ConfigError> {
        let grid = self.grid()?;
        let a = init.amplitude;
        match init.kind {
            InitialKind::Zero => Ok(Field::zeros(grid)),
            InitialKind::Constant => Ok(Field::constant(grid, a)),
            InitialKind::Sine => {
                if grid.is_ode() {
                    return Err(invalid(key, "sine data needs grid.mode = \"pde_1d\""));
                }
                let l = grid.length();
                Field::from_fn(grid, |x| a * (PI * x / l).sin()).map_err(|e| invalid(key, e.to_string()))
            }
        }
    }

    pub fn drift_spec(&self) -> Result<DriftSpec, ConfigError> {
        self.drift_spec_with(self.drift.jump_side.into())
    }

    pub fn drift_spec_with(&self, jump_side: JumpSide) -> Result<DriftSpec, ConfigError> {
        let d = &self.drift;
        let kind = match d.kind {
            DriftKindConfig::Zero => DriftKind::Zero,
            DriftKindConfig::SqrtPlus => DriftKind::SqrtPlus,
            DriftKindConfig::Heaviside => DriftKind::Heaviside {
                s0: d.s0,
                low: d.low,
                high: d.high,
            },
            DriftKindConfig::LipschitzTanh => DriftKind::LipschitzTanh { scale: d.scale },
            DriftKindConfig::PiecewiseLinear => DriftKind::PiecewiseLinear {
                knots: d.knots.iter().map(|k| (k[0], k[1])).collect(),
            },
        };
        DriftSpec::new(kind, jump_side, d.c_b).map_err(|e| invalid("drift", e.to_string()))
    }

    pub fn problem_spec(&self) -> Result<ProblemSpec, ConfigError> {
        let spatial = SpatialOpSpec::new(self.spatial.p, self.spatial.alpha)
            .and_then(|s| s.with_reg_delta(self.spatial.reg_delta))
            .map_err(|e| invalid("spatial", e.to_string()))?;
        let r = &self.reaction;
        let reaction = ReactionSpec::new(
            match r.kind {
                ReactionKindConfig::Zero => ReactionKind::Zero,
                ReactionKindConfig::Linear => ReactionKind::Linear {
                    slope: r.slope,
                    offset: r.offset,
                },
                ReactionKindConfig::LipschitzTanh => ReactionKind::LipschitzTanh { scale: r.scale },
            },
            r.c_f,
        )
        .map_err(|e| invalid("reaction", e.to_string()))?;
        let n = &self.noise;
        let pointwise = match n.pointwise {
            PointwiseConfig::Linear => PointwiseKind::Linear,
            PointwiseConfig::LipschitzTanh => PointwiseKind::LipschitzTanh,
        };
        let noise = match &n.coeffs {
            Some(c) => NoiseSpec::new(c.clone(), pointwise, n.c_g),
            None => NoiseSpec::geometric(n.modes, n.gamma, pointwise, n.c_g),
        }
        .map_err(|e| invalid("noise", e.to_string()))?;
        let u0 = self.initial_field(&self.initial, "initial.kind")?;
        ProblemSpec::new(self.time_grid()?, spatial, self.drift_spec()?, reaction, noise, u0)
            .map_err(|e| invalid("problem", e.to_string()))
    }

    pub fn newton(&self) -> NewtonOptions {
        NewtonOptions {
            tol: self.solver.newton_tol,
            max_iter: self.solver.newton_max_iter,
        }
    }

    pub fn check_options(&self) -> CheckOptions {
        let a = &self.assumptions;
        CheckOptions {
            samples: a.samples,
            range: a.range,
            pairs: a.pairs,
            seed: a.seed,
            sigma_eps: a.sigma_eps,
        }
    }

    pub fn bracket_options(&self) -> BracketOptions {
        let b = &self.bracket;
        BracketOptions {
            tol_fixed: b.tol_fixed,
            max_outer: b.max_outer,
            mono_tol: b.mono_tol,
            interval_tol: b.interval_tol,
            retain_iterates: b.retain_iterates,
            sampling: match b.drift_sampling {
                SamplingConfig::Left => DriftSampling::Left,
                SamplingConfig::Right => DriftSampling::Right,
            },
            newton: self.newton(),
        }
    }
}
