//! TOML experiment configuration.
//!
//! Every tolerance defaults to the acceptance value; a minimal config only
//! names its parameter pairs. See `configs/` at the repository root for
//! complete examples of each experiment.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use jacobi_lps::weights::{parse_weight_table_csv, DiscreteWeight};
use jacobi_lps::JacobiParams;

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional echo of the experiment name; when present it must match the
    /// subcommand being run.
    #[serde(default)]
    pub experiment: Option<String>,

    pub params: Vec<ParamPair>,

    #[serde(default = "default_k_list")]
    pub k_list: Vec<u32>,

    #[serde(default = "default_p_list")]
    pub p_list: Vec<f64>,

    #[serde(default)]
    pub ensemble: EnsembleConfig,

    #[serde(default)]
    pub model: ModelConfig,

    #[serde(default)]
    pub weights: Vec<WeightSpec>,

    #[serde(default)]
    pub output: OutputConfig,

    #[serde(default)]
    pub tolerances: Tolerances,

    #[serde(default)]
    pub multiplier: MultiplierConfig,

    #[serde(default)]
    pub decay: DecayConfig,

    #[serde(default)]
    pub apweight: ApWeightConfig,

    #[serde(default)]
    pub kernels: KernelsConfig,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamPair {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub count: usize,
    pub support_max: usize,
    pub seed: u64,
    pub distribution: Distribution,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            count: 50,
            support_max: 32,
            seed: 42,
            distribution: Distribution::Gaussian,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    Gaussian,
    Rademacher,
    Sparse,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub l_init: usize,
    pub l_max: usize,
    pub tol: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            l_init: 64,
            l_max: 4096,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase", tag = "kind")]
pub enum WeightSpec {
    Constant {
        #[serde(default = "one")]
        value: f64,
    },
    Power {
        s: f64,
    },
    Table {
        path: PathBuf,
    },
}

fn one() -> f64 {
    1.0
}

fn default_k_list() -> Vec<u32> {
    vec![1, 2, 3]
}

fn default_p_list() -> Vec<f64> {
    vec![1.5, 2.0, 3.0]
}

impl WeightSpec {
    /// Short display label used in reports and CSV columns.
    pub fn label(&self) -> String {
        match self {
            WeightSpec::Constant { value } => format!("constant({value})"),
            WeightSpec::Power { s } => format!("power({s})"),
            WeightSpec::Table { path } => format!("table({})", path.display()),
        }
    }

    /// Materialize, loading table files relative to `base`.
    pub fn build(&self, base: &Path) -> Result<DiscreteWeight, CliError> {
        match self {
            WeightSpec::Constant { value } => Ok(DiscreteWeight::Constant(*value)),
            WeightSpec::Power { s } => Ok(DiscreteWeight::Power { s: *s }),
            WeightSpec::Table { path } => {
                let full = if path.is_absolute() {
                    path.clone()
                } else {
                    base.join(path)
                };
                let text = std::fs::read_to_string(&full).map_err(|e| {
                    CliError::Config(format!("cannot read weight table {}: {e}", full.display()))
                })?;
                let table = parse_weight_table_csv(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", full.display())))?;
                Ok(DiscreteWeight::Tabulated(table))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Emit SVG line plots next to the CSV data files.
    #[serde(default = "yes")]
    pub svg: bool,
}

fn yes() -> bool {
    true
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            svg: true,
        }
    }
}

/// Hard-assertion thresholds; defaults are the acceptance-criteria values.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub identity_rel: f64,
    pub kernel_abs: f64,
    pub semigroup_abs: f64,
    pub subordination_abs: f64,
    pub two_path_abs: f64,
    pub isometry_rel: f64,
    pub domination_slack: f64,
    pub size_slope: (f64, f64),
    pub smooth_slope: (f64, f64),
    pub band_factor: f64,
    pub spread_max: f64,
    pub spread_growth: f64,
    pub ap_stabilize_rel: f64,
    pub ap_growth_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity_rel: 1e-8,
            kernel_abs: 1e-10,
            semigroup_abs: 1e-10,
            subordination_abs: 1e-8,
            two_path_abs: 1e-8,
            isometry_rel: 1e-10,
            domination_slack: 1e-12,
            size_slope: (-1.2, -0.8),
            smooth_slope: (-2.3, -1.7),
            band_factor: 10.0,
            spread_max: 100.0,
            spread_growth: 0.10,
            ap_stabilize_rel: 0.01,
            ap_growth_rel: 0.10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplierConfig {
    pub densities: Vec<DensitySpec>,
    pub gammas: Vec<f64>,
    /// Step densities sampled at random for the finiteness sweep.
    pub random_steps: usize,
}

impl Default for MultiplierConfig {
    fn default() -> Self {
        Self {
            densities: vec![DensitySpec::One, DensitySpec::Exp, DensitySpec::Step { t0: 1.5 }],
            gammas: vec![0.5, 1.0, 3.0],
            random_steps: 2,
        }
    }
}

/// Built-in density set {one, exp, step(t0), power(i gamma)}.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase", tag = "kind")]
pub enum DensitySpec {
    One,
    Exp,
    Step { t0: f64 },
    Power { gamma: f64 },
}

impl DensitySpec {
    pub fn build(&self) -> jacobi_lps::multiplier::Density {
        use jacobi_lps::multiplier::Density;
        match self {
            DensitySpec::One => Density::One,
            DensitySpec::Exp => Density::Exp,
            DensitySpec::Step { t0 } => Density::Step { t0: *t0 },
            DensitySpec::Power { gamma } => Density::PowerImaginary { gamma: *gamma },
        }
    }

    pub fn label(&self) -> String {
        match self {
            DensitySpec::One => "one".into(),
            DensitySpec::Exp => "exp".into(),
            DensitySpec::Step { t0 } => format!("step({t0})"),
            DensitySpec::Power { gamma } => format!("power(i*{gamma})"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayConfig {
    pub base_index: usize,
    pub separations: Vec<usize>,
    pub diagonal_max: usize,
    pub schlafli_i_grid: Vec<usize>,
    pub schlafli_j_grid: Vec<usize>,
    pub deriv_grid: Vec<usize>,
}

impl Default for DecayConfig {
    fn default() -> Self {
        Self {
            base_index: 128,
            separations: vec![8, 11, 16, 23, 32, 45, 64, 91, 128],
            diagonal_max: 256,
            schlafli_i_grid: vec![8, 12, 16, 24, 32, 48, 64, 96, 128],
            schlafli_j_grid: vec![8, 12, 16, 24, 32, 48, 64],
            deriv_grid: vec![8, 16, 32, 64, 128, 256],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApWeightConfig {
    pub window_max: usize,
    /// Offsets around the boundary explored per p: s in
    /// {-0.9, -0.5, 0, 0.5, p-1.1, p-0.9, p, p+1} by default.
    pub boundary_margin: f64,
}

impl Default for ApWeightConfig {
    fn default() -> Self {
        Self {
            window_max: 4096,
            boundary_margin: 0.25,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelsConfig {
    pub index_max: usize,
    pub times: Vec<f64>,
    pub subordination_index_max: usize,
    pub subordination_times: Vec<f64>,
    pub semigroup_pairs: Vec<(f64, f64)>,
}

impl Default for KernelsConfig {
    fn default() -> Self {
        Self {
            index_max: 64,
            times: vec![0.1, 1.0, 10.0, 50.0],
            subordination_index_max: 32,
            subordination_times: vec![0.5, 1.0, 5.0],
            semigroup_pairs: vec![(0.7, 1.9), (0.1, 0.4)],
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| CliError::Config(format!("config parse: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.params.is_empty() {
            return Err(CliError::Config("params list is empty".into()));
        }
        for p in &self.params {
            JacobiParams::new(p.alpha, p.beta)
                .map_err(|e| CliError::Config(format!("bad params: {e}")))?;
        }
        if self.ensemble.count == 0 {
            return Err(CliError::Config("ensemble.count must be >= 1".into()));
        }
        if self.ensemble.support_max == 0 {
            return Err(CliError::Config("ensemble.support_max must be >= 1".into()));
        }
        if self.k_list.is_empty() || self.k_list.contains(&0) {
            return Err(CliError::Config("k_list must hold orders >= 1".into()));
        }
        for &p in &self.p_list {
            if !(p > 1.0) || !p.is_finite() {
                return Err(CliError::Config(format!(
                    "p_list entries must satisfy 1 < p < inf, got {p}"
                )));
            }
        }
        if self.model.l_init > self.model.l_max {
            return Err(CliError::Config(format!(
                "model.l_init = {} exceeds model.l_max = {}",
                self.model.l_init, self.model.l_max
            )));
        }
        if !(self.model.tol > 0.0) {
            return Err(CliError::Config("model.tol must be > 0".into()));
        }
        Ok(())
    }

    /// Model size policy: max(2 * max_index + 16, l_init), capped at l_max.
    pub fn model_size(&self, max_index: usize) -> usize {
        (2 * max_index + 16).max(self.model.l_init).min(self.model.l_max)
    }

    pub fn jacobi_params(&self) -> Vec<JacobiParams> {
        self.params
            .iter()
            .map(|p| JacobiParams::new(p.alpha, p.beta).expect("validated"))
            .collect()
    }
}
