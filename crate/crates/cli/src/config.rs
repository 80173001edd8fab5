use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vecnet::{
    Activation, EnsembleSpec, FitConfig, OperatorSpec, Seminorm, SeminormFamily, TargetShape,
};

use crate::error::{config_err, CliError, Result};

pub const DEFAULT_HELD_OUT_FRACTION: f64 = 0.2;

/// One experiment: an operator sampled on an ensemble, approximated for every
/// ε in the sweep and every targeted family member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub operator: OperatorSpec<f64>,
    pub ensemble: EnsembleSpec<f64>,
    #[serde(default = "default_held_out")]
    pub held_out_fraction: f64,
    pub family: FamilyConfig,
    /// Index into the family; `None` runs the pipeline once per member.
    #[serde(default)]
    pub target_seminorm: Option<usize>,
    #[serde(default)]
    pub duals: Vec<DualConfig>,
    pub epsilons: Vec<f64>,
    #[serde(default)]
    pub fit: FitSettings,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_name() -> String {
    "experiment".into()
}

fn default_held_out() -> f64 {
    DEFAULT_HELD_OUT_FRACTION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub name: String,
    pub members: Vec<SeminormConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SeminormConfig {
    Lq {
        q: f64,
    },
    SupDerivative {
        order: usize,
    },
    Schwartz {
        alpha: u32,
        beta: usize,
        #[serde(default)]
        radius: Option<f64>,
    },
}

impl SeminormConfig {
    pub fn build(&self) -> vecnet::Result<Seminorm<f64>> {
        match *self {
            Self::Lq { q } => Seminorm::lq(q),
            Self::SupDerivative { order } => Ok(Seminorm::sup_derivative(order)),
            Self::Schwartz {
                alpha,
                beta,
                radius,
            } => Seminorm::schwartz(alpha, beta, radius),
        }
    }
}

/// Test vector `t'` of a dual pairing, described independently of the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DualConfig {
    /// `sin(kπu)`, `u` the node position rescaled to `[0, 1]`; for coefficient
    /// outputs of length `n`, `u_i = (i+1)/(n+1)`.
    SinMode {
        k: u32,
    },
    Constant {
        value: f64,
    },
    /// Picks out entry `index`.
    Unit {
        index: usize,
    },
    Values {
        values: Vec<f64>,
    },
}

impl DualConfig {
    pub fn label(&self) -> String {
        match self {
            Self::SinMode { k } => format!("dual_sin{k}"),
            Self::Constant { value } => format!("dual_const{value}"),
            Self::Unit { index } => format!("dual_unit{index}"),
            Self::Values { values } => format!("dual_values[{}]", values.len()),
        }
    }

    pub fn build(&self, shape: &TargetShape<f64>) -> Result<Seminorm<f64>> {
        let n = shape.len;
        let test = match self {
            Self::SinMode { k } => {
                let k = f64::from(*k);
                let u: Vec<f64> = match &shape.grid {
                    Some(g) => g.nodes().iter().map(|x| (x - g.a) / g.length()).collect(),
                    None => (0..n).map(|i| (i + 1) as f64 / (n + 1) as f64).collect(),
                };
                u.iter()
                    .map(|u| (k * std::f64::consts::PI * u).sin())
                    .collect()
            }
            Self::Constant { value } => vec![*value; n],
            Self::Unit { index } => {
                if *index >= n {
                    return Err(config_err(
                        "duals",
                        format!("unit index {index} outside output length {n}"),
                    ));
                }
                let mut t = vec![0.0; n];
                t[*index] = 1.0;
                t
            }
            Self::Values { values } => {
                if values.len() != n {
                    return Err(config_err(
                        "duals",
                        format!("{} test values for output length {n}", values.len()),
                    ));
                }
                values.clone()
            }
        };
        Ok(Seminorm::dual(test)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitSettings {
    pub activation: String,
    pub activation_params: Vec<f64>,
    pub width: usize,
    pub max_width: usize,
    pub threshold_range: (f64, f64),
    pub lambda: f64,
    pub functional_scale: f64,
    pub functional_modes: usize,
}

impl Default for FitSettings {
    fn default() -> Self {
        let d = FitConfig::<f64>::default();
        Self {
            activation: d.activation.name().into(),
            activation_params: Vec::new(),
            width: d.width,
            max_width: d.max_width,
            threshold_range: d.threshold_range,
            lambda: d.lambda,
            functional_scale: d.functional_scale,
            functional_modes: d.functional_modes,
        }
    }
}

impl FitSettings {
    pub fn to_fit_config(&self, seed: u64) -> Result<FitConfig<f64>> {
        let activation = Activation::from_name(&self.activation, &self.activation_params)
            .map_err(|e| config_err("fit.activation", e.to_string()))?;
        let cfg = FitConfig {
            width: self.width,
            max_width: self.max_width,
            activation,
            functional_scale: self.functional_scale,
            functional_modes: self.functional_modes,
            threshold_range: self.threshold_range,
            lambda: self.lambda,
            seed,
        };
        cfg.validate().map_err(|e| match e {
            vecnet::Error::InvalidParameter { name, reason } => {
                config_err(format!("fit.{name}"), reason)
            }
            other => config_err("fit", other.to_string()),
        })?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub write_networks: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| config_err("<document>", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_owned(),
            source,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn build_family(&self) -> Result<SeminormFamily<f64>> {
        let members = self
            .family
            .members
            .iter()
            .enumerate()
            .map(|(i, m)| {
                m.build()
                    .map_err(|e| config_err(format!("family.members[{i}]"), e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        SeminormFamily::new(self.family.name.clone(), members)
            .map_err(|e| config_err("family.members", e.to_string()))
    }

    /// Family indices the sweep targets.
    pub fn targets(&self) -> Vec<usize> {
        match self.target_seminorm {
            Some(i) => vec![i],
            None => (0..self.family.members.len()).collect(),
        }
    }

    /// Number of held-out samples.
    pub fn held_out_count(&self) -> usize {
        (self.held_out_fraction * self.ensemble.samples as f64).floor() as usize
    }

    /// Checks every field, naming the first offending one.
    pub fn validate(&self) -> Result<()> {
        self.ensemble
            .validate()
            .map_err(|e| config_err("ensemble", e.to_string()))?;
        if !(0.0..1.0).contains(&self.held_out_fraction) {
            return Err(config_err(
                "held_out_fraction",
                format!("must lie in [0, 1), got {}", self.held_out_fraction),
            ));
        }
        if self.held_out_count() >= self.ensemble.samples {
            return Err(config_err(
                "held_out_fraction",
                "leaves no training samples",
            ));
        }
        for (i, &eps) in self.epsilons.iter().enumerate() {
            if !(eps.is_finite() && eps > 0.0) {
                return Err(config_err(
                    format!("epsilons[{i}]"),
                    format!("must be finite and positive, got {eps}"),
                ));
            }
        }
        let family = self.build_family()?;
        if let Some(i) = self.target_seminorm {
            if i >= family.len() {
                return Err(config_err(
                    "target_seminorm",
                    format!("index {i} but the family has {} members", family.len()),
                ));
            }
        }
        let out = self
            .operator
            .output_shape(&self.ensemble.shape())
            .map_err(|e| config_err("operator", e.to_string()))?;
        let probe = out.zeros();
        for (i, m) in family.members().iter().enumerate() {
            m.eval(&probe)
                .map_err(|e| config_err(format!("family.members[{i}]"), e.to_string()))?;
        }
        for d in &self.duals {
            d.build(&out)?;
        }
        self.fit.to_fit_config(self.seed)?;
        Ok(())
    }
}
