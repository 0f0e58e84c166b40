use std::path::{Path, PathBuf};

use opineq_core::catalog::{
    find_spec, registry, InequalitySpec, ParamGrid, TrialOptions, DEFAULT_TOL,
};
use opineq_core::generators::MAX_DIM;
use opineq_core::radii::MIN_TOL;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Which entries a campaign covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpecSelection {
    /// The literal string `"all"`.
    All(AllMarker),
    Ids(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AllMarker {
    All,
}

impl SpecSelection {
    pub fn all() -> Self {
        SpecSelection::All(AllMarker::All)
    }

    /// Parses `all` or a comma-separated id list.
    pub fn parse(text: &str) -> Self {
        if text.trim().eq_ignore_ascii_case("all") {
            return Self::all();
        }
        Self::Ids(
            text.split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect(),
        )
    }

    /// Selected entries in registry order.
    pub fn resolve(&self) -> Result<Vec<&'static InequalitySpec>, HarnessError> {
        match self {
            SpecSelection::All(_) => Ok(registry().iter().collect()),
            SpecSelection::Ids(ids) => {
                for id in ids {
                    find_spec(id)?;
                }
                Ok(registry()
                    .iter()
                    .filter(|s| ids.iter().any(|id| id == s.id))
                    .collect())
            }
        }
    }
}

/// Generator preset for unstructured matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Complex Ginibre matrices.
    Standard,
    /// Hermitian matrices only.
    Hermitian,
}

impl Preset {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        match text {
            "standard" => Ok(Preset::Standard),
            "hermitian" => Ok(Preset::Hermitian),
            other => Err(HarnessError::ConfigInvalid(format!(
                "unknown preset {other:?} (expected standard or hermitian)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputPaths {
    /// Full JSON report.
    pub report: Option<PathBuf>,
    /// Per-entry CSV summary.
    pub summary: Option<PathBuf>,
    /// Every trial row as JSON lines.
    pub rows: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CampaignConfig {
    pub dims: Vec<usize>,
    pub trials_per_dim: u64,
    pub seed: u64,
    pub specs: SpecSelection,
    pub preset: Preset,
    pub grid: ParamGrid,
    pub tol: f64,
    /// Random unit-vector tuples per trial.
    pub samples: usize,
    /// Search restarts per trial.
    pub restarts: usize,
    /// Violation rows kept in the report per entry.
    pub retained_violations: usize,
    #[serde(skip_serializing_if = "output_is_empty")]
    pub output: OutputPaths,
}

fn output_is_empty(o: &OutputPaths) -> bool {
    *o == OutputPaths::default()
}

impl Default for CampaignConfig {
    fn default() -> Self {
        let trial = TrialOptions::default();
        Self {
            dims: vec![2, 3, 4, 6, 8],
            trials_per_dim: 1000,
            seed: 42,
            specs: SpecSelection::all(),
            preset: Preset::Standard,
            grid: ParamGrid::default(),
            tol: DEFAULT_TOL,
            samples: trial.samples,
            restarts: trial.restarts,
            retained_violations: 10,
            output: OutputPaths::default(),
        }
    }
}

impl CampaignConfig {
    pub fn preset(preset: Preset) -> Self {
        Self {
            preset,
            ..Self::default()
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let config: Self = serde_json::from_str(&text)
            .map_err(|e| HarnessError::ConfigInvalid(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::ConfigInvalid(msg));
        if self.dims.is_empty() {
            return bad("no dimensions selected".into());
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d == 0 || d > MAX_DIM) {
            return bad(format!("dimension {d} outside [1, {MAX_DIM}]"));
        }
        if self.trials_per_dim == 0 {
            return bad("trials per dimension must be at least 1".into());
        }
        if !(self.tol >= MIN_TOL && self.tol.is_finite()) {
            return bad(format!("tolerance {} below {MIN_TOL}", self.tol));
        }
        if self.restarts == 0 {
            return bad("search restarts must be at least 1".into());
        }
        self.grid
            .validate()
            .map_err(|e| HarnessError::ConfigInvalid(e.to_string()))?;
        let specs = self.specs.resolve()?;
        if specs.is_empty() {
            return bad("no inequalities selected".into());
        }
        Ok(())
    }

    pub fn trial_options(&self) -> TrialOptions {
        TrialOptions {
            samples: self.samples,
            restarts: self.restarts,
            tol: self.tol,
            hermitian: self.preset == Preset::Hermitian,
        }
    }
}
