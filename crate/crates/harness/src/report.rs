use std::path::Path;

use opineq_core::catalog::{Fingerprint, InequalityResult, InequalitySpec, Mode};
use serde::{Deserialize, Serialize};

use crate::config::CampaignConfig;
use crate::HarnessError;

/// Version of the report and row schema.
pub const FORMAT_VERSION: &str = "1";

/// Caveat carried by every report.
pub const VECTOR_QUANTIFIER_NOTE: &str = "inequalities quantified over vectors are probed with \
seeded random unit vectors and an ascent search; both can only falsify a bound, never prove it";

/// One trial: its fingerprint and either a result or the error it raised.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub fingerprint: Fingerprint,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Outcome {
    Result(InequalityResult),
    Error(String),
}

impl TrialRow {
    pub fn result(&self) -> Option<&InequalityResult> {
        match &self.outcome {
            Outcome::Result(r) => Some(r),
            Outcome::Error(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessStats {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Violations {
    pub count: u64,
    /// Slack of the violation with the smallest relative slack.
    pub worst_slack: Option<f64>,
    pub worst_relative_slack: Option<f64>,
    pub fingerprint: Option<Fingerprint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecAggregate {
    pub id: String,
    pub anchor: String,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub trials: u64,
    pub errors: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_error: Option<String>,
    pub violations: Violations,
    /// `lhs/rhs₀` over rows with a positive bound.
    pub sharpness: Option<SharpnessStats>,
    pub min_relative_slack: Option<f64>,
    pub chain_failures: u64,
}

/// Folds rows of one entry into a [`SpecAggregate`] in row order.
#[derive(Debug)]
pub struct Aggregator {
    agg: SpecAggregate,
    sharp_sum: f64,
    sharp_count: u64,
    sharp_min: f64,
    sharp_max: f64,
}

impl Aggregator {
    pub fn new(spec: &InequalitySpec) -> Self {
        Self {
            agg: SpecAggregate {
                id: spec.id.to_string(),
                anchor: spec.anchor.to_string(),
                mode: spec.mode,
                note: spec.note.map(str::to_string),
                trials: 0,
                errors: 0,
                first_error: None,
                violations: Violations::default(),
                sharpness: None,
                min_relative_slack: None,
                chain_failures: 0,
            },
            sharp_sum: 0.0,
            sharp_count: 0,
            sharp_min: f64::INFINITY,
            sharp_max: f64::NEG_INFINITY,
        }
    }

    pub fn push(&mut self, row: &TrialRow) {
        let agg = &mut self.agg;
        agg.trials += 1;
        let r = match &row.outcome {
            Outcome::Error(message) => {
                agg.errors += 1;
                agg.first_error.get_or_insert_with(|| message.clone());
                return;
            }
            Outcome::Result(r) => r,
        };
        if r.is_violation() {
            let v = &mut agg.violations;
            v.count += 1;
            if v.worst_relative_slack.is_none_or(|w| r.relative_slack < w) {
                v.worst_relative_slack = Some(r.relative_slack);
                v.worst_slack = Some(r.slack);
                v.fingerprint = Some(row.fingerprint.clone());
            }
        }
        if !r.chain_monotone {
            agg.chain_failures += 1;
        }
        if agg.min_relative_slack.is_none_or(|m| r.relative_slack < m) {
            agg.min_relative_slack = Some(r.relative_slack);
        }
        if let Some(s) = r.sharpness {
            self.sharp_sum += s;
            self.sharp_count += 1;
            self.sharp_min = self.sharp_min.min(s);
            self.sharp_max = self.sharp_max.max(s);
        }
    }

    pub fn finish(mut self) -> SpecAggregate {
        if self.sharp_count > 0 {
            self.agg.sharpness = Some(SharpnessStats {
                min: self.sharp_min,
                mean: self.sharp_sum / self.sharp_count as f64,
                max: self.sharp_max,
            });
        }
        self.agg
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub trials: u64,
    pub errors: u64,
    /// Violations of asserted entries.
    pub violations: u64,
    /// Violations of measured entries, reported only.
    pub measured_violations: u64,
    pub chain_failures: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub format_version: String,
    pub rng_algorithm: String,
    pub vector_quantifiers: String,
    pub config: CampaignConfig,
    pub totals: Totals,
    /// Registry order.
    pub specs: Vec<SpecAggregate>,
    /// Up to `retained_violations` violating rows per entry.
    pub violation_rows: Vec<TrialRow>,
}

impl CampaignReport {
    /// The echoed configuration omits output paths, so reports written to
    /// different files compare equal.
    pub fn new(
        config: CampaignConfig,
        specs: Vec<SpecAggregate>,
        violation_rows: Vec<TrialRow>,
    ) -> Self {
        let config = CampaignConfig {
            output: Default::default(),
            ..config
        };
        let mut totals = Totals::default();
        for s in &specs {
            totals.trials += s.trials;
            totals.errors += s.errors;
            totals.chain_failures += s.chain_failures;
            match s.mode {
                Mode::Asserted => totals.violations += s.violations.count,
                Mode::Measured => totals.measured_violations += s.violations.count,
            }
        }
        Self {
            format_version: FORMAT_VERSION.to_string(),
            rng_algorithm: opineq_core::generators::RNG_ALGORITHM.to_string(),
            vector_quantifiers: VECTOR_QUANTIFIER_NOTE.to_string(),
            config,
            totals,
            specs,
            violation_rows,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<(), HarnessError> {
        std::fs::write(path, self.to_json()).map_err(|e| HarnessError::io(path, e))
    }

    pub fn write_summary(&self, path: &Path) -> Result<(), HarnessError> {
        let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
        for s in &self.specs {
            writer
                .serialize(SummaryLine::from(s))
                .map_err(|e| csv_error(path, e))?;
        }
        writer.flush().map_err(|e| HarnessError::io(path, e))
    }

    /// Text table of the per-entry results.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<28} {:>8} {:>7} {:>10} {:>6} {:>6} {:>10} {:>10}\n",
            "id", "mode", "trials", "violations", "errors", "chain", "min_sharp", "mean_sharp"
        );
        for s in &self.specs {
            let line = SummaryLine::from(s);
            let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.6}"));
            out.push_str(&format!(
                "{:<28} {:>8} {:>7} {:>10} {:>6} {:>6} {:>10} {:>10}\n",
                line.id,
                line.mode,
                line.trials,
                line.violations,
                line.errors,
                line.chain_failures,
                fmt(line.min_sharpness),
                fmt(line.mean_sharpness)
            ));
        }
        out
    }
}

fn csv_error(path: &Path, err: csv::Error) -> HarnessError {
    HarnessError::Io {
        path: path.display().to_string(),
        message: err.to_string(),
    }
}

#[derive(Debug, Serialize)]
struct SummaryLine {
    id: String,
    mode: &'static str,
    trials: u64,
    violations: u64,
    errors: u64,
    chain_failures: u64,
    min_sharpness: Option<f64>,
    mean_sharpness: Option<f64>,
}

impl From<&SpecAggregate> for SummaryLine {
    fn from(s: &SpecAggregate) -> Self {
        Self {
            id: s.id.clone(),
            mode: match s.mode {
                Mode::Asserted => "asserted",
                Mode::Measured => "measured",
            },
            trials: s.trials,
            violations: s.violations.count,
            errors: s.errors,
            chain_failures: s.chain_failures,
            min_sharpness: s.sharpness.as_ref().map(|x| x.min),
            mean_sharpness: s.sharpness.as_ref().map(|x| x.mean),
        }
    }
}
